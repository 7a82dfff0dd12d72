// Copyright 2026 The superrad Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include "superrad/errors.hpp"
#include "superrad/lindblad.hpp"
#include "superrad/rates.hpp"
#include "superrad/scan.hpp"
#include "superrad/spectrum.hpp"
#include "superrad/state.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace superrad::cli {
namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

[[noreturn]] void bad_type(const std::string& key, const char* expected) {
  throw ConfigError("key '" + key + "' expects " + expected);
}

double as_number(const std::string& key, const json& v) {
  if (!v.is_number()) bad_type(key, "a number");
  return v.get<double>();
}

long as_integer(const std::string& key, const json& v) {
  if (v.is_number_integer()) return v.get<long>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 1e15) return static_cast<long>(d);
  }
  bad_type(key, "an integer");
}

bool as_bool(const std::string& key, const json& v) {
  if (!v.is_boolean()) bad_type(key, "true or false");
  return v.get<bool>();
}

std::string as_string(const std::string& key, const json& v) {
  if (!v.is_string()) bad_type(key, "a string");
  return v.get<std::string>();
}

double parse_double(const std::string& key, std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) bad_type(key, "a list of numbers");
  return value;
}

std::vector<double> as_number_list(const std::string& key, const json& v) {
  std::vector<double> out;
  if (v.is_array()) {
    for (const auto& item : v) out.push_back(as_number(key, item));
  } else if (v.is_number()) {
    out.push_back(v.get<double>());
  } else if (v.is_string()) {
    const std::string text = v.get<std::string>();
    std::size_t start = 0;
    while (start <= text.size() && !text.empty()) {
      const std::size_t comma = std::min(text.find(',', start), text.size());
      out.push_back(parse_double(key, std::string_view(text).substr(start, comma - start)));
      start = comma + 1;
    }
  } else {
    bad_type(key, "a list of numbers");
  }
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, const json&)>;

Setter number(double RunConfig::*field) {
  return [field](RunConfig& c, const std::string& k, const json& v) { c.*field = as_number(k, v); };
}
Setter param(double Parameters::*field) {
  return [field](RunConfig& c, const std::string& k, const json& v) { c.params.*field = as_number(k, v); };
}
Setter integ(double IntegratorConfig::*field) {
  return [field](RunConfig& c, const std::string& k, const json& v) { c.integrator.*field = as_number(k, v); };
}
Setter initial(double ReducedState::*field) {
  return [field](RunConfig& c, const std::string& k, const json& v) { c.integrator.initial.*field = as_number(k, v); };
}
Setter chirp(double ChirpGridSpec::*field) {
  return [field](RunConfig& c, const std::string& k, const json& v) { c.integrator.chirp_grid.*field = as_number(k, v); };
}

const std::vector<std::pair<std::string, Setter>>& key_table() {
  static const std::vector<std::pair<std::string, Setter>> table = {
      {"gamma", param(&Parameters::gamma)},
      {"coop", param(&Parameters::coop)},
      {"rho_size", param(&Parameters::rho_size)},
      {"delta_mode",
       [](RunConfig& c, const std::string& k, const json& v) {
         const auto mode = parse_delta_mode(as_string(k, v));
         if (!mode) throw ConfigError("key 'delta_mode' expects \"zero\" or \"kramers-kronig\"");
         c.params.delta_mode = *mode;
       }},
      {"series_epsilon", param(&Parameters::series_epsilon)},
      {"fixed_point_tol", param(&Parameters::fixed_point_tol)},
      {"size_detuning",
       [](RunConfig& c, const std::string& k, const json& v) { c.params.size_detuning = as_bool(k, v); }},
      {"rel_tol", integ(&IntegratorConfig::rel_tol)},
      {"abs_tol", integ(&IntegratorConfig::abs_tol)},
      {"max_step", integ(&IntegratorConfig::max_step)},
      {"t_end", integ(&IntegratorConfig::t_end)},
      {"sample_dt", integ(&IntegratorConfig::sample_dt)},
      {"peak_refine",
       [](RunConfig& c, const std::string& k, const json& v) {
         const long n = as_integer(k, v);
         if (n < 0 || n > 100000) throw ConfigError("key 'peak_refine' must be in [0, 100000]");
         c.integrator.peak_refine = static_cast<int>(n);
       }},
      {"a0", initial(&ReducedState::a)},
      {"d0", initial(&ReducedState::d)},
      {"n0", initial(&ReducedState::n)},
      {"x0", initial(&ReducedState::x)},
      {"rate_scale", integ(&IntegratorConfig::rate_scale)},
      {"chirp_half_width", chirp(&ChirpGridSpec::half_width)},
      {"chirp_points",
       [](RunConfig& c, const std::string& k, const json& v) {
         const long n = as_integer(k, v);
         if (n < 0) throw ConfigError("key 'chirp_points' must be >= 0");
         c.integrator.chirp_grid.points = static_cast<std::size_t>(n);
       }},
      {"chirp_core_width", chirp(&ChirpGridSpec::core_width)},
      {"output_dir", [](RunConfig& c, const std::string& k, const json& v) { c.output_dir = as_string(k, v); }},
      {"c_values", [](RunConfig& c, const std::string& k, const json& v) { c.c_values = as_number_list(k, v); }},
      {"threads",
       [](RunConfig& c, const std::string& k, const json& v) {
         const long n = as_integer(k, v);
         if (n < 0 || n > 4096) throw ConfigError("key 'threads' must be in [0, 4096]");
         c.threads = static_cast<unsigned>(n);
       }},
      {"grid_half_width", number(&RunConfig::grid_half_width)},
      {"grid_points", [](RunConfig& c, const std::string& k, const json& v) { c.grid_points = as_integer(k, v); }},
      {"grid_core_width", number(&RunConfig::grid_core_width)},
      {"rate_perturbation", number(&RunConfig::rate_perturbation)},
      {"gamma_cross", number(&RunConfig::gamma_cross)},
      {"oracle_threshold", number(&RunConfig::oracle_threshold)},
  };
  return table;
}

void apply_value(RunConfig& cfg, const std::string& key, const json& value) {
  const auto& table = key_table();
  const auto it = std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.first == key; });
  if (it == table.end()) throw ConfigError("unknown configuration key '" + key + "'");
  it->second(cfg, key, value);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.close();
  if (!out) throw OutputError("cannot write '" + path.string() + "'");
}

fs::path prepare_output(const RunConfig& cfg) {
  const fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw OutputError("cannot create output directory '" + cfg.output_dir + "': " + ec.message());
  return dir;
}

void csv_row(std::string& out, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) out += ',';
    out += format_number(v);
    first = false;
  }
  out += '\n';
}

std::string parameter_comment(const RunConfig& cfg) {
  const Parameters& p = cfg.params;
  return "# gamma=" + format_number(p.gamma) + " coop=" + format_number(p.coop) + " rho_size=" +
         format_number(p.rho_size) + " delta_mode=" + std::string(to_string(p.delta_mode)) + "\n";
}

json parameters_json(const RunConfig& cfg) {
  const Parameters& p = cfg.params;
  const IntegratorConfig& i = cfg.integrator;
  return json{{"gamma", p.gamma},
              {"coop", p.coop},
              {"rho_size", p.rho_size},
              {"delta_mode", std::string(to_string(p.delta_mode))},
              {"rel_tol", i.rel_tol},
              {"abs_tol", i.abs_tol},
              {"max_step", i.effective_max_step(p)},
              {"t_end", i.t_end},
              {"sample_dt", i.sample_dt},
              {"initial", {{"a", i.initial.a}, {"d", i.initial.d}, {"n", i.initial.n}, {"x", i.initial.x}}}};
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Trajectory traj = integrate(cfg.integrator, cfg.params);
  const Peak peak = find_peak(traj);
  double max_gamma = 0.0, max_gammabar = 0.0, max_x = 0.0, max_mm = 0.0, max_witness = -1.0;
  for (const Sample& s : traj.samples) {
    max_gamma = std::max(max_gamma, s.rates.gamma_plus);
    max_gammabar = std::max(max_gammabar, s.rates.gammabar_plus);
    max_x = std::max(max_x, s.state.x);
    max_mm = std::max(max_mm, s.rho_mm);
    max_witness = std::max(max_witness, s.witness);
  }
  const Sample& last = traj.back();
  json summary{{"parameters", parameters_json(cfg)},
               {"samples", traj.size()},
               {"peak",
                {{"t_max", peak.t_max},
                 {"intensity", peak.intensity},
                 {"sample_index", peak.index},
                 {"at_boundary", peak.at_boundary}}},
               {"final",
                {{"t", last.t},
                 {"a", last.state.a},
                 {"d", last.state.d},
                 {"n", last.state.n},
                 {"x", last.state.x},
                 {"rho_pp", last.rho_pp},
                 {"rho_mm", last.rho_mm},
                 {"Gamma", last.rates.gamma_plus}}},
               {"max_Gamma", max_gamma},
               {"max_Gammabar", max_gammabar},
               {"max_x", max_x},
               {"max_rho_mm", max_mm},
               {"max_witness", max_witness}};

  const fs::path dir = prepare_output(cfg);
  write_file(dir / "trajectory.csv", trajectory_csv(traj, parameter_comment(cfg)));
  write_file(dir / "summary.json", summary.dump(2) + "\n");
  if (peak.at_boundary) err << "warning: intensity maximum lies on the trajectory boundary\n";
  out << "peak intensity " << format_number(peak.intensity) << " at t = " << format_number(peak.t_max) << "\n";
  return kOk;
}

int cmd_scan(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const std::vector<ScanRow> rows = sweep(cfg.c_values, cfg.params.rho_size, cfg.params, cfg.integrator, cfg.threads);
  std::string csv =
      "# superrad scan\n"
      "# units: tau_max in 1/gamma; peak_intensity and max_Gamma in gamma; max_x and max_rho_mm dimensionless\n";
  csv += parameter_comment(cfg);
  csv += "C,rho,tau_max,peak_intensity,max_Gamma,max_x,max_rho_mm\n";
  bool failed = false;
  json row_notes = json::array();
  for (const ScanRow& r : rows) {
    if (!r.ok()) {
      failed = true;
      csv += "# row C=" + format_number(r.coop) + " failed\n";
      err << "error: C = " << format_number(r.coop) << ": " << r.error << "\n";
      row_notes.push_back({{"C", r.coop}, {"error", r.error}});
      continue;
    }
    if (r.boundary_peak) {
      err << "warning: C = " << format_number(r.coop) << ": intensity maximum on the trajectory boundary\n";
      row_notes.push_back({{"C", r.coop}, {"warning", "boundary peak"}});
    }
    csv_row(csv, {r.coop, r.rho_size, r.tau_max, r.peak_intensity, r.max_gamma, r.max_x, r.max_rho_mm});
  }
  json fit_json;
  try {
    const ScalingFit fit = fit_scaling(rows);
    fit_json = {{"slope", fit.slope},
                {"intercept", fit.intercept},
                {"r_squared", fit.r_squared},
                {"tau_exponent", fit.tau_exponent},
                {"tau_prefactor", fit.tau_prefactor},
                {"tau_r_squared", fit.tau_r_squared}};
  } catch (const FitError& e) {
    fit_json = {{"error", e.what()}};
  }
  json summary{{"rows", rows.size()}, {"fit", fit_json}, {"notes", row_notes}};

  const fs::path dir = prepare_output(cfg);
  write_file(dir / "scan.csv", csv);
  write_file(dir / "scan_fit.json", summary.dump(2) + "\n");
  for (const ScanRow& r : rows) {
    if (r.ok()) {
      out << "C = " << format_number(r.coop) << ": peak " << format_number(r.peak_intensity) << " at "
          << format_number(r.tau_max) << "\n";
    }
  }
  return failed ? kSolverFailure : kOk;
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const std::vector<double> grid =
      symmetric_grid(cfg.grid_half_width, static_cast<std::size_t>(cfg.grid_points), cfg.grid_core_width);
  const SpectralProfile profile =
      gamma_spectrum(cfg.integrator.initial.a, cfg.integrator.initial.x, cfg.params, grid);
  std::string body;
  double worst_tail = 0.0;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const ChirpResult c = chirp_kk_detailed(profile, grid[i]);
    worst_tail = std::max(worst_tail, c.tail_bound);
    csv_row(body, {grid[i], profile.gamma[i], c.chirp});
  }
  std::string csv =
      "# superrad spectrum\n"
      "# units: delta_prime, Gamma and chirp in gamma; grid end points omitted (chirp undefined there)\n";
  csv += parameter_comment(cfg);
  csv += "# state a=" + format_number(cfg.integrator.initial.a) + " x=" + format_number(cfg.integrator.initial.x) +
         "; truncation bound on chirp " + format_number(worst_tail) + "\n";
  csv += "delta_prime,Gamma,chirp\n";
  csv += body;
  const fs::path dir = prepare_output(cfg);
  write_file(dir / "spectrum.csv", csv);
  out << "wrote " << grid.size() - 2 << " spectrum rows\n";
  return kOk;
}

int cmd_oracle_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Trajectory reduced = integrate(cfg.integrator, cfg.params);
  IntegratorConfig full_cfg = cfg.integrator;
  full_cfg.rate_scale *= 1.0 + cfg.rate_perturbation;
  OracleOptions options;
  options.gamma_cross = cfg.gamma_cross;
  const OracleTrajectory full = propagate(reconstruct(cfg.integrator.initial), cfg.params, full_cfg, options);

  static constexpr std::array<const char*, 4> names{"a", "d", "n", "x"};
  std::array<double, 4> worst{};
  std::array<double, 4> worst_t{};
  double max_imag = 0.0;
  std::size_t shared = 0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < full.t.size(); ++i) {
    while (j < reduced.size() && reduced.samples[j].t < full.t[i]) ++j;
    if (j == reduced.size()) break;
    if (reduced.samples[j].t != full.t[i]) continue;
    ++shared;
    const ReducedState r = reduce(full.rho[i]);
    const ReducedState& q = reduced.samples[j].state;
    const std::array<double, 4> dev{std::abs(r.a - q.a), std::abs(r.d - q.d), std::abs(r.n - q.n),
                                    std::abs(r.x - q.x)};
    for (std::size_t k = 0; k < 4; ++k) {
      if (dev[k] > worst[k]) {
        worst[k] = dev[k];
        worst_t[k] = full.t[i];
      }
    }
    max_imag = std::max(max_imag, std::abs(full.rho[i].correlation().imag()));
  }
  if (shared == 0) {
    err << "error: no shared sample times between the reduced and full propagations\n";
    return kOracleMismatch;
  }
  std::size_t worst_k = 0;
  for (std::size_t k = 0; k < 4; ++k) {
    out << names[k] << " max_deviation " << format_number(worst[k]) << " at t = " << format_number(worst_t[k]) << "\n";
    if (worst[k] / cfg.oracle_threshold > worst[worst_k] / cfg.oracle_threshold) worst_k = k;
  }
  out << "Im x max " << format_number(max_imag) << "\n";
  out << "shared samples " << shared << "\n";
  if (!(worst[worst_k] < cfg.oracle_threshold)) {
    err << "oracle mismatch: " << names[worst_k] << " deviates by " << format_number(worst[worst_k]) << " at t = "
        << format_number(worst_t[worst_k]) << " (threshold " << format_number(cfg.oracle_threshold) << ")\n";
    return kOracleMismatch;
  }
  out << "oracle check passed\n";
  return kOk;
}

}  // namespace

void RunConfig::validate() const {
  try {
    params.validate();
    integrator.validate();
    reconstruct(integrator.initial);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
  if (c_values.empty()) throw ConfigError("c_values must not be empty");
  for (double c : c_values) {
    if (!std::isfinite(c) || c < 0.0) throw ConfigError("c_values must be finite and >= 0");
  }
  if (grid_points < 3) throw ConfigError("grid_points must be >= 3 (the spectrum grid is empty or too small)");
  if (grid_points > 1000000) throw ConfigError("grid_points must be <= 1000000");
  if (!(grid_half_width > 0.0) || !std::isfinite(grid_half_width)) throw ConfigError("grid_half_width must be > 0");
  if (!(grid_core_width > 0.0) || !std::isfinite(grid_core_width)) throw ConfigError("grid_core_width must be > 0");
  if (!(rate_perturbation > -1.0) || !std::isfinite(rate_perturbation)) {
    throw ConfigError("rate_perturbation must be > -1");
  }
  if (!(gamma_cross >= 0.0) || !std::isfinite(gamma_cross)) throw ConfigError("gamma_cross must be >= 0");
  if (!(oracle_threshold > 0.0)) throw ConfigError("oracle_threshold must be > 0");
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& [name, setter] : key_table()) keys.push_back(name);
  return keys;
}

void apply_key(RunConfig& cfg, const std::string& key, const std::string& value) {
  json parsed = json::parse(value, nullptr, false);
  if (parsed.is_discarded()) parsed = value;
  apply_value(cfg, key, parsed);
}

void apply_json(RunConfig& cfg, const std::string& json_text) {
  const json doc = json::parse(json_text, nullptr, false);
  if (doc.is_discarded()) throw ConfigError("config file is not valid JSON");
  if (!doc.is_object()) throw ConfigError("config file must hold a flat JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key == "config") throw ConfigError("key 'config' is not allowed inside a config file");
    apply_value(cfg, key, value);
  }
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  return std::string(buf.data(), ptr);
}

std::string trajectory_csv(const Trajectory& traj, const std::string& comment) {
  std::string csv =
      "# superrad trajectory\n"
      "# units: t in 1/gamma; Gamma, Gammabar and intensity in gamma; other columns dimensionless\n";
  csv += comment;
  csv += "t,a,d,n,x,Gamma,Gammabar,intensity,rho_pp,rho_mm,witness\n";
  for (const Sample& s : traj.samples) {
    csv_row(csv, {s.t, s.state.a, s.state.d, s.state.n, s.state.x, s.rates.gamma_plus, s.rates.gammabar_plus,
                  s.intensity, s.rho_pp, s.rho_mm, s.witness});
  }
  return csv;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-atom correlations in superradiant decay"};
  app.name("superrad");
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"simulate", "integrate one trajectory; writes trajectory.csv and summary.json"},
      {"scan", "sweep the cooperativity; writes scan.csv and scan_fit.json"},
      {"spectrum", "Gamma over detuning and its chirp; writes spectrum.csv"},
      {"oracle-check", "compare the reduced equations with the full density-matrix propagation"},
  };
  const std::vector<std::string> keys = config_keys();
  std::string config_path;
  std::map<std::string, std::string> flag_values;
  std::vector<std::pair<CLI::App*, std::map<std::string, CLI::Option*>>> subs;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "flat JSON object with configuration keys");
    std::map<std::string, CLI::Option*> opts;
    for (const std::string& key : keys) opts[key] = sub->add_option("--" + key, flag_values[key]);
    subs.emplace_back(sub, std::move(opts));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  RunConfig cfg;
  std::string command;
  try {
    for (const auto& [sub, opts] : subs) {
      if (!sub->parsed()) continue;
      command = sub->get_name();
      if (!config_path.empty()) apply_json(cfg, read_file(config_path));
      for (const auto& [key, opt] : opts) {
        if (opt->count() > 0) apply_key(cfg, key, flag_values[key]);
      }
    }
    cfg.validate();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    if (command == "simulate") return cmd_simulate(cfg, out, err);
    if (command == "scan") return cmd_scan(cfg, out, err);
    if (command == "spectrum") return cmd_spectrum(cfg, out, err);
    return cmd_oracle_check(cfg, out, err);
  } catch (const OutputError& e) {
    err << "output error: " << e.what() << "\n";
    return kConfigError;
  } catch (const OracleIntegrityError& e) {
    err << "oracle integrity failure at t = " << format_number(e.time()) << ": " << e.what() << "\n";
    return kOracleMismatch;
  } catch (const SolverFailure& e) {
    err << "solver failure at t = " << format_number(e.time()) << ": " << e.what() << "\n";
    return kSolverFailure;
  } catch (const Error& e) {
    err << "solver failure: " << e.what() << "\n";
    return kSolverFailure;
  }
}

}  // namespace superrad::cli
