// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "taskhbf/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace taskhbf {

using nlohmann::json;

std::string to_string(Task task) { return task == Task::ScanDetect ? "sd" : "tt"; }

Task task_from_string(const std::string& name) {
  std::string lower = name;
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "sd" || lower == "scan" || lower == "aismmr" || lower == "1") return Task::ScanDetect;
  if (lower == "tt" || lower == "track" || lower == "apsimr" || lower == "2") return Task::TargetTrack;
  throw ConfigError("unknown task '" + name + "' (expected sd or tt)");
}

InfeasibleQos::InfeasibleQos(int k, int u, double xi)
    : Error("QoS constraint set is empty for subcarrier " + std::to_string(k) + ", user " +
            std::to_string(u) + " (xi = " + std::to_string(xi) + ")"),
      k_(k),
      u_(u),
      xi_(xi) {}

// ---------------------------------------------------------------------------

void AngleGrids::build() {
  full_grid.clear();
  theta_main.clear();
  theta_side.clear();
  theta_trans.clear();
  if (points < 2) throw ConfigError("grid.points must be >= 2");
  const double step = (grid_max - grid_min) / (points - 1);
  for (int p = 0; p < points; ++p) {
    // Snap to a 1e-9 deg lattice so interval tests are not at the mercy of round-off.
    const double raw = grid_min + p * step;
    const double deg = std::round(raw * 1e9) / 1e9;
    full_grid.push_back(deg);
    const auto in = [deg](const AngleInterval& iv) { return iv.contains(deg); };
    if (std::any_of(main_intervals.begin(), main_intervals.end(), in)) {
      theta_main.push_back(deg);
    } else if (std::any_of(side_intervals.begin(), side_intervals.end(), in)) {
      theta_side.push_back(deg);
    } else {
      theta_trans.push_back(deg);
    }
  }
}

AngleGrids AngleGrids::symmetric(int points, double main_half_width, double side_start) {
  AngleGrids g;
  g.points = points;
  g.main_intervals = {{-main_half_width, main_half_width}};
  g.side_intervals = {{-90.0, -side_start}, {side_start, 90.0}};
  g.build();
  return g;
}

double half_wavelength(double f) { return 0.5 * kSpeedOfLight / f; }

double ScenarioConfig::subcarrier_frequency(int k) const {
  return f_c + (static_cast<double>(k + 1) - 0.5 * K) * delta_f();
}

std::vector<double> ScenarioConfig::subcarrier_frequencies() const {
  std::vector<double> f(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) f[static_cast<std::size_t>(k)] = subcarrier_frequency(k);
  return f;
}

void ScenarioConfig::set_uniform_power(double p) { P_k.assign(static_cast<std::size_t>(K), p); }

void ScenarioConfig::set_uniform_chi(double c) { chi = RMat::Constant(K, U, c); }

void ScenarioConfig::set_uniform_rho(double r1, double r2, double r3, double r4) {
  const std::array<double, 4> r{r1, r2, r3, r4};
  for (int j = 0; j < 4; ++j) rho[static_cast<std::size_t>(j)].assign(static_cast<std::size_t>(K), r[static_cast<std::size_t>(j)]);
}

void ScenarioConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (M_t < 1 || N_t < 1 || M_r < 1 || U < 1 || K < 1) fail("M_t, N_t, M_r, U, K must all be >= 1");
  if (N_t < U) fail("N_t must be >= U (digital precoder is N_t x U)");
  if (M_t < N_t) fail("M_t must be >= N_t");
  if (!(f_c > 0.0)) fail("f_c must be positive");
  if (!(B > 0.0)) fail("B must be positive");
  if (!(d > 0.0)) fail("d must be positive");
  if (static_cast<int>(P_k.size()) != K) fail("P_k must have K entries");
  for (double p : P_k)
    if (!(p > 0.0)) fail("all P_k must be positive");
  if (!(sigma_n2 > 0.0)) fail("sigma_n2 must be positive");
  if (chi.rows() != K || chi.cols() != U) fail("chi must be K x U");
  if ((chi.array() < 0.0).any() || !chi.allFinite()) fail("all chi must be finite and >= 0");
  for (const auto& r : rho) {
    if (static_cast<int>(r.size()) != K) fail("each rho_j must have K entries");
    for (double v : r)
      if (!(v > 0.0)) fail("all rho must be positive");
  }
  if (grid.theta_main.empty()) fail("mainlobe grid is empty");
  if (grid.theta_side.empty()) fail("sidelobe grid is empty");
  for (double a : grid.full_grid)
    if (std::abs(a) > 90.0) fail("grid angles must lie in [-90, 90]");
  if (max_iter < 0) fail("max_iter must be >= 0");
  if (ccd_max < 1) fail("ccd_max must be >= 1");
  if (L < 1 || N_ray < 1) fail("L and N_ray must be >= 1");
  if (threads < 1) fail("threads must be >= 1");
  if (f_c - 0.5 * B <= 0.0) fail("B must be smaller than 2 f_c");
}

// ---------------------------------------------------------------------------
// JSON schema

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) throw ConfigError("unknown key '" + item.key() + "' in " + where);
  }
}

template <typename T>
T get_as(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

std::vector<double> per_subcarrier(const json& j, int K, const std::string& name) {
  if (j.is_number()) return std::vector<double>(static_cast<std::size_t>(K), j.get<double>());
  if (j.is_array()) {
    auto v = j.get<std::vector<double>>();
    if (static_cast<int>(v.size()) != K) throw ConfigError(name + " must have K entries");
    return v;
  }
  throw ConfigError(name + " must be a number or an array");
}

std::vector<AngleInterval> intervals_from(const json& j, const std::string& name) {
  if (!j.is_array()) throw ConfigError(name + " must be an array of [lo, hi] pairs");
  std::vector<AngleInterval> out;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2) throw ConfigError(name + " entries must be [lo, hi]");
    AngleInterval iv{p[0].get<double>(), p[1].get<double>()};
    if (iv.lo > iv.hi) throw ConfigError(name + " interval has lo > hi");
    out.push_back(iv);
  }
  return out;
}

json intervals_to(const std::vector<AngleInterval>& ivs) {
  json arr = json::array();
  for (const auto& iv : ivs) arr.push_back({iv.lo, iv.hi});
  return arr;
}

bool all_equal(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

const std::set<std::string> kTopKeys = {"M_t",  "N_t",      "M_r",        "U",     "K",          "f_c",
                                        "B",    "d",        "P_k",        "sigma_n2", "chi",     "grid",
                                        "rho",  "task",     "max_iter",   "ccd_max", "seed",     "L",
                                        "N_ray", "qos_enabled", "threads", "tolerances"};
const std::set<std::string> kGridKeys = {"points", "min", "max", "theta_main", "theta_side"};
const std::set<std::string> kTolKeys = {"power_rel", "root", "zero", "residual", "kkt",
                                        "bisection_max", "newton_max", "bracket_expansions"};

ScenarioConfig from_json(const json& j) {
  reject_unknown(j, kTopKeys, "config");
  for (const char* key : {"M_t", "N_t", "M_r", "U", "K", "f_c", "B", "P_k", "sigma_n2", "chi", "grid", "rho", "task"}) {
    if (!j.contains(key)) throw ConfigError(std::string("missing required key '") + key + "'");
  }
  ScenarioConfig cfg;
  cfg.M_t = get_as<int>(j, "M_t");
  cfg.N_t = get_as<int>(j, "N_t");
  cfg.M_r = get_as<int>(j, "M_r");
  cfg.U = get_as<int>(j, "U");
  cfg.K = get_as<int>(j, "K");
  if (cfg.K < 1 || cfg.U < 1) throw ConfigError("K and U must be >= 1");
  cfg.f_c = get_as<double>(j, "f_c");
  cfg.B = get_as<double>(j, "B");
  cfg.d = j.contains("d") ? get_as<double>(j, "d")
                          : half_wavelength(cfg.K > 1 ? cfg.f_c + 0.5 * cfg.B : cfg.f_c);
  cfg.P_k = per_subcarrier(j.at("P_k"), cfg.K, "P_k");
  cfg.sigma_n2 = get_as<double>(j, "sigma_n2");

  const json& chi = j.at("chi");
  if (chi.is_number()) {
    cfg.set_uniform_chi(chi.get<double>());
  } else if (chi.is_array() && static_cast<int>(chi.size()) == cfg.K) {
    cfg.chi.resize(cfg.K, cfg.U);
    for (int k = 0; k < cfg.K; ++k) {
      const auto row = chi[static_cast<std::size_t>(k)].get<std::vector<double>>();
      if (static_cast<int>(row.size()) != cfg.U) throw ConfigError("chi rows must have U entries");
      for (int u = 0; u < cfg.U; ++u) cfg.chi(k, u) = row[static_cast<std::size_t>(u)];
    }
  } else {
    throw ConfigError("chi must be a number or a K x U array");
  }

  const json& grid = j.at("grid");
  reject_unknown(grid, kGridKeys, "grid");
  cfg.grid.points = grid.value("points", 361);
  cfg.grid.grid_min = grid.value("min", -90.0);
  cfg.grid.grid_max = grid.value("max", 90.0);
  if (!grid.contains("theta_main") || !grid.contains("theta_side"))
    throw ConfigError("grid requires theta_main and theta_side");
  cfg.grid.main_intervals = intervals_from(grid.at("theta_main"), "grid.theta_main");
  cfg.grid.side_intervals = intervals_from(grid.at("theta_side"), "grid.theta_side");
  cfg.grid.build();

  const json& rho = j.at("rho");
  if (rho.is_number()) {
    const double r = rho.get<double>();
    cfg.set_uniform_rho(r, r, r, r);
  } else if (rho.is_array() && rho.size() == 4) {
    for (std::size_t q = 0; q < 4; ++q) cfg.rho[q] = per_subcarrier(rho[q], cfg.K, "rho");
  } else {
    throw ConfigError("rho must be a number or a 4-element array (each entry scalar or length K)");
  }

  cfg.task = task_from_string(get_as<std::string>(j, "task"));
  if (j.contains("max_iter")) cfg.max_iter = get_as<int>(j, "max_iter");
  if (j.contains("ccd_max")) cfg.ccd_max = get_as<int>(j, "ccd_max");
  if (j.contains("seed")) cfg.seed = get_as<std::uint64_t>(j, "seed");
  if (j.contains("L")) cfg.L = get_as<int>(j, "L");
  if (j.contains("N_ray")) cfg.N_ray = get_as<int>(j, "N_ray");
  if (j.contains("qos_enabled")) cfg.qos_enabled = get_as<bool>(j, "qos_enabled");
  if (j.contains("threads")) cfg.threads = get_as<int>(j, "threads");
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    reject_unknown(t, kTolKeys, "tolerances");
    cfg.tol.power_rel = t.value("power_rel", cfg.tol.power_rel);
    cfg.tol.root = t.value("root", cfg.tol.root);
    cfg.tol.zero = t.value("zero", cfg.tol.zero);
    cfg.tol.residual = t.value("residual", cfg.tol.residual);
    cfg.tol.kkt = t.value("kkt", cfg.tol.kkt);
    cfg.tol.bisection_max = t.value("bisection_max", cfg.tol.bisection_max);
    cfg.tol.newton_max = t.value("newton_max", cfg.tol.newton_max);
    cfg.tol.bracket_expansions = t.value("bracket_expansions", cfg.tol.bracket_expansions);
  }
  cfg.validate();
  return cfg;
}

json to_json(const ScenarioConfig& cfg) {
  json j;
  j["M_t"] = cfg.M_t;
  j["N_t"] = cfg.N_t;
  j["M_r"] = cfg.M_r;
  j["U"] = cfg.U;
  j["K"] = cfg.K;
  j["f_c"] = cfg.f_c;
  j["B"] = cfg.B;
  j["d"] = cfg.d;
  j["P_k"] = all_equal(cfg.P_k) ? json(cfg.P_k.front()) : json(cfg.P_k);
  j["sigma_n2"] = cfg.sigma_n2;
  if (cfg.chi.size() > 0 && (cfg.chi.array() == cfg.chi(0, 0)).all()) {
    j["chi"] = cfg.chi(0, 0);
  } else {
    json rows = json::array();
    for (int k = 0; k < cfg.chi.rows(); ++k) {
      json row = json::array();
      for (int u = 0; u < cfg.chi.cols(); ++u) row.push_back(cfg.chi(k, u));
      rows.push_back(row);
    }
    j["chi"] = rows;
  }
  j["grid"] = {{"points", cfg.grid.points},
               {"min", cfg.grid.grid_min},
               {"max", cfg.grid.grid_max},
               {"theta_main", intervals_to(cfg.grid.main_intervals)},
               {"theta_side", intervals_to(cfg.grid.side_intervals)}};
  json rho = json::array();
  for (const auto& r : cfg.rho) rho.push_back(all_equal(r) ? json(r.front()) : json(r));
  j["rho"] = rho;
  j["task"] = to_string(cfg.task);
  j["max_iter"] = cfg.max_iter;
  j["ccd_max"] = cfg.ccd_max;
  j["seed"] = cfg.seed;
  j["L"] = cfg.L;
  j["N_ray"] = cfg.N_ray;
  j["qos_enabled"] = cfg.qos_enabled;
  j["threads"] = cfg.threads;
  j["tolerances"] = {{"power_rel", cfg.tol.power_rel},
                     {"root", cfg.tol.root},
                     {"zero", cfg.tol.zero},
                     {"residual", cfg.tol.residual},
                     {"kkt", cfg.tol.kkt},
                     {"bisection_max", cfg.tol.bisection_max},
                     {"newton_max", cfg.tol.newton_max},
                     {"bracket_expansions", cfg.tol.bracket_expansions}};
  return j;
}

}  // namespace

ScenarioConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    return from_json(j);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config schema error: ") + e.what());
  }
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return config_from_json_text(buffer.str());
}

std::string config_to_json_text(const ScenarioConfig& cfg, int indent) { return to_json(cfg).dump(indent); }

void apply_override(ScenarioConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override must look like key=value: " + assignment);
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;
  }
  json j = to_json(cfg);
  // Spacing follows the band unless pinned explicitly.
  if (key == "f_c" || key == "B" || key == "K") j.erase("d");
  json* node = &j;
  std::string rest = key;
  for (auto dot = rest.find('.'); dot != std::string::npos; dot = rest.find('.')) {
    const std::string head = rest.substr(0, dot);
    if (!node->contains(head) || !(*node)[head].is_object()) throw ConfigError("unknown override key '" + key + "'");
    node = &(*node)[head];
    rest = rest.substr(dot + 1);
  }
  (*node)[rest] = value;
  cfg = config_from_json_text(j.dump());
}

}  // namespace taskhbf
