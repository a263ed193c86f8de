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

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "taskhbf/types.hpp"

namespace taskhbf {

// Closed angular interval in degrees.
struct AngleInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double deg) const { return deg >= lo && deg <= hi; }
};

// Angular sampling of the transmit beampattern.
//
// The evaluation grid is `points` uniform samples over [grid_min, grid_max].
// Each sample belongs to the mainlobe set if it falls in one of the
// mainlobe intervals, otherwise to the sidelobe set if it falls in one of
// the sidelobe intervals, otherwise to the transition band.
struct AngleGrids {
  int points = 361;
  double grid_min = -90.0;
  double grid_max = 90.0;
  std::vector<AngleInterval> main_intervals;
  std::vector<AngleInterval> side_intervals;

  std::vector<double> full_grid;    // P angles
  std::vector<double> theta_main;   // M angles
  std::vector<double> theta_side;   // S angles
  std::vector<double> theta_trans;  // transition band

  // Populates the four angle lists from the interval description.
  void build();

  static AngleGrids symmetric(int points, double main_half_width, double side_start);
};

struct Tolerances {
  double power_rel = 1e-8;   // |Tr(YY^H) - P| / P
  double root = 1e-10;       // scalar residual for secular / multiplier equations
  double zero = 1e-12;       // norms below this are treated as zero
  double residual = 1e-3;    // ADMM stopping threshold on averaged residual norms
  double kkt = 1e-9;         // QoS-ball feasibility slack
  int bisection_max = 200;
  int newton_max = 50;
  int bracket_expansions = 200;
};

// All parameters of one hybrid beamforming scenario. Indices k (subcarrier)
// and u (user) are zero-based in code.
struct ScenarioConfig {
  int M_t = 16;
  int N_t = 4;
  int M_r = 2;
  int U = 2;
  int K = 4;
  double f_c = 10e9;
  double B = 2.56e9;
  double d = 0.0;               // element spacing [m]
  std::vector<double> P_k;      // per-subcarrier power budget, length K
  double sigma_n2 = 1.0;
  RMat chi;                     // K x U rate thresholds [bit/s/Hz]
  AngleGrids grid;
  std::array<std::vector<double>, 4> rho;  // rho_{1..4,k}, each length K
  Task task = Task::ScanDetect;
  int max_iter = 1000;
  int ccd_max = 1;
  std::uint64_t seed = 1;
  int L = 4;
  int N_ray = 3;
  bool qos_enabled = true;      // false: radar-only design, rate constraint dropped
  int threads = 1;
  Tolerances tol;

  double delta_f() const { return B / K; }
  double delta_t() const { return 1.0 / delta_f(); }
  // Frequency of subcarrier k (zero-based): f_c + (k + 1 - K/2) * delta_f.
  double subcarrier_frequency(int k) const;
  std::vector<double> subcarrier_frequencies() const;

  // Throws ConfigError describing the first violated invariant.
  void validate() const;

  // Fills P_k / chi / rho with uniform values of the right shape.
  void set_uniform_power(double p);
  void set_uniform_chi(double c);
  void set_uniform_rho(double r1, double r2, double r3, double r4);
};

// Half-wavelength spacing at frequency f.
double half_wavelength(double f);

// JSON (de)serialization. Unknown keys are rejected with ConfigError.
ScenarioConfig load_config(const std::filesystem::path& path);
ScenarioConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const ScenarioConfig& cfg, int indent = 2);

// Applies a "key=value" override, e.g. "chi=1.5", "M_t=32", "task=tt",
// "rho=[1,1,0.5,0.5]". Value is parsed as JSON when possible.
void apply_override(ScenarioConfig& cfg, const std::string& assignment);

// Named scenario presets: single_carrier_A, single_carrier_B, ofdm_A, ofdm_B, desk.
std::vector<std::string> preset_names();
ScenarioConfig make_preset(const std::string& name);

}  // namespace taskhbf
