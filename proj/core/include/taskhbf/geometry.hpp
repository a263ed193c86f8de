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

#include <span>
#include <vector>

#include "taskhbf/config.hpp"
#include "taskhbf/types.hpp"

namespace taskhbf {

// ULA space-frequency steering vector. Entry m (zero-based) is
// exp(j 2 pi f m d sin(theta) / c). Angle in degrees, |theta| <= 90.
CVec steering_vector(double f, double theta_deg, int M_t, double d);

// Columns are steering vectors for each angle in `angles_deg`.
CMat steering_matrix(double f, std::span<const double> angles_deg, int M_t, double d);

// Steering matrices for every subcarrier, cached once per scenario.
struct RadarGeometry {
  std::vector<double> frequencies;   // K
  std::vector<CMat> A_main;          // K matrices, M_t x M
  std::vector<CMat> A_side;          // K matrices, M_t x S
  std::vector<CMat> A_full;          // K matrices, M_t x P
  std::vector<double> angles_full;   // P angles in degrees

  static RadarGeometry from_config(const ScenarioConfig& cfg);

  int subcarriers() const { return static_cast<int>(frequencies.size()); }
  int mainlobe_points() const { return A_main.empty() ? 0 : static_cast<int>(A_main[0].cols()); }
  int sidelobe_points() const { return A_side.empty() ? 0 : static_cast<int>(A_side[0].cols()); }
};

}  // namespace taskhbf
