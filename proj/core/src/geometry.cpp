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

#include "taskhbf/geometry.hpp"

#include <cmath>

namespace taskhbf {

namespace {

CVec steering_from_sine(double f, double sin_theta, int M_t, double d) {
  CVec a(M_t);
  const double phase_step = 2.0 * kPi * f * d * sin_theta / kSpeedOfLight;
  for (int m = 0; m < M_t; ++m) a(m) = std::polar(1.0, phase_step * m);
  return a;
}

}  // namespace

CVec steering_vector(double f, double theta_deg, int M_t, double d) {
  if (std::abs(theta_deg) > 90.0) throw ContractViolation("steering angle outside [-90, 90] degrees");
  if (!(f > 0.0)) throw ContractViolation("steering frequency must be positive");
  return steering_from_sine(f, std::sin(theta_deg * kPi / 180.0), M_t, d);
}

CMat steering_matrix(double f, std::span<const double> angles_deg, int M_t, double d) {
  CMat A(M_t, static_cast<Eigen::Index>(angles_deg.size()));
  for (std::size_t p = 0; p < angles_deg.size(); ++p) {
    A.col(static_cast<Eigen::Index>(p)) = steering_vector(f, angles_deg[p], M_t, d);
  }
  return A;
}

RadarGeometry RadarGeometry::from_config(const ScenarioConfig& cfg) {
  RadarGeometry geom;
  geom.frequencies = cfg.subcarrier_frequencies();
  geom.angles_full = cfg.grid.full_grid;
  for (double f : geom.frequencies) {
    geom.A_main.push_back(steering_matrix(f, cfg.grid.theta_main, cfg.M_t, cfg.d));
    geom.A_side.push_back(steering_matrix(f, cfg.grid.theta_side, cfg.M_t, cfg.d));
    geom.A_full.push_back(steering_matrix(f, cfg.grid.full_grid, cfg.M_t, cfg.d));
  }
  return geom;
}

}  // namespace taskhbf
