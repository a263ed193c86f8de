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

#include <random>
#include <vector>

#include "taskhbf/config.hpp"
#include "taskhbf/types.hpp"

namespace taskhbf {

// One propagation path of the clustered channel. Angles in degrees.
struct Ray {
  int cluster = 0;     // delay tap index i in [0, L)
  cdouble gain{1.0, 0.0};
  double aod_deg = 0.0;
  double aoa_deg = 0.0;
};

// Per-subcarrier, per-user channel matrices.
struct ChannelSet {
  int K = 0;
  int U = 0;
  int L = 0;
  int N_ray = 0;
  std::vector<std::vector<Ray>> rays;  // rays[u], L * N_ray entries
  std::vector<CMat> H;                 // row-major over (k, u), each M_r x M_t

  const CMat& at(int k, int u) const { return H[static_cast<std::size_t>(k * U + u)]; }
  CMat& at(int k, int u) { return H[static_cast<std::size_t>(k * U + u)]; }
};

// Assembles H_{k,u} from explicit ray parameters:
//   H = nu * sum_rays gain * a_r(f_k, aoa) a_t(f_k, aod)^H * exp(-j 2 pi i f_k / K)
// where a_r, a_t are unit-norm ULA responses
// with nu = sqrt(M_t M_r / (L N_ray)).
ChannelSet build_channel(const ScenarioConfig& cfg, const std::vector<std::vector<Ray>>& rays);

// Draws L * N_ray rays per user (angles uniform on [-90, 90], gains CN(0, 1))
// and assembles the channel. Pure function of (cfg, rng state).
ChannelSet generate_channel(const ScenarioConfig& cfg, std::mt19937_64& rng);

// Convenience: seeds a fresh generator from cfg.seed.
ChannelSet generate_channel(const ScenarioConfig& cfg);

}  // namespace taskhbf
