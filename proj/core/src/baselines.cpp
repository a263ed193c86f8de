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

#include <Eigen/SVD>

#include "taskhbf/cadmm.hpp"

namespace taskhbf {

RunResult run_radar_only(const ScenarioConfig& cfg, const ChannelSet& channels, const RunOptions& options) {
  ScenarioConfig relaxed = cfg;
  relaxed.qos_enabled = false;
  return run(relaxed, channels, options);
}

HybridBeamformer random_phase_beamformer(const ScenarioConfig& cfg, const ChannelSet& channels,
                                         std::mt19937_64& rng) {
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  HybridBeamformer hbf;
  hbf.F_RF.resize(cfg.M_t, cfg.N_t);
  for (int i = 0; i < cfg.M_t; ++i)
    for (int j = 0; j < cfg.N_t; ++j) hbf.F_RF(i, j) = std::polar(1.0, phase(rng));

  hbf.F.resize(static_cast<std::size_t>(cfg.K));
  for (int k = 0; k < cfg.K; ++k) {
    CMat target(cfg.M_t, cfg.U);
    for (int u = 0; u < cfg.U; ++u) {
      Eigen::JacobiSVD<CMat> svd(channels.at(k, u), Eigen::ComputeFullV);
      target.col(u) = svd.matrixV().col(0);
    }
    hbf.F[static_cast<std::size_t>(k)] = solve_Fk(target, hbf.F_RF);
  }
  normalize_power(hbf, cfg.P_k);
  return hbf;
}

}  // namespace taskhbf
