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

#include "taskhbf/channel.hpp"

#include <cmath>

#include "taskhbf/geometry.hpp"

namespace taskhbf {

ChannelSet build_channel(const ScenarioConfig& cfg, const std::vector<std::vector<Ray>>& rays) {
  if (static_cast<int>(rays.size()) != cfg.U) throw ContractViolation("need one ray list per user");
  if (cfg.L < 1 || cfg.N_ray < 1) throw ContractViolation("L and N_ray must be >= 1");

  ChannelSet set;
  set.K = cfg.K;
  set.U = cfg.U;
  set.L = cfg.L;
  set.N_ray = cfg.N_ray;
  set.rays = rays;
  set.H.resize(static_cast<std::size_t>(cfg.K * cfg.U));

  const double nu = std::sqrt(static_cast<double>(cfg.M_t) * cfg.M_r / (static_cast<double>(cfg.L) * cfg.N_ray));
  for (int k = 0; k < cfg.K; ++k) {
    const double f = cfg.subcarrier_frequency(k);
    for (int u = 0; u < cfg.U; ++u) {
      CMat H = CMat::Zero(cfg.M_r, cfg.M_t);
      for (const Ray& ray : rays[static_cast<std::size_t>(u)]) {
        // Unit-norm array responses, so that E||H||_F^2 = M_t M_r.
        const CVec a_r = steering_vector(f, ray.aoa_deg, cfg.M_r, cfg.d) / std::sqrt(double(cfg.M_r));
        const CVec a_t = steering_vector(f, ray.aod_deg, cfg.M_t, cfg.d) / std::sqrt(double(cfg.M_t));
        const cdouble tap = std::polar(1.0, -2.0 * kPi * ray.cluster * f / cfg.K);
        H.noalias() += (ray.gain * tap) * (a_r * a_t.adjoint());
      }
      set.at(k, u) = nu * H;
    }
  }
  return set;
}

ChannelSet generate_channel(const ScenarioConfig& cfg, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(-90.0, 90.0);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  std::vector<std::vector<Ray>> rays(static_cast<std::size_t>(cfg.U));
  for (int u = 0; u < cfg.U; ++u) {
    for (int i = 0; i < cfg.L; ++i) {
      for (int j = 0; j < cfg.N_ray; ++j) {
        Ray ray;
        ray.cluster = i;
        const double re = normal(rng);
        const double im = normal(rng);
        ray.gain = {re, im};
        ray.aod_deg = angle(rng);
        ray.aoa_deg = angle(rng);
        rays[static_cast<std::size_t>(u)].push_back(ray);
      }
    }
  }
  return build_channel(cfg, rays);
}

ChannelSet generate_channel(const ScenarioConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  return generate_channel(cfg, rng);
}

}  // namespace taskhbf
