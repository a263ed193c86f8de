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

#include <vector>

#include "taskhbf/channel.hpp"
#include "taskhbf/geometry.hpp"
#include "taskhbf/types.hpp"

namespace taskhbf {

// Shared analog precoder F_RF (M_t x N_t, unit modulus) and per-subcarrier
// digital precoders F_k (N_t x U).
struct HybridBeamformer {
  CMat F_RF;
  std::vector<CMat> F;

  // b_{k,.} = F_RF F_k, M_t x U.
  CMat effective(int k) const { return F_RF * F[static_cast<std::size_t>(k)]; }
  int subcarriers() const { return static_cast<int>(F.size()); }

  // max_{i,j} | |F_RF(i,j)| - 1 |
  double modulus_error() const;
};

// Receive combiners w_{k,u} and WMMSE weights omega_{k,u}, indexed (k, u).
struct CombinerSet {
  int K = 0;
  int U = 0;
  std::vector<CVec> w;
  std::vector<double> omega;

  CombinerSet() = default;
  CombinerSet(int k, int u, int m_r);

  const CVec& w_at(int k, int u) const { return w[static_cast<std::size_t>(k * U + u)]; }
  CVec& w_at(int k, int u) { return w[static_cast<std::size_t>(k * U + u)]; }
  double omega_at(int k, int u) const { return omega[static_cast<std::size_t>(k * U + u)]; }
  double& omega_at(int k, int u) { return omega[static_cast<std::size_t>(k * U + u)]; }
};

// Spectrum samples S_k(f_k, theta) on the full angular grid.
struct BeampatternGrid {
  std::vector<double> angles_deg;   // P
  std::vector<double> frequencies;  // K
  RMat values;                      // K x P, linear power including (dt)^2
};

// ----- Communication metrics. `beams` is the effective precoder F_RF F_k (M_t x U).

double sinr(const CMat& H, const CMat& beams, const CVec& w, double sigma_n2, int u);
double rate(const CMat& H, const CMat& beams, const CVec& w, double sigma_n2, int u);
double mse(const CMat& H, const CMat& beams, const CVec& w, double sigma_n2, int u);
CVec mmse_combiner(const CMat& H, const CMat& beams, double sigma_n2, int u);

double sinr(const CMat& H, const HybridBeamformer& hbf, const CVec& w, double sigma_n2, int u, int k);
double rate(const CMat& H, const HybridBeamformer& hbf, const CVec& w, double sigma_n2, int u, int k);
double mse(const CMat& H, const HybridBeamformer& hbf, const CVec& w, double sigma_n2, int u, int k);
CVec mmse_combiner(const CMat& H, const HybridBeamformer& hbf, double sigma_n2, int u, int k);

// log2(omega) - omega * e + 1.
double rate_wmmse(double omega, double e);

// QoS radius xi = (log2(omega) - omega sigma^2 w^H w + 1 - chi) / omega.
// Negative xi means the QoS ball is empty; callers decide how to react.
double qos_bound_xi(double omega, const CVec& w, double sigma_n2, double chi);

// Same, but throws InfeasibleQos(k, u) when xi < 0.
double qos_bound_xi_checked(double omega, const CVec& w, double sigma_n2, double chi, int k, int u);

// Refreshes w by the MMSE combiner and omega = 1 / mse for every (k, u).
void refresh_combiners(const ChannelSet& channels, const HybridBeamformer& hbf, double sigma_n2,
                       CombinerSet& combiners);

// Achieved rate for every (k, u), K x U.
RMat achieved_rates(const ChannelSet& channels, const HybridBeamformer& hbf, const CombinerSet& combiners,
                    double sigma_n2);

// ----- Radar metrics.

// (dt)^2 || F_k^H F_RF^H a ||^2. Pass dt = 1 for the ratio-only form.
double transmit_spectrum(const HybridBeamformer& hbf, int k, const CVec& steering, double dt = 1.0);

// Row vector of || B^H a_p ||^2 over the columns of A.
RVec lobe_powers(const CMat& beams, const CMat& A);

BeampatternGrid beampattern(const HybridBeamformer& hbf, const RadarGeometry& geom, double dt);

// Throws DegenerateSubproblem when the minimum mainlobe power of some
// subcarrier is zero.
double aismmr(const HybridBeamformer& hbf, const RadarGeometry& geom);
// Throws DegenerateSubproblem when the integrated mainlobe power is zero.
double apsimr(const HybridBeamformer& hbf, const RadarGeometry& geom);

// Same ratios evaluated directly on effective beams (M_t x U per k).
double aismmr(const std::vector<CMat>& beams, const RadarGeometry& geom);
double apsimr(const std::vector<CMat>& beams, const RadarGeometry& geom);

double objective(const HybridBeamformer& hbf, const RadarGeometry& geom, Task task);

}  // namespace taskhbf
