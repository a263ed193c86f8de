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

#include "taskhbf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace taskhbf {

namespace {

void check_link(const CMat& H, const CMat& beams, const CVec& w, int u) {
  if (H.cols() != beams.rows()) throw ContractViolation("channel columns must match precoder rows");
  if (w.size() != H.rows()) throw ContractViolation("combiner length must match receive antennas");
  if (u < 0 || u >= beams.cols()) throw ContractViolation("user index out of range");
}

// z_i = w^H H b_i for every stream i.
CVec combined_gains(const CMat& H, const CMat& beams, const CVec& w) {
  return (w.adjoint() * H * beams).transpose();
}

}  // namespace

double HybridBeamformer::modulus_error() const {
  return F_RF.size() == 0 ? 0.0 : (F_RF.array().abs() - 1.0).abs().maxCoeff();
}

CombinerSet::CombinerSet(int k, int u, int m_r)
    : K(k), U(u), w(static_cast<std::size_t>(k * u), CVec::Zero(m_r)), omega(static_cast<std::size_t>(k * u), 1.0) {}

double sinr(const CMat& H, const CMat& beams, const CVec& w, double sigma_n2, int u) {
  check_link(H, beams, w, u);
  const CVec z = combined_gains(H, beams, w);
  const double signal = std::norm(z(u));
  if (signal == 0.0) return 0.0;
  const double interference = z.squaredNorm() - signal;
  return signal / (interference + sigma_n2 * w.squaredNorm());
}

double rate(const CMat& H, const CMat& beams, const CVec& w, double sigma_n2, int u) {
  return std::log2(1.0 + sinr(H, beams, w, sigma_n2, u));
}

double mse(const CMat& H, const CMat& beams, const CVec& w, double sigma_n2, int u) {
  check_link(H, beams, w, u);
  const CVec z = combined_gains(H, beams, w);
  const double interference = z.squaredNorm() - std::norm(z(u));
  return std::norm(z(u) - 1.0) + interference + sigma_n2 * w.squaredNorm();
}

CVec mmse_combiner(const CMat& H, const CMat& beams, double sigma_n2, int u) {
  if (H.cols() != beams.rows()) throw ContractViolation("channel columns must match precoder rows");
  if (u < 0 || u >= beams.cols()) throw ContractViolation("user index out of range");
  const CMat HB = H * beams;
  CMat R = HB * HB.adjoint();
  R.diagonal().array() += sigma_n2;
  Eigen::LDLT<CMat> ldlt(R);
  if (ldlt.info() != Eigen::Success || !(ldlt.rcond() > 1e-14)) {
    throw SingularSystem("MMSE combiner: receive covariance is singular");
  }
  return ldlt.solve(HB.col(u));
}

double sinr(const CMat& H, const HybridBeamformer& hbf, const CVec& w, double sigma_n2, int u, int k) {
  return sinr(H, hbf.effective(k), w, sigma_n2, u);
}
double rate(const CMat& H, const HybridBeamformer& hbf, const CVec& w, double sigma_n2, int u, int k) {
  return rate(H, hbf.effective(k), w, sigma_n2, u);
}
double mse(const CMat& H, const HybridBeamformer& hbf, const CVec& w, double sigma_n2, int u, int k) {
  return mse(H, hbf.effective(k), w, sigma_n2, u);
}
CVec mmse_combiner(const CMat& H, const HybridBeamformer& hbf, double sigma_n2, int u, int k) {
  return mmse_combiner(H, hbf.effective(k), sigma_n2, u);
}

double rate_wmmse(double omega, double e) { return std::log2(omega) - omega * e + 1.0; }

double qos_bound_xi(double omega, const CVec& w, double sigma_n2, double chi) {
  return (std::log2(omega) - omega * sigma_n2 * w.squaredNorm() + 1.0 - chi) / omega;
}

double qos_bound_xi_checked(double omega, const CVec& w, double sigma_n2, double chi, int k, int u) {
  const double xi = qos_bound_xi(omega, w, sigma_n2, chi);
  if (xi < 0.0) throw InfeasibleQos(k, u, xi);
  return xi;
}

void refresh_combiners(const ChannelSet& channels, const HybridBeamformer& hbf, double sigma_n2,
                       CombinerSet& combiners) {
  for (int k = 0; k < channels.K; ++k) {
    const CMat beams = hbf.effective(k);
    for (int u = 0; u < channels.U; ++u) {
      const CMat& H = channels.at(k, u);
      CVec w = mmse_combiner(H, beams, sigma_n2, u);
      const double e = mse(H, beams, w, sigma_n2, u);
      combiners.w_at(k, u) = std::move(w);
      combiners.omega_at(k, u) = 1.0 / e;
    }
  }
}

RMat achieved_rates(const ChannelSet& channels, const HybridBeamformer& hbf, const CombinerSet& combiners,
                    double sigma_n2) {
  RMat r(channels.K, channels.U);
  for (int k = 0; k < channels.K; ++k) {
    const CMat beams = hbf.effective(k);
    for (int u = 0; u < channels.U; ++u) r(k, u) = rate(channels.at(k, u), beams, combiners.w_at(k, u), sigma_n2, u);
  }
  return r;
}

double transmit_spectrum(const HybridBeamformer& hbf, int k, const CVec& steering, double dt) {
  const CVec x = hbf.F[static_cast<std::size_t>(k)].adjoint() * (hbf.F_RF.adjoint() * steering);
  return dt * dt * x.squaredNorm();
}

RVec lobe_powers(const CMat& beams, const CMat& A) {
  return (beams.adjoint() * A).colwise().squaredNorm().transpose();
}

BeampatternGrid beampattern(const HybridBeamformer& hbf, const RadarGeometry& geom, double dt) {
  BeampatternGrid grid;
  grid.angles_deg = geom.angles_full;
  grid.frequencies = geom.frequencies;
  grid.values.resize(geom.subcarriers(), static_cast<Eigen::Index>(geom.angles_full.size()));
  for (int k = 0; k < geom.subcarriers(); ++k) {
    grid.values.row(k) = (dt * dt) * lobe_powers(hbf.effective(k), geom.A_full[static_cast<std::size_t>(k)]).transpose();
  }
  return grid;
}

double aismmr(const std::vector<CMat>& beams, const RadarGeometry& geom) {
  double total = 0.0;
  for (int k = 0; k < geom.subcarriers(); ++k) {
    const auto kk = static_cast<std::size_t>(k);
    const RVec side = lobe_powers(beams[kk], geom.A_side[kk]);
    const RVec main = lobe_powers(beams[kk], geom.A_main[kk]);
    const double min_main = main.minCoeff();
    if (!(min_main > 0.0)) {
      throw DegenerateSubproblem("AISMMR: zero mainlobe power on subcarrier " + std::to_string(k));
    }
    total += side.sum() / min_main;
  }
  return total / geom.subcarriers();
}

double apsimr(const std::vector<CMat>& beams, const RadarGeometry& geom) {
  double total = 0.0;
  for (int k = 0; k < geom.subcarriers(); ++k) {
    const auto kk = static_cast<std::size_t>(k);
    const RVec side = lobe_powers(beams[kk], geom.A_side[kk]);
    const RVec main = lobe_powers(beams[kk], geom.A_main[kk]);
    const double sum_main = main.sum();
    if (!(sum_main > 0.0)) {
      throw DegenerateSubproblem("APSIMR: zero mainlobe power on subcarrier " + std::to_string(k));
    }
    total += side.maxCoeff() / sum_main;
  }
  return total / geom.subcarriers();
}

namespace {
std::vector<CMat> all_beams(const HybridBeamformer& hbf) {
  std::vector<CMat> beams;
  beams.reserve(hbf.F.size());
  for (int k = 0; k < hbf.subcarriers(); ++k) beams.push_back(hbf.effective(k));
  return beams;
}
}  // namespace

double aismmr(const HybridBeamformer& hbf, const RadarGeometry& geom) { return aismmr(all_beams(hbf), geom); }
double apsimr(const HybridBeamformer& hbf, const RadarGeometry& geom) { return apsimr(all_beams(hbf), geom); }

double objective(const HybridBeamformer& hbf, const RadarGeometry& geom, Task task) {
  return task == Task::ScanDetect ? aismmr(hbf, geom) : apsimr(hbf, geom);
}

}  // namespace taskhbf
