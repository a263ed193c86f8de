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

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "taskhbf/geometry.hpp"
#include "taskhbf/metrics.hpp"

using namespace taskhbf;

namespace {

HybridBeamformer random_hbf(int M_t, int N_t, int U, int K, std::mt19937_64& rng) {
  HybridBeamformer hbf;
  hbf.F_RF = oracle::random_unit_modulus(M_t, N_t, rng);
  for (int k = 0; k < K; ++k) hbf.F.push_back(oracle::random_cmat(N_t, U, rng));
  return hbf;
}

RadarGeometry small_geometry(int M_t, int K) {
  ScenarioConfig cfg = make_preset("desk");
  cfg.M_t = M_t;
  cfg.K = K;
  cfg.set_uniform_power(1.0);
  cfg.set_uniform_chi(1.0);
  cfg.set_uniform_rho(1, 1, 1, 1);
  return RadarGeometry::from_config(cfg);
}

}  // namespace

TEST_CASE("sinr and rate of a scalar link") {
  const CMat H = CMat::Constant(1, 1, 2.0);
  const CMat b = CMat::Constant(1, 1, 1.0);
  const CVec w = CVec::Constant(1, 1.0);
  CHECK(sinr(H, b, w, 1.0, 0) == doctest::Approx(4.0));
  CHECK(rate(H, b, w, 1.0, 0) == doctest::Approx(std::log2(5.0)));
  CHECK(rate(H, b, w, 1.0, 0) == doctest::Approx(2.3219).epsilon(1e-4));
}

TEST_CASE("zero combiner gives zero sinr and unit mse") {
  std::mt19937_64 rng(1);
  const CMat H = oracle::random_cmat(2, 4, rng);
  const CMat B = oracle::random_cmat(4, 2, rng);
  const CVec w = CVec::Zero(2);
  CHECK(sinr(H, B, w, 1.0, 0) == 0.0);
  CHECK(rate(H, B, w, 1.0, 0) == 0.0);
  CHECK(mse(H, B, w, 1.0, 1) == doctest::Approx(1.0));
}

TEST_CASE("perfect equalization gives zero mse") {
  const CMat H = CMat::Identity(1, 1);
  const CMat b = CMat::Constant(1, 1, cdouble(0.0, 2.0));
  const CVec w = CVec::Constant(1, cdouble(0.0, 0.5));  // w^H H b = conj(0.5j) * 2j = 1
  CHECK(mse(H, b, w, 0.0, 0) == doctest::Approx(0.0));
}

TEST_CASE("sinr and mse match a term-by-term expansion") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const CMat H = oracle::random_cmat(2, 4, rng);
    const CMat B = oracle::random_cmat(4, 2, rng);
    const CVec w = oracle::random_cmat(2, 1, rng);
    const double s2 = 0.3;
    for (int u = 0; u < 2; ++u) {
      double sig = 0.0, intf = 0.0, err = 0.0;
      cdouble desired{0.0, 0.0};
      for (int i = 0; i < 2; ++i) {
        cdouble z{0.0, 0.0};
        for (int r = 0; r < 2; ++r)
          for (int t = 0; t < 4; ++t) z += std::conj(w(r)) * H(r, t) * B(t, i);
        if (i == u) {
          sig = std::norm(z);
          desired = z;
        } else {
          intf += std::norm(z);
        }
      }
      const double noise = s2 * (std::norm(w(0)) + std::norm(w(1)));
      err = std::norm(desired - 1.0) + intf + noise;
      CHECK(sinr(H, B, w, s2, u) == doctest::Approx(sig / (intf + noise)).epsilon(1e-12));
      CHECK(mse(H, B, w, s2, u) == doctest::Approx(err).epsilon(1e-12));
    }
  }
}

TEST_CASE("mmse combiner in the scalar case") {
  const cdouble b{0.6, -0.8};
  const CMat H = CMat::Identity(1, 1);
  const CMat B = CMat::Constant(1, 1, b);
  const CVec w = mmse_combiner(H, B, 0.5, 0);
  CHECK(std::abs(w(0) - b / (std::norm(b) + 0.5)) < 1e-14);
}

TEST_CASE("mmse combiner minimizes mse under perturbation") {
  std::mt19937_64 rng(11);
  const CMat H = oracle::random_cmat(2, 4, rng);
  const CMat B = oracle::random_cmat(4, 3, rng);
  const CVec w = mmse_combiner(H, B, 0.7, 1);
  const double base = mse(H, B, w, 0.7, 1);
  for (int i = 0; i < 100; ++i) {
    const CVec delta = oracle::random_cmat(2, 1, rng, 1e-3);
    CHECK(mse(H, B, w + delta, 0.7, 1) > base);
  }
}

TEST_CASE("singular receive covariance is reported") {
  const CMat H = CMat::Zero(2, 2);
  const CMat B = CMat::Identity(2, 1);
  CHECK_THROWS_AS(mmse_combiner(H, B, 0.0, 0), SingularSystem);
}

TEST_CASE("rate_wmmse substitutions") {
  CHECK(rate_wmmse(1.0, 1.0) == doctest::Approx(0.0));
  CHECK(rate_wmmse(2.0, 0.5) == doctest::Approx(1.0));
}

TEST_CASE("rate equals its weighted-mse form at the mmse point") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const int M_r = 1 + trial % 3, U = 1 + trial % 4, N_t = U + trial % 2, M_t = N_t + 2;
    HybridBeamformer hbf = random_hbf(M_t, N_t, U, 1, rng);
    const CMat H = oracle::random_cmat(M_r, M_t, rng);
    const double s2 = 0.1 + 0.2 * (trial % 5);
    for (int u = 0; u < U; ++u) {
      const CVec w = mmse_combiner(H, hbf, s2, u, 0);
      const double e = mse(H, hbf, w, s2, u, 0);
      CHECK(std::abs(rate_wmmse(1.0 / e, e) - rate(H, hbf, w, s2, u, 0)) < 1e-9);
    }
  }
}

TEST_CASE("qos radius substitutions") {
  CHECK(qos_bound_xi(1.0, CVec::Zero(2), 1.0, 1.0) == doctest::Approx(0.0));
  const CVec w = CVec::Constant(1, 0.5);  // sigma^2 w^H w = 0.25 with sigma^2 = 1
  CHECK(qos_bound_xi(2.0, w, 1.0, 0.5) == doctest::Approx(0.5));
  CHECK_THROWS_AS(qos_bound_xi_checked(1.0, CVec::Zero(1), 1.0, 2.0, 3, 1), InfeasibleQos);
  try {
    qos_bound_xi_checked(1.0, CVec::Zero(1), 1.0, 2.0, 3, 1);
  } catch (const InfeasibleQos& e) {
    CHECK(e.subcarrier() == 3);
    CHECK(e.user() == 1);
  }
}

TEST_CASE("qos ball membership agrees with the achieved rate") {
  // With MMSE w and omega = 1/e, G = B^H y lies in the ball iff rate >= chi.
  std::mt19937_64 rng(5);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const CMat H = oracle::random_cmat(2, 4, rng);
    const CMat B = oracle::random_cmat(4, 2, rng);
    const double s2 = 0.5;
    const CVec w = mmse_combiner(H, B, s2, 0);
    const double e = mse(H, B, w, s2, 0);
    const double r = rate(H, B, w, s2, 0);
    const double chi = std::uniform_real_distribution<double>(0.0, 3.0)(rng);
    const double xi = qos_bound_xi(1.0 / e, w, s2, chi);
    const CVec G = (w.adjoint() * H * B).transpose();
    double ball = std::norm(G(0) - 1.0) + std::norm(G(1));
    if (std::abs(r - chi) < 1e-9) continue;
    CHECK(((ball <= xi) == (r >= chi)));
    ++checked;
  }
  CHECK(checked > 150);
}

TEST_CASE("transmit spectrum values") {
  HybridBeamformer hbf;
  hbf.F_RF = CMat::Ones(1, 1);
  hbf.F = {CMat::Ones(1, 1)};
  const CVec a = CVec::Ones(1);
  CHECK(transmit_spectrum(hbf, 0, a, 50e-9) == doctest::Approx(50e-9 * 50e-9));
  hbf.F = {CMat::Zero(1, 1)};
  CHECK(transmit_spectrum(hbf, 0, a) == 0.0);

  std::mt19937_64 rng(3);
  HybridBeamformer r = random_hbf(6, 3, 2, 1, rng);
  const CVec s = steering_vector(10e9, 17.0, 6, 0.015);
  double expect = 0.0;
  const CMat b = r.F_RF * r.F[0];
  for (int u = 0; u < 2; ++u) expect += std::norm(s.dot(b.col(u)));
  CHECK(transmit_spectrum(r, 0, s) == doctest::Approx(expect).epsilon(1e-12));
  // Quadratic homogeneity in F_k.
  HybridBeamformer scaled = r;
  scaled.F[0] *= 3.0;
  CHECK(transmit_spectrum(scaled, 0, s) == doctest::Approx(9.0 * expect).epsilon(1e-12));
}

TEST_CASE("lobe ratios match a naive double loop") {
  std::mt19937_64 rng(17);
  const RadarGeometry geom = small_geometry(6, 3);
  const HybridBeamformer hbf = random_hbf(6, 3, 2, 3, rng);
  double ais = 0.0, aps = 0.0;
  for (int k = 0; k < 3; ++k) {
    double side_sum = 0.0, side_max = 0.0, main_min = 1e300, main_sum = 0.0;
    for (double th : make_preset("desk").grid.theta_side) {
      const double v = transmit_spectrum(hbf, k, steering_vector(geom.frequencies[k], th, 6, make_preset("desk").d));
      side_sum += v;
      side_max = std::max(side_max, v);
    }
    for (double th : make_preset("desk").grid.theta_main) {
      const double v = transmit_spectrum(hbf, k, steering_vector(geom.frequencies[k], th, 6, make_preset("desk").d));
      main_min = std::min(main_min, v);
      main_sum += v;
    }
    ais += side_sum / main_min;
    aps += side_max / main_sum;
  }
  CHECK(aismmr(hbf, geom) == doctest::Approx(ais / 3).epsilon(1e-10));
  CHECK(apsimr(hbf, geom) == doctest::Approx(aps / 3).epsilon(1e-10));
  CHECK(objective(hbf, geom, Task::ScanDetect) == aismmr(hbf, geom));
  CHECK(objective(hbf, geom, Task::TargetTrack) == apsimr(hbf, geom));

  // Per-subcarrier scaling leaves both ratios unchanged.
  HybridBeamformer scaled = hbf;
  scaled.F[1] *= 4.0;
  CHECK(aismmr(scaled, geom) == doctest::Approx(aismmr(hbf, geom)).epsilon(1e-12));
  CHECK(apsimr(scaled, geom) == doctest::Approx(apsimr(hbf, geom)).epsilon(1e-12));
}

TEST_CASE("constant spectrum collapses the ratios") {
  // M_t = 1: every steering vector is [1], so the spectrum is flat.
  ScenarioConfig cfg = make_preset("desk");
  cfg.M_t = 1;
  cfg.N_t = 1;
  cfg.U = 1;
  cfg.K = 1;
  cfg.set_uniform_power(1.0);
  cfg.set_uniform_chi(1.0);
  cfg.set_uniform_rho(1, 1, 1, 1);
  const RadarGeometry geom = RadarGeometry::from_config(cfg);
  HybridBeamformer hbf;
  hbf.F_RF = CMat::Ones(1, 1);
  hbf.F = {CMat::Constant(1, 1, 0.7)};
  CHECK(aismmr(hbf, geom) == doctest::Approx(static_cast<double>(cfg.grid.theta_side.size())));
  CHECK(apsimr(hbf, geom) == doctest::Approx(1.0 / static_cast<double>(cfg.grid.theta_main.size())));
}

TEST_CASE("zero mainlobe power is a degenerate beampattern") {
  const RadarGeometry geom = small_geometry(4, 1);
  HybridBeamformer hbf;
  hbf.F_RF = CMat::Ones(4, 2);
  hbf.F = {CMat::Zero(2, 2)};
  CHECK_THROWS_AS(aismmr(hbf, geom), DegenerateSubproblem);
  CHECK_THROWS_AS(apsimr(hbf, geom), DegenerateSubproblem);
}

TEST_CASE("beampattern grid keeps the symbol-duration factor") {
  std::mt19937_64 rng(21);
  const RadarGeometry geom = small_geometry(6, 2);
  const HybridBeamformer hbf = random_hbf(6, 3, 2, 2, rng);
  const BeampatternGrid g = beampattern(hbf, geom, 2.0);
  CHECK(g.values.rows() == 2);
  CHECK(g.values.cols() == 361);
  CHECK((g.values.array() >= 0.0).all());
  const CVec a = geom.A_full[1].col(100);
  CHECK(g.values(1, 100) == doctest::Approx(transmit_spectrum(hbf, 1, a, 2.0)).epsilon(1e-12));
}
