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

#include <cmath>

#include "oracles.hpp"
#include "taskhbf/cadmm.hpp"
#include "taskhbf/geometry.hpp"

using namespace taskhbf;

namespace {

// Single-carrier, single-user case small enough to run to completion in a test.
ScenarioConfig small_config(Task task) {
  ScenarioConfig cfg = make_preset("desk");
  cfg.K = 1;
  cfg.U = 1;
  cfg.M_t = 4;
  cfg.N_t = 2;
  cfg.M_r = 2;
  cfg.task = task;
  cfg.max_iter = 500;
  cfg.set_uniform_power(1.0);
  cfg.set_uniform_chi(0.5);
  cfg.set_uniform_rho(20, 20, 1, 1);
  cfg.validate();
  return cfg;
}

// Captured once from a reference build of the small scan/detect run.
constexpr std::size_t kPinnedIterations = 187;
constexpr double kPinnedObjective = 27.921025383743494;
constexpr double kPinnedMinRate = 0.99272204492609373;

double power(const HybridBeamformer& hbf, int k) { return hbf.effective(k).squaredNorm(); }

}  // namespace

TEST_CASE("zero iterations returns the initialization") {
  ScenarioConfig cfg = small_config(Task::ScanDetect);
  cfg.max_iter = 0;
  const ChannelSet ch = generate_channel(cfg);
  const RunResult r = run(cfg, ch);
  CHECK(r.trace.records.empty());
  CHECK(r.trace.termination == Termination::MaxIterations);
  std::mt19937_64 rng(cfg.seed);
  HybridBeamformer init = initialize_beamformer(cfg, rng);
  CHECK((r.hbf.F_RF - init.F_RF).norm() < 1e-15);
  CHECK((r.hbf.F[0] - init.F[0]).norm() < 1e-12);
}

TEST_CASE("initialization is unit modulus and on budget") {
  ScenarioConfig cfg = make_preset("desk");
  std::mt19937_64 rng(3);
  const HybridBeamformer hbf = initialize_beamformer(cfg, rng);
  CHECK(hbf.modulus_error() <= 1e-12);
  for (int k = 0; k < cfg.K; ++k) CHECK(power(hbf, k) == doctest::Approx(cfg.P_k[k]).epsilon(1e-12));
}

TEST_CASE("residuals vanish on consistent primals and scale with a perturbation") {
  ScenarioConfig cfg = make_preset("desk");
  const ChannelSet ch = generate_channel(cfg);
  const RadarGeometry geom = RadarGeometry::from_config(cfg);
  std::mt19937_64 rng(5);
  const HybridBeamformer hbf = initialize_beamformer(cfg, rng);
  CombinerSet comb(cfg.K, cfg.U, cfg.M_r);
  refresh_combiners(ch, hbf, cfg.sigma_n2, comb);

  CadmmState st = CadmmState::zeros(cfg.K, cfg.U, cfg.M_t, geom.sidelobe_points(), geom.mainlobe_points());
  for (int k = 0; k < cfg.K; ++k) {
    const CMat Y = hbf.effective(k);
    st.Y[k] = Y;
    st.G[k] = combined_channels(ch, comb, k).adjoint() * Y;
    st.h[k] = Y.adjoint() * geom.A_side[k];
    st.g[k] = Y.adjoint() * geom.A_main[k];
  }
  for (double r : residuals(st, hbf, comb, ch, geom)) CHECK(r < 1e-12);

  const CMat delta = oracle::random_cmat(cfg.M_t, cfg.U, rng, 1e-3);
  st.Y[2] += delta;
  const auto res = residuals(st, hbf, comb, ch, geom);
  CHECK(res[0] == doctest::Approx(delta.norm() / cfg.K).epsilon(1e-9));

  // Direct loop over every scalar gap.
  double direct = 0.0;
  const CMat Bw = combined_channels(ch, comb, 2);
  for (int u = 0; u < cfg.U; ++u)
    for (int s = 0; s < geom.sidelobe_points(); ++s) {
      cdouble v = st.h[2](u, s);
      for (int m = 0; m < cfg.M_t; ++m) v -= std::conj(st.Y[2](m, u)) * geom.A_side[2](m, s);
      direct += std::norm(v);
    }
  CHECK(res[2] == doctest::Approx(std::sqrt(direct) / cfg.K).epsilon(1e-9));
  double g_direct = 0.0;
  for (int u = 0; u < cfg.U; ++u)
    for (int i = 0; i < cfg.U; ++i) {
      cdouble v = st.G[2](u, i);
      for (int m = 0; m < cfg.M_t; ++m) v -= std::conj(Bw(m, u)) * st.Y[2](m, i);
      g_direct += std::norm(v);
    }
  CHECK(res[1] == doctest::Approx(std::sqrt(g_direct) / cfg.K).epsilon(1e-9));
}

TEST_CASE("runs are deterministic") {
  const ScenarioConfig cfg = small_config(Task::TargetTrack);
  ScenarioConfig short_cfg = cfg;
  short_cfg.max_iter = 60;
  const ChannelSet ch = generate_channel(short_cfg);
  const RunResult a = run(short_cfg, ch);
  const RunResult b = run(short_cfg, ch);
  REQUIRE(a.trace.records.size() == b.trace.records.size());
  for (std::size_t i = 0; i < a.trace.records.size(); ++i) {
    CHECK(a.trace.records[i].objective == b.trace.records[i].objective);
    CHECK(a.trace.records[i].residual == b.trace.records[i].residual);
    CHECK(a.trace.records[i].min_rate == b.trace.records[i].min_rate);
  }
  CHECK(a.hbf.F_RF == b.hbf.F_RF);
  CHECK(a.hbf.F[0] == b.hbf.F[0]);
}

TEST_CASE("small scan-detect run converges to the pinned reference") {
  const ScenarioConfig cfg = small_config(Task::ScanDetect);
  const ChannelSet ch = generate_channel(cfg);
  const RunResult r = run(cfg, ch);
  CHECK(r.trace.termination == Termination::Converged);
  for (double res : r.trace.records.back().residual) CHECK(res < 1e-3);
  CHECK(r.rates.minCoeff() >= 0.5 - 0.05);
  CHECK(r.trace.records.size() == kPinnedIterations);
  CHECK(r.trace.final_objective == doctest::Approx(kPinnedObjective).epsilon(1e-6));
  CHECK(r.rates.minCoeff() == doctest::Approx(kPinnedMinRate).epsilon(1e-6));
}

TEST_CASE("returned beamformer is exactly unit modulus and on budget") {
  for (Task task : {Task::ScanDetect, Task::TargetTrack}) {
    ScenarioConfig cfg = make_preset("desk");
    cfg.task = task;
    cfg.max_iter = 25;
    const ChannelSet ch = generate_channel(cfg);
    const RunResult r = run(cfg, ch);
    CHECK(r.trace.records.size() <= 25);
    CHECK(r.hbf.modulus_error() <= 1e-12);
    for (int k = 0; k < cfg.K; ++k)
      CHECK(std::abs(power(r.hbf, k) - cfg.P_k[k]) <= 1e-9 * cfg.P_k[k]);
    for (const IterationRecord& rec : r.trace.records) CHECK(std::isfinite(rec.objective));
  }
}

TEST_CASE("unreachable rate threshold is reported as infeasible") {
  ScenarioConfig cfg = small_config(Task::ScanDetect);
  cfg.set_uniform_chi(40.0);
  const ChannelSet ch = generate_channel(cfg);
  const RunResult r = run(cfg, ch);
  CHECK(r.trace.termination == Termination::Infeasible);
  CHECK(r.trace.failed_k == 0);
  CHECK(r.trace.failed_u == 0);
  CHECK(r.trace.failed_iteration == 11);
  CHECK(r.hbf.modulus_error() <= 1e-12);
}

TEST_CASE("dropping the rate constraint cannot hurt the radar objective") {
  const ScenarioConfig cfg = small_config(Task::ScanDetect);
  const ChannelSet ch = generate_channel(cfg);
  const RunResult constrained = run(cfg, ch);
  const RunResult radar = run_radar_only(cfg, ch);
  CHECK(radar.trace.final_objective <= constrained.trace.final_objective * (1 + 1e-6));
}

TEST_CASE("random-phase baseline respects the hardware constraints") {
  const ScenarioConfig cfg = make_preset("desk");
  const ChannelSet ch = generate_channel(cfg);
  std::mt19937_64 rng(9);
  const HybridBeamformer hbf = random_phase_beamformer(cfg, ch, rng);
  CHECK(hbf.modulus_error() <= 1e-12);
  for (int k = 0; k < cfg.K; ++k) CHECK(power(hbf, k) == doctest::Approx(cfg.P_k[k]).epsilon(1e-12));
}
