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

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "taskhbf/cadmm.hpp"

using namespace taskhbf;

namespace {

CMat gaussian(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
  CMat m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = cdouble(nd(rng), nd(rng));
  return m;
}

CMat phases(int rows, int cols, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
  CMat m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = std::polar(1.0, u(rng));
  return m;
}

void BM_SolveY(benchmark::State& state) {
  const int M_t = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  YSubproblem p;
  p.rho = {20, 20, 1, 1};
  p.M = gaussian(M_t, 4, rng);
  p.Bw = gaussian(M_t, 4, rng);
  p.Glam = gaussian(4, 4, rng);
  p.A_side = phases(M_t, 310, rng);
  p.Q_side = gaussian(4, 310, rng);
  p.A_main = phases(M_t, 41, rng);
  p.Q_main = gaussian(4, 41, rng);
  p.P = 1.0;
  const Tolerances tol;
  for (auto _ : state) benchmark::DoNotOptimize(solve_Y(p, tol));
}
BENCHMARK(BM_SolveY)->Arg(16)->Arg(32);

void BM_PeakSidelobe(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const CMat h = gaussian(4, static_cast<int>(state.range(0)), rng);
  const Tolerances tol;
  for (auto _ : state) benchmark::DoNotOptimize(solve_h_eta_tt(h, 1.0, tol));
}
BENCHMARK(BM_PeakSidelobe)->Arg(310);

void BM_MinMainlobe(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const CMat g = gaussian(4, static_cast<int>(state.range(0)), rng);
  const Tolerances tol;
  for (auto _ : state) benchmark::DoNotOptimize(solve_g_eps_sd(g, 1.0, tol));
}
BENCHMARK(BM_MinMainlobe)->Arg(41);

void BM_AnalogCcd(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  std::mt19937_64 rng(4);
  std::vector<CMat> F, V;
  for (int k = 0; k < K; ++k) {
    F.push_back(gaussian(4, 4, rng));
    V.push_back(gaussian(32, 4, rng));
  }
  const CMat init = phases(32, 4, rng);
  for (auto _ : state) benchmark::DoNotOptimize(solve_FRF_ccd(init, F, V, 1));
}
BENCHMARK(BM_AnalogCcd)->Arg(4)->Arg(32);

void BM_DeskIteration(benchmark::State& state) {
  ScenarioConfig cfg = make_preset("desk");
  cfg.task = state.range(0) == 0 ? Task::ScanDetect : Task::TargetTrack;
  cfg.max_iter = 10;
  const ChannelSet ch = generate_channel(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(run(cfg, ch));
  state.SetItemsProcessed(state.iterations() * cfg.max_iter);
}
BENCHMARK(BM_DeskIteration)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
