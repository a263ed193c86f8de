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

#include <array>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "taskhbf/channel.hpp"
#include "taskhbf/config.hpp"
#include "taskhbf/geometry.hpp"
#include "taskhbf/metrics.hpp"
#include "taskhbf/subsolvers.hpp"

namespace taskhbf {

struct IterationRecord {
  int iteration = 0;               // 1-based
  double objective = 0.0;          // AISMMR or APSIMR evaluated on Y
  std::array<double, 4> residual{};  // Y-b, G-BY, h-YA_S, g-YA_M, averaged over k
  double min_rate = 0.0;
  double mean_rate = 0.0;
  double wall_seconds = 0.0;
};

enum class Termination { Converged, MaxIterations, Infeasible, NumericalFailure };

std::string to_string(Termination t);

struct RunTrace {
  std::vector<IterationRecord> records;
  Termination termination = Termination::MaxIterations;
  std::string message;
  int failed_iteration = -1;
  int failed_k = -1;
  int failed_u = -1;
  double final_objective = 0.0;  // evaluated on the returned (F_RF, F_k)
};

struct RunResult {
  HybridBeamformer hbf;
  CombinerSet combiners;
  RunTrace trace;
  RMat rates;  // K x U, achieved with MMSE combiners on the returned hbf
};

struct RunOptions {
  // Invoked once per iteration after the record is appended.
  std::function<void(const IterationRecord&)> on_iteration;
  // Invoked after every CCD element update (instrumentation).
  CcdObserver ccd_observer;
  // Iterations with xi < 0 tolerated for one (k, u) before reporting infeasibility.
  int infeasible_grace = 10;
};

// Random-phase F_RF and Gaussian F_k scaled to ||F_RF F_k||^2 = P_k.
HybridBeamformer initialize_beamformer(const ScenarioConfig& cfg, std::mt19937_64& rng);

// Rescales each F_k so that ||F_RF F_k||_F^2 = P_k.
void normalize_power(HybridBeamformer& hbf, const std::vector<double>& P_k);

// Averaged Frobenius norms of the four consensus gaps.
std::array<double, 4> residuals(const CadmmState& state, const HybridBeamformer& hbf,
                                const CombinerSet& combiners, const ChannelSet& channels,
                                const RadarGeometry& geom);

// Columns H_{k,u}^H w_{k,u}.
CMat combined_channels(const ChannelSet& channels, const CombinerSet& combiners, int k);

// Task-dispatched objective (AISMMR for scan/detect, APSIMR for tracking).
double task_objective(const HybridBeamformer& hbf, const RadarGeometry& geom, Task task);

// Runs the consensus-ADMM iterations for cfg.task.
RunResult run(const ScenarioConfig& cfg, const ChannelSet& channels, const RunOptions& options = {});

// ----- Reference designs.

// Radar-only design: same iterations with the rate constraint removed.
RunResult run_radar_only(const ScenarioConfig& cfg, const ChannelSet& channels, const RunOptions& options = {});

// Random-phase analog precoder with least-squares digital precoders fitted to
// the per-user dominant channel eigenbeams, normalized to the power budget.
HybridBeamformer random_phase_beamformer(const ScenarioConfig& cfg, const ChannelSet& channels,
                                         std::mt19937_64& rng);

}  // namespace taskhbf
