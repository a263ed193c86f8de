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

// CSV / JSON artifacts written by the command-line tool.

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "taskhbf/cadmm.hpp"
#include "taskhbf/config.hpp"
#include "taskhbf/metrics.hpp"

namespace taskhbf {

// iteration,objective,res1,res2,res3,res4,min_rate,mean_rate
void write_trace_csv(std::ostream& os, const RunTrace& trace);

// subcarrier_index,f_k_Hz,angle_deg,power_linear,power_dB_normalized
// dB values are normalized to a 0 dB peak per subcarrier.
void write_beampattern_csv(std::ostream& os, const BeampatternGrid& grid);

// subcarrier_index,user_index,rate,chi,satisfied
void write_rates_csv(std::ostream& os, const RMat& rates, const RMat& chi);

struct SweepRow {
  double chi = 0.0;
  double final_objective = 0.0;
  double min_rate = 0.0;
  std::string termination;
};

// chi,final_objective,min_rate,termination
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

struct BaselineRow {
  std::string design;
  double objective = 0.0;
  double min_rate = 0.0;
};

// design,task,objective,min_rate
void write_baseline_csv(std::ostream& os, Task task, const std::vector<BaselineRow>& rows);

// Termination, final objective, final rates, config echo and seed.
std::string summary_json(const ScenarioConfig& cfg, const RunResult& result, int indent = 2);

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace taskhbf
