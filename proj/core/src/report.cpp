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

#include "taskhbf/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

#include <json.hpp>

namespace taskhbf {

namespace {

class PrecisionGuard {
 public:
  explicit PrecisionGuard(std::ostream& os) : os_(os), flags_(os.flags()), precision_(os.precision()) {
    os_ << std::setprecision(17);
  }
  ~PrecisionGuard() {
    os_.flags(flags_);
    os_.precision(precision_);
  }

 private:
  std::ostream& os_;
  std::ios::fmtflags flags_;
  std::streamsize precision_;
};

double finite_or_nan(double v) { return std::isfinite(v) ? v : std::nan(""); }

}  // namespace

void write_trace_csv(std::ostream& os, const RunTrace& trace) {
  PrecisionGuard guard(os);
  os << "iteration,objective,res1,res2,res3,res4,min_rate,mean_rate\n";
  for (const IterationRecord& r : trace.records) {
    os << r.iteration << ',' << r.objective;
    for (double v : r.residual) os << ',' << v;
    os << ',' << r.min_rate << ',' << r.mean_rate << '\n';
  }
}

void write_beampattern_csv(std::ostream& os, const BeampatternGrid& grid) {
  PrecisionGuard guard(os);
  os << "subcarrier_index,f_k_Hz,angle_deg,power_linear,power_dB_normalized\n";
  for (Eigen::Index k = 0; k < grid.values.rows(); ++k) {
    const double peak = grid.values.row(k).maxCoeff();
    for (Eigen::Index p = 0; p < grid.values.cols(); ++p) {
      const double v = grid.values(k, p);
      const double db = peak > 0.0 ? 10.0 * std::log10(std::max(v, 1e-300) / peak) : -300.0;
      os << k << ',' << grid.frequencies[static_cast<std::size_t>(k)] << ','
         << grid.angles_deg[static_cast<std::size_t>(p)] << ',' << v << ',' << db << '\n';
    }
  }
}

void write_rates_csv(std::ostream& os, const RMat& rates, const RMat& chi) {
  PrecisionGuard guard(os);
  os << "subcarrier_index,user_index,rate,chi,satisfied\n";
  for (Eigen::Index k = 0; k < rates.rows(); ++k)
    for (Eigen::Index u = 0; u < rates.cols(); ++u)
      os << k << ',' << u << ',' << rates(k, u) << ',' << chi(k, u) << ',' << (rates(k, u) >= chi(k, u) ? 1 : 0)
         << '\n';
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  PrecisionGuard guard(os);
  os << "chi,final_objective,min_rate,termination\n";
  for (const SweepRow& r : rows)
    os << r.chi << ',' << r.final_objective << ',' << r.min_rate << ',' << r.termination << '\n';
}

void write_baseline_csv(std::ostream& os, Task task, const std::vector<BaselineRow>& rows) {
  PrecisionGuard guard(os);
  os << "design,task,objective,min_rate\n";
  for (const BaselineRow& r : rows)
    os << r.design << ',' << to_string(task) << ',' << r.objective << ',' << r.min_rate << '\n';
}

std::string summary_json(const ScenarioConfig& cfg, const RunResult& result, int indent) {
  nlohmann::json j;
  const RunTrace& t = result.trace;
  j["termination"] = to_string(t.termination);
  if (!t.message.empty()) j["message"] = t.message;
  if (t.failed_iteration >= 0) j["failed_iteration"] = t.failed_iteration;
  if (t.failed_k >= 0) {
    j["failed_k"] = t.failed_k;
    j["failed_u"] = t.failed_u;
  }
  j["iterations"] = t.records.size();
  j["final_objective"] = finite_or_nan(t.final_objective);
  j["objective_name"] = cfg.task == Task::ScanDetect ? "AISMMR" : "APSIMR";
  if (!t.records.empty()) {
    const auto& last = t.records.back();
    j["final_residuals"] = std::vector<double>(last.residual.begin(), last.residual.end());
    j["wall_seconds"] = last.wall_seconds;
  }
  nlohmann::json rates = nlohmann::json::array();
  for (Eigen::Index k = 0; k < result.rates.rows(); ++k) {
    std::vector<double> row(static_cast<std::size_t>(result.rates.cols()));
    for (Eigen::Index u = 0; u < result.rates.cols(); ++u) row[static_cast<std::size_t>(u)] = result.rates(k, u);
    rates.push_back(row);
  }
  j["final_rates"] = rates;
  if (result.rates.size() > 0) j["min_rate"] = result.rates.minCoeff();
  j["modulus_error"] = result.hbf.F_RF.size() > 0 ? result.hbf.modulus_error() : 0.0;
  j["seed"] = cfg.seed;
  j["config"] = nlohmann::json::parse(config_to_json_text(cfg));
  return j.dump(indent);
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os << content;
  if (!os) throw Error("failed writing " + path.string());
}

}  // namespace taskhbf
