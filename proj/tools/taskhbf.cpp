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

// taskhbf command-line front end.
//
//   taskhbf run      --preset desk --task tt --out out/
//   taskhbf sweep    --config cfg.json --chi 1,1.5,2 --out out/
//   taskhbf baseline --preset desk --task sd --out out/
//   taskhbf presets  [--dump DIR]
//
// Exit codes: 0 converged or iteration cap reached, 1 infeasible or numerical
// failure, 2 usage or configuration error.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "taskhbf/cadmm.hpp"
#include "taskhbf/report.hpp"

namespace fs = std::filesystem;
using namespace taskhbf;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRunFailed = 1;
constexpr int kExitUsage = 2;

struct CommonArgs {
  std::string config_path;
  std::string preset;
  std::string task;
  std::optional<std::uint64_t> seed;
  std::optional<int> max_iter;
  std::vector<std::string> overrides;
  std::string out = "out";
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  auto* cfg = cmd->add_option("--config", a.config_path, "Scenario JSON file")->check(CLI::ExistingFile);
  auto* pre = cmd->add_option("--preset", a.preset, "Built-in scenario name");
  cfg->excludes(pre);
  cmd->add_option("--task", a.task, "Radar task")->check(CLI::IsMember({"sd", "tt"}));
  cmd->add_option("--seed", a.seed, "Random seed for channel and initialization");
  cmd->add_option("--max-iter", a.max_iter, "Iteration cap")->check(CLI::NonNegativeNumber);
  cmd->add_option("--set", a.overrides, "Config override key=value (repeatable)");
  cmd->add_option("--out", a.out, "Output directory");
}

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ScenarioConfig resolve_config(const CommonArgs& a) {
  if (a.config_path.empty() && a.preset.empty()) throw UsageError("one of --config or --preset is required");
  ScenarioConfig cfg = a.config_path.empty() ? make_preset(a.preset) : load_config(a.config_path);
  for (const std::string& o : a.overrides) apply_override(cfg, o);
  if (!a.task.empty()) cfg.task = task_from_string(a.task);
  if (a.seed) cfg.seed = *a.seed;
  if (a.max_iter) cfg.max_iter = *a.max_iter;
  cfg.validate();
  return cfg;
}

template <typename Writer>
void write_file(const fs::path& path, Writer&& w) {
  std::ostringstream os;
  w(os);
  write_text_file(path, os.str());
}

bool failed(const RunResult& r) {
  return r.trace.termination == Termination::Infeasible || r.trace.termination == Termination::NumericalFailure;
}

double min_rate_of(const ScenarioConfig& cfg, const ChannelSet& ch, const HybridBeamformer& hbf) {
  CombinerSet comb(cfg.K, cfg.U, cfg.M_r);
  refresh_combiners(ch, hbf, cfg.sigma_n2, comb);
  return achieved_rates(ch, hbf, comb, cfg.sigma_n2).minCoeff();
}

void log_result(const RunResult& r) {
  std::cerr << to_string(r.trace.termination) << " after " << r.trace.records.size() << " iterations, objective "
            << r.trace.final_objective;
  if (!r.trace.message.empty()) std::cerr << " (" << r.trace.message << ")";
  std::cerr << "\n";
}

int cmd_run(const CommonArgs& a) {
  const ScenarioConfig cfg = resolve_config(a);
  const ChannelSet ch = generate_channel(cfg);
  const RunResult r = run(cfg, ch);
  const RadarGeometry geom = RadarGeometry::from_config(cfg);
  const fs::path out(a.out);
  write_file(out / "trace.csv", [&](std::ostream& os) { write_trace_csv(os, r.trace); });
  write_file(out / "beampattern.csv",
             [&](std::ostream& os) { write_beampattern_csv(os, beampattern(r.hbf, geom, cfg.delta_t())); });
  write_file(out / "rates.csv", [&](std::ostream& os) { write_rates_csv(os, r.rates, cfg.chi); });
  write_text_file(out / "summary.json", summary_json(cfg, r) + "\n");
  log_result(r);
  return failed(r) ? kExitRunFailed : kExitOk;
}

std::vector<double> parse_chi_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("--chi: not a number: '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError("--chi: empty threshold list");
  return out;
}

int cmd_sweep(const CommonArgs& a, const std::string& chi_text) {
  const std::vector<double> chis = parse_chi_list(chi_text);
  ScenarioConfig cfg = resolve_config(a);
  const ChannelSet ch = generate_channel(cfg);
  std::vector<SweepRow> rows;
  bool any_failed = false;
  for (double chi : chis) {
    cfg.set_uniform_chi(chi);
    const RunResult r = run(cfg, ch);
    std::cerr << "chi " << chi << ": ";
    log_result(r);
    any_failed = any_failed || failed(r);
    rows.push_back({chi, r.trace.final_objective, r.rates.size() ? r.rates.minCoeff() : 0.0,
                    to_string(r.trace.termination)});
  }
  write_file(fs::path(a.out) / "sweep.csv", [&](std::ostream& os) { write_sweep_csv(os, rows); });
  return any_failed ? kExitRunFailed : kExitOk;
}

int cmd_baseline(const CommonArgs& a) {
  const ScenarioConfig cfg = resolve_config(a);
  const ChannelSet ch = generate_channel(cfg);
  const RadarGeometry geom = RadarGeometry::from_config(cfg);

  const RunResult proposed = run(cfg, ch);
  const RunResult radar = run_radar_only(cfg, ch);
  std::mt19937_64 rng(cfg.seed + 1);
  const HybridBeamformer rnd = random_phase_beamformer(cfg, ch, rng);

  const std::vector<BaselineRow> rows = {
      {"proposed", proposed.trace.final_objective, proposed.rates.minCoeff()},
      {"radar_only", radar.trace.final_objective, radar.rates.minCoeff()},
      {"random_phase", objective(rnd, geom, cfg.task), min_rate_of(cfg, ch, rnd)},
  };
  write_file(fs::path(a.out) / "baseline.csv", [&](std::ostream& os) { write_baseline_csv(os, cfg.task, rows); });
  log_result(proposed);
  return failed(proposed) ? kExitRunFailed : kExitOk;
}

int cmd_presets(const std::string& dump_dir) {
  for (const std::string& name : preset_names()) {
    std::cout << name << "\n";
    if (!dump_dir.empty())
      write_text_file(fs::path(dump_dir) / (name + ".json"), config_to_json_text(make_preset(name)) + "\n");
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid transmit beamformer design for OFDM radar-communication"};
  app.require_subcommand(1);

  CommonArgs run_args, sweep_args, base_args;
  std::string chi_text, dump_dir;

  auto* run_cmd = app.add_subcommand("run", "Run the solver once and write trace, summary, beampattern and rates");
  add_common(run_cmd, run_args);
  auto* sweep_cmd = app.add_subcommand("sweep", "Run once per rate threshold on a shared channel");
  add_common(sweep_cmd, sweep_args);
  sweep_cmd->add_option("--chi", chi_text, "Comma-separated rate thresholds")->required();
  auto* base_cmd = app.add_subcommand("baseline", "Compare against radar-only and random-phase designs");
  add_common(base_cmd, base_args);
  auto* presets_cmd = app.add_subcommand("presets", "List built-in scenarios");
  presets_cmd->add_option("--dump", dump_dir, "Write each preset as JSON into this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run_cmd) return cmd_run(run_args);
    if (*sweep_cmd) return cmd_sweep(sweep_args, chi_text);
    if (*base_cmd) return cmd_baseline(base_args);
    if (*presets_cmd) return cmd_presets(dump_dir);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRunFailed;
  }
  return kExitUsage;
}
