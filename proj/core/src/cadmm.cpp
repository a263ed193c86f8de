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

#include "taskhbf/cadmm.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace taskhbf {

std::string to_string(Termination t) {
  switch (t) {
    case Termination::Converged: return "converged";
    case Termination::MaxIterations: return "max_iter";
    case Termination::Infeasible: return "infeasible";
    case Termination::NumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

HybridBeamformer initialize_beamformer(const ScenarioConfig& cfg, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  HybridBeamformer hbf;
  hbf.F_RF.resize(cfg.M_t, cfg.N_t);
  for (int i = 0; i < cfg.M_t; ++i)
    for (int j = 0; j < cfg.N_t; ++j) hbf.F_RF(i, j) = std::polar(1.0, 2.0 * kPi - phase(rng));
  hbf.F.resize(static_cast<std::size_t>(cfg.K));
  for (CMat& F : hbf.F) {
    F.resize(cfg.N_t, cfg.U);
    for (int i = 0; i < cfg.N_t; ++i)
      for (int u = 0; u < cfg.U; ++u) F(i, u) = cdouble(normal(rng), normal(rng));
  }
  normalize_power(hbf, cfg.P_k);
  return hbf;
}

void normalize_power(HybridBeamformer& hbf, const std::vector<double>& P_k) {
  if (P_k.size() != hbf.F.size()) throw ContractViolation("normalize_power: budget length differs from K");
  for (std::size_t k = 0; k < hbf.F.size(); ++k) {
    const double p = (hbf.F_RF * hbf.F[k]).squaredNorm();
    if (!(p > 0.0)) throw DegenerateSubproblem("normalize_power: zero effective precoder");
    hbf.F[k] *= std::sqrt(P_k[k] / p);
  }
}

CMat combined_channels(const ChannelSet& channels, const CombinerSet& combiners, int k) {
  const int M_t = static_cast<int>(channels.at(k, 0).cols());
  CMat Bw(M_t, channels.U);
  for (int u = 0; u < channels.U; ++u) Bw.col(u) = channels.at(k, u).adjoint() * combiners.w_at(k, u);
  return Bw;
}

std::array<double, 4> residuals(const CadmmState& state, const HybridBeamformer& hbf,
                                const CombinerSet& combiners, const ChannelSet& channels,
                                const RadarGeometry& geom) {
  std::array<double, 4> out{};
  const int K = state.K;
  for (int k = 0; k < K; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    const ConsensusGaps gaps = consensus_gaps(state, k, hbf.effective(k), combined_channels(channels, combiners, k),
                                              geom.A_side[kk], geom.A_main[kk]);
    out[0] += gaps.y_minus_b.norm();
    out[1] += gaps.G_minus_BY.norm();
    out[2] += gaps.h_minus_YA.norm();
    out[3] += gaps.g_minus_YA.norm();
  }
  for (double& r : out) r /= K;
  return out;
}

double task_objective(const HybridBeamformer& hbf, const RadarGeometry& geom, Task task) {
  return objective(hbf, geom, task);
}

namespace {

CMat unvec(const CVec& v, Eigen::Index rows, Eigen::Index cols) { return CMat(v.reshaped(rows, cols)); }
CVec vec(const CMat& m) { return CVec(m.reshaped()); }

// Refreshes combiners from the consensus copies Y_k (the beams the QoS ball
// constrains through G = B^H Y).
void refresh_from_Y(const ChannelSet& channels, const std::vector<CMat>& Y, double sigma_n2,
                    CombinerSet& combiners) {
  for (int k = 0; k < combiners.K; ++k)
    for (int u = 0; u < combiners.U; ++u) {
      const CMat& H = channels.at(k, u);
      const CMat& beams = Y[static_cast<std::size_t>(k)];
      CVec w = mmse_combiner(H, beams, sigma_n2, u);
      combiners.w_at(k, u) = w;
      combiners.omega_at(k, u) = 1.0 / mse(H, beams, w, sigma_n2, u);
    }
}

bool all_finite(const CadmmState& s, const HybridBeamformer& hbf) {
  if (!hbf.F_RF.allFinite()) return false;
  for (const CMat& F : hbf.F)
    if (!F.allFinite()) return false;
  for (std::size_t k = 0; k < s.Y.size(); ++k)
    if (!s.Y[k].allFinite() || !s.varsigma[k].allFinite() || !s.lambda[k].allFinite() || !s.beta[k].allFinite() ||
        !s.nu[k].allFinite())
      return false;
  return true;
}

struct Engine {
  const ScenarioConfig& cfg;
  const ChannelSet& channels;
  const RunOptions& options;
  RadarGeometry geom;
  HybridBeamformer hbf;
  CombinerSet combiners;
  CadmmState state;
  std::vector<int> negative_streak;  // (k, u) -> consecutive iterations with xi < 0

  Engine(const ScenarioConfig& c, const ChannelSet& ch, const RunOptions& o)
      : cfg(c), channels(ch), options(o), geom(RadarGeometry::from_config(c)) {}

  void initialize() {
    std::mt19937_64 rng(cfg.seed);
    hbf = initialize_beamformer(cfg, rng);
    combiners = CombinerSet(cfg.K, cfg.U, cfg.M_r);
    refresh_combiners(channels, hbf, cfg.sigma_n2, combiners);
    const int S = geom.sidelobe_points();
    const int M = geom.mainlobe_points();
    state = CadmmState::zeros(cfg.K, cfg.U, cfg.M_t, S, M);
    for (int k = 0; k < cfg.K; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      state.Y[kk] = hbf.effective(k);
      state.G[kk] = combined_channels(channels, combiners, k).adjoint() * state.Y[kk];
      state.h[kk] = state.Y[kk].adjoint() * geom.A_side[kk];
      state.g[kk] = state.Y[kk].adjoint() * geom.A_main[kk];
      state.eta[kk] = std::max(state.h[kk].colwise().squaredNorm().maxCoeff(), cfg.tol.zero);
      state.eps[kk] = std::max(state.g[kk].colwise().squaredNorm().minCoeff(), cfg.tol.zero);
    }
    negative_streak.assign(static_cast<std::size_t>(cfg.K * cfg.U), 0);
  }

  // Returns false (and fills the trace) when the QoS set stayed empty too long.
  bool qos_radii(RMat& xi, RunTrace& trace, int iteration) {
    xi.resize(cfg.K, cfg.U);
    for (int k = 0; k < cfg.K; ++k)
      for (int u = 0; u < cfg.U; ++u) {
        if (!cfg.qos_enabled) {
          xi(k, u) = std::numeric_limits<double>::infinity();
          continue;
        }
        const double x =
            qos_bound_xi(combiners.omega_at(k, u), combiners.w_at(k, u), cfg.sigma_n2, cfg.chi(k, u));
        int& streak = negative_streak[static_cast<std::size_t>(k * cfg.U + u)];
        if (x >= 0.0) {
          streak = 0;
          xi(k, u) = x;
          continue;
        }
        if (++streak > options.infeasible_grace) {
          trace.termination = Termination::Infeasible;
          trace.failed_iteration = iteration;
          trace.failed_k = k;
          trace.failed_u = u;
          trace.message = "rate threshold unreachable for subcarrier " + std::to_string(k) + ", user " +
                          std::to_string(u) + " (xi = " + std::to_string(x) + ")";
          return false;
        }
        xi(k, u) = 0.0;  // strongest pull toward the threshold while in the grace window
      }
    return true;
  }

  void update_subcarrier(int k, const RMat& xi, std::vector<CMat>& V) {
    const auto kk = static_cast<std::size_t>(k);
    const auto& rho = cfg.rho;
    const CMat Bw = combined_channels(channels, combiners, k);
    const CMat& A_S = geom.A_side[kk];
    const CMat& A_M = geom.A_main[kk];

    // (I) consensus copy on the power sphere.
    YSubproblem yp;
    yp.rho = {rho[0][kk], rho[1][kk], rho[2][kk], rho[3][kk]};
    yp.M = hbf.effective(k) - state.varsigma[kk];
    yp.Bw = Bw;
    yp.Glam = state.G[kk] + state.lambda[kk];
    yp.A_side = A_S;
    yp.Q_side = state.h[kk] + state.beta[kk];
    yp.A_main = A_M;
    yp.Q_main = state.g[kk] + state.nu[kk];
    yp.P = cfg.P_k[kk];
    const CMat& Y = state.Y[kk] = solve_Y(yp, cfg.tol).Y;

    // (II) per-user QoS projections.
    const CMat target = Bw.adjoint() * Y - state.lambda[kk];
    for (int u = 0; u < cfg.U; ++u) {
      if (std::isinf(xi(k, u))) {
        state.G[kk].row(u) = target.row(u);
        continue;
      }
      state.G[kk].row(u) = solve_G(target.row(u).transpose(), u, xi(k, u), cfg.tol).G.transpose();
    }

    // (III) radar auxiliaries.
    const CMat h_hat = Y.adjoint() * A_S - state.beta[kk];
    const CMat g_hat = Y.adjoint() * A_M - state.nu[kk];
    if (cfg.task == Task::ScanDetect) {
      const MinMainlobeSolution ms = solve_g_eps_sd(g_hat, rho[3][kk], cfg.tol);
      state.g[kk] = ms.g;
      state.eps[kk] = ms.eps;
      const CVec r_hat = vec(h_hat);
      CVec& r_bar = state.prev_r[kk];
      if (r_bar.size() != r_hat.size() || r_bar.norm() < cfg.tol.zero) r_bar = r_hat;
      const CVec r = solve_h_sd(r_hat, r_bar, rho[2][kk], cfg.tol.zero);
      state.h[kk] = unvec(r, h_hat.rows(), h_hat.cols());
      r_bar = r;
    } else {
      const PeakSidelobeSolution ps = solve_h_eta_tt(h_hat, rho[2][kk], cfg.tol);
      state.h[kk] = ps.h;
      state.eta[kk] = ps.eta;
      const CVec t_hat = vec(g_hat);
      CVec& t_bar = state.prev_t[kk];
      if (t_bar.size() != t_hat.size() || t_bar.norm() < cfg.tol.zero) t_bar = t_hat;
      const CVec t = solve_g_tt(t_hat, t_bar, rho[3][kk], cfg.tol.zero);
      state.g[kk] = unvec(t, g_hat.rows(), g_hat.cols());
      t_bar = t;
    }

    // (IV) digital precoder.
    V[kk] = Y + state.varsigma[kk];
    hbf.F[kk] = solve_Fk(V[kk], hbf.F_RF);
  }
};

}  // namespace

RunResult run(const ScenarioConfig& cfg, const ChannelSet& channels, const RunOptions& options) {
  cfg.validate();
  if (channels.K != cfg.K || channels.U != cfg.U) throw ContractViolation("run: channel set does not match config");

  Engine e(cfg, channels, options);
  e.initialize();
  RunTrace trace;
  const auto start = std::chrono::steady_clock::now();

  std::vector<CMat> V(static_cast<std::size_t>(cfg.K));
  RMat xi;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    try {
      // (0) combiners, weights and QoS radii.
      if (it > 1) refresh_from_Y(channels, e.state.Y, cfg.sigma_n2, e.combiners);
      if (!e.qos_radii(xi, trace, it)) break;

      // (I)-(IV) per subcarrier.
      for (int k = 0; k < cfg.K; ++k) e.update_subcarrier(k, xi, V);

      // (V) shared analog precoder.
      e.hbf.F_RF = solve_FRF_ccd(e.hbf.F_RF, e.hbf.F, V, cfg.ccd_max, options.ccd_observer);

      // (VI) dual ascent.
      for (int k = 0; k < cfg.K; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        const ConsensusGaps gaps = consensus_gaps(e.state, k, e.hbf.effective(k),
                                                  combined_channels(channels, e.combiners, k), e.geom.A_side[kk],
                                                  e.geom.A_main[kk]);
        update_duals(e.state, k, gaps);
      }
    } catch (const InfeasibleQos& ex) {
      trace.termination = Termination::Infeasible;
      trace.failed_iteration = it;
      trace.failed_k = ex.subcarrier();
      trace.failed_u = ex.user();
      trace.message = ex.what();
      break;
    } catch (const Error& ex) {
      trace.termination = Termination::NumericalFailure;
      trace.failed_iteration = it;
      trace.message = ex.what();
      break;
    }

    if (!all_finite(e.state, e.hbf)) {
      trace.termination = Termination::NumericalFailure;
      trace.failed_iteration = it;
      trace.message = "non-finite value at iteration " + std::to_string(it);
      break;
    }

    IterationRecord rec;
    rec.iteration = it;
    rec.residual = residuals(e.state, e.hbf, e.combiners, channels, e.geom);
    try {
      rec.objective = cfg.task == Task::ScanDetect ? aismmr(e.state.Y, e.geom) : apsimr(e.state.Y, e.geom);
    } catch (const DegenerateSubproblem&) {
      rec.objective = std::numeric_limits<double>::infinity();
    }
    double min_rate = std::numeric_limits<double>::infinity();
    double sum_rate = 0.0;
    for (int k = 0; k < cfg.K; ++k)
      for (int u = 0; u < cfg.U; ++u) {
        const CMat& H = channels.at(k, u);
        const CMat& Y = e.state.Y[static_cast<std::size_t>(k)];
        const double r = rate(H, Y, mmse_combiner(H, Y, cfg.sigma_n2, u), cfg.sigma_n2, u);
        min_rate = std::min(min_rate, r);
        sum_rate += r;
      }
    rec.min_rate = min_rate;
    rec.mean_rate = sum_rate / (cfg.K * cfg.U);
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    trace.records.push_back(rec);
    if (options.on_iteration) options.on_iteration(trace.records.back());

    bool converged = true;
    for (double r : rec.residual) converged = converged && r < cfg.tol.residual;
    if (converged) {
      trace.termination = Termination::Converged;
      break;
    }
  }

  RunResult out;
  out.hbf = std::move(e.hbf);
  if (trace.termination != Termination::NumericalFailure) normalize_power(out.hbf, cfg.P_k);
  out.combiners = CombinerSet(cfg.K, cfg.U, cfg.M_r);
  try {
    refresh_combiners(channels, out.hbf, cfg.sigma_n2, out.combiners);
    out.rates = achieved_rates(channels, out.hbf, out.combiners, cfg.sigma_n2);
    trace.final_objective = objective(out.hbf, e.geom, cfg.task);
  } catch (const Error& ex) {
    if (trace.termination != Termination::NumericalFailure) {
      trace.termination = Termination::NumericalFailure;
      trace.message = ex.what();
    }
    trace.final_objective = std::numeric_limits<double>::quiet_NaN();
  }
  out.trace = std::move(trace);
  return out;
}

}  // namespace taskhbf
