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

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "taskhbf/subsolvers.hpp"

namespace taskhbf {

CadmmState CadmmState::zeros(int K, int U, int M_t, int S, int M) {
  CadmmState s;
  s.K = K;
  s.U = U;
  s.M_t = M_t;
  s.S = S;
  s.M = M;
  const auto n = static_cast<std::size_t>(K);
  s.Y.assign(n, CMat::Zero(M_t, U));
  s.G.assign(n, CMat::Zero(U, U));
  s.h.assign(n, CMat::Zero(U, S));
  s.g.assign(n, CMat::Zero(U, M));
  s.eta.assign(n, 1.0);
  s.eps.assign(n, 1.0);
  s.varsigma.assign(n, CMat::Zero(M_t, U));
  s.lambda.assign(n, CMat::Zero(U, U));
  s.beta.assign(n, CMat::Zero(U, S));
  s.nu.assign(n, CMat::Zero(U, M));
  s.prev_r.assign(n, CVec());
  s.prev_t.assign(n, CVec());
  return s;
}

SecularSystem assemble_secular(const YSubproblem& p) {
  const auto M_t = p.M.rows();
  const double r1 = 0.5 * p.rho[0];
  const double r2 = 0.5 * p.rho[1];
  const double r3 = 0.5 * p.rho[2];
  const double r4 = 0.5 * p.rho[3];

  SecularSystem sys;
  sys.Xi = CMat::Identity(M_t, M_t) * r1;
  sys.Xi.noalias() += r2 * (p.Bw * p.Bw.adjoint());
  sys.Xi.noalias() += r3 * (p.A_side * p.A_side.adjoint());
  sys.Xi.noalias() += r4 * (p.A_main * p.A_main.adjoint());

  sys.Psi = r1 * p.M;
  sys.Psi.noalias() += r2 * (p.Bw * p.Glam);
  sys.Psi.noalias() += r3 * (p.A_side * p.Q_side.adjoint());
  sys.Psi.noalias() += r4 * (p.A_main * p.Q_main.adjoint());
  return sys;
}

double y_objective(const YSubproblem& p, const CMat& Y) {
  return 0.5 * p.rho[0] * (Y - p.M).squaredNorm() +
         0.5 * p.rho[1] * (p.Glam - p.Bw.adjoint() * Y).squaredNorm() +
         0.5 * p.rho[2] * (p.Q_side - Y.adjoint() * p.A_side).squaredNorm() +
         0.5 * p.rho[3] * (p.Q_main - Y.adjoint() * p.A_main).squaredNorm();
}

YSolution solve_secular(const SecularSystem& system, double P, const Tolerances& tol) {
  if (!(P > 0.0)) throw ContractViolation("power budget must be positive");
  if (!system.Xi.allFinite() || !system.Psi.allFinite()) throw ContractViolation("non-finite Y subproblem data");

  const CMat Xi = 0.5 * (system.Xi + system.Xi.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> eig(Xi);
  if (eig.info() != Eigen::Success) throw ConvergenceFailure("eigendecomposition of Xi failed");

  const RVec& sigma = eig.eigenvalues();  // ascending
  const CMat& D = eig.eigenvectors();
  const CMat Z = D.adjoint() * system.Psi;
  const RVec c = Z.rowwise().squaredNorm();
  const double c_total = c.sum();
  if (!(c_total > 0.0)) throw DegenerateSubproblem("Y update: Psi is zero, power sphere is unreachable");

  const auto n = sigma.size();
  RVec gap(n);
  for (Eigen::Index m = 0; m < n; ++m) gap(m) = sigma(m) - sigma(0);

  // Power of Y(mu) with s = mu + sigma_min > 0.
  auto power = [&](double s) {
    double acc = 0.0;
    for (Eigen::Index m = 0; m < n; ++m) acc += c(m) / ((s + gap(m)) * (s + gap(m)));
    return acc;
  };
  auto power_slope = [&](double s) {
    double acc = 0.0;
    for (Eigen::Index m = 0; m < n; ++m) {
      const double t = s + gap(m);
      acc += -2.0 * c(m) / (t * t * t);
    }
    return acc;
  };
  auto assemble = [&](double s) {
    RVec scale(n);
    for (Eigen::Index m = 0; m < n; ++m) scale(m) = 1.0 / (s + gap(m));
    return CMat(D * (scale.asDiagonal() * Z));
  };

  YSolution out;
  const double s_floor = 1e-14 * (std::abs(sigma(n - 1)) + 1.0);
  if (power(s_floor) <= P) {
    // Hard case: Psi has (numerically) no component on the bottom eigenspace.
    // Sit at mu = -sigma_min and spend the remaining power on that eigenvector.
    out.Y = assemble(s_floor);
    const double missing = P - out.Y.squaredNorm();
    Eigen::RowVectorXcd x = Z.row(0);
    if (x.norm() > 0.0) {
      x /= x.norm();
    } else {
      x = Eigen::RowVectorXcd::Zero(Z.cols());
      x(0) = 1.0;
    }
    out.Y += std::sqrt(std::max(missing, 0.0)) * (D.col(0) * x);
    out.mu = s_floor - sigma(0);
    out.hard_case = true;
    return out;
  }

  // p(s) <= c_total / s^2, so s = sqrt(c_total / P) already satisfies p <= P.
  double lo = s_floor;
  double hi = std::sqrt(c_total / P);
  for (int e = 0; power(hi) > P; ++e) {
    if (e >= tol.bracket_expansions) throw ConvergenceFailure("Y update: could not bracket the secular root");
    hi *= 2.0;
  }
  if (!(power(lo) > P && power(hi) <= P)) throw ConvergenceFailure("Y update: secular function has no sign change");

  // Newton on 1/sqrt(p(s)) - 1/sqrt(P), which is close to linear in s,
  // safeguarded by the bracket.
  const double target = 1.0 / std::sqrt(P);
  double s = hi;
  const int max_steps = tol.newton_max + tol.bisection_max;
  int step = 0;
  for (; step < max_steps; ++step) {
    const double p = power(s);
    const double residual = p - P;
    if (std::abs(residual) <= tol.root * P) break;
    if (residual > 0.0) {
      lo = s;
    } else {
      hi = s;
    }
    const double phi = 1.0 / std::sqrt(p) - target;
    const double dphi = -0.5 * power_slope(s) / (p * std::sqrt(p));
    double next = s - phi / dphi;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo <= std::numeric_limits<double>::epsilon() * hi) {
      s = next;
      break;
    }
    s = next;
  }
  if (step >= max_steps) throw ConvergenceFailure("Y update: secular iteration did not converge");

  out.Y = assemble(s);
  out.mu = s - sigma(0);
  const double achieved = out.Y.squaredNorm();
  if (std::abs(achieved - P) > tol.power_rel * P) {
    throw ConvergenceFailure("Y update: power constraint missed (" + std::to_string(achieved) + " vs " +
                             std::to_string(P) + ")");
  }
  return out;
}

YSolution solve_Y(const YSubproblem& problem, const Tolerances& tol) {
  return solve_secular(assemble_secular(problem), problem.P, tol);
}

}  // namespace taskhbf
