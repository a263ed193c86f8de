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
#include <complex>

#include <Eigen/Cholesky>

#include "taskhbf/subsolvers.hpp"

namespace taskhbf {

CMat solve_Fk(const CMat& V, const CMat& F_RF) {
  if (V.rows() != F_RF.rows()) throw ContractViolation("solve_Fk: row mismatch between V and F_RF");
  const CMat gram = F_RF.adjoint() * F_RF;
  Eigen::LDLT<CMat> ldlt(gram);
  // Pivot ratio of D; rcond() can miss an exactly zero pivot.
  const RVec pivots = ldlt.vectorD().real().cwiseAbs();
  if (ldlt.info() != Eigen::Success || !(pivots.minCoeff() > 1e-13 * pivots.maxCoeff()))
    throw SingularSystem("solve_Fk: F_RF is rank deficient");
  return ldlt.solve(F_RF.adjoint() * V);
}

double analog_fit_objective(const CMat& F_RF, std::span<const CMat> F, std::span<const CMat> V) {
  if (F.size() != V.size()) throw ContractViolation("analog_fit_objective: F and V differ in length");
  double total = 0.0;
  for (std::size_t k = 0; k < F.size(); ++k) total += (V[k] - F_RF * F[k]).squaredNorm();
  return total;
}

cdouble ccd_psi(const CMat& F_RF, std::span<const CMat> F, std::span<const CMat> V, int i, int j) {
  cdouble psi{0.0, 0.0};
  for (std::size_t k = 0; k < F.size(); ++k) {
    // Row i of F_RF F_k with the (i, j) element removed.
    const CMat others = F_RF.row(i) * F[k] - F_RF(i, j) * F[k].row(j);
    const CMat diff = others - V[k].row(i);
    psi += (F[k].row(j) * diff.adjoint())(0, 0);
  }
  return psi;
}

cdouble ccd_element(cdouble psi, cdouble current) {
  if (psi == cdouble(0.0, 0.0)) return current;
  return std::polar(1.0, -(std::arg(psi) + kPi));
}

CMat solve_FRF_ccd(const CMat& F_RF_init, std::span<const CMat> F, std::span<const CMat> V, int ccd_max,
                   const CcdObserver& observer, double rel_tol) {
  if (F.size() != V.size()) throw ContractViolation("solve_FRF_ccd: F and V differ in length");
  CMat F_RF = F_RF_init;
  const Eigen::Index rows = F_RF.rows();
  const Eigen::Index cols = F_RF.cols();

  // Running residuals R_k = V_k - F_RF F_k keep each element update O(K U).
  std::vector<CMat> R(F.size());
  for (std::size_t k = 0; k < F.size(); ++k) R[k] = V[k] - F_RF * F[k];
  auto total = [&] {
    double s = 0.0;
    for (const CMat& r : R) s += r.squaredNorm();
    return s;
  };

  double before = total();
  for (int sweep = 0; sweep < ccd_max; ++sweep) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) {
        const cdouble old = F_RF(i, j);
        // With T the row without element j: psi = sum_k F_j (T F_k - V_k(i,:))^H
        //                                       = -sum_k F_j R_k(i,:)^H - conj(old) ||F_j||^2.
        cdouble psi{0.0, 0.0};
        for (std::size_t k = 0; k < F.size(); ++k) {
          psi -= R[k].row(i).dot(F[k].row(j));  // sum_u F_j(u) conj(R_i(u))
          psi -= std::conj(old) * F[k].row(j).squaredNorm();
        }
        const cdouble x = ccd_element(psi, old);
        F_RF(i, j) = x;
        const cdouble delta = x - old;
        if (delta != cdouble(0.0, 0.0))
          for (std::size_t k = 0; k < F.size(); ++k) R[k].row(i) -= delta * F[k].row(j);
        if (observer) observer(sweep, static_cast<int>(i), static_cast<int>(j), total());
      }
    }
    const double after = total();
    const bool stalled = before - after <= rel_tol * std::max(before, 1e-300);
    before = after;
    if (rel_tol > 0.0 && stalled) break;
  }
  return F_RF;
}

ConsensusGaps consensus_gaps(const CadmmState& state, int k, const CMat& beams, const CMat& Bw,
                             const CMat& A_side, const CMat& A_main) {
  const auto kk = static_cast<std::size_t>(k);
  const CMat& Y = state.Y[kk];
  ConsensusGaps gaps;
  gaps.y_minus_b = Y - beams;
  gaps.G_minus_BY = state.G[kk] - Bw.adjoint() * Y;
  gaps.h_minus_YA = state.h[kk] - Y.adjoint() * A_side;
  gaps.g_minus_YA = state.g[kk] - Y.adjoint() * A_main;
  return gaps;
}

void update_duals(CadmmState& state, int k, const ConsensusGaps& gaps) {
  const auto kk = static_cast<std::size_t>(k);
  state.varsigma[kk] += gaps.y_minus_b;
  state.lambda[kk] += gaps.G_minus_BY;
  state.beta[kk] += gaps.h_minus_YA;
  state.nu[kk] += gaps.g_minus_YA;
}

}  // namespace taskhbf
