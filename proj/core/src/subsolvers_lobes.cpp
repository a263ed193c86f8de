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

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "taskhbf/subsolvers.hpp"

namespace taskhbf {

// ---------------------------------------------------------------------------
// Linearized integrated-lobe updates.

double linearized_log_objective(const CVec& r, const CVec& r_bar, const CVec& r_hat, double rho, double sign) {
  const double n2 = r_bar.squaredNorm();
  const double linear = std::log(n2) + r_bar.dot(r - r_bar).real() / n2;
  return sign * linear + 0.5 * rho * (r - r_hat).squaredNorm();
}

CVec solve_h_sd(const CVec& r_hat, const CVec& r_bar, double rho3, double tol_zero) {
  if (r_hat.size() != r_bar.size()) throw ContractViolation("solve_h_sd: size mismatch");
  const double n2 = r_bar.squaredNorm();
  if (std::sqrt(n2) < tol_zero) throw DegenerateSubproblem("solve_h_sd: linearization point is zero");
  return r_hat - r_bar / (rho3 * n2);
}

CVec solve_g_tt(const CVec& t_hat, const CVec& t_bar, double rho4, double tol_zero) {
  if (t_hat.size() != t_bar.size()) throw ContractViolation("solve_g_tt: size mismatch");
  const double n2 = t_bar.squaredNorm();
  if (std::sqrt(n2) < tol_zero) throw DegenerateSubproblem("solve_g_tt: linearization point is zero");
  return t_hat + t_bar / (rho4 * n2);
}

// ---------------------------------------------------------------------------
// Piecewise one-dimensional minimizations.

double peak_sidelobe_cost(std::span<const double> norms, double rho3, double eta) {
  const double kappa = std::sqrt(eta);
  double penalty = 0.0;
  for (double n : norms)
    if (n > kappa) penalty += (kappa - n) * (kappa - n);
  return std::log(eta) + 0.5 * rho3 * penalty;
}

double min_mainlobe_cost(std::span<const double> norms, double rho4, double eps) {
  const double iota = std::sqrt(eps);
  double penalty = 0.0;
  for (double n : norms)
    if (n <= iota) penalty += (iota - n) * (iota - n);
  return -std::log(eps) + 0.5 * rho4 * penalty;
}

namespace detail {

double peak_piece_minimizer(double rho, double count, double anchor_sum, double lo, double hi, int* which_case) {
  auto set_case = [&](int c) {
    if (which_case) *which_case = c;
  };
  // Piece value up to a constant: 2 log k + rho/2 (count k^2 - 2 sum k).
  auto piece = [&](double k) { return 2.0 * std::log(k) + 0.5 * rho * (count * k * k - 2.0 * anchor_sum * k); };
  auto better = [&](double a, double b) { return piece(b) < piece(a) ? b : a; };

  const double a = rho * count;
  const double b = -rho * anchor_sum;
  const double c = 2.0;
  const double disc = b * b - 4.0 * a * c;
  if (a <= 0.0 || disc <= 0.0) {
    set_case(1);
    return lo;
  }
  const double root = std::sqrt(disc);
  const double v2 = (-b + root) / (2.0 * a);
  const double v1 = (2.0 * c) / (-b + root);  // = (-b - root) / (2a), cancellation-free

  if (v2 <= lo || v1 >= hi) {  // f' >= 0 throughout
    set_case(1);
    return lo;
  }
  if (v1 <= lo && v2 >= hi) {  // f' <= 0 throughout
    set_case(2);
    return hi;
  }
  if (v1 <= lo) {  // decreasing then increasing
    set_case(3);
    return v2;
  }
  if (v2 >= hi) {  // increasing then decreasing
    set_case(4);
    return better(lo, hi);
  }
  set_case(5);  // increasing, decreasing, increasing
  return better(lo, v2);
}

double mainlobe_piece_minimizer(double rho, double count, double anchor_sum, double lo, double hi, int* which_case) {
  auto set_case = [&](int c) {
    if (which_case) *which_case = c;
  };
  if (count <= 0.0) {  // -2 log i alone is decreasing
    set_case(3);
    return hi;
  }
  const double a = rho * count;
  const double b = -rho * anchor_sum;
  const double c = -2.0;
  const double v1 = (-b + std::sqrt(b * b - 4.0 * a * c)) / (2.0 * a);
  if (v1 <= lo) {
    set_case(1);
    return lo;
  }
  if (v1 <= hi) {
    set_case(2);
    return v1;
  }
  set_case(3);
  return hi;
}

}  // namespace detail

namespace {

struct DistinctNorms {
  std::vector<double> value;   // ascending, deduplicated
  std::vector<double> count;   // multiplicity of each value
};

DistinctNorms distinct(std::vector<double> norms) {
  std::sort(norms.begin(), norms.end());
  DistinctNorms out;
  for (double n : norms) {
    if (!out.value.empty() && n == out.value.back()) {
      out.count.back() += 1.0;
    } else {
      out.value.push_back(n);
      out.count.push_back(1.0);
    }
  }
  return out;
}

std::vector<double> column_norms(const CMat& m) {
  std::vector<double> n(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index c = 0; c < m.cols(); ++c) n[static_cast<std::size_t>(c)] = m.col(c).norm();
  return n;
}

}  // namespace

PeakSidelobeSolution solve_h_eta_tt(const CMat& h_hat, double rho3, const Tolerances& tol) {
  if (h_hat.cols() == 0) throw ContractViolation("solve_h_eta_tt: empty sidelobe set");
  const std::vector<double> norms = column_norms(h_hat);
  const DistinctNorms dn = distinct(norms);

  PeakSidelobeSolution out;
  if (dn.value.back() <= tol.zero) {
    out.h = CMat::Zero(h_hat.rows(), h_hat.cols());
    out.eta = tol.zero;
    return out;
  }

  // Search kappa = sqrt(eta) over [smallest norm, largest norm]; on piece q the
  // penalty involves the entries whose norm is at least value[q].
  const std::size_t Q = dn.value.size() - 1;
  double best_kappa = dn.value.front();
  double best_cost = peak_sidelobe_cost(norms, rho3, best_kappa * best_kappa);
  std::vector<double> tail_count(Q + 2, 0.0), tail_sum(Q + 2, 0.0);
  for (std::size_t q = Q + 1; q-- > 0;) {
    tail_count[q] = tail_count[q + 1] + dn.count[q];
    tail_sum[q] = tail_sum[q + 1] + dn.count[q] * dn.value[q];
  }
  for (std::size_t q = 1; q <= Q; ++q) {
    const double kappa =
        detail::peak_piece_minimizer(rho3, tail_count[q], tail_sum[q], dn.value[q - 1], dn.value[q]);
    const double cost = peak_sidelobe_cost(norms, rho3, kappa * kappa);
    if (cost < best_cost) {
      best_cost = cost;
      best_kappa = kappa;
    }
  }

  out.eta = best_kappa * best_kappa;
  out.h = h_hat;
  for (Eigen::Index s = 0; s < h_hat.cols(); ++s) {
    const double n = norms[static_cast<std::size_t>(s)];
    if (n > best_kappa) out.h.col(s) *= best_kappa / n;
  }
  return out;
}

MinMainlobeSolution solve_g_eps_sd(const CMat& g_hat, double rho4, const Tolerances& tol) {
  if (g_hat.cols() == 0) throw ContractViolation("solve_g_eps_sd: empty mainlobe set");
  const std::vector<double> norms = column_norms(g_hat);
  const DistinctNorms dn = distinct(norms);
  if (dn.value.back() <= tol.zero) throw DegenerateSubproblem("solve_g_eps_sd: no mainlobe energy");

  // Search iota = sqrt(eps) over [smallest norm, largest norm]; on piece q the
  // penalty involves the entries whose norm is at most value[q - 1].
  const std::size_t Q = dn.value.size() - 1;
  double best_iota = dn.value.front();
  double best_cost = best_iota > 0.0 ? min_mainlobe_cost(norms, rho4, best_iota * best_iota)
                                     : std::numeric_limits<double>::infinity();
  double head_count = 0.0;
  double head_sum = 0.0;
  for (std::size_t q = 1; q <= Q; ++q) {
    head_count += dn.count[q - 1];
    head_sum += dn.count[q - 1] * dn.value[q - 1];
    const double iota = detail::mainlobe_piece_minimizer(rho4, head_count, head_sum, dn.value[q - 1], dn.value[q]);
    if (!(iota > 0.0)) continue;
    const double cost = min_mainlobe_cost(norms, rho4, iota * iota);
    if (cost < best_cost) {
      best_cost = cost;
      best_iota = iota;
    }
  }

  MinMainlobeSolution out;
  out.eps = best_iota * best_iota;
  out.g = g_hat;
  for (Eigen::Index m = 0; m < g_hat.cols(); ++m) {
    const double n = norms[static_cast<std::size_t>(m)];
    if (n > best_iota) continue;
    if (n > tol.zero) {
      out.g.col(m) *= best_iota / n;
    } else {
      // Any direction is optimal for a zero column; take the first axis.
      out.g.col(m).setZero();
      out.g(0, m) = best_iota;
    }
  }
  return out;
}

}  // namespace taskhbf
