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

// Closed-form updates of the consensus-ADMM hybrid beamforming solver.
//
// Every solver here is a pure function of its arguments. Shapes follow one
// convention throughout:
//   Y_k          M_t x U   consensus copy of F_RF F_k
//   G_k          U x U     (u, i) entry is G_{k,u}^{k,i}
//   h_k          U x S     column s is h_{k,s}; the stacked vector r_k is vec(h_k)
//   g_k          U x M     column m is g_{k,m}; the stacked vector t_k is vec(g_k)
//   varsigma_k   M_t x U   dual of Y_k = F_RF F_k
//   lambda_k     U x U     dual of G_k = B_k^H Y_k
//   beta_k       U x S     dual of h_k = Y_k^H A_side
//   nu_k         U x M     dual of g_k = Y_k^H A_main

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "taskhbf/config.hpp"
#include "taskhbf/types.hpp"

namespace taskhbf {

struct CadmmState {
  int K = 0;
  int U = 0;
  int M_t = 0;
  int S = 0;
  int M = 0;

  std::vector<CMat> Y;
  std::vector<CMat> G;
  std::vector<CMat> h;
  std::vector<CMat> g;
  std::vector<double> eta;
  std::vector<double> eps;

  std::vector<CMat> varsigma;
  std::vector<CMat> lambda;
  std::vector<CMat> beta;
  std::vector<CMat> nu;

  // Taylor linearization points for the integrated-lobe updates. Empty until
  // first seeded.
  std::vector<CVec> prev_r;
  std::vector<CVec> prev_t;

  static CadmmState zeros(int K, int U, int M_t, int S, int M);
};

// ---------------------------------------------------------------------------
// Y-update: power-sphere constrained quadratic.

struct YSubproblem {
  std::array<double, 4> rho{1.0, 1.0, 1.0, 1.0};
  CMat M;       // M_t x U, b_{k,u} - varsigma_{k,u}
  CMat Bw;      // M_t x U, column u is H_{k,u}^H w_{k,u}
  CMat Glam;    // U x U, (u, i) entry G_{k,u}^{k,i} + lambda_{k,u}^{k,i}
  CMat A_side;  // M_t x S
  CMat Q_side;  // U x S, h_{k,s} + beta_{k,s}
  CMat A_main;  // M_t x M
  CMat Q_main;  // U x M, g_{k,m} + nu_{k,m}
  double P = 1.0;
};

// Xi Y = Psi is the stationarity system without the power multiplier.
struct SecularSystem {
  CMat Xi;   // M_t x M_t Hermitian positive definite
  CMat Psi;  // M_t x U
};

SecularSystem assemble_secular(const YSubproblem& problem);

// Value of the quadratic objective at Y.
double y_objective(const YSubproblem& problem, const CMat& Y);

struct YSolution {
  CMat Y;
  double mu = 0.0;
  bool hard_case = false;  // optimum sits at mu = -lambda_min(Xi)
};

// Minimizes the quadratic subject to Tr(Y Y^H) = P by solving the secular
// equation sum_m c_m / (mu + sigma_m)^2 = P on (-sigma_min, inf).
YSolution solve_secular(const SecularSystem& system, double P, const Tolerances& tol);
YSolution solve_Y(const YSubproblem& problem, const Tolerances& tol);

// ---------------------------------------------------------------------------
// G-update: projection onto the QoS ball of user u.

struct GSolution {
  CVec G;
  double phi = 0.0;
  bool active = false;
};

// |G_u - 1|^2 + sum_{i != u} |G_i|^2
double qos_ball_value(const CVec& G, int u);

// target_i = w_{k,u}^H H_{k,u} y_{k,i} - lambda_{k,u}^{k,i}. Throws
// InfeasibleQos (with k = u = -1) if xi < 0.
GSolution solve_G(const CVec& target, int u, double xi, const Tolerances& tol);

// ---------------------------------------------------------------------------
// Sidelobe / mainlobe auxiliaries.

// Integrated sidelobe (scan/detect): r* = r_hat - r_bar / (rho3 ||r_bar||^2).
// Throws DegenerateSubproblem when ||r_bar|| < tol_zero.
CVec solve_h_sd(const CVec& r_hat, const CVec& r_bar, double rho3, double tol_zero);

// Integrated mainlobe (tracking): t* = t_hat + t_bar / (rho4 ||t_bar||^2).
CVec solve_g_tt(const CVec& t_hat, const CVec& t_bar, double rho4, double tol_zero);

// sign * (log||r_bar||^2 + Re{r_bar^H (r - r_bar)} / ||r_bar||^2) + rho/2 ||r - r_hat||^2
// sign = +1 for the sidelobe update, -1 for the mainlobe update.
double linearized_log_objective(const CVec& r, const CVec& r_bar, const CVec& r_hat, double rho, double sign = 1.0);

struct PeakSidelobeSolution {
  CMat h;       // U x S
  double eta = 0.0;
};

// f(eta) = log(eta) + rho3/2 sum_s [||h_hat_s|| > sqrt(eta)] (sqrt(eta) - ||h_hat_s||)^2
double peak_sidelobe_cost(std::span<const double> norms, double rho3, double eta);

// Peak-sidelobe update (tracking). h_hat is U x S.
PeakSidelobeSolution solve_h_eta_tt(const CMat& h_hat, double rho3, const Tolerances& tol);

struct MinMainlobeSolution {
  CMat g;       // U x M
  double eps = 0.0;
};

// d(eps) = -log(eps) + rho4/2 sum_m [||g_hat_m|| <= sqrt(eps)] (sqrt(eps) - ||g_hat_m||)^2
double min_mainlobe_cost(std::span<const double> norms, double rho4, double eps);

// Minimum-mainlobe update (scan/detect). g_hat is U x M. Throws
// DegenerateSubproblem when every g_hat column is zero.
MinMainlobeSolution solve_g_eps_sd(const CMat& g_hat, double rho4, const Tolerances& tol);

namespace detail {

// Minimizer of 2 log k + rho/2 sum_n (k - a_n)^2 over [lo, hi] where the sum
// runs over `count` anchors with total `anchor_sum`. Returns the minimizing
// kappa and sets `which_case` to 1..5.
double peak_piece_minimizer(double rho, double count, double anchor_sum, double lo, double hi,
                            int* which_case = nullptr);

// Minimizer of -2 log i + rho/2 sum_n (i - a_n)^2 over [lo, hi]; cases 1..3.
double mainlobe_piece_minimizer(double rho, double count, double anchor_sum, double lo, double hi,
                                int* which_case = nullptr);

}  // namespace detail

// ---------------------------------------------------------------------------
// Digital and analog precoders.

// F_k = (F_RF^H F_RF)^{-1} F_RF^H V_k. Throws SingularSystem if F_RF is rank deficient.
CMat solve_Fk(const CMat& V, const CMat& F_RF);

// sum_k || V_k - F_RF F_k ||_F^2
double analog_fit_objective(const CMat& F_RF, std::span<const CMat> F, std::span<const CMat> V);

// psi_{i,j} summed over subcarriers; the (i,j) term of the objective as a
// function of x = F_RF(i,j) with |x| = 1 is 2 Re{x psi} + const.
cdouble ccd_psi(const CMat& F_RF, std::span<const CMat> F, std::span<const CMat> V, int i, int j);

// exp(-j(angle(psi) + pi)); returns `current` when psi == 0.
cdouble ccd_element(cdouble psi, cdouble current);

// Called after every element update with the objective value.
using CcdObserver = std::function<void(int sweep, int i, int j, double objective)>;

// Cyclic coordinate descent over the entries of F_RF in row-major order.
// Stops after `ccd_max` sweeps or when a sweep improves the objective by
// less than `rel_tol` relative.
CMat solve_FRF_ccd(const CMat& F_RF_init, std::span<const CMat> F, std::span<const CMat> V, int ccd_max,
                   const CcdObserver& observer = {}, double rel_tol = 0.0);

// ---------------------------------------------------------------------------
// Consensus gaps and dual ascent.

struct ConsensusGaps {
  CMat y_minus_b;    // Y_k - F_RF F_k
  CMat G_minus_BY;   // G_k - B_k^H Y_k
  CMat h_minus_YA;   // h_k - Y_k^H A_side
  CMat g_minus_YA;   // g_k - Y_k^H A_main
};

ConsensusGaps consensus_gaps(const CadmmState& state, int k, const CMat& beams, const CMat& Bw,
                             const CMat& A_side, const CMat& A_main);

// varsigma += y - b, lambda += G - B^H Y, beta += h - Y^H A_S, nu += g - Y^H A_M.
void update_duals(CadmmState& state, int k, const ConsensusGaps& gaps);

}  // namespace taskhbf
