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

#include "taskhbf/subsolvers.hpp"

namespace taskhbf {

double qos_ball_value(const CVec& G, int u) {
  CVec shifted = G;
  shifted(u) -= 1.0;
  return shifted.squaredNorm();
}

namespace {

// G(phi): stationary point of the Lagrangian for multiplier phi.
CVec g_of_phi(const CVec& target, int u, double phi) {
  CVec G = target / (1.0 + phi);
  G(u) += phi / (1.0 + phi);
  return G;
}

}  // namespace

GSolution solve_G(const CVec& target, int u, double xi, const Tolerances& tol) {
  if (u < 0 || u >= target.size()) throw ContractViolation("solve_G: user index out of range");
  if (xi < 0.0) throw InfeasibleQos(-1, u, xi);

  GSolution out;
  out.G = target;
  if (qos_ball_value(target, u) <= xi) return out;  // inactive constraint, phi = 0

  out.active = true;
  if (xi == 0.0) {
    // The ball is a single point.
    out.G = CVec::Zero(target.size());
    out.G(u) = 1.0;
    out.phi = std::numeric_limits<double>::infinity();
    return out;
  }

  // Residual of the active constraint; convex and strictly decreasing in phi.
  auto residual = [&](double phi) { return qos_ball_value(g_of_phi(target, u, phi), u) - xi; };
  const double scale = std::max(1.0, xi);

  double phi = 0.0;
  bool converged = false;
  for (int it = 0; it < tol.newton_max; ++it) {
    const double value = qos_ball_value(g_of_phi(target, u, phi), u);
    const double r = value - xi;
    if (std::abs(r) <= tol.root * scale) {
      converged = true;
      break;
    }
    const double slope = -2.0 * value / (1.0 + phi);
    const double next = phi - r / slope;
    if (!std::isfinite(next) || next < 0.0) break;
    phi = next;
  }

  if (!converged) {
    double lo = 0.0;
    double hi = 1.0;
    int expansions = 0;
    while (residual(hi) > 0.0) {
      lo = hi;
      hi *= 2.0;
      if (++expansions > tol.bracket_expansions) throw ConvergenceFailure("solve_G: multiplier bracket not found");
    }
    for (int it = 0; it < tol.bisection_max; ++it) {
      phi = 0.5 * (lo + hi);
      const double r = residual(phi);
      if (std::abs(r) <= tol.root * scale) break;
      (r > 0.0 ? lo : hi) = phi;
    }
  }

  out.phi = phi;
  out.G = g_of_phi(target, u, phi);
  return out;
}

}  // namespace taskhbf
