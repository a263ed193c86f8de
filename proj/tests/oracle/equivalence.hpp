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

// Randomized solver-vs-oracle sweeps shared by the unit tests and the
// acceptance binary. Each sweep reports the worst objective gap
// (solver - oracle) / max(1, |oracle|) over its instances; a negative gap
// means the solver beat the oracle.

#include <cstdint>
#include <string>

namespace oracle {

struct GapReport {
  std::string name;
  int instances = 0;
  double worst_gap = 0.0;
  double seconds = 0.0;
  int failures = 0;  // instances whose gap exceeded the tolerance
};

GapReport y_equivalence(int n, std::uint64_t seed, double tol = 1e-6);
GapReport g_equivalence(int n, std::uint64_t seed, double tol = 1e-6);
GapReport eta_equivalence(int n, std::uint64_t seed, double tol = 1e-6);
GapReport eps_equivalence(int n, std::uint64_t seed, double tol = 1e-6);
GapReport ccd_equivalence(int n, std::uint64_t seed, double tol = 1e-6);

}  // namespace oracle
