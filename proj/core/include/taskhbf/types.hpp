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

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace taskhbf {

using cdouble = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSpeedOfLight = 299792458.0;

// Radar task selector. ScanDetect minimizes AISMMR, TargetTrack minimizes APSIMR.
enum class Task { ScanDetect, TargetTrack };

std::string to_string(Task task);
Task task_from_string(const std::string& name);

// ---------------------------------------------------------------------------
// Error hierarchy. Every solver reports failure by throwing one of these.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inputs violate a documented precondition (dimension mismatch, bad range).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// A linear system that must be solved is singular or numerically rank deficient.
class SingularSystem : public Error {
 public:
  using Error::Error;
};

// A subproblem has no meaningful solution for the given data (e.g. zero lobe energy).
class DegenerateSubproblem : public Error {
 public:
  using Error::Error;
};

// A scalar root search could not bracket or converge.
class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

// The QoS ball for user u on subcarrier k is empty (xi < 0).
class InfeasibleQos : public Error {
 public:
  InfeasibleQos(int k, int u, double xi);
  int subcarrier() const noexcept { return k_; }
  int user() const noexcept { return u_; }
  double xi() const noexcept { return xi_; }

 private:
  int k_;
  int u_;
  double xi_;
};

}  // namespace taskhbf
