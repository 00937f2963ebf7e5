// Copyright 2026 The ionfringe Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace ionfringe {

/// Weighted least-squares problem: minimize sum of residual(p)_i^2, where the
/// callback writes (model - data) / sigma for every data point.
struct LmProblem {
  std::size_t n_residuals = 0;
  std::function<void(std::span<const double> params, std::span<double> residuals)> residuals;
  std::vector<double> lower;       // per-parameter bounds, enforced by projection
  std::vector<double> upper;
  std::vector<bool> free;          // false: held at the starting value
  std::vector<double> step_floor;  // absolute floor on the finite-difference step
};

struct LmOptions {
  int max_iter = 200;
  double jacobian_rel_step = 1e-6;
  double step_tol = 1e-9;       // relative parameter step
  double gradient_tol = 1e-10;  // infinity norm of J^T r
  double initial_lambda = 1e-3;
  double max_condition = 1e12;  // of the correlation-scaled J^T J at the optimum
};

struct LmResult {
  std::vector<double> params;
  /// (J^T J)^-1 over the estimated parameters, scaled by the reduced chi^2.
  /// Rows and columns of fixed or bound-pinned parameters are zero.
  Eigen::MatrixXd covariance;
  Eigen::MatrixXd unscaled_covariance;
  std::vector<bool> at_bound;
  double chi2 = 0.0;
  std::size_t dof = 0;
  double reduced_chi2 = 0.0;
  double condition = 0.0;
  int n_iter = 0;
  bool converged = false;
  std::string status;

  double error(std::size_t i) const { return std::sqrt(std::max(0.0, covariance(i, i))); }
};

/// Damped Gauss-Newton with a central-difference Jacobian. A non-converged run
/// is returned with converged = false. Throws NumericError if J^T J is singular
/// at the optimum (the message carries the condition number).
LmResult levenberg_marquardt(const LmProblem& problem, std::vector<double> start,
                             const LmOptions& options = {});

}  // namespace ionfringe
