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

#include "ionfringe/lm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ionfringe/error.hpp"

namespace ionfringe {

namespace {

struct Evaluator {
  const LmProblem& problem;
  std::vector<double> scratch;

  double chi2(std::span<const double> x, Eigen::VectorXd& r) {
    r.resize(static_cast<Eigen::Index>(problem.n_residuals));
    problem.residuals(x, std::span<double>(r.data(), problem.n_residuals));
    if (!r.allFinite()) return std::numeric_limits<double>::infinity();
    return r.squaredNorm();
  }
};

void project(const LmProblem& p, std::vector<double>& x) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], p.lower[i], p.upper[i]);
}

// Columns for the free parameters listed in `idx`.
Eigen::MatrixXd jacobian(Evaluator& ev, const std::vector<double>& x,
                         const std::vector<std::size_t>& idx, const LmOptions& opt) {
  const auto& p = ev.problem;
  Eigen::MatrixXd jac(static_cast<Eigen::Index>(p.n_residuals),
                      static_cast<Eigen::Index>(idx.size()));
  Eigen::VectorXd r_plus;
  Eigen::VectorXd r_minus;
  std::vector<double> xp = x;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const std::size_t i = idx[k];
    const double h = opt.jacobian_rel_step * std::max(std::abs(x[i]), p.step_floor[i]);
    const double hi = std::min(x[i] + h, p.upper[i]);
    const double lo = std::max(x[i] - h, p.lower[i]);
    xp[i] = hi;
    ev.chi2(xp, r_plus);
    xp[i] = lo;
    ev.chi2(xp, r_minus);
    xp[i] = x[i];
    jac.col(static_cast<Eigen::Index>(k)) = (r_plus - r_minus) / (hi - lo);
  }
  return jac;
}

}  // namespace

LmResult levenberg_marquardt(const LmProblem& problem, std::vector<double> x,
                             const LmOptions& opt) {
  const std::size_t n_par = x.size();
  if (problem.lower.size() != n_par || problem.upper.size() != n_par ||
      problem.free.size() != n_par || problem.step_floor.size() != n_par) {
    throw DomainError("least-squares problem metadata does not match the parameter count");
  }
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < n_par; ++i) {
    if (problem.free[i]) idx.push_back(i);
  }
  if (idx.empty()) throw DomainError("least-squares problem has no free parameters");
  if (problem.n_residuals <= idx.size()) {
    throw DomainError("least-squares problem needs more data points than free parameters");
  }

  Evaluator ev{problem, {}};
  project(problem, x);
  Eigen::VectorXd r;
  double chi2 = ev.chi2(x, r);
  if (!std::isfinite(chi2)) throw NumericError("model is not finite at the starting point");

  LmResult res;
  double lambda = opt.initial_lambda;
  const auto m = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd jac;
  int iter = 0;
  for (; iter < opt.max_iter; ++iter) {
    jac = jacobian(ev, x, idx, opt);
    const Eigen::VectorXd grad = jac.transpose() * r;
    if (grad.lpNorm<Eigen::Infinity>() < opt.gradient_tol) {
      res.converged = true;
      res.status = "gradient below tolerance";
      break;
    }
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const double diag_floor = std::max(jtj.diagonal().maxCoeff(), 1.0) * 1e-15;

    bool accepted = false;
    bool done = false;
    while (!accepted) {
      Eigen::MatrixXd damped = jtj;
      for (Eigen::Index k = 0; k < m; ++k) {
        damped(k, k) += lambda * std::max(jtj(k, k), diag_floor);
      }
      const Eigen::VectorXd step = damped.ldlt().solve(-grad);
      std::vector<double> trial = x;
      for (Eigen::Index k = 0; k < m; ++k) trial[idx[k]] += step[k];
      project(problem, trial);
      Eigen::VectorXd r_trial;
      const double chi2_trial = ev.chi2(trial, r_trial);
      if (chi2_trial < chi2) {
        double rel = 0.0;
        for (std::size_t i : idx) {
          const double scale = std::max(std::abs(x[i]), problem.step_floor[i]);
          rel = std::max(rel, std::abs(trial[i] - x[i]) / scale);
        }
        x = std::move(trial);
        r = std::move(r_trial);
        chi2 = chi2_trial;
        lambda = std::max(lambda * 0.1, 1e-12);
        accepted = true;
        if (rel < opt.step_tol) {
          res.converged = true;
          res.status = "relative step below tolerance";
          done = true;
        }
      } else {
        lambda *= 10.0;
        if (lambda > 1e16) {
          // No direction lowers chi^2 any more: a minimum to working precision.
          res.converged = true;
          res.status = "no further decrease possible";
          done = true;
          break;
        }
      }
    }
    if (done) {
      ++iter;
      break;
    }
  }
  if (!res.converged) res.status = "iteration limit reached";

  res.params = x;
  res.chi2 = chi2;
  res.n_iter = iter;
  res.dof = problem.n_residuals - idx.size();
  res.reduced_chi2 = chi2 / static_cast<double>(res.dof);
  res.covariance = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_par),
                                         static_cast<Eigen::Index>(n_par));
  res.unscaled_covariance = res.covariance;
  res.at_bound.assign(n_par, false);
  if (!res.converged) return res;

  // Parameters pinned on a bound carry no curvature information.
  std::vector<std::size_t> est;
  for (std::size_t i : idx) {
    const double tol = 1e-12 * std::max(std::abs(x[i]), problem.step_floor[i]);
    if (std::abs(x[i] - problem.lower[i]) <= tol || std::abs(x[i] - problem.upper[i]) <= tol) {
      res.at_bound[i] = true;
    } else {
      est.push_back(i);
    }
  }
  if (est.empty()) return res;
  jac = jacobian(ev, x, est, opt);
  const Eigen::MatrixXd jtj = jac.transpose() * jac;
  const Eigen::VectorXd d = jtj.diagonal();
  if ((d.array() <= 0.0).any()) {
    throw NumericError("singular J^T J: a parameter has no influence on the model");
  }
  const Eigen::VectorXd inv_sqrt = d.array().rsqrt();
  const Eigen::MatrixXd corr = inv_sqrt.asDiagonal() * jtj * inv_sqrt.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(corr, Eigen::EigenvaluesOnly);
  const double ev_min = eig.eigenvalues().minCoeff();
  const double ev_max = eig.eigenvalues().maxCoeff();
  res.condition = ev_min > 0.0 ? ev_max / ev_min : std::numeric_limits<double>::infinity();
  if (!(res.condition < opt.max_condition)) {
    std::ostringstream msg;
    msg << "singular J^T J at the optimum (condition number " << res.condition
        << "); parameters are not separately identifiable";
    throw NumericError(msg.str());
  }
  const Eigen::MatrixXd inv_corr = corr.inverse();
  const Eigen::MatrixXd cov = inv_sqrt.asDiagonal() * inv_corr * inv_sqrt.asDiagonal();
  for (std::size_t a = 0; a < est.size(); ++a) {
    for (std::size_t b = 0; b < est.size(); ++b) {
      const auto ia = static_cast<Eigen::Index>(est[a]);
      const auto ib = static_cast<Eigen::Index>(est[b]);
      res.unscaled_covariance(ia, ib) = cov(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
    }
  }
  res.covariance = res.unscaled_covariance * res.reduced_chi2;
  return res;
}

}  // namespace ionfringe
