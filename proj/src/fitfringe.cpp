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

#include "ionfringe/fitfringe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ionfringe/error.hpp"
#include "ionfringe/thermal.hpp"

namespace ionfringe {

namespace {

// Internal temperature unit; keeps the parameter vector well scaled.
constexpr double kMilliKelvin = 1e-3;

ThermalState thermal_for(double T_X, const FringeModelFixed& fixed) {
  return {{T_X, T_X, fixed.temperature_ratio * T_X}, fixed.spectrum, fixed.mass};
}

// Split of the normalized channel shape into constant and modulated parts.
struct ShapeTerms {
  double constant = 0.0;
  double modulated = 0.0;  // multiplies V0 * cos(phase) * dw
};

ShapeTerms shape_terms(Channel channel, double polar) {
  const double ct = std::cos(polar);
  const double st = std::sin(polar);
  switch (channel) {
    case Channel::PiDetected: return {ct * ct + st * st, st * st};
    case Channel::Unpolarized: return {1.0 + ct * ct + st * st, st * st};
    case Channel::SigmaDetected: return {1.0, 0.0};
  }
  return {};
}

}  // namespace

FringeModelFixed FringeModelFixed::make(const BeamGeometry& beam, const ModeSpectrum& spectrum,
                                        double mass, Channel channel) {
  FringeModelFixed fixed;
  fixed.beam = beam;
  fixed.separation = spectrum.separation;
  fixed.spectrum = spectrum;
  fixed.mass = mass;
  fixed.channel = channel;
  fixed.temperature_ratio = ionfringe::temperature_ratio(beam.theta_in);
  return fixed;
}

std::vector<double> model_profile(std::span<const double> phi, const FringeModelParams& params,
                                  const FringeModelFixed& fixed) {
  const ThermalState thermal = thermal_for(params.T_X, fixed);
  const Frame frame = atom_frame(fixed.beam);
  const Vec3 k_in = k_in_vector(fixed.beam);
  std::vector<double> out(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const Vec3 k_out = k_out_vector(fixed.beam, {phi[i], fixed.Phi});
    const Vec3 q = scattering_vector(k_in, k_out);
    const ShapeTerms s = shape_terms(fixed.channel, atom_angles(k_out, frame).polar);
    const double fringe = std::cos(fringe_phase(q, fixed.separation) + fixed.phase_offset);
    const double dw = debye_waller(q, thermal);
    out[i] = params.amplitude * (s.constant + s.modulated * params.visibility * fringe * dw) +
             params.background;
  }
  return out;
}

FitResult fit_profile(const Profile& profile, const FringeModelParams& guess,
                      const FringeModelFixed& fixed, const FitOptions& options) {
  const std::size_t n = profile.phi.size();
  if (n < 8) throw DomainError("profile fit needs at least 8 data points");
  if (profile.value.size() != n || profile.std_error.size() != n) {
    throw DomainError("profile columns have different lengths");
  }
  double data_scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(profile.phi[i]) || !std::isfinite(profile.value[i])) {
      throw DomainError("profile contains non-finite values");
    }
    data_scale = std::max(data_scale, std::abs(profile.value[i]));
  }
  if (data_scale == 0.0) data_scale = 1.0;

  std::vector<double> sigma(n, 1.0);
  bool any_err = false;
  for (double e : profile.std_error) any_err = any_err || e > 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (profile.counts) {
      sigma[i] = std::sqrt(std::max(profile.value[i], 1.0));
    } else if (any_err) {
      if (!(profile.std_error[i] > 0.0)) throw DomainError("standard errors must be positive");
      sigma[i] = profile.std_error[i];
    }
  }

  const double inf = std::numeric_limits<double>::infinity();
  LmProblem problem;
  problem.n_residuals = n;
  problem.lower = {0.0, 0.0, 0.0, 0.0};
  problem.upper = {inf, inf, inf, 1.05};
  problem.free = {true, options.fit_background, true, options.fit_visibility};
  problem.step_floor = {1e-3 * data_scale, 1e-3 * data_scale, 1e-3, 1e-3};
  problem.residuals = [&](std::span<const double> p, std::span<double> r) {
    const FringeModelParams trial{p[0], p[1], p[2] * kMilliKelvin, p[3]};
    const auto model = model_profile(profile.phi, trial, fixed);
    for (std::size_t i = 0; i < n; ++i) r[i] = (model[i] - profile.value[i]) / sigma[i];
  };
  std::vector<double> start{guess.amplitude, guess.background, guess.T_X / kMilliKelvin,
                            guess.visibility};
  if (!(guess.amplitude > 0.0)) {
    // Match the mean level with the fringe term switched off.
    FringeModelParams flat = guess;
    flat.amplitude = 1.0;
    flat.background = 0.0;
    flat.visibility = 0.0;
    const auto shape = model_profile(profile.phi, flat, fixed);
    double shape_sum = 0.0;
    double data_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      shape_sum += shape[i];
      data_sum += profile.value[i] - guess.background;
    }
    start[0] = shape_sum > 0.0 && data_sum > 0.0 ? data_sum / shape_sum : data_scale;
  }
  LmResult lm = levenberg_marquardt(problem, start, options.lm);
  if (profile.counts) {
    // Data-variance weights pull the fit toward low fluctuations; reweighting
    // with the model variance removes that bias.
    for (int pass = 0; pass < 2 && lm.converged; ++pass) {
      const FringeModelParams at{lm.params[0], lm.params[1], lm.params[2] * kMilliKelvin,
                                 lm.params[3]};
      const auto model = model_profile(profile.phi, at, fixed);
      for (std::size_t i = 0; i < n; ++i) sigma[i] = std::sqrt(std::max(model[i], 1.0));
      lm = levenberg_marquardt(problem, lm.params, options.lm);
    }
  }
  if (!lm.converged) {
    throw NumericError("profile fit did not converge after " + std::to_string(lm.n_iter) +
                       " iterations (" + lm.status + ")");
  }

  FitResult res;
  const auto& p = lm.params;
  res.params = {p[0], p[1], p[2] * kMilliKelvin, p[3]};
  const Eigen::Vector4d unit{1.0, 1.0, kMilliKelvin, 1.0};
  res.covariance = unit.asDiagonal() * lm.covariance * unit.asDiagonal();
  res.one_sigma = {std::sqrt(res.covariance(0, 0)), std::sqrt(res.covariance(1, 1)),
                   std::sqrt(res.covariance(2, 2)), std::sqrt(res.covariance(3, 3))};
  for (std::size_t i = 0; i < 4; ++i) {
    res.free[i] = problem.free[i];
    res.at_bound[i] = lm.at_bound[i];
  }
  res.chi2 = lm.chi2;
  res.reduced_chi2 = lm.reduced_chi2;
  res.dof = lm.dof;
  res.condition = lm.condition;
  res.converged = true;
  res.n_iter = lm.n_iter;
  res.status = lm.status;
  return res;
}

VisibilityEstimate extrapolated_visibility(const FitResult& result, const FringeModelFixed& fixed) {
  if (!result.converged) throw DomainError("visibility requested from an unconverged fit");
  const Vec3 k_in = k_in_vector(fixed.beam);
  const Vec3 q0 = scattering_vector(k_in, k_out_vector(fixed.beam, {0.0, fixed.Phi}));
  const double dw0 = debye_waller(q0, thermal_for(result.params.T_X, fixed));
  const double polar0 = atom_angles(k_out_vector(fixed.beam, {0.0, fixed.Phi}),
                                    atom_frame(fixed.beam)).polar;
  const ShapeTerms s = shape_terms(fixed.channel, polar0);
  const auto& p = result.params;
  const double denom = p.amplitude * s.constant + p.background;
  VisibilityEstimate v;
  v.value = p.visibility;
  v.error = result.one_sigma.visibility;
  v.dw_at_zero = dw0;
  v.model_at_zero = denom > 0.0 ? p.amplitude * s.modulated * p.visibility * dw0 / denom : 0.0;
  return v;
}

double saturation_visibility_correction(double s) {
  if (!(s >= 0.0)) throw DomainError("saturation parameter must be non-negative");
  return 1.0 / (1.0 + s);
}

}  // namespace ionfringe
