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
#include <array>
#include <span>
#include <string>
#include <vector>

#include "ionfringe/geometry.hpp"
#include "ionfringe/imaging.hpp"
#include "ionfringe/lm.hpp"
#include "ionfringe/modes.hpp"
#include "ionfringe/scatter.hpp"

namespace ionfringe {

/// Quantities held fixed during a profile fit. The ion separation comes from
/// the trap parameters and is never fitted.
struct FringeModelFixed {
  BeamGeometry beam;
  double separation = 0.0;  // m
  ModeSpectrum spectrum;
  double mass = 0.0;  // kg
  Channel channel = Channel::PiDetected;
  double phase_offset = 0.0;  // rad, added to q.d; 0 unless the sign convention needs absorbing
  double temperature_ratio = 1.0;  // T_Z / T_X
  double Phi = 0.0;                // out-of-plane angle where the model is evaluated

  /// Fills the temperature ratio from the beam angle.
  static FringeModelFixed make(const BeamGeometry& beam, const ModeSpectrum& spectrum,
                               double mass, Channel channel);
};

struct FringeModelParams {
  double amplitude = 1.0;   // A, profile units
  double background = 0.0;  // B, profile units
  double T_X = 0.0;         // K; T_Y = T_X and T_Z = ratio * T_X
  double visibility = 1.0;  // V0, scales the interference term

  std::array<double, 4> as_array() const { return {amplitude, background, T_X, visibility}; }
};

/// A * shape(phi) + B where shape is the channel cross section (normalized to
/// sigma_0 L / 4 pi) with the interference term multiplied by V0.
std::vector<double> model_profile(std::span<const double> phi, const FringeModelParams& params,
                                  const FringeModelFixed& fixed);

struct FitOptions {
  LmOptions lm;
  // A constant background and the visibility scale enter the model in the
  // same way up to the overall amplitude, so at most one of them can be free.
  bool fit_background = false;
  bool fit_visibility = true;
};

struct FitResult {
  FringeModelParams params;
  FringeModelParams one_sigma;
  Eigen::Matrix4d covariance;  // order (A, B, T_X [K], V0)
  std::array<bool, 4> free{};
  std::array<bool, 4> at_bound{};
  double chi2 = 0.0;
  double reduced_chi2 = 0.0;
  std::size_t dof = 0;
  double condition = 0.0;
  bool converged = false;
  int n_iter = 0;
  std::string status;
};

/// Levenberg-Marquardt fit of a 1D profile. Count profiles are weighted by
/// sqrt(counts), then refitted with sqrt(model) weights; other profiles use the
/// supplied standard errors, or unity if none are given. Parameters not fitted
/// stay at their `guess` values. A non-positive amplitude guess is replaced by
/// one matched to the mean data level. Throws NumericError when the fit does not
/// converge or the parameters are not identifiable.
FitResult fit_profile(const Profile& profile, const FringeModelParams& guess,
                      const FringeModelFixed& fixed, const FitOptions& options = {});

struct VisibilityEstimate {
  double value = 0.0;          // V0
  double error = 0.0;          // 1 sigma
  double dw_at_zero = 1.0;     // Debye-Waller factor at phi = 0 for the fitted T
  double model_at_zero = 0.0;  // V0 * dw_at_zero diluted by the fitted background
};

/// Visibility extrapolated to phi = 0. Throws DomainError for unconverged input.
VisibilityEstimate extrapolated_visibility(const FitResult& result, const FringeModelFixed& fixed);

/// Largest visibility allowed by the incoherent fluorescence at saturation s: 1 / (1 + s).
double saturation_visibility_correction(double s);

}  // namespace ionfringe
