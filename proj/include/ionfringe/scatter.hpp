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

#include <string>
#include <string_view>

namespace ionfringe {

// Cross sections in this module are returned in units of sigma_0 per steradian
// (sigma_0 = lambda_0^2 / 2 pi). Multiply by ScatterConfig::sigma_0 for SI.

struct ScatterConfig {
  double omega_0 = 0.0;   // rad/s, resonance
  double omega_in = 0.0;  // rad/s, laser
  double gamma = 0.0;     // rad/s, excited-state decay rate
  double lambda_0 = 0.0;  // m
  double sigma_0 = 0.0;   // m^2

  /// Builds a consistent config from the resonance wavelength, decay rate and
  /// laser detuning omega_in - omega_0 (all rad/s).
  static ScatterConfig make(double lambda_0, double gamma, double detuning = 0.0);

  void validate() const;
  double detuning() const { return omega_in - omega_0; }
};

/// Detected outgoing polarization, referred to the atom frame.
enum class Channel { PiDetected, SigmaDetected, Unpolarized };

std::string_view to_string(Channel channel);
/// Accepts "pi", "sigma" and "unpol". Throws DomainError otherwise.
Channel parse_channel(std::string_view name);

/// Unit-height Lorentzian of full width gamma.
double lorentzian(double detuning, double gamma);

/// Thermally averaged cross section for scattering that preserves m_J in both ions.
double xsec_pi_case(double polar, double phase, double dw, const ScatterConfig& cfg);

/// One ion changes m_J and the photon has sigma polarization. Isotropic, no fringes.
double xsec_sigma_to_sigmapol(const ScatterConfig& cfg);

/// One ion changes m_J and the photon has pi polarization. No fringes.
double xsec_sigma_to_pipol(double polar, const ScatterConfig& cfg);

/// Channel cross section, summed over final atomic states and averaged over
/// initial ones.
double xsec_detected(Channel channel, double polar, double phase, double dw,
                     const ScatterConfig& cfg);

/// (I_max - I_min) / (I_max + I_min) over the fringe phase.
double fringe_visibility(Channel channel, double polar, double dw);

/// Solid-angle integral of the channel cross section with the interference term
/// removed, in units of sigma_0. Adaptive Gauss-Kronrod in the polar angle.
double total_xsec_no_interference(Channel channel, const ScatterConfig& cfg,
                                  double rel_tol = 1e-12);

}  // namespace ionfringe
