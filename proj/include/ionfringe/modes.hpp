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

#include <array>

namespace ionfringe {

/// Two identical ions in a cylindrically symmetric harmonic trap.
struct TrapConfig {
  double mass = 0.0;     // kg
  double charge = 0.0;   // C
  double omega_R = 0.0;  // rad/s, radial secular frequency
  double omega_Z = 0.0;  // rad/s, axial secular frequency

  /// Throws DomainError unless mass > 0, charge != 0 and omega_R > omega_Z > 0.
  void validate() const;
};

/// Normal-mode frequencies, ordered (X, Y, Z), and the equilibrium separation.
struct ModeSpectrum {
  std::array<double, 3> com{};  // (omega_R, omega_R, omega_Z)
  std::array<double, 3> rel{};  // (omega_T, omega_T, omega_S)
  double separation = 0.0;      // m

  double stretch() const { return rel[2]; }
  double tilt() const { return rel[0]; }
};

/// Occupation numbers of the six modes.
struct ModeQuanta {
  std::array<unsigned, 3> com{};
  std::array<unsigned, 3> rel{};
};

/// d = [e^2 / (2 pi eps0 m omega_Z^2)]^(1/3).
double equilibrium_separation(const TrapConfig& trap);

/// Axial frequency that gives separation `d` for the given mass and charge.
double axial_frequency_for_separation(double mass, double charge, double d);

/// Throws DomainError if omega_R <= omega_Z (the pair would not align on Z).
ModeSpectrum mode_spectrum(const TrapConfig& trap);

/// Eigenvalue of the harmonic two-ion Hamiltonian, including zero-point terms. J.
double mode_energy(const ModeQuanta& n, const ModeSpectrum& spectrum);

/// Photon recoil energy (hbar k)^2 / 2m with k = 2 pi / wavelength. J.
double recoil_energy(double mass, double wavelength);

/// sqrt(R E_i) / (hbar gamma / 2). Small values mean the energy denominators
/// are nearly constant over the states that matter, so closure applies.
double closure_validity_margin(double recoil, double initial_energy, double gamma);

}  // namespace ionfringe
