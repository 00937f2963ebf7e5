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

#include "ionfringe/modes.hpp"

#include <cmath>

#include "ionfringe/constants.hpp"
#include "ionfringe/error.hpp"

namespace ionfringe {

namespace c = constants;

void TrapConfig::validate() const {
  if (!(mass > 0.0)) throw DomainError("ion mass must be positive");
  if (!(charge != 0.0) || !std::isfinite(charge)) throw DomainError("ion charge must be nonzero");
  if (!(omega_Z > 0.0)) throw DomainError("axial frequency must be positive");
  if (!(omega_R > omega_Z)) {
    throw DomainError("omega_R must exceed omega_Z: ions would not align on Z axis");
  }
}

double equilibrium_separation(const TrapConfig& trap) {
  trap.validate();
  const double q2 = trap.charge * trap.charge;
  return std::cbrt(q2 / (2.0 * c::pi * c::eps0 * trap.mass * trap.omega_Z * trap.omega_Z));
}

double axial_frequency_for_separation(double mass, double charge, double d) {
  if (!(mass > 0.0) || !(d > 0.0) || charge == 0.0) {
    throw DomainError("mass, separation must be positive and charge nonzero");
  }
  return std::sqrt(charge * charge / (2.0 * c::pi * c::eps0 * mass * d * d * d));
}

ModeSpectrum mode_spectrum(const TrapConfig& trap) {
  trap.validate();
  const double wr = trap.omega_R;
  const double wz = trap.omega_Z;
  const double tilt = std::sqrt((wr - wz) * (wr + wz));
  const double stretch = std::sqrt(3.0) * wz;
  return {{wr, wr, wz}, {tilt, tilt, stretch}, equilibrium_separation(trap)};
}

double mode_energy(const ModeQuanta& n, const ModeSpectrum& s) {
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    sum += s.com[i] * (n.com[i] + 0.5);
    sum += s.rel[i] * (n.rel[i] + 0.5);
  }
  return c::hbar * sum;
}

double recoil_energy(double mass, double wavelength) {
  if (!(mass > 0.0) || !(wavelength > 0.0)) {
    throw DomainError("mass and wavelength must be positive");
  }
  const double p = c::hbar * 2.0 * c::pi / wavelength;
  return p * p / (2.0 * mass);
}

double closure_validity_margin(double recoil, double initial_energy, double gamma) {
  if (recoil < 0.0 || initial_energy < 0.0 || !(gamma > 0.0)) {
    throw DomainError("closure margin needs non-negative energies and positive gamma");
  }
  return std::sqrt(recoil * initial_energy) / (0.5 * c::hbar * gamma);
}

}  // namespace ionfringe
