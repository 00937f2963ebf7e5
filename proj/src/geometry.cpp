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

#include "ionfringe/geometry.hpp"

#include <cmath>
#include <numbers>

#include "ionfringe/error.hpp"

namespace ionfringe {

BeamGeometry BeamGeometry::make(double theta_in, double wavelength, const Vec3& eps_in) {
  if (!(theta_in > 0.0 && theta_in < std::numbers::pi)) {
    throw DomainError("beam angle must lie strictly between 0 and pi");
  }
  if (!(wavelength > 0.0) || !std::isfinite(wavelength)) {
    throw DomainError("wavelength must be positive");
  }
  if (std::abs(eps_in.norm() - 1.0) > 1e-10) {
    throw DomainError("incident polarization must be a unit vector");
  }
  BeamGeometry beam{theta_in, wavelength, eps_in};
  if (std::abs(dot(eps_in, beam.k_hat())) > 1e-10) {
    throw DomainError("incident polarization must be perpendicular to k_in");
  }
  return beam;
}

double BeamGeometry::wavenumber() const { return 2.0 * std::numbers::pi / wavelength; }

Vec3 BeamGeometry::k_hat() const { return {std::sin(theta_in), 0.0, std::cos(theta_in)}; }

Vec3 perpendicular_polarization() { return kUnitY; }

Vec3 in_plane_polarization(double theta_in) {
  return {std::cos(theta_in), 0.0, -std::sin(theta_in)};
}

Vec3 k_in_vector(const BeamGeometry& beam) { return beam.wavenumber() * beam.k_hat(); }

Vec3 k_out_vector(const BeamGeometry& beam, DetectorDirection det) {
  if (det.phi == 0.0 && det.Phi == 0.0) {
    return k_in_vector(beam);
  }
  const double polar = beam.theta_in - det.phi;
  const Vec3 in_plane{std::sin(polar), 0.0, std::cos(polar)};
  const Vec3 dir = (std::cos(det.Phi) * in_plane + std::sin(det.Phi) * kUnitY).normalized();
  return beam.wavenumber() * dir;
}

Vec3 scattering_vector(const Vec3& k_in, const Vec3& k_out) {
  const double a = k_in.norm();
  const double b = k_out.norm();
  const double scale = std::max(a, b);
  if (scale > 0.0 && std::abs(a - b) > 1e-9 * scale) {
    throw DomainError("scattering is not elastic: |k_out| != |k_in|");
  }
  return k_out - k_in;
}

Frame atom_frame(const BeamGeometry& beam) {
  const Vec3 x = beam.k_hat();
  const Vec3 z = beam.eps_in;
  if (std::abs(dot(x, z)) > 1e-10) {
    throw DomainError("incident polarization must be perpendicular to k_in");
  }
  return {x, cross(z, x), z};
}

AtomFrameAngles atom_angles(const Vec3& k_out, const Frame& frame) {
  const double n = k_out.norm();
  if (!(n > 0.0)) {
    throw DomainError("k_out must be nonzero");
  }
  const Vec3 local = frame.to_local(k_out / n);
  // atan2 on the full vector stays accurate near the poles, unlike acos.
  const double polar = std::atan2(std::hypot(local.x, local.y), local.z);
  return {polar, std::atan2(local.y, local.x)};
}

PolarizationBasis polarization_basis(AtomFrameAngles angles, const Frame& frame) {
  const double ct = std::cos(angles.polar);
  const double st = std::sin(angles.polar);
  const double cp = std::cos(angles.azimuth);
  const double sp = std::sin(angles.azimuth);
  const Vec3 pi_local{-ct * cp, -ct * sp, st};
  const Vec3 sigma_local{-sp, cp, 0.0};
  return {frame.to_trap(pi_local), frame.to_trap(sigma_local)};
}

}  // namespace ionfringe
