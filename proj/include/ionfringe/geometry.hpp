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

#include "ionfringe/vec3.hpp"

namespace ionfringe {

// Trap frame: Z is the ion axis, k_in lies in the X-Z plane at angle theta_in
// from +Z. Atom frame: z along the incident polarization, x along k_in.

/// Incident beam. Construct through `make` to get validation.
struct BeamGeometry {
  double theta_in = 0.0;    // rad, angle between k_in and +Z
  double wavelength = 0.0;  // m
  Vec3 eps_in;              // unit, perpendicular to k_in

  static BeamGeometry make(double theta_in, double wavelength, const Vec3& eps_in);

  double wavenumber() const;
  Vec3 k_hat() const;
};

/// Polarization along +Y, perpendicular to the X-Z plane (the fringe-producing setup).
Vec3 perpendicular_polarization();
/// Polarization in the X-Z plane, perpendicular to k_in.
Vec3 in_plane_polarization(double theta_in);

/// Detector direction. phi rotates k_out in the X-Z plane away from k_in;
/// Phi tilts it out of the plane toward +Y.
struct DetectorDirection {
  double phi = 0.0;  // rad
  double Phi = 0.0;  // rad
};

/// Spherical angles of k_out in the atom frame.
struct AtomFrameAngles {
  double polar = 0.0;    // rad, from the atom-frame z axis (eps_in)
  double azimuth = 0.0;  // rad, from the atom-frame x axis (k_in)
};

/// Orthonormal right-handed triad, expressed in trap coordinates.
struct Frame {
  Vec3 x;
  Vec3 y;
  Vec3 z;

  Vec3 to_trap(const Vec3& local) const { return local.x * x + local.y * y + local.z * z; }
  Vec3 to_local(const Vec3& v) const { return {dot(v, x), dot(v, y), dot(v, z)}; }
};

struct PolarizationBasis {
  Vec3 pi;     // trap frame
  Vec3 sigma;  // trap frame
};

Vec3 k_in_vector(const BeamGeometry& beam);

/// Elastic outgoing wavevector. At phi = Phi = 0 this is exactly k_in.
/// At Phi = 0 the polar angle from +Z is (theta_in - phi).
Vec3 k_out_vector(const BeamGeometry& beam, DetectorDirection det);

/// q = k_out - k_in. Throws DomainError if the magnitudes differ by more than
/// 1e-9 relative, since the elastic assumption would be broken.
Vec3 scattering_vector(const Vec3& k_in, const Vec3& k_out);

Frame atom_frame(const BeamGeometry& beam);

AtomFrameAngles atom_angles(const Vec3& k_out, const Frame& frame);

PolarizationBasis polarization_basis(AtomFrameAngles angles, const Frame& frame);

/// Interference phase q.d for two ions separated by `separation` along Z.
inline double fringe_phase(const Vec3& q, double separation) { return q.z * separation; }

}  // namespace ionfringe
