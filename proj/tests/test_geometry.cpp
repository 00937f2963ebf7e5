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

#include <cmath>
#include <random>

#include "doctest.h"
#include "ionfringe/constants.hpp"
#include "ionfringe/error.hpp"
#include "ionfringe/geometry.hpp"

using namespace ionfringe;
namespace k = ionfringe::constants;

namespace {

BeamGeometry reference_beam() {
  return BeamGeometry::make(62.0 * k::deg, 194.2e-9, perpendicular_polarization());
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("incident wavevector on the axes") {
  const double lam = 500e-9;
  const double kk = 2.0 * k::pi / lam;
  // Theta = 0 is excluded by validation; use a tiny angle for the axial limit.
  const Vec3 near_axis = k_in_vector(BeamGeometry::make(1e-9, lam, perpendicular_polarization()));
  CHECK(near_axis.z == doctest::Approx(kk).epsilon(1e-12));
  const Vec3 side = k_in_vector(BeamGeometry::make(k::pi / 2.0, lam, perpendicular_polarization()));
  CHECK(side.x == doctest::Approx(kk).epsilon(1e-12));
  CHECK(std::abs(side.z) < 1e-9 * kk);
}

TEST_CASE("reference beam: magnitude and Z component") {
  const BeamGeometry beam = reference_beam();
  const Vec3 kin = k_in_vector(beam);
  const double kk = 2.0 * k::pi / 194.2e-9;
  CHECK(kin.norm() == doctest::Approx(kk).epsilon(1e-14));
  CHECK(kin.z == doctest::Approx(kk * std::cos(62.0 * k::deg)).epsilon(1e-14));
  CHECK(kin.y == 0.0);
}

TEST_CASE("beam validation") {
  CHECK_THROWS_AS(BeamGeometry::make(0.0, 1e-7, perpendicular_polarization()), DomainError);
  CHECK_THROWS_AS(BeamGeometry::make(k::pi, 1e-7, perpendicular_polarization()), DomainError);
  CHECK_THROWS_AS(BeamGeometry::make(1.0, -1e-7, perpendicular_polarization()), DomainError);
  CHECK_THROWS_AS(BeamGeometry::make(1.0, 1e-7, Vec3{0.0, 2.0, 0.0}), DomainError);
  // Polarization along k_in is not transverse.
  CHECK_THROWS_AS(BeamGeometry::make(1.0, 1e-7, Vec3{std::sin(1.0), 0.0, std::cos(1.0)}),
                  DomainError);
  CHECK_NOTHROW(BeamGeometry::make(1.0, 1e-7, in_plane_polarization(1.0)));
}

TEST_CASE("outgoing wavevector") {
  const BeamGeometry beam = reference_beam();
  const Vec3 kin = k_in_vector(beam);
  SUBCASE("forward direction is exactly k_in") {
    const Vec3 kout = k_out_vector(beam, {0.0, 0.0});
    CHECK(kout.x == kin.x);
    CHECK(kout.y == kin.y);
    CHECK(kout.z == kin.z);
    const Vec3 q = scattering_vector(kin, kout);
    CHECK(q.norm() == 0.0);
  }
  SUBCASE("in-plane rotation lowers the polar angle by phi") {
    const double phi = 20.0 * k::deg;
    const Vec3 kout = k_out_vector(beam, {phi, 0.0});
    const double polar = std::atan2(kout.x, kout.z);
    CHECK(polar == doctest::Approx(62.0 * k::deg - phi).epsilon(1e-13));
    CHECK(kout.y == doctest::Approx(0.0));
  }
  SUBCASE("tilt toward +Y") {
    const double Phi = 10.0 * k::deg;
    const Vec3 kout = k_out_vector(beam, {0.0, Phi});
    CHECK(kout.y / kout.norm() == doctest::Approx(std::sin(Phi)).epsilon(1e-13));
  }
  SUBCASE("elastic magnitude everywhere") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int i = 0; i < 200; ++i) {
      const Vec3 kout = k_out_vector(beam, {u(gen), u(gen)});
      CHECK(kout.norm() == doctest::Approx(kin.norm()).epsilon(1e-13));
    }
  }
}

TEST_CASE("scattering vector rejects inelastic input") {
  const Vec3 a{0.0, 0.0, 1.0};
  CHECK_THROWS_AS(scattering_vector(a, Vec3{0.0, 0.0, 1.001}), DomainError);
  CHECK_NOTHROW(scattering_vector(a, Vec3{0.0, 1.0, 0.0}));
}

TEST_CASE("atom frame is right-handed and orthonormal") {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(0.05, k::pi - 0.05);
  std::uniform_real_distribution<double> a(0.0, 2.0 * k::pi);
  for (int i = 0; i < 100; ++i) {
    const double theta = u(gen);
    const double alpha = a(gen);
    const Vec3 eps = std::cos(alpha) * perpendicular_polarization() +
                     std::sin(alpha) * in_plane_polarization(theta);
    const BeamGeometry beam = BeamGeometry::make(theta, 3e-7, eps);
    const Frame f = atom_frame(beam);
    CHECK(f.x.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.y.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(dot(f.x, f.y)) < 1e-12);
    CHECK(std::abs(dot(f.y, f.z)) < 1e-12);
    CHECK(std::abs(dot(f.z, f.x)) < 1e-12);
    CHECK((cross(f.x, f.y) - f.z).norm() < 1e-12);
    CHECK((f.x - beam.k_hat()).norm() < 1e-12);
    CHECK((f.z - eps).norm() < 1e-12);
  }
}

TEST_CASE("atom-frame angles") {
  const BeamGeometry beam = reference_beam();
  const Frame f = atom_frame(beam);
  SUBCASE("forward scattering lies on the equator at zero azimuth") {
    const AtomFrameAngles ang = atom_angles(k_out_vector(beam, {0.0, 0.0}), f);
    CHECK(ang.polar == doctest::Approx(k::pi / 2.0).epsilon(1e-14));
    CHECK(ang.azimuth == doctest::Approx(0.0));
  }
  SUBCASE("perpendicular polarization keeps the in-plane detector on the equator") {
    for (double phi : {-0.5, 0.1, 0.3, 0.7}) {
      const AtomFrameAngles ang = atom_angles(k_out_vector(beam, {phi, 0.0}), f);
      CHECK(ang.polar == doctest::Approx(k::pi / 2.0).epsilon(1e-13));
    }
  }
  SUBCASE("polar angle matches the direct dot product") {
    const Vec3 kout = k_out_vector(beam, {0.4, 0.3});
    const AtomFrameAngles ang = atom_angles(kout, f);
    CHECK(std::cos(ang.polar) == doctest::Approx(dot(kout.normalized(), beam.eps_in)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(atom_angles(Vec3{0.0, 0.0, 0.0}, f), DomainError);
}

TEST_CASE("outgoing polarization basis") {
  const BeamGeometry beam = BeamGeometry::make(1.1, 3e-7, in_plane_polarization(1.1));
  const Frame f = atom_frame(beam);
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  for (int i = 0; i < 100; ++i) {
    const Vec3 kout = k_out_vector(beam, {u(gen), u(gen)});
    const PolarizationBasis b = polarization_basis(atom_angles(kout, f), f);
    const Vec3 khat = kout.normalized();
    CHECK(b.pi.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(b.sigma.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(dot(b.pi, khat)) < 1e-12);
    CHECK(std::abs(dot(b.sigma, khat)) < 1e-12);
    CHECK(std::abs(dot(b.pi, b.sigma)) < 1e-12);
    // The sigma polarization has no component along the atom's z axis.
    CHECK(std::abs(dot(b.sigma, f.z)) < 1e-12);
  }
}

TEST_CASE("fringe phase derivative gives the period lambda / (d sin Theta)") {
  const BeamGeometry beam = reference_beam();
  const double d = 4.17e-6;
  const Vec3 kin = k_in_vector(beam);
  const double h = 1e-6;
  const double p_plus = fringe_phase(scattering_vector(kin, k_out_vector(beam, {h, 0.0})), d);
  const double p_minus = fringe_phase(scattering_vector(kin, k_out_vector(beam, {-h, 0.0})), d);
  const double slope = (p_plus - p_minus) / (2.0 * h);
  const double period = 2.0 * k::pi / std::abs(slope);
  CHECK(period == doctest::Approx(194.2e-9 / (d * std::sin(62.0 * k::deg))).epsilon(1e-6));
  CHECK(period / k::deg == doctest::Approx(3.022).epsilon(1e-3));
}

}  // TEST_SUITE
