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
#include "ionfringe/modes.hpp"

using namespace ionfringe;
namespace k = ionfringe::constants;

namespace {

constexpr double kHgMass = 197.967 * k::amu;

TrapConfig trap_with(double wz, double wr) { return {kHgMass, k::e, wr, wz}; }

// Two ions on the Z axis at +-s/2: the axial force on ion 1 (trap pull plus
// Coulomb push) vanishes at equilibrium. Bisection on the force.
double brute_force_separation(const TrapConfig& t) {
  const double coulomb = t.charge * t.charge / (4.0 * k::pi * k::eps0);
  auto force = [&](double s) { return -t.mass * t.omega_Z * t.omega_Z * 0.5 * s + coulomb / (s * s); };
  double lo = 1e-9, hi = 1e-3;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (force(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_SUITE("modes") {

TEST_CASE("separation closed form against force balance") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> f(1e5, 5e6);
  std::uniform_real_distribution<double> m(6.0, 200.0);
  for (int i = 0; i < 20; ++i) {
    TrapConfig t{m(gen) * k::amu, k::e, 0.0, 2.0 * k::pi * f(gen)};
    t.omega_R = 1.5 * t.omega_Z;
    CHECK(equilibrium_separation(t) == doctest::Approx(brute_force_separation(t)).epsilon(1e-9));
  }
}

TEST_CASE("separation scaling and inverse") {
  const TrapConfig t = trap_with(2.0 * k::pi * 7e5, 2.0 * k::pi * 1.4e6);
  const TrapConfig t2 = trap_with(2.0 * 2.0 * k::pi * 7e5, 2.0 * 2.0 * k::pi * 1.4e6);
  CHECK(equilibrium_separation(t2) / equilibrium_separation(t) ==
        doctest::Approx(std::pow(2.0, -2.0 / 3.0)).epsilon(1e-12));

  const double wz = axial_frequency_for_separation(kHgMass, k::e, 4.17e-6);
  CHECK(wz / (2.0 * k::pi) == doctest::Approx(7.0e5).epsilon(0.01));
  CHECK(equilibrium_separation(trap_with(wz, 2.0 * wz)) == doctest::Approx(4.17e-6).epsilon(1e-12));

  double prev = 1.0;
  for (double w = 1e5; w < 1e7; w *= 1.5) {
    const double d = equilibrium_separation(trap_with(w, 2.0 * w));
    CHECK(d < prev);
    prev = d;
  }
}

TEST_CASE("mode spectrum") {
  const double wz = 2.0 * k::pi * 7e5;
  const ModeSpectrum s = mode_spectrum(trap_with(wz, 2.0 * wz));
  CHECK(s.stretch() / wz == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
  CHECK(s.tilt() / wz == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
  CHECK(s.com[0] == 2.0 * wz);
  CHECK(s.com[1] == 2.0 * wz);
  CHECK(s.com[2] == wz);

  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> u(1.0001, 10.0);
  for (int i = 0; i < 50; ++i) {
    const double wr = u(gen) * wz;
    const ModeSpectrum sp = mode_spectrum(trap_with(wz, wr));
    CHECK(sp.tilt() * sp.tilt() + wz * wz == doctest::Approx(wr * wr).epsilon(1e-12));
  }
  const ModeSpectrum near = mode_spectrum(trap_with(wz, wz * (1.0 + 1e-9)));
  CHECK(near.tilt() < 1e-4 * wz);
}

TEST_CASE("trap validation") {
  const double wz = 2.0 * k::pi * 7e5;
  CHECK_THROWS_WITH_AS(mode_spectrum(trap_with(wz, wz)),
                       doctest::Contains("ions would not align on Z axis"), DomainError);
  CHECK_THROWS_AS(mode_spectrum(trap_with(wz, 0.5 * wz)), DomainError);
  CHECK_THROWS_AS(mode_spectrum(TrapConfig{0.0, k::e, 2.0 * wz, wz}), DomainError);
  CHECK_THROWS_AS(mode_spectrum(TrapConfig{kHgMass, 0.0, 2.0 * wz, wz}), DomainError);
}

TEST_CASE("mode energies") {
  const double wz = 2.0 * k::pi * 7e5;
  const ModeSpectrum s = mode_spectrum(trap_with(wz, 2.0 * wz));
  const double zero = mode_energy({}, s);
  CHECK(zero == doctest::Approx(k::hbar * (wz / 2.0 + s.com[0] + s.stretch() / 2.0 + s.tilt())).epsilon(1e-14));
  ModeQuanta n;
  n.rel[2] = 1;
  CHECK(mode_energy(n, s) - zero == doctest::Approx(k::hbar * s.stretch()).epsilon(1e-10));
  ModeQuanta ones{{1, 1, 1}, {1, 1, 1}};
  const double r3 = std::sqrt(3.0);
  CHECK(mode_energy(ones, s) ==
        doctest::Approx(k::hbar * wz * (7.5 + 4.5 * r3)).epsilon(1e-13));
}

TEST_CASE("recoil energy") {
  const double r = recoil_energy(kHgMass, 194.2e-9);
  CHECK(r / k::h == doctest::Approx(26.7e3).epsilon(0.01));
  CHECK(recoil_energy(2.0 * kHgMass, 194.2e-9) == doctest::Approx(0.5 * r).epsilon(1e-14));
  CHECK(recoil_energy(kHgMass, 2.0 * 194.2e-9) == doctest::Approx(0.25 * r).epsilon(1e-14));
  CHECK_THROWS_AS(recoil_energy(0.0, 1e-7), DomainError);
}

TEST_CASE("closure validity margin") {
  const double gamma = 2.0 * k::pi * 70e6;
  const double R = k::h * 26.7e3;
  const double Ei = k::hbar * gamma;
  const double ratio = closure_validity_margin(R, Ei, gamma);
  CHECK(std::sqrt(R * Ei) / k::h == doctest::Approx(1.4e6).epsilon(0.05));
  CHECK(ratio == doctest::Approx(0.04).epsilon(0.05));
  CHECK(closure_validity_margin(R, 0.0, gamma) == 0.0);
  CHECK(closure_validity_margin(R, 4.0 * Ei, gamma) == doctest::Approx(2.0 * ratio).epsilon(1e-14));
  CHECK_THROWS_AS(closure_validity_margin(R, Ei, 0.0), DomainError);
}

}  // TEST_SUITE
