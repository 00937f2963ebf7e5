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

#include <omp.h>

#include <cmath>
#include <random>

#include "doctest.h"
#include "ionfringe/constants.hpp"
#include "ionfringe/error.hpp"
#include "ionfringe/modes.hpp"
#include "ionfringe/thermal.hpp"

using namespace ionfringe;
namespace k = ionfringe::constants;

namespace {

constexpr double kMass = 197.967 * k::amu;

ModeSpectrum reference_spectrum() {
  const double wz = 2.0 * k::pi * 7e5;
  return mode_spectrum({kMass, k::e, 2.0 * wz, wz});
}

// Wavevector transfer of a 194 nm photon scattered through 90 degrees.
double typical_q() { return std::sqrt(2.0) * 2.0 * k::pi / 194.2e-9; }

}  // namespace

TEST_SUITE("thermal") {

TEST_CASE("occupation and coth limits") {
  const double w = 2.0 * k::pi * 1e6;
  CHECK(mean_occupation(w, 0.0) == 0.0);
  CHECK(coth_factor(w, 0.0) == 1.0);
  for (double T : {1e-5, 1e-4, 1e-3, 1e-2}) {
    CHECK(coth_factor(w, T) == doctest::Approx(2.0 * mean_occupation(w, T) + 1.0).epsilon(1e-12));
  }
  // High temperature: n -> kT / hbar w - 1/2.
  const double T = 1.0;
  CHECK(mean_occupation(w, T) ==
        doctest::Approx(k::kB * T / (k::hbar * w) - 0.5).epsilon(1e-6));
  CHECK_THROWS_AS(mean_occupation(0.0, 1e-3), DomainError);
  CHECK_THROWS_AS(coth_factor(w, -1.0), DomainError);
}

TEST_CASE("Debye-Waller zero temperature and classical limits") {
  const ModeSpectrum s = reference_spectrum();
  const Vec3 q{0.3 * typical_q(), -0.2 * typical_q(), 0.9 * typical_q()};
  const ThermalState cold{{0.0, 0.0, 0.0}, s, kMass};
  double zero_point = 0.0;
  const double qs[3] = {q.x, q.y, q.z};
  for (int i = 0; i < 3; ++i) zero_point += 0.5 * qs[i] * qs[i] * k::hbar / (kMass * s.rel[i]);
  CHECK(debye_waller(q, cold) == doctest::Approx(std::exp(-zero_point)).epsilon(1e-12));

  // Classical exponent q^2 kB T / (m w^2) per axis once n > 50.
  for (int i = 0; i < 3; ++i) {
    const double T = 60.0 * k::hbar * s.rel[i] / k::kB;
    REQUIRE(mean_occupation(s.rel[i], T) > 50.0);
    Vec3 qi{};
    (i == 0 ? qi.x : i == 1 ? qi.y : qi.z) = typical_q();
    const ThermalState hot{{T, T, T}, s, kMass};
    const double classical = typical_q() * typical_q() * k::kB * T / (kMass * s.rel[i] * s.rel[i]);
    CHECK(debye_waller_exponent(qi, hot) == doctest::Approx(classical).epsilon(0.005));
  }
}

TEST_CASE("Debye-Waller decreases with temperature and wavevector") {
  const ModeSpectrum s = reference_spectrum();
  const Vec3 q{0.5 * typical_q(), 0.1 * typical_q(), 0.7 * typical_q()};
  double prev = 1.0;
  for (double T = 0.0; T < 5e-3; T += 2.5e-4) {
    const double dw = debye_waller(q, {{T, T, 1.5 * T}, s, kMass});
    CHECK(dw > 0.0);
    CHECK(dw <= prev);
    prev = dw;
  }
  const ThermalState st{{1e-3, 1e-3, 1.76e-3}, s, kMass};
  prev = 1.0;
  for (double f = 0.1; f < 2.0; f += 0.1) {
    const double dw = debye_waller(f * q, st);
    CHECK(dw < prev);
    prev = dw;
  }
  CHECK(debye_waller({}, st) == 1.0);
}

TEST_CASE("closed form against truncated Fock diagonalization") {
  const ModeSpectrum s = reference_spectrum();
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 3e-3);
  for (int i = 0; i < 10; ++i) {
    const double T = u(gen);
    const Vec3 qz{0.0, 0.0, typical_q() * (0.2 + u(gen) / 3e-3)};
    const double closed = debye_waller(qz, {{0.0, 0.0, T}, s, kMass});
    const double fock = dw_oracle_fock_1d(qz.z, s.stretch(), T, 0.5 * kMass);
    CHECK(fock == doctest::Approx(closed).epsilon(1e-8));
  }
}

TEST_CASE("Fock truncation guard") {
  const double w = 2.0 * k::pi * 1e6;
  CHECK_THROWS_AS(dw_oracle_fock_1d(typical_q(), w, 1e-3, kMass, 5), NumericError);
  CHECK(thermal_truncation(w, 0.0) == 0);
  const std::size_t n = thermal_truncation(w, 1e-3);
  const double x = std::exp(-k::hbar * w / (k::kB * 1e-3));
  CHECK((1.0 - x) * std::pow(x, static_cast<double>(n)) < 1e-12);
  CHECK((1.0 - x) * std::pow(x, static_cast<double>(n - 1)) >= 1e-12);
}

TEST_CASE("closure sum is one") {
  for (double eta : {0.05, 0.2, 0.6}) {
    for (unsigned n : {0u, 3u, 20u}) CHECK(closure_sum(eta, n, n + 200) == doctest::Approx(1.0).epsilon(1e-10));
  }
  CHECK(closure_sum(0.0, 4, 10) == doctest::Approx(1.0));
  CHECK(closure_sum(0.5, 0, 0) == doctest::Approx(std::exp(-0.25)).epsilon(1e-14));
}

TEST_CASE("temperature ratio") {
  CHECK(temperature_ratio(45.0 * k::deg) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(temperature_ratio(62.0 * k::deg) == doctest::Approx(1.76).epsilon(0.001));
  for (double deg = 5.0; deg < 90.0; deg += 5.0) {
    CHECK(temperature_ratio(deg * k::deg) * temperature_ratio((90.0 - deg) * k::deg) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
  double prev = 0.0;
  for (double deg = 1.0; deg < 90.0; deg += 1.0) {
    const double r = temperature_ratio(deg * k::deg);
    CHECK(r > prev);
    prev = r;
  }
  CHECK_THROWS_AS(temperature_ratio(0.0), DomainError);
  CHECK_THROWS_AS(temperature_ratio(0.5 * k::pi), DomainError);
}

TEST_CASE("Monte Carlo oracle: serial, parallel and thread count agree") {
  const ThermalState st{{1.08e-3, 1.08e-3, 1.9e-3}, reference_spectrum(), kMass};
  const Vec3 q{0.4 * typical_q(), 0.0, 0.8 * typical_q()};
  const std::size_t n = 100003;
  const McEstimate serial = dw_oracle_gaussian_mc_serial(q, st, n, 42);
  const int saved = omp_get_max_threads();
  for (int threads : {1, 2, 4}) {
    omp_set_num_threads(threads);
    const McEstimate par = dw_oracle_gaussian_mc(q, st, n, 42);
    CHECK(par.mean == serial.mean);
    CHECK(par.std_error == serial.std_error);
  }
  omp_set_num_threads(saved);
  CHECK(std::abs(serial.mean - debye_waller(q, st)) < 4.0 * serial.std_error);
  CHECK(dw_oracle_gaussian_mc_serial(q, st, n, 43).mean != serial.mean);
  CHECK_THROWS_AS(dw_oracle_gaussian_mc(q, st, 1, 1), DomainError);
}

TEST_CASE("invalid thermal state") {
  const ModeSpectrum s = reference_spectrum();
  const ThermalState negative{{-1.0, 0.0, 0.0}, s, kMass};
  const ThermalState massless{{0.0, 0.0, 0.0}, s, 0.0};
  CHECK_THROWS_AS(negative.validate(), DomainError);
  CHECK_THROWS_AS(massless.validate(), DomainError);
}

}  // TEST_SUITE
