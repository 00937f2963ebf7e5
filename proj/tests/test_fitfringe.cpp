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
#include "ionfringe/fitfringe.hpp"
#include "ionfringe/thermal.hpp"

using namespace ionfringe;
namespace k = ionfringe::constants;

namespace {

constexpr double kMass = 197.967 * k::amu;

FringeModelFixed reference_fixed(Channel ch = Channel::PiDetected) {
  const double wz = 2.0 * k::pi * 7e5;
  const ModeSpectrum s = mode_spectrum({kMass, k::e, 2.0 * wz, wz});
  const BeamGeometry beam = BeamGeometry::make(62.0 * k::deg, 194.2e-9, perpendicular_polarization());
  return FringeModelFixed::make(beam, s, kMass, ch);
}

std::vector<double> phi_grid(std::size_t n = 200) {
  std::vector<double> phi(n);
  for (std::size_t i = 0; i < n; ++i) phi[i] = (15.0 + 30.0 * i / (n - 1.0)) * k::deg;
  return phi;
}

Profile exact_profile(const FringeModelParams& p, const FringeModelFixed& fixed) {
  Profile prof;
  prof.phi = phi_grid();
  prof.value = model_profile(prof.phi, p, fixed);
  prof.std_error.assign(prof.phi.size(), 0.0);
  return prof;
}

Profile poisson_profile(const FringeModelParams& p, const FringeModelFixed& fixed, std::uint64_t seed) {
  Profile prof = exact_profile(p, fixed);
  std::mt19937_64 gen(seed);
  for (std::size_t i = 0; i < prof.value.size(); ++i) {
    std::poisson_distribution<long> d(prof.value[i]);
    prof.value[i] = static_cast<double>(d(gen));
    prof.std_error[i] = std::sqrt(prof.value[i]);
  }
  prof.counts = true;
  return prof;
}

}  // namespace

TEST_SUITE("fitfringe") {

TEST_CASE("model with unit visibility follows the channel cross section") {
  const FringeModelFixed fixed = reference_fixed();
  const FringeModelParams p{2.0, 0.5, 1e-3, 1.0};
  const auto phi = phi_grid(7);
  const auto model = model_profile(phi, p, fixed);
  const Vec3 k_in = k_in_vector(fixed.beam);
  const Frame frame = atom_frame(fixed.beam);
  const ThermalState st{{1e-3, 1e-3, fixed.temperature_ratio * 1e-3}, fixed.spectrum, kMass};
  const ScatterConfig sc = ScatterConfig::make(194.2e-9, 1.0);
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const Vec3 k_out = k_out_vector(fixed.beam, {phi[i], 0.0});
    const Vec3 q = scattering_vector(k_in, k_out);
    const double xs = xsec_detected(Channel::PiDetected, atom_angles(k_out, frame).polar,
                                    fringe_phase(q, fixed.separation), debye_waller(q, st), sc);
    CHECK(model[i] == doctest::Approx(2.0 * 4.0 * k::pi * xs + 0.5).epsilon(1e-12));
  }
  CHECK(fixed.temperature_ratio == doctest::Approx(temperature_ratio(62.0 * k::deg)));
}

TEST_CASE("noiseless profiles are recovered exactly") {
  const FringeModelFixed fixed = reference_fixed();
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const FringeModelParams truth{100.0 + 900.0 * u(gen), 0.0, (0.3 + 2.5 * u(gen)) * 1e-3,
                                  0.3 + 0.7 * u(gen)};
    const Profile prof = exact_profile(truth, fixed);
    const FitResult r = fit_profile(prof, {0.0, 0.0, 2.0 * truth.T_X, 1.0}, fixed);
    REQUIRE(r.converged);
    CHECK(r.params.T_X == doctest::Approx(truth.T_X).epsilon(1e-6));
    CHECK(r.params.visibility == doctest::Approx(truth.visibility).epsilon(1e-6));
    CHECK(r.params.amplitude == doctest::Approx(truth.amplitude).epsilon(1e-6));
    CHECK(r.params.background == 0.0);
    CHECK_FALSE(r.free[1]);
  }
}

TEST_CASE("rescaling the data rescales only the amplitude") {
  const FringeModelFixed fixed = reference_fixed();
  const FringeModelParams truth{500.0, 0.0, 1.1e-3, 0.7};
  Profile prof = poisson_profile(truth, fixed, 5);
  prof.counts = false;
  const FitResult a = fit_profile(prof, {0.0, 0.0, 2e-3, 1.0}, fixed);
  for (auto& v : prof.value) v *= 10.0;
  for (auto& e : prof.std_error) e *= 10.0;
  const FitResult b = fit_profile(prof, {0.0, 0.0, 2e-3, 1.0}, fixed);
  CHECK(b.params.amplitude == doctest::Approx(10.0 * a.params.amplitude).epsilon(1e-6));
  CHECK(b.params.T_X == doctest::Approx(a.params.T_X).epsilon(1e-6));
  CHECK(b.params.visibility == doctest::Approx(a.params.visibility).epsilon(1e-6));
  CHECK(b.one_sigma.T_X == doctest::Approx(a.one_sigma.T_X).epsilon(1e-4));
}

TEST_CASE("scaling the standard errors changes chi2 but not the scaled errors") {
  const FringeModelFixed fixed = reference_fixed();
  Profile prof = poisson_profile({500.0, 0.0, 1.1e-3, 0.7}, fixed, 6);
  prof.counts = false;
  const FitResult a = fit_profile(prof, {0.0, 0.0, 2e-3, 1.0}, fixed);
  for (auto& e : prof.std_error) e *= 2.0;
  const FitResult b = fit_profile(prof, {0.0, 0.0, 2e-3, 1.0}, fixed);
  CHECK(b.chi2 == doctest::Approx(0.25 * a.chi2).epsilon(1e-6));
  CHECK(b.one_sigma.T_X == doctest::Approx(a.one_sigma.T_X).epsilon(1e-4));
  CHECK(b.params.T_X == doctest::Approx(a.params.T_X).epsilon(1e-6));
}

TEST_CASE("count profiles give calibrated errors") {
  const FringeModelFixed fixed = reference_fixed();
  const FringeModelParams truth{500.0, 0.0, 1.08e-3, 0.71};
  double sum_pull_t = 0.0, sum_pull_v = 0.0, sum_sq_t = 0.0;
  const int n = 40;
  for (int s = 0; s < n; ++s) {
    const FitResult r = fit_profile(poisson_profile(truth, fixed, 1000 + s), {0.0, 0.0, 2e-3, 1.0}, fixed);
    REQUIRE(r.converged);
    const double pt = (r.params.T_X - truth.T_X) / r.one_sigma.T_X;
    sum_pull_t += pt;
    sum_sq_t += pt * pt;
    sum_pull_v += (r.params.visibility - truth.visibility) / r.one_sigma.visibility;
    CHECK(r.reduced_chi2 == doctest::Approx(1.0).epsilon(0.35));
  }
  CHECK(std::abs(sum_pull_t / n) < 0.5);
  CHECK(std::abs(sum_pull_v / n) < 0.5);
  CHECK(std::sqrt(sum_sq_t / n) == doctest::Approx(1.0).epsilon(0.35));
}

TEST_CASE("background and visibility together are not identifiable") {
  const FringeModelFixed fixed = reference_fixed();
  const Profile prof = exact_profile({500.0, 20.0, 1e-3, 0.7}, fixed);
  FitOptions opt;
  opt.fit_background = true;
  opt.fit_visibility = true;
  CHECK_THROWS_AS(fit_profile(prof, {400.0, 10.0, 2e-3, 0.9}, fixed, opt), NumericError);

  opt.fit_visibility = false;
  const FitResult r = fit_profile(prof, {400.0, 10.0, 2e-3, 0.7}, fixed, opt);
  CHECK(r.params.background == doctest::Approx(20.0).epsilon(1e-5));
  CHECK(r.params.T_X == doctest::Approx(1e-3).epsilon(1e-6));
}

TEST_CASE("input validation") {
  const FringeModelFixed fixed = reference_fixed();
  Profile prof = exact_profile({500.0, 0.0, 1e-3, 0.7}, fixed);
  Profile tiny = prof;
  tiny.phi.resize(5);
  tiny.value.resize(5);
  tiny.std_error.resize(5);
  CHECK_THROWS_AS(fit_profile(tiny, {}, fixed), DomainError);
  Profile nan = prof;
  nan.value[3] = std::nan("");
  CHECK_THROWS_AS(fit_profile(nan, {}, fixed), DomainError);
  Profile mixed = prof;
  mixed.std_error[0] = 1.0;
  CHECK_THROWS_AS(fit_profile(mixed, {}, fixed), DomainError);
  CHECK_THROWS_AS(extrapolated_visibility(FitResult{}, fixed), DomainError);
}

TEST_CASE("visibility at phi = 0") {
  const FringeModelFixed fixed = reference_fixed();
  const FitResult r = fit_profile(exact_profile({500.0, 0.0, 1.08e-3, 0.71}, fixed),
                                  {0.0, 0.0, 2e-3, 1.0}, fixed);
  const VisibilityEstimate v = extrapolated_visibility(r, fixed);
  CHECK(v.value == doctest::Approx(0.71).epsilon(1e-6));
  // phi = 0 is forward scattering: no momentum transfer.
  CHECK(v.dw_at_zero == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(v.model_at_zero <= v.value * v.dw_at_zero + 1e-12);
}

TEST_CASE("saturation limit on visibility") {
  CHECK(saturation_visibility_correction(0.0) == 1.0);
  CHECK(saturation_visibility_correction(0.078) == doctest::Approx(0.928).epsilon(1e-3));
  CHECK_THROWS_AS(saturation_visibility_correction(-0.1), DomainError);
}

}  // TEST_SUITE
