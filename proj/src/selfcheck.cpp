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

#include "ionfringe/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ionfringe/constants.hpp"
#include "ionfringe/error.hpp"
#include "ionfringe/geometry.hpp"
#include "ionfringe/imaging.hpp"
#include "ionfringe/jumps.hpp"
#include "ionfringe/modes.hpp"
#include "ionfringe/rng.hpp"
#include "ionfringe/scatter.hpp"
#include "ionfringe/thermal.hpp"

namespace ionfringe {

namespace {

namespace k = constants;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

CheckOutcome bounded(std::string name, double value, double tol, std::string detail = {}) {
  return {std::move(name), std::isfinite(value) && value <= tol, value, tol, std::move(detail)};
}

struct Setup {
  TrapConfig trap;
  ModeSpectrum spectrum;
  BeamGeometry beam;
  ScatterConfig scatter;
};

Setup default_setup() {
  Setup s;
  s.trap.mass = 197.967 * k::amu;
  s.trap.charge = k::e;
  s.trap.omega_Z = axial_frequency_for_separation(s.trap.mass, s.trap.charge, 4.17e-6);
  s.trap.omega_R = 2.0 * s.trap.omega_Z;
  s.spectrum = mode_spectrum(s.trap);
  s.beam = BeamGeometry::make(62.0 * k::deg, 194.2e-9, perpendicular_polarization());
  s.scatter = ScatterConfig::make(194.2e-9, 2.0 * k::pi * 70e6);
  return s;
}

}  // namespace

std::vector<CheckOutcome> run_selfcheck(std::uint64_t seed) {
  std::vector<CheckOutcome> out;
  const Setup s = default_setup();
  rng::Engine engine(rng::derive_seed(seed, "mc-oracle"));
  std::uniform_real_distribution<double> u(0.0, 1.0);

  {
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double polar = k::pi * u(engine);
      const double phase = 2.0 * k::pi * u(engine);
      const double dw = u(engine);
      const double un = xsec_detected(Channel::Unpolarized, polar, phase, dw, s.scatter);
      const double sum = xsec_detected(Channel::PiDetected, polar, phase, dw, s.scatter) +
                         xsec_detected(Channel::SigmaDetected, polar, phase, dw, s.scatter);
      worst = std::max(worst, std::abs(un - sum) / un);
    }
    out.push_back(bounded("channel sum unpol = pi + sigma", worst, 1e-12));
  }

  {
    const double ratio = s.spectrum.stretch() / s.trap.omega_Z;
    out.push_back(bounded("stretch/axial = sqrt(3)", std::abs(ratio - std::sqrt(3.0)), 1e-12,
                          "ratio " + fmt(ratio)));
  }

  {
    const double r = temperature_ratio(62.0 * k::deg);
    out.push_back(bounded("temperature ratio at 62 deg", std::abs(r - 1.760), 1e-3, fmt(r)));
  }

  {
    // Closed-form thermal factor against Fock-space diagonalization, per axis.
    double worst = 0.0;
    const double half_mass = 0.5 * s.trap.mass;
    for (double T : {0.2e-3, 1.08e-3}) {
      for (double qz : {2e6, 8e6, 2e7}) {
        const double omega = s.spectrum.stretch();
        const double closed = std::exp(-0.5 * qz * qz * difference_variance(omega, T, s.trap.mass));
        const double fock = dw_oracle_fock_1d(qz, omega, T, half_mass);
        worst = std::max(worst, std::abs(closed - fock));
      }
    }
    out.push_back(bounded("Debye-Waller closed form vs Fock space", worst, 1e-6));
  }

  {
    ThermalState st{{1.08e-3, 1.08e-3, 1.9e-3}, s.spectrum, s.trap.mass};
    const Vec3 q{1.5e7, 0.0, -1.2e7};
    const McEstimate mc = dw_oracle_gaussian_mc(q, st, 100000, rng::derive_seed(seed, "mc-oracle"));
    const double exact = debye_waller(q, st);
    const double z = std::abs(mc.mean - exact) / mc.std_error;
    out.push_back(bounded("Debye-Waller vs Gaussian Monte Carlo (sigma)", z, 3.0,
                          "closed " + fmt(exact) + ", mc " + fmt(mc.mean)));
  }

  {
    double worst = 0.0;
    for (unsigned n = 0; n <= 5; ++n) {
      worst = std::max(worst, std::abs(closure_sum(0.5, n, 200) - 1.0));
    }
    out.push_back(bounded("closure sum over final states", worst, 1e-8));
  }

  {
    const double total = total_xsec_no_interference(Channel::Unpolarized, s.scatter);
    const double expected = 2.0 * lorentzian(s.scatter.detuning(), s.scatter.gamma);
    out.push_back(bounded("unpolarized total cross section = 2 sigma_0 L",
                          std::abs(total - expected) / expected, 1e-6));
  }

  {
    DetectorConfig det;
    det.phi_min = -9.0 * k::deg;
    det.phi_max = 9.0 * k::deg;
    det.Phi_min = 0.0;
    det.Phi_max = 1e-6;
    det.n_phi = 512;
    det.n_Phi = 2;
    FringeScene scene{s.beam, s.spectrum.separation,
                      {{1e-5, 1e-5, 1e-5}, s.spectrum, s.trap.mass}, s.scatter};
    const FringeImage img = synthesize_image(scene, det);
    const std::vector<double> row(img.pixels.begin(), img.pixels.begin() + img.cols());
    const double period = dominant_period(img.phi, row);
    const double expected = s.beam.wavelength / (s.spectrum.separation * std::sin(s.beam.theta_in));
    out.push_back(bounded("fringe period near phi = 0", std::abs(period / expected - 1.0), 0.02,
                          fmt(period / k::deg) + " deg"));
  }

  {
    const SaturationCalib calib;
    double worst = 0.0;
    for (double r : {0.0, 0.05, 0.1, 0.5, 1.0}) {
      const double sat = saturation_from_ratio(r, 0.0, calib).value;
      worst = std::max(worst, std::abs(ratio_from_saturation(sat, calib) - r));
    }
    const double s10 = saturation_from_ratio(0.10, 0.0, calib).value;
    out.push_back(bounded("saturation inversion roundtrip", worst, 1e-12,
                          "s(0.10) = " + fmt(s10)));
  }
  return out;
}

}  // namespace ionfringe
