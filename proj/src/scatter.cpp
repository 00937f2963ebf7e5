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

#include "ionfringe/scatter.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "ionfringe/constants.hpp"
#include "ionfringe/error.hpp"

namespace ionfringe {

namespace c = constants;

ScatterConfig ScatterConfig::make(double lambda_0, double gamma, double detuning) {
  if (!(lambda_0 > 0.0) || !(gamma > 0.0) || !std::isfinite(detuning)) {
    throw DomainError("scatter config needs positive wavelength and decay rate");
  }
  ScatterConfig cfg;
  cfg.lambda_0 = lambda_0;
  cfg.omega_0 = 2.0 * c::pi * c::c / lambda_0;
  cfg.omega_in = cfg.omega_0 + detuning;
  cfg.gamma = gamma;
  cfg.sigma_0 = lambda_0 * lambda_0 / (2.0 * c::pi);
  cfg.validate();
  return cfg;
}

void ScatterConfig::validate() const {
  if (!(omega_0 > 0.0 && omega_in > 0.0 && gamma > 0.0 && lambda_0 > 0.0 && sigma_0 > 0.0)) {
    throw DomainError("scatter config fields must all be positive");
  }
  const double expected = lambda_0 * lambda_0 / (2.0 * c::pi);
  if (std::abs(sigma_0 - expected) > 1e-12 * expected) {
    throw DomainError("sigma_0 inconsistent with lambda_0");
  }
}

std::string_view to_string(Channel channel) {
  switch (channel) {
    case Channel::PiDetected: return "pi";
    case Channel::SigmaDetected: return "sigma";
    case Channel::Unpolarized: return "unpol";
  }
  return "?";
}

Channel parse_channel(std::string_view name) {
  if (name == "pi") return Channel::PiDetected;
  if (name == "sigma") return Channel::SigmaDetected;
  if (name == "unpol") return Channel::Unpolarized;
  throw DomainError("unknown channel '" + std::string(name) + "' (expected pi|sigma|unpol)");
}

double lorentzian(double detuning, double gamma) {
  if (!(gamma > 0.0)) throw DomainError("Lorentzian width must be positive");
  const double hw2 = 0.25 * gamma * gamma;
  return hw2 / (detuning * detuning + hw2);
}

namespace {

double line(const ScatterConfig& cfg) { return lorentzian(cfg.detuning(), cfg.gamma); }

// Bracketed factor shared by the pi-detected and unpolarized channels.
double interference_term(double s2, double phase, double dw) {
  return s2 * (1.0 + std::cos(phase) * dw);
}

}  // namespace

double xsec_pi_case(double polar, double phase, double dw, const ScatterConfig& cfg) {
  const double s = std::sin(polar);
  return line(cfg) / (4.0 * c::pi) * interference_term(s * s, phase, dw);
}

double xsec_sigma_to_sigmapol(const ScatterConfig& cfg) { return line(cfg) / (8.0 * c::pi); }

double xsec_sigma_to_pipol(double polar, const ScatterConfig& cfg) {
  const double ct = std::cos(polar);
  return ct * ct * line(cfg) / (8.0 * c::pi);
}

double xsec_detected(Channel channel, double polar, double phase, double dw,
                     const ScatterConfig& cfg) {
  const double ct = std::cos(polar);
  const double st = std::sin(polar);
  const double pref = line(cfg) / (4.0 * c::pi);
  switch (channel) {
    case Channel::PiDetected:
      return pref * (ct * ct + interference_term(st * st, phase, dw));
    case Channel::SigmaDetected:
      return pref;
    case Channel::Unpolarized:
      return pref * (1.0 + ct * ct + interference_term(st * st, phase, dw));
  }
  return 0.0;
}

double fringe_visibility(Channel channel, double polar, double dw) {
  const double st = std::sin(polar);
  switch (channel) {
    case Channel::PiDetected: return st * st * dw;
    case Channel::Unpolarized: return 0.5 * st * st * dw;
    case Channel::SigmaDetected: return 0.0;
  }
  return 0.0;
}

double total_xsec_no_interference(Channel channel, const ScatterConfig& cfg, double rel_tol) {
  cfg.validate();
  // Azimuthal symmetry about the atom-frame z axis leaves a 1D polar integral.
  auto integrand = [&](double polar) {
    return 2.0 * c::pi * std::sin(polar) * xsec_detected(channel, polar, 0.0, 0.0, cfg);
  };
  using Quad = boost::math::quadrature::gauss_kronrod<double, 15>;
  double err = 0.0;
  const double value = Quad::integrate(integrand, 0.0, c::pi, 15, rel_tol, &err);
  return value;
}

}  // namespace ionfringe
