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

#include <cstddef>
#include <cstdint>

#include "ionfringe/modes.hpp"
#include "ionfringe/vec3.hpp"

namespace ionfringe {

/// Temperatures of the relative modes: two tilt modes (X, Y) and the stretch mode (Z). K.
struct ModeTemperatures {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

struct ThermalState {
  ModeTemperatures temperatures;
  ModeSpectrum spectrum;
  double mass = 0.0;  // single-ion mass, kg

  void validate() const;
};

/// Bose-Einstein occupation 1/(exp(hbar w / kB T) - 1); zero at T = 0.
double mean_occupation(double omega, double temperature);

/// coth(hbar w / 2 kB T) = 2 n + 1, equal to 1 at T = 0.
double coth_factor(double omega, double temperature);

/// Thermal variance of one Cartesian component of u1 - u2 for a relative mode:
/// (hbar / m w) coth(hbar w / 2 kB T).
double difference_variance(double omega, double temperature, double mass);

/// Positive exponent X such that the Debye-Waller factor is exp(-X).
double debye_waller_exponent(const Vec3& q, const ThermalState& state);

/// exp(-1/2 <[q.(u1-u2)]^2>) for a thermal state of the relative modes.
double debye_waller(const Vec3& q, const ThermalState& state);

/// Expected stretch/tilt temperature ratio T_Z / T_X for Doppler cooling
/// along a beam at `theta_in` from the trap axis. Requires 0 < theta_in < pi/2.
double temperature_ratio(double theta_in);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

/// Monte Carlo estimate of <cos(q.(u1-u2))> with Gaussian thermal displacements.
/// Samples are split into fixed chunks with their own sub-seeds, so the result
/// does not depend on the OpenMP thread count.
McEstimate dw_oracle_gaussian_mc(const Vec3& q, const ThermalState& state, std::size_t n_samples,
                                 std::uint64_t seed);
/// Single-threaded reference for dw_oracle_gaussian_mc; bit-identical output.
McEstimate dw_oracle_gaussian_mc_serial(const Vec3& q, const ThermalState& state,
                                        std::size_t n_samples, std::uint64_t seed);

/// q * sqrt(hbar / (2 m' w)) for a 1D oscillator of mass m'.
double lamb_dicke(double q, double omega, double eff_mass);

/// Smallest n whose thermal Boltzmann weight falls below `tol`.
std::size_t thermal_truncation(double omega, double temperature, double tol = 1e-12);

/// Brute-force thermal average of <n|exp(i q u)|n> for a 1D oscillator of mass
/// `eff_mass`, built from the position operator in a truncated number basis and
/// diagonalized exactly. n_max = 0 chooses the truncation automatically.
/// Throws NumericError if the Boltzmann weight at n_max is not below 1e-12.
double dw_oracle_fock_1d(double q, double omega, double temperature, double eff_mass,
                         std::size_t n_max = 0);

/// Sum over f <= n_max of |<f| exp(-i q u) |n>|^2, using the Laguerre form of
/// displacement-operator matrix elements. Equals 1 up to truncation.
double closure_check_1d(double q, double omega, double eff_mass, unsigned n, unsigned n_max);
/// Same, parametrized directly by the Lamb-Dicke parameter.
double closure_sum(double eta, unsigned n, unsigned n_max);

}  // namespace ionfringe
