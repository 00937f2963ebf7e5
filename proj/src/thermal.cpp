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

#include "ionfringe/thermal.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "ionfringe/constants.hpp"
#include "ionfringe/error.hpp"
#include "ionfringe/rng.hpp"

namespace ionfringe {

namespace c = constants;

void ThermalState::validate() const {
  const auto& t = temperatures;
  if (!(t.x >= 0.0 && t.y >= 0.0 && t.z >= 0.0)) {
    throw DomainError("mode temperatures must be non-negative");
  }
  if (!(mass > 0.0)) throw DomainError("ion mass must be positive");
  for (double w : spectrum.rel) {
    if (!(w > 0.0)) throw DomainError("relative mode frequencies must be positive");
  }
}

double mean_occupation(double omega, double temperature) {
  if (!(omega > 0.0) || temperature < 0.0) {
    throw DomainError("mean_occupation needs omega > 0 and T >= 0");
  }
  if (temperature == 0.0) return 0.0;
  return 1.0 / std::expm1(c::hbar * omega / (c::kB * temperature));
}

double coth_factor(double omega, double temperature) {
  if (!(omega > 0.0) || temperature < 0.0) {
    throw DomainError("coth_factor needs omega > 0 and T >= 0");
  }
  if (temperature == 0.0) return 1.0;
  return 1.0 / std::tanh(c::hbar * omega / (2.0 * c::kB * temperature));
}

double difference_variance(double omega, double temperature, double mass) {
  return c::hbar / (mass * omega) * coth_factor(omega, temperature);
}

double debye_waller_exponent(const Vec3& q, const ThermalState& state) {
  const auto& w = state.spectrum.rel;
  const auto& t = state.temperatures;
  return 0.5 * (q.x * q.x * difference_variance(w[0], t.x, state.mass) +
                q.y * q.y * difference_variance(w[1], t.y, state.mass) +
                q.z * q.z * difference_variance(w[2], t.z, state.mass));
}

double debye_waller(const Vec3& q, const ThermalState& state) {
  return std::exp(-debye_waller_exponent(q, state));
}

double temperature_ratio(double theta_in) {
  if (!(theta_in > 0.0 && theta_in < 0.5 * c::pi)) {
    throw DomainError("temperature ratio needs 0 < theta_in < pi/2");
  }
  const double cs = std::cos(theta_in);
  const double sn = std::sin(theta_in);
  return (1.0 + 1.0 / (3.0 * cs * cs)) / (1.0 + 1.0 / (3.0 * sn * sn));
}

namespace {

constexpr std::size_t kMcChunk = 1u << 14;

struct ChunkSums {
  double sum = 0.0;
  double sum_sq = 0.0;
};

ChunkSums mc_chunk(const Vec3& q, const std::array<double, 3>& sd, std::uint64_t seed,
                   std::size_t chunk, std::size_t n) {
  rng::Engine engine(rng::derive_seed(seed, chunk));
  std::normal_distribution<double> gauss(0.0, 1.0);
  ChunkSums s;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = sd[0] * gauss(engine);
    const double dy = sd[1] * gauss(engine);
    const double dz = sd[2] * gauss(engine);
    const double v = std::cos(q.x * dx + q.y * dy + q.z * dz);
    s.sum += v;
    s.sum_sq += v * v;
  }
  return s;
}

std::array<double, 3> difference_stddevs(const ThermalState& state) {
  const auto& w = state.spectrum.rel;
  const auto& t = state.temperatures;
  return {std::sqrt(difference_variance(w[0], t.x, state.mass)),
          std::sqrt(difference_variance(w[1], t.y, state.mass)),
          std::sqrt(difference_variance(w[2], t.z, state.mass))};
}

McEstimate reduce(const std::vector<ChunkSums>& parts, std::size_t n, std::uint64_t seed) {
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const auto& p : parts) {
    sum += p.sum;
    sum_sq += p.sum_sq;
  }
  const double nn = static_cast<double>(n);
  const double mean = sum / nn;
  const double var = std::max(0.0, (sum_sq - sum * mean) / (nn - 1.0));
  return {mean, std::sqrt(var / nn), n, seed};
}

void check_samples(std::size_t n) {
  if (n < 2) throw DomainError("Monte Carlo oracle needs at least two samples");
}

}  // namespace

McEstimate dw_oracle_gaussian_mc(const Vec3& q, const ThermalState& state, std::size_t n_samples,
                                 std::uint64_t seed) {
  state.validate();
  check_samples(n_samples);
  const auto sd = difference_stddevs(state);
  const std::size_t n_chunks = (n_samples + kMcChunk - 1) / kMcChunk;
  std::vector<ChunkSums> parts(n_chunks);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n_chunks); ++k) {
    const std::size_t begin = static_cast<std::size_t>(k) * kMcChunk;
    parts[k] = mc_chunk(q, sd, seed, k, std::min(kMcChunk, n_samples - begin));
  }
  return reduce(parts, n_samples, seed);
}

McEstimate dw_oracle_gaussian_mc_serial(const Vec3& q, const ThermalState& state,
                                        std::size_t n_samples, std::uint64_t seed) {
  state.validate();
  check_samples(n_samples);
  const auto sd = difference_stddevs(state);
  const std::size_t n_chunks = (n_samples + kMcChunk - 1) / kMcChunk;
  std::vector<ChunkSums> parts(n_chunks);
  for (std::size_t k = 0; k < n_chunks; ++k) {
    parts[k] = mc_chunk(q, sd, seed, k, std::min(kMcChunk, n_samples - k * kMcChunk));
  }
  return reduce(parts, n_samples, seed);
}

double lamb_dicke(double q, double omega, double eff_mass) {
  if (!(omega > 0.0) || !(eff_mass > 0.0)) {
    throw DomainError("Lamb-Dicke parameter needs positive frequency and mass");
  }
  return q * std::sqrt(c::hbar / (2.0 * eff_mass * omega));
}

namespace {

// Boltzmann ratio exp(-hbar w / kB T); zero at T = 0.
double boltzmann_ratio(double omega, double temperature) {
  if (temperature == 0.0) return 0.0;
  return std::exp(-c::hbar * omega / (c::kB * temperature));
}

}  // namespace

std::size_t thermal_truncation(double omega, double temperature, double tol) {
  if (!(omega > 0.0) || temperature < 0.0 || !(tol > 0.0 && tol < 1.0)) {
    throw DomainError("thermal_truncation needs omega > 0, T >= 0, 0 < tol < 1");
  }
  const double x = boltzmann_ratio(omega, temperature);
  if (x == 0.0) return 0;
  // p_n = (1 - x) x^n < tol
  const double n = std::log(tol / (1.0 - x)) / std::log(x);
  return static_cast<std::size_t>(std::max(0.0, std::ceil(n)));
}

double dw_oracle_fock_1d(double q, double omega, double temperature, double eff_mass,
                         std::size_t n_max) {
  const double eta = lamb_dicke(q, omega, eff_mass);
  if (temperature < 0.0) throw DomainError("temperature must be non-negative");
  const double x = boltzmann_ratio(omega, temperature);
  if (n_max == 0) {
    n_max = thermal_truncation(omega, temperature);
  } else if (x > 0.0 && (1.0 - x) * std::pow(x, static_cast<double>(n_max)) >= 1e-12) {
    throw NumericError("Fock-space truncation too small: Boltzmann weight at n_max >= 1e-12");
  }
  // Pad the basis so that exp(i eta X) acting on |n <= n_max> stays inside it.
  const double spread = std::max(1.0, std::abs(eta));
  const auto pad = static_cast<Eigen::Index>(
      60.0 + 12.0 * spread * std::ceil(std::sqrt(static_cast<double>(n_max) + 1.0)));
  const Eigen::Index dim = static_cast<Eigen::Index>(n_max) + 1 + pad;

  // X = a + a^dagger in the number basis: zero diagonal, sqrt(k) off-diagonal.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd sub(dim - 1);
  for (Eigen::Index k = 0; k < dim - 1; ++k) sub[k] = std::sqrt(static_cast<double>(k + 1));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw NumericError("position-operator diagonalization failed");
  }
  const Eigen::VectorXd& lambda = solver.eigenvalues();
  const Eigen::MatrixXd& v = solver.eigenvectors();
  const Eigen::VectorXd phase = (eta * lambda).array().cos();

  double sum = 0.0;
  double weight = 1.0 - x;
  for (std::size_t n = 0; n <= n_max; ++n) {
    const auto row = static_cast<Eigen::Index>(n);
    const double diag_elem = (v.row(row).array().square() * phase.transpose().array()).sum();
    sum += weight * diag_elem;
    weight *= x;
  }
  return sum;
}

double closure_sum(double eta, unsigned n, unsigned n_max) {
  const double eta2 = eta * eta;
  const double damp = std::exp(-eta2);
  double sum = 0.0;
  for (unsigned f = 0; f <= n_max; ++f) {
    const unsigned lo = std::min(f, n);
    const unsigned hi = std::max(f, n);
    const unsigned k = hi - lo;
    const double ratio = std::exp(std::lgamma(lo + 1.0) - std::lgamma(hi + 1.0));
    const double lag = std::assoc_laguerre(lo, k, eta2);
    sum += ratio * std::pow(eta2, static_cast<double>(k)) * damp * lag * lag;
  }
  return sum;
}

double closure_check_1d(double q, double omega, double eff_mass, unsigned n, unsigned n_max) {
  return closure_sum(lamb_dicke(q, omega, eff_mass), n, n_max);
}

}  // namespace ionfringe
