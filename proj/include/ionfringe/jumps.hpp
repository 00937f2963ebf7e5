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

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ionfringe/lm.hpp"

namespace ionfringe {

/// Per-ion two-state (fluorescing / shelved) telegraph rates. 1/s.
struct JumpRates {
  double on_to_off = 0.0;
  double off_to_on = 0.0;

  void validate() const;
  double ratio() const { return on_to_off / off_to_on; }  // p_off / p_on
  double p_on() const { return off_to_on / (on_to_off + off_to_on); }
  double p_off() const { return on_to_off / (on_to_off + off_to_on); }

  /// Rates giving p_off/p_on = ratio with mean shelved dwell `off_dwell` (s).
  static JumpRates from_ratio(double ratio, double off_dwell);
};

struct TraceConfig {
  double bin_width = 5e-3;        // s
  double rate_per_on_ion = 50.0;  // mean counts per bin from one fluorescing ion
  double background = 10.0;       // mean counts per bin
  std::uint64_t seed = 0;
};

struct CountTrace {
  double bin_width = 5e-3;
  std::vector<std::int64_t> counts;
  double rate_per_on_ion = 0.0;
  double background = 0.0;
  std::uint64_t seed = 0;
  /// Time-averaged number of fluorescing ions in each bin (simulation truth).
  std::vector<double> on_ions;
};

/// Two independent continuous-time telegraph processes, sampled exactly in
/// time; each bin's count is Poisson with mean background + rate * <on ions>.
CountTrace simulate_telegraph(const JumpRates& rates, double duration, const TraceConfig& cfg);

/// Gate mask (true = gated off): a bin is gated when the counts in the
/// preceding window (rounded to whole bins) fall below `threshold`.
std::vector<bool> gate_filter(std::span<const std::int64_t> counts, double bin_width,
                              double threshold, double window);

/// Unit-width histogram of counts; bins masked `true` are skipped.
struct CountHistogram {
  std::int64_t first = 0;          // count value of bin 0
  std::vector<double> frequency;   // entries per count value

  double total() const;
};

CountHistogram make_histogram(std::span<const std::int64_t> counts,
                              const std::vector<bool>* gated = nullptr);

struct GaussianPeak {
  double mean = 0.0;
  double width = 0.0;
  double area = 0.0;  // entries
};

struct RatioEstimate {
  double value = 0.0;
  double error = 0.0;
  double from_single = 0.0;  // a1off / (2 a0off)
  double from_double = 0.0;  // sqrt(a2off / a0off)
  double chi2 = 0.0;         // consistency of the two estimators
};

struct TristableFit {
  std::array<GaussianPeak, 3> peaks{};  // ascending means: 2, 1, 0 ions shelved
  std::array<double, 3> area_ratios{};  // normalized to sum 1
  Eigen::Matrix3d area_ratio_cov = Eigen::Matrix3d::Zero();
  Eigen::Matrix<double, 9, 9> covariance = Eigen::Matrix<double, 9, 9>::Zero();  // (area, mean, width) x 3
  RatioEstimate p_ratio;
  double reduced_chi2 = 0.0;
  bool converged = false;
  int n_iter = 0;
};

/// Least-squares fit of three Gaussians (Poisson weights, refined by iterative
/// reweighting with the model variance). Starting peaks are found on a smoothed
/// histogram unless `guess` is given. Throws DomainError if fewer than three
/// separated modes exist and NumericError on non-convergence or degeneracy.
TristableFit fit_three_gaussians(const CountHistogram& hist,
                                 const std::optional<std::array<GaussianPeak, 3>>& guess = {},
                                 const LmOptions& options = {});

/// p_off / p_on from the peak areas (a2off, a1off, a0off): the generalized
/// least-squares combination of a1off/(2 a0off) and sqrt(a2off/a0off). Without
/// a covariance the multinomial shape is used and the error comes from the
/// spread between the two estimators.
RatioEstimate p_ratio_from_areas(const std::array<double, 3>& areas,
                                 const std::optional<Eigen::Matrix3d>& covariance = {});

/// Coefficient c in (1/2) s/(1+s) = c p_off/p_on.
struct SaturationCalib {
  double coefficient = 0.36;
  double rel_uncertainty = 0.30;

  /// c = g1 g2 / (g3 (g2 + f2 g1)).
  static SaturationCalib from_rates(double gamma1, double gamma2, double gamma3, double f2,
                                    double rel_uncertainty = 0.30);
};

struct SaturationEstimate {
  double value = 0.0;
  double error = 0.0;
};

/// s = 2cr / (1 - 2cr). The error combines the ratio error and the coefficient
/// uncertainty in quadrature. Throws DomainError if c r >= 1/2.
SaturationEstimate saturation_from_ratio(double ratio, double ratio_error,
                                         const SaturationCalib& calib = {});

/// Inverse of saturation_from_ratio: r = s / (2c (1 + s)).
double ratio_from_saturation(double s, const SaturationCalib& calib = {});

/// Error inflation for the level occupancies caused by correlations between
/// consecutive bins: the square root of the integrated autocorrelation time of
/// each level's indicator series, at least 1. Bins are assigned to levels by the
/// midpoints between fitted means.
std::array<double, 3> occupancy_inflation(std::span<const std::int64_t> counts,
                                          const TristableFit& fit);

struct CalibrationResult {
  TristableFit fit;
  std::array<double, 3> inflation{1.0, 1.0, 1.0};
  RatioEstimate p_ratio;  // with correlation-inflated errors
  SaturationEstimate saturation;
  std::size_t bins_used = 0;
};

/// Histogram -> three-Gaussian fit -> p_off/p_on -> s.
CalibrationResult calibrate_trace(std::span<const std::int64_t> counts,
                                  const SaturationCalib& calib = {},
                                  const std::vector<bool>* gated = nullptr);

}  // namespace ionfringe
