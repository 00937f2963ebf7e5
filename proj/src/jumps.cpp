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

#include "ionfringe/jumps.hpp"

#include <algorithm>
#include <complex>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <unsupported/Eigen/FFT>

#include "ionfringe/error.hpp"
#include "ionfringe/rng.hpp"

namespace ionfringe {

void JumpRates::validate() const {
  if (!(on_to_off > 0.0) || !(off_to_on > 0.0) || !std::isfinite(on_to_off) ||
      !std::isfinite(off_to_on)) {
    throw DomainError("jump rates must be positive and finite");
  }
}

JumpRates JumpRates::from_ratio(double ratio, double off_dwell) {
  if (!(ratio > 0.0) || !(off_dwell > 0.0)) {
    throw DomainError("p_off/p_on and the shelved dwell time must be positive");
  }
  const double off_to_on = 1.0 / off_dwell;
  return {ratio * off_to_on, off_to_on};
}

CountTrace simulate_telegraph(const JumpRates& rates, double duration, const TraceConfig& cfg) {
  rates.validate();
  if (!(cfg.bin_width > 0.0)) throw DomainError("bin width must be positive");
  if (!(duration >= cfg.bin_width)) throw DomainError("duration must cover at least one bin");
  if (!(cfg.rate_per_on_ion >= 0.0) || !(cfg.background >= 0.0)) {
    throw DomainError("count rates must be non-negative");
  }
  const auto n_bins = static_cast<std::size_t>(std::floor(duration / cfg.bin_width));
  rng::Engine engine(cfg.seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::exponential_distribution<double> leave_on(rates.on_to_off);
  std::exponential_distribution<double> leave_off(rates.off_to_on);

  struct Ion {
    bool on = true;
    double next = 0.0;  // absolute time of the next switch
  };
  std::array<Ion, 2> ions;
  for (auto& ion : ions) {
    ion.on = uniform(engine) < rates.p_on();
    ion.next = ion.on ? leave_on(engine) : leave_off(engine);
  }

  CountTrace trace;
  trace.bin_width = cfg.bin_width;
  trace.rate_per_on_ion = cfg.rate_per_on_ion;
  trace.background = cfg.background;
  trace.seed = cfg.seed;
  trace.counts.resize(n_bins);
  trace.on_ions.resize(n_bins);
  for (std::size_t b = 0; b < n_bins; ++b) {
    const double t0 = static_cast<double>(b) * cfg.bin_width;
    const double t1 = t0 + cfg.bin_width;
    double on_time = 0.0;
    for (auto& ion : ions) {
      double t = t0;
      while (ion.next < t1) {
        if (ion.on) on_time += ion.next - t;
        t = ion.next;
        ion.on = !ion.on;
        ion.next = t + (ion.on ? leave_on(engine) : leave_off(engine));
      }
      if (ion.on) on_time += t1 - t;
    }
    const double mean_on = std::clamp(on_time / cfg.bin_width, 0.0, 2.0);
    const double mu = cfg.background + cfg.rate_per_on_ion * mean_on;
    trace.on_ions[b] = mean_on;
    if (mu > 0.0) {
      std::poisson_distribution<std::int64_t> poisson(mu);
      trace.counts[b] = poisson(engine);
    }
  }
  return trace;
}

std::vector<bool> gate_filter(std::span<const std::int64_t> counts, double bin_width,
                              double threshold, double window) {
  if (!(threshold >= 0.0)) throw DomainError("gate threshold must be non-negative");
  if (!(bin_width > 0.0) || !(window > 0.0)) throw DomainError("gate window must be positive");
  const auto w = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(window / bin_width)));
  std::vector<bool> gated(counts.size(), false);
  std::int64_t running = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (i >= w) gated[i] = static_cast<double>(running) < threshold;
    running += counts[i];
    if (i >= w) running -= counts[i - w];
  }
  return gated;
}

double CountHistogram::total() const {
  return std::accumulate(frequency.begin(), frequency.end(), 0.0);
}

CountHistogram make_histogram(std::span<const std::int64_t> counts, const std::vector<bool>* gated) {
  if (gated && gated->size() != counts.size()) {
    throw DomainError("gate mask length does not match trace");
  }
  std::int64_t lo = std::numeric_limits<std::int64_t>::max();
  std::int64_t hi = std::numeric_limits<std::int64_t>::min();
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (gated && (*gated)[i]) continue;
    lo = std::min(lo, counts[i]);
    hi = std::max(hi, counts[i]);
  }
  if (lo > hi) throw DomainError("no ungated bins to histogram");
  CountHistogram h;
  h.first = lo;
  h.frequency.assign(static_cast<std::size_t>(hi - lo + 1), 0.0);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (gated && (*gated)[i]) continue;
    h.frequency[static_cast<std::size_t>(counts[i] - lo)] += 1.0;
  }
  return h;
}

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;

double gauss(double x, double mean, double width) {
  const double z = (x - mean) / width;
  return kInvSqrt2Pi / width * std::exp(-0.5 * z * z);
}

std::array<GaussianPeak, 3> find_peaks(const CountHistogram& hist) {
  const std::size_t n = hist.frequency.size();
  constexpr double kSmooth = 2.0;
  constexpr int kReach = 8;
  std::vector<double> smooth(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    double norm = 0.0;
    for (int d = -kReach; d <= kReach; ++d) {
      const auto j = static_cast<std::ptrdiff_t>(i) + d;
      const double k = std::exp(-0.5 * d * d / (kSmooth * kSmooth));
      norm += k;
      if (j >= 0 && j < static_cast<std::ptrdiff_t>(n)) acc += k * hist.frequency[j];
    }
    smooth[i] = acc / norm;
  }
  std::vector<std::size_t> maxima;
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? smooth[i - 1] : -1.0;
    const double right = i + 1 < n ? smooth[i + 1] : -1.0;
    if (smooth[i] > left && smooth[i] >= right && smooth[i] > 0.0) maxima.push_back(i);
  }
  std::sort(maxima.begin(), maxima.end(),
            [&](std::size_t a, std::size_t b) { return smooth[a] > smooth[b]; });
  std::vector<std::size_t> chosen;
  for (std::size_t m : maxima) {
    const bool far = std::all_of(chosen.begin(), chosen.end(), [&](std::size_t c) {
      return std::abs(static_cast<double>(m) - static_cast<double>(c)) > 3.0 * kSmooth;
    });
    if (far) chosen.push_back(m);
    if (chosen.size() == 3) break;
  }
  if (chosen.size() < 3) {
    throw DomainError("histogram has fewer than three resolvable modes");
  }
  std::sort(chosen.begin(), chosen.end());
  std::array<GaussianPeak, 3> peaks;
  for (std::size_t k = 0; k < 3; ++k) {
    const double x = static_cast<double>(hist.first) + static_cast<double>(chosen[k]);
    const double w = std::max(1.5, std::sqrt(std::max(x, 1.0)));
    peaks[k] = {x, w, smooth[chosen[k]] * w / kInvSqrt2Pi};
  }
  return peaks;
}

}  // namespace

TristableFit fit_three_gaussians(const CountHistogram& hist,
                                 const std::optional<std::array<GaussianPeak, 3>>& guess,
                                 const LmOptions& options) {
  const std::size_t n = hist.frequency.size();
  if (n < 12 || !(hist.total() > 0.0)) {
    throw DomainError("histogram too small for a three-Gaussian fit");
  }
  const auto start_peaks = guess ? *guess : find_peaks(hist);
  const double x_lo = static_cast<double>(hist.first);
  const double x_hi = x_lo + static_cast<double>(n - 1);
  const double inf = std::numeric_limits<double>::infinity();

  LmProblem problem;
  problem.n_residuals = n;
  std::vector<double> start;
  // Each peak stays within half the distance to its neighbours, which keeps a
  // small peak from turning into a broad pedestal under the others.
  for (std::size_t k = 0; k < 3; ++k) {
    const auto& p = start_peaks[k];
    double spacing = inf;
    for (std::size_t l = 0; l < 3; ++l) {
      if (l != k) spacing = std::min(spacing, std::abs(start_peaks[l].mean - p.mean));
    }
    if (!(spacing > 1.0)) throw DomainError("starting peaks are not separated");
    start.insert(start.end(), {p.area, p.mean, std::clamp(p.width, 0.3, 0.5 * spacing)});
    problem.lower.insert(problem.lower.end(), {0.0, std::max(x_lo - 0.5, p.mean - 0.5 * spacing), 0.3});
    problem.upper.insert(problem.upper.end(), {inf, std::min(x_hi + 0.5, p.mean + 0.5 * spacing), 0.5 * spacing});
    problem.free.insert(problem.free.end(), {true, true, true});
    problem.step_floor.insert(problem.step_floor.end(), {1e-3 * hist.total(), 1.0, 1e-2});
  }

  auto model_at = [&](std::span<const double> p, std::size_t i) {
    const double x = x_lo + static_cast<double>(i);
    return p[0] * gauss(x, p[1], p[2]) + p[3] * gauss(x, p[4], p[5]) + p[6] * gauss(x, p[7], p[8]);
  };
  std::vector<double> variance(n);
  for (std::size_t i = 0; i < n; ++i) variance[i] = std::max(hist.frequency[i], 1.0);
  problem.residuals = [&](std::span<const double> p, std::span<double> r) {
    for (std::size_t i = 0; i < n; ++i) {
      r[i] = (model_at(p, i) - hist.frequency[i]) / std::sqrt(variance[i]);
    }
  };

  LmResult lm = levenberg_marquardt(problem, start, options);
  if (!lm.converged) {
    throw NumericError("three-Gaussian fit did not converge after " + std::to_string(lm.n_iter) +
                       " iterations");
  }
  // Reweighting with the model variance moves the estimate toward the Poisson
  // likelihood optimum and removes the low bias of data-variance weights. A
  // pass that fails to converge leaves the previous solution in place.
  for (int pass = 0; pass < 3; ++pass) {
    for (std::size_t i = 0; i < n; ++i) variance[i] = std::max(model_at(lm.params, i), 1.0);
    LmResult next = levenberg_marquardt(problem, lm.params, options);
    if (!next.converged) break;
    lm = std::move(next);
  }

  std::array<std::size_t, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return lm.params[3 * a + 1] < lm.params[3 * b + 1]; });

  TristableFit fit;
  fit.converged = true;
  fit.n_iter = lm.n_iter;
  fit.reduced_chi2 = lm.reduced_chi2;
  for (std::size_t k = 0; k < 3; ++k) {
    const std::size_t s = order[k];
    fit.peaks[k] = {lm.params[3 * s + 1], lm.params[3 * s + 2], lm.params[3 * s]};
    for (std::size_t l = 0; l < 3; ++l) {
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
          fit.covariance(3 * k + a, 3 * l + b) = lm.covariance(3 * s + a, 3 * order[l] + b);
        }
      }
    }
  }
  for (std::size_t k = 0; k + 1 < 3; ++k) {
    const auto& a = fit.peaks[k];
    const auto& b = fit.peaks[k + 1];
    if (b.mean - a.mean <= 2.0 * std::max(a.width, b.width)) {
      throw DomainError("fitted modes overlap: means closer than two widths");
    }
  }

  const double total = fit.peaks[0].area + fit.peaks[1].area + fit.peaks[2].area;
  Eigen::Matrix3d area_cov;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) area_cov(a, b) = fit.covariance(3 * a, 3 * b);
  }
  Eigen::Matrix3d jac;
  for (int i = 0; i < 3; ++i) {
    fit.area_ratios[i] = fit.peaks[i].area / total;
    for (int j = 0; j < 3; ++j) jac(i, j) = ((i == j ? 1.0 : 0.0) - fit.area_ratios[i]) / total;
  }
  fit.area_ratio_cov = jac * area_cov * jac.transpose();
  fit.p_ratio = p_ratio_from_areas(fit.area_ratios, fit.area_ratio_cov);
  return fit;
}

RatioEstimate p_ratio_from_areas(const std::array<double, 3>& areas,
                                 const std::optional<Eigen::Matrix3d>& covariance) {
  const double a2 = areas[0];
  const double a1 = areas[1];
  const double a0 = areas[2];
  if (a2 < 0.0 || a1 < 0.0 || a0 < 0.0) throw DomainError("peak areas must be non-negative");
  if (!(a0 > 0.0)) throw DomainError("area of the all-fluorescing peak must be positive");

  Eigen::Matrix3d cov;
  if (covariance) {
    cov = *covariance;
  } else {
    const double s = a0 + a1 + a2;
    const Eigen::Vector3d f(a2 / s, a1 / s, a0 / s);
    cov = Eigen::Matrix3d(f.asDiagonal()) - f * f.transpose();
    cov *= s * s;
  }

  RatioEstimate est;
  est.from_single = a1 / (2.0 * a0);
  Eigen::RowVector3d g_single(0.0, 1.0 / (2.0 * a0), -a1 / (2.0 * a0 * a0));
  if (a2 == 0.0) {
    est.value = est.from_single;
    est.error = std::sqrt(std::max(0.0, double(g_single * cov * g_single.transpose())));
    return est;
  }
  est.from_double = std::sqrt(a2 / a0);
  Eigen::RowVector3d g_double(0.5 / std::sqrt(a2 * a0), 0.0, -0.5 * est.from_double / a0);

  Eigen::Matrix<double, 2, 3> g;
  g << g_single, g_double;
  const Eigen::Matrix2d c = g * cov * g.transpose();
  const Eigen::Vector2d r(est.from_single, est.from_double);
  Eigen::FullPivLU<Eigen::Matrix2d> lu(c);
  if (!lu.isInvertible()) {
    // Degenerate covariance: plain average, spread as error.
    est.value = 0.5 * (r[0] + r[1]);
    est.error = 0.5 * std::abs(r[0] - r[1]);
    return est;
  }
  const Eigen::Matrix2d cinv = lu.inverse();
  const Eigen::Vector2d ones(1.0, 1.0);
  const double norm = ones.dot(cinv * ones);
  est.value = ones.dot(cinv * r) / norm;
  const Eigen::Vector2d resid = r - est.value * ones;
  est.chi2 = resid.dot(cinv * resid);
  const double sigma = std::sqrt(1.0 / norm);
  // With a supplied covariance, inflate by the consistency scale factor when
  // the estimators disagree; with the shape-only default there is no absolute
  // scale, so the spread alone sets the error.
  est.error = covariance ? sigma * std::max(1.0, std::sqrt(est.chi2)) : sigma * std::sqrt(est.chi2);
  return est;
}

SaturationCalib SaturationCalib::from_rates(double gamma1, double gamma2, double gamma3, double f2,
                                            double rel_uncertainty) {
  if (!(gamma1 > 0.0 && gamma2 > 0.0 && gamma3 > 0.0) || !(f2 >= 0.0)) {
    throw DomainError("calibration rates must be positive");
  }
  return {gamma1 * gamma2 / (gamma3 * (gamma2 + f2 * gamma1)), rel_uncertainty};
}

SaturationEstimate saturation_from_ratio(double ratio, double ratio_error,
                                         const SaturationCalib& calib) {
  if (!(calib.coefficient > 0.0) || !(calib.rel_uncertainty >= 0.0)) {
    throw DomainError("calibration coefficient must be positive");
  }
  if (!(ratio >= 0.0) || !(ratio_error >= 0.0)) {
    throw DomainError("p_off/p_on and its error must be non-negative");
  }
  const double x = calib.coefficient * ratio;
  if (!(x < 0.5)) throw DomainError("ratio outside invertible range (c * r >= 1/2)");
  const double one_minus = 1.0 - 2.0 * x;
  const double sx = std::hypot(calib.coefficient * ratio_error,
                               ratio * calib.coefficient * calib.rel_uncertainty);
  return {2.0 * x / one_minus, 2.0 / (one_minus * one_minus) * sx};
}

double ratio_from_saturation(double s, const SaturationCalib& calib) {
  if (!(s >= 0.0) || !(calib.coefficient > 0.0)) {
    throw DomainError("saturation must be non-negative and coefficient positive");
  }
  return s / (2.0 * calib.coefficient * (1.0 + s));
}

namespace {

// Integrated autocorrelation time of a 0/1 series, with the self-consistent
// window M >= 5 tau. Autocorrelations come from a zero-padded FFT.
double integrated_time(const std::vector<double>& x) {
  const std::size_t n = x.size();
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  std::size_t n_fft = 1;
  while (n_fft < 2 * n) n_fft <<= 1;
  std::vector<double> buf(n_fft, 0.0);
  for (std::size_t i = 0; i < n; ++i) buf[i] = x[i] - mean;
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, buf);
  for (auto& c : spec) c = std::norm(c);
  std::vector<double> acf;
  fft.inv(acf, spec);
  if (!(acf[0] > 0.0)) return 1.0;
  double tau = 1.0;
  for (std::size_t lag = 1; lag < n / 2; ++lag) {
    tau += 2.0 * acf[lag] / acf[0];
    if (static_cast<double>(lag) >= 5.0 * tau) break;
  }
  return std::max(tau, 1.0);
}

}  // namespace

std::array<double, 3> occupancy_inflation(std::span<const std::int64_t> counts,
                                          const TristableFit& fit) {
  if (counts.size() < 100) throw DomainError("trace too short for correlation estimate");
  const double cut_low = 0.5 * (fit.peaks[0].mean + fit.peaks[1].mean);
  const double cut_high = 0.5 * (fit.peaks[1].mean + fit.peaks[2].mean);
  std::array<std::vector<double>, 3> level;
  for (auto& l : level) l.assign(counts.size(), 0.0);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const auto v = static_cast<double>(counts[i]);
    level[v < cut_low ? 0 : (v < cut_high ? 1 : 2)][i] = 1.0;
  }
  std::array<double, 3> out{1.0, 1.0, 1.0};
  for (int k = 0; k < 3; ++k) out[k] = std::sqrt(integrated_time(level[k]));
  return out;
}

CalibrationResult calibrate_trace(std::span<const std::int64_t> counts,
                                  const SaturationCalib& calib, const std::vector<bool>* gated) {
  CalibrationResult res;
  const CountHistogram hist = make_histogram(counts, gated);
  res.fit = fit_three_gaussians(hist);
  std::vector<std::int64_t> used;
  used.reserve(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (!gated || !(*gated)[i]) used.push_back(counts[i]);
  }
  res.bins_used = used.size();
  res.inflation = occupancy_inflation(used, res.fit);
  Eigen::Matrix3d cov = res.fit.area_ratio_cov;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) cov(a, b) *= res.inflation[a] * res.inflation[b];
  }
  res.p_ratio = p_ratio_from_areas(res.fit.area_ratios, cov);
  res.saturation = saturation_from_ratio(res.p_ratio.value, res.p_ratio.error, calib);
  return res;
}

}  // namespace ionfringe
