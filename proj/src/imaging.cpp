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

#include "ionfringe/imaging.hpp"

#include <unsupported/Eigen/FFT>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "ionfringe/error.hpp"
#include "ionfringe/rng.hpp"

namespace ionfringe {

namespace {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + step * static_cast<double>(i);
  out.back() = hi;
  return out;
}

constexpr double kHalfPi = 0.5 * std::numbers::pi;

}  // namespace

void DetectorConfig::validate() const {
  if (n_phi < 2 || n_Phi < 2) throw DomainError("detector needs at least 2 pixels per axis");
  if (!(phi_min < phi_max) || !(Phi_min < Phi_max)) {
    throw DomainError("detector ranges must be increasing");
  }
  if (!(phi_min > -kHalfPi && phi_max < kHalfPi && Phi_min > -kHalfPi && Phi_max < kHalfPi)) {
    throw DomainError("detector ranges must lie within (-90, 90) degrees");
  }
  if (!(visibility_scale >= 0.0 && visibility_scale <= 1.0)) {
    throw DomainError("visibility_scale must lie in [0, 1]");
  }
}

std::vector<double> DetectorConfig::phi_axis() const { return linspace(phi_min, phi_max, n_phi); }
std::vector<double> DetectorConfig::Phi_axis() const { return linspace(Phi_min, Phi_max, n_Phi); }

void NoiseConfig::validate() const {
  if (!(exposure_scale >= 0.0) || !(background_rate >= 0.0)) {
    throw DomainError("noise exposure and background must be non-negative");
  }
}

double pixel_intensity(const FringeScene& scene, const DetectorConfig& det,
                       DetectorDirection dir) {
  const Vec3 k_in = k_in_vector(scene.beam);
  const Vec3 k_out = k_out_vector(scene.beam, dir);
  const Vec3 q = scattering_vector(k_in, k_out);
  const double dw = det.visibility_scale * debye_waller(q, scene.thermal);
  const AtomFrameAngles angles = atom_angles(k_out, atom_frame(scene.beam));
  return xsec_detected(det.channel, angles.polar, fringe_phase(q, scene.separation), dw,
                       scene.scatter);
}

namespace {

FringeImage blank_image(const FringeScene& scene, const DetectorConfig& det) {
  det.validate();
  scene.thermal.validate();
  scene.scatter.validate();
  FringeImage img;
  img.phi = det.phi_axis();
  img.Phi = det.Phi_axis();
  img.pixels.assign(img.rows() * img.cols(), 0.0);
  return img;
}

void synthesize_row(const FringeScene& scene, const DetectorConfig& det, FringeImage& img,
                    std::size_t r) {
  for (std::size_t c = 0; c < img.cols(); ++c) {
    img.at(r, c) = pixel_intensity(scene, det, {img.phi[c], img.Phi[r]});
  }
}

}  // namespace

FringeImage synthesize_image(const FringeScene& scene, const DetectorConfig& det) {
  FringeImage img = blank_image(scene, det);
  const auto rows = static_cast<std::ptrdiff_t>(img.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < rows; ++r) synthesize_row(scene, det, img, r);
  return img;
}

FringeImage synthesize_image_serial(const FringeScene& scene, const DetectorConfig& det) {
  FringeImage img = blank_image(scene, det);
  for (std::size_t r = 0; r < img.rows(); ++r) synthesize_row(scene, det, img, r);
  return img;
}

FringeImage apply_efficiency(const FringeImage& img, std::span<const double> efficiency,
                             EfficiencyMode mode) {
  if (efficiency.size() != img.pixels.size()) {
    throw DomainError("efficiency map shape does not match image");
  }
  FringeImage out = img;
  for (std::size_t i = 0; i < efficiency.size(); ++i) {
    const double e = efficiency[i];
    if (!(e > 0.0)) throw DomainError("efficiency must be positive everywhere");
    out.pixels[i] = mode == EfficiencyMode::Apply ? img.pixels[i] * e : img.pixels[i] / e;
  }
  out.counts = false;
  return out;
}

std::vector<double> linear_ramp_efficiency(const FringeImage& img, double slope) {
  std::vector<double> eff(img.pixels.size());
  const double span = static_cast<double>(img.cols() - 1);
  for (std::size_t r = 0; r < img.rows(); ++r) {
    for (std::size_t c = 0; c < img.cols(); ++c) {
      eff[r * img.cols() + c] = 1.0 + slope * (2.0 * static_cast<double>(c) / span - 1.0);
    }
  }
  return eff;
}

namespace {

void noise_row(const FringeImage& img, const NoiseConfig& noise, FringeImage& out,
               std::size_t r) {
  rng::Engine engine(rng::derive_seed(noise.seed, r));
  for (std::size_t c = 0; c < img.cols(); ++c) {
    const double mean = noise.exposure_scale * img.at(r, c) + noise.background_rate;
    if (mean > 0.0) {
      std::poisson_distribution<std::int64_t> poisson(mean);
      out.at(r, c) = static_cast<double>(poisson(engine));
    } else {
      out.at(r, c) = 0.0;
    }
  }
}

FringeImage noise_target(const FringeImage& img, const NoiseConfig& noise) {
  noise.validate();
  for (double v : img.pixels) {
    if (!(v >= 0.0)) throw DomainError("image intensities must be non-negative");
  }
  FringeImage out = img;
  out.counts = true;
  return out;
}

}  // namespace

FringeImage add_shot_noise(const FringeImage& img, const NoiseConfig& noise) {
  FringeImage out = noise_target(img, noise);
  const auto rows = static_cast<std::ptrdiff_t>(img.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < rows; ++r) noise_row(img, noise, out, r);
  return out;
}

FringeImage add_shot_noise_serial(const FringeImage& img, const NoiseConfig& noise) {
  FringeImage out = noise_target(img, noise);
  for (std::size_t r = 0; r < img.rows(); ++r) noise_row(img, noise, out, r);
  return out;
}

Profile collapse_profile(const FringeImage& img, double Phi_lo, double Phi_hi) {
  Profile p;
  p.phi = img.phi;
  p.value.assign(img.cols(), 0.0);
  p.counts = img.counts;
  std::size_t used = 0;
  for (std::size_t r = 0; r < img.rows(); ++r) {
    if (img.Phi[r] < Phi_lo || img.Phi[r] > Phi_hi) continue;
    ++used;
    for (std::size_t c = 0; c < img.cols(); ++c) p.value[c] += img.at(r, c);
  }
  if (used == 0) throw DomainError("Phi window selects no image rows");
  p.std_error.resize(p.value.size());
  for (std::size_t c = 0; c < p.value.size(); ++c) {
    p.std_error[c] = img.counts ? std::sqrt(p.value[c]) : 0.0;
  }
  return p;
}

double dominant_period(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = y.size();
  if (n < 8 || x.size() != n) throw DomainError("period extraction needs >= 8 matched samples");
  const double dx = (x.back() - x.front()) / static_cast<double>(n - 1);
  if (!(dx > 0.0)) throw DomainError("sample grid must be increasing");

  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(n);

  std::size_t n_fft = 1;
  while (n_fft < 64 * n) n_fft <<= 1;
  std::vector<double> buf(n_fft, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / static_cast<double>(n - 1));
    buf[i] = w * (y[i] - mean);
  }
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, buf);

  // Skip the main lobe of the window around DC (2 cycles per record).
  const std::size_t pad = n_fft / n;
  const std::size_t k_lo = 2 * pad;
  const std::size_t k_hi = n_fft / 2;
  if (k_lo + 2 >= k_hi) throw DomainError("record too short for period extraction");
  std::size_t k_best = k_lo;
  double best = -1.0;
  for (std::size_t k = k_lo; k < k_hi; ++k) {
    const double a = std::abs(spec[k]);
    if (a > best) {
      best = a;
      k_best = k;
    }
  }
  double k_ref = static_cast<double>(k_best);
  if (k_best > k_lo && k_best + 1 < k_hi) {
    const double a = std::log(std::abs(spec[k_best - 1]));
    const double b = std::log(std::abs(spec[k_best]));
    const double cc = std::log(std::abs(spec[k_best + 1]));
    const double denom = a - 2.0 * b + cc;
    if (denom < 0.0) k_ref += 0.5 * (a - cc) / denom;
  }
  const double freq = k_ref / (static_cast<double>(n_fft) * dx);
  return 1.0 / freq;
}

double sample_visibility(std::span<const double> values) {
  if (values.empty()) throw DomainError("visibility of an empty sample");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*hi + *lo <= 0.0) return 0.0;
  return (*hi - *lo) / (*hi + *lo);
}

}  // namespace ionfringe
