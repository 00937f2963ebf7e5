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
#include <span>
#include <vector>

#include "ionfringe/geometry.hpp"
#include "ionfringe/scatter.hpp"
#include "ionfringe/thermal.hpp"

namespace ionfringe {

/// Pixel grid over the detector acceptance. Axes are inclusive linspaces.
struct DetectorConfig {
  double phi_min = 0.0;  // rad
  double phi_max = 0.0;
  double Phi_min = 0.0;
  double Phi_max = 0.0;
  std::size_t n_phi = 256;
  std::size_t n_Phi = 64;
  Channel channel = Channel::PiDetected;
  // Extra multiplicative loss on the interference term (saturation, unequal
  // illumination, ...). 1 reproduces the ideal thermal cross section.
  double visibility_scale = 1.0;

  void validate() const;
  std::vector<double> phi_axis() const;
  std::vector<double> Phi_axis() const;
};

/// Everything that fixes the physics of one image.
struct FringeScene {
  BeamGeometry beam;
  double separation = 0.0;  // m, ions along Z
  ThermalState thermal;
  ScatterConfig scatter;
};

/// Row-major image: rows follow Phi, columns follow phi.
struct FringeImage {
  std::vector<double> phi;
  std::vector<double> Phi;
  std::vector<double> pixels;
  bool counts = false;  // pixels hold integer photon counts

  std::size_t rows() const { return Phi.size(); }
  std::size_t cols() const { return phi.size(); }
  double& at(std::size_t r, std::size_t c) { return pixels[r * cols() + c]; }
  double at(std::size_t r, std::size_t c) const { return pixels[r * cols() + c]; }
};

struct NoiseConfig {
  double exposure_scale = 0.0;   // expected counts per unit intensity (sigma_0/sr)
  double background_rate = 0.0;  // expected counts per pixel
  std::uint64_t seed = 0;

  void validate() const;
};

/// 1D fringe profile after summing image rows.
struct Profile {
  std::vector<double> phi;  // rad
  std::vector<double> value;
  std::vector<double> std_error;
  bool counts = false;
};

/// Cross section at one detector direction, in sigma_0 per steradian.
double pixel_intensity(const FringeScene& scene, const DetectorConfig& det, DetectorDirection dir);

/// OpenMP over rows. Output does not depend on the thread count.
FringeImage synthesize_image(const FringeScene& scene, const DetectorConfig& det);
/// Single-threaded reference for synthesize_image.
FringeImage synthesize_image_serial(const FringeScene& scene, const DetectorConfig& det);

enum class EfficiencyMode {
  Apply,      // multiply
  Normalize,  // divide
};

FringeImage apply_efficiency(const FringeImage& img, std::span<const double> efficiency,
                             EfficiencyMode mode = EfficiencyMode::Apply);

/// Efficiency map 1 + slope * u with u running from -1 to +1 across phi.
std::vector<double> linear_ramp_efficiency(const FringeImage& img, double slope);

/// Poisson counts with mean exposure_scale * pixel + background_rate. Each row
/// draws from its own sub-seed, so the output is independent of thread count.
FringeImage add_shot_noise(const FringeImage& img, const NoiseConfig& noise);
FringeImage add_shot_noise_serial(const FringeImage& img, const NoiseConfig& noise);

/// Sums the rows whose Phi lies in [Phi_lo, Phi_hi]. Standard errors are
/// sqrt(counts) for count images and zero otherwise.
Profile collapse_profile(const FringeImage& img, double Phi_lo, double Phi_hi);

/// Dominant period of a uniformly sampled signal, from the peak of a Hann-windowed,
/// zero-padded FFT refined by parabolic interpolation. Units follow `x`.
double dominant_period(std::span<const double> x, std::span<const double> y);

/// (max - min) / (max + min) of the samples.
double sample_visibility(std::span<const double> values);

}  // namespace ionfringe
