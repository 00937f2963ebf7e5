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

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"

#include "ionfringe/fitfringe.hpp"
#include "ionfringe/imaging.hpp"
#include "ionfringe/jumps.hpp"
#include "ionfringe/modes.hpp"

namespace ionfringe {

// Run configuration in user-facing units. Defaults describe the two-ion
// Hg+ experiment: 62 degree beam, 194.2 nm, 4.17 um ion spacing, pi channel.
struct RunConfig {
  struct Trap {
    double mass_u = 197.967;
    double charge_e = 1.0;
    std::optional<double> axial_hz;  // overrides separation_um when set
    double separation_um = 4.17;
    std::optional<double> radial_hz;  // default: twice the axial frequency
  } trap;

  struct Beam {
    double theta_deg = 62.0;
    double wavelength_nm = 194.2;
    std::string polarization = "perp";  // perp | inplane
  } beam;

  struct Detector {
    std::array<double, 2> phi_deg{15.0, 45.0};
    std::array<double, 2> Phi_deg{-15.0, 15.0};
    std::size_t n_phi = 256;
    std::size_t n_Phi = 64;
    std::string channel = "pi";
    double visibility_scale = 1.0;
  } detector;

  struct Thermal {
    double T_X_mK = 1.08;
    std::optional<double> T_Y_mK;  // default: T_X
    std::optional<double> T_Z_mK;  // default: temperature_ratio(theta) * T_X
  } thermal;

  struct Scatter {
    double detuning_mhz = 0.0;
    double linewidth_mhz = 70.0;  // gamma / 2 pi
  } scatter;

  struct Noise {
    bool enabled = true;
    double exposure_scale = 4000.0;  // counts per (sigma_0/sr) per pixel
    double background_rate = 2.0;    // counts per pixel
  } noise;

  struct Fit {
    std::array<double, 2> profile_Phi_deg{-1.0, 1.0};
    double T_guess_mK = 2.0;
    double visibility_guess = 1.0;
    double background_guess = 0.0;
    bool fit_background = false;
    bool fit_visibility = true;
    int max_iter = 200;
  } fit;

  struct Jumps {
    double ratio = 0.10;          // p_off / p_on
    double off_dwell_s = 0.2;     // mean shelved time per ion
    double duration_s = 600.0;
    double bin_ms = 5.0;
    double rate_per_on_ion = 50.0;
    double background = 10.0;
    double coefficient = 0.36;
    double coefficient_rel_unc = 0.30;
    double gate_threshold = 80.0;
    double gate_window_ms = 5.0;
    bool gate_histogram = false;
  } jumps;

  std::uint64_t seed = 1;
  int threads = 0;  // 0: OpenMP default
  std::string out;  // output path, empty: subcommand default
};

/// Environment variable naming the default config file.
inline constexpr const char* kConfigEnvVar = "IONFRINGE_CONFIG";

/// Parses a JSON document. Unknown keys, wrong types and invalid physics raise
/// ConfigError naming the offending field. Empty text gives the defaults.
RunConfig parse_config(const std::string& text);

/// Reads and parses a file. Throws IoError if it cannot be read.
RunConfig load_config(const std::filesystem::path& path);

/// Throws ConfigError unless every derived module object is valid.
void validate(const RunConfig& cfg);

/// The configuration as given; unset optional fields are null. Parses back to
/// an identical RunConfig.
nlohmann::json to_json(const RunConfig& cfg);

TrapConfig trap_config(const RunConfig& cfg);
ModeSpectrum spectrum(const RunConfig& cfg);
BeamGeometry beam_geometry(const RunConfig& cfg);
DetectorConfig detector_config(const RunConfig& cfg);
ScatterConfig scatter_config(const RunConfig& cfg);
ModeTemperatures mode_temperatures(const RunConfig& cfg);
FringeScene fringe_scene(const RunConfig& cfg);
NoiseConfig noise_config(const RunConfig& cfg);
FringeModelFixed fit_fixed(const RunConfig& cfg);
FitOptions fit_options(const RunConfig& cfg);
FringeModelParams fit_guess(const RunConfig& cfg);
JumpRates jump_rates(const RunConfig& cfg);
TraceConfig trace_config(const RunConfig& cfg);
SaturationCalib saturation_calib(const RunConfig& cfg);

}  // namespace ionfringe
