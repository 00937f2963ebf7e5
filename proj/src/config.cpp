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

#include "ionfringe/config.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <string_view>

#include "ionfringe/constants.hpp"
#include "ionfringe/error.hpp"
#include "ionfringe/io.hpp"
#include "ionfringe/rng.hpp"

namespace ionfringe {

namespace {

using nlohmann::json;
namespace k = constants;

std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  for (const auto& item : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      throw ConfigError(join(path, item.key()), "unknown key");
    }
  }
}

void read(const json& obj, const std::string& path, const char* key, double& out) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(join(path, key), "expected a number");
  out = v.get<double>();
  if (!std::isfinite(out)) throw ConfigError(join(path, key), "must be finite");
}

void read(const json& obj, const std::string& path, const char* key, std::optional<double>& out) {
  if (!obj.contains(key)) return;
  if (obj.at(key).is_null()) {
    out.reset();
    return;
  }
  double v = 0.0;
  read(obj, path, key, v);
  out = v;
}

void read(const json& obj, const std::string& path, const char* key, bool& out) {
  if (!obj.contains(key)) return;
  if (!obj.at(key).is_boolean()) throw ConfigError(join(path, key), "expected true or false");
  out = obj.at(key).get<bool>();
}

void read(const json& obj, const std::string& path, const char* key, std::string& out) {
  if (!obj.contains(key)) return;
  if (!obj.at(key).is_string()) throw ConfigError(join(path, key), "expected a string");
  out = obj.at(key).get<std::string>();
}

template <typename Int>
void read_int(const json& obj, const std::string& path, const char* key, Int& out) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(join(path, key), "expected an integer");
  if constexpr (std::is_unsigned_v<Int>) {
    if (!v.is_number_unsigned()) throw ConfigError(join(path, key), "must be non-negative");
  }
  out = v.get<Int>();
}

void read(const json& obj, const std::string& path, const char* key, std::array<double, 2>& out) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ConfigError(join(path, key), "expected [low, high]");
  }
  out = {v[0].get<double>(), v[1].get<double>()};
}

const json& section(const json& root, const char* name, const json& empty) {
  return root.contains(name) ? root.at(name) : empty;
}

void require(bool ok, const std::string& path, const std::string& what) {
  if (!ok) throw ConfigError(path, what);
}

template <typename F>
auto wrap(const std::string& path, F&& build) {
  try {
    return build();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  const bool blank = std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); });
  if (blank) return cfg;
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  check_keys(root, "", {"trap", "beam", "detector", "thermal", "scatter", "noise", "fit", "jumps",
                        "seed", "threads", "out"});
  const json empty = json::object();

  const json& trap = section(root, "trap", empty);
  check_keys(trap, "trap", {"mass_u", "charge_e", "axial_hz", "separation_um", "radial_hz"});
  read(trap, "trap", "mass_u", cfg.trap.mass_u);
  read(trap, "trap", "charge_e", cfg.trap.charge_e);
  read(trap, "trap", "axial_hz", cfg.trap.axial_hz);
  read(trap, "trap", "separation_um", cfg.trap.separation_um);
  read(trap, "trap", "radial_hz", cfg.trap.radial_hz);

  const json& beam = section(root, "beam", empty);
  check_keys(beam, "beam", {"theta_deg", "wavelength_nm", "polarization"});
  read(beam, "beam", "theta_deg", cfg.beam.theta_deg);
  read(beam, "beam", "wavelength_nm", cfg.beam.wavelength_nm);
  read(beam, "beam", "polarization", cfg.beam.polarization);

  const json& det = section(root, "detector", empty);
  check_keys(det, "detector",
             {"phi_deg", "Phi_deg", "n_phi", "n_Phi", "channel", "visibility_scale"});
  read(det, "detector", "phi_deg", cfg.detector.phi_deg);
  read(det, "detector", "Phi_deg", cfg.detector.Phi_deg);
  read_int(det, "detector", "n_phi", cfg.detector.n_phi);
  read_int(det, "detector", "n_Phi", cfg.detector.n_Phi);
  read(det, "detector", "channel", cfg.detector.channel);
  read(det, "detector", "visibility_scale", cfg.detector.visibility_scale);

  const json& th = section(root, "thermal", empty);
  check_keys(th, "thermal", {"T_X_mK", "T_Y_mK", "T_Z_mK"});
  read(th, "thermal", "T_X_mK", cfg.thermal.T_X_mK);
  read(th, "thermal", "T_Y_mK", cfg.thermal.T_Y_mK);
  read(th, "thermal", "T_Z_mK", cfg.thermal.T_Z_mK);

  const json& sc = section(root, "scatter", empty);
  check_keys(sc, "scatter", {"detuning_mhz", "linewidth_mhz"});
  read(sc, "scatter", "detuning_mhz", cfg.scatter.detuning_mhz);
  read(sc, "scatter", "linewidth_mhz", cfg.scatter.linewidth_mhz);

  const json& noise = section(root, "noise", empty);
  check_keys(noise, "noise", {"enabled", "exposure_scale", "background_rate"});
  read(noise, "noise", "enabled", cfg.noise.enabled);
  read(noise, "noise", "exposure_scale", cfg.noise.exposure_scale);
  read(noise, "noise", "background_rate", cfg.noise.background_rate);

  const json& fit = section(root, "fit", empty);
  check_keys(fit, "fit", {"profile_Phi_deg", "T_guess_mK", "visibility_guess", "background_guess",
                          "fit_background", "fit_visibility", "max_iter"});
  read(fit, "fit", "profile_Phi_deg", cfg.fit.profile_Phi_deg);
  read(fit, "fit", "T_guess_mK", cfg.fit.T_guess_mK);
  read(fit, "fit", "visibility_guess", cfg.fit.visibility_guess);
  read(fit, "fit", "background_guess", cfg.fit.background_guess);
  read(fit, "fit", "fit_background", cfg.fit.fit_background);
  read(fit, "fit", "fit_visibility", cfg.fit.fit_visibility);
  read_int(fit, "fit", "max_iter", cfg.fit.max_iter);

  const json& jm = section(root, "jumps", empty);
  check_keys(jm, "jumps", {"ratio", "off_dwell_s", "duration_s", "bin_ms", "rate_per_on_ion",
                           "background", "coefficient", "coefficient_rel_unc", "gate_threshold",
                           "gate_window_ms", "gate_histogram"});
  read(jm, "jumps", "ratio", cfg.jumps.ratio);
  read(jm, "jumps", "off_dwell_s", cfg.jumps.off_dwell_s);
  read(jm, "jumps", "duration_s", cfg.jumps.duration_s);
  read(jm, "jumps", "bin_ms", cfg.jumps.bin_ms);
  read(jm, "jumps", "rate_per_on_ion", cfg.jumps.rate_per_on_ion);
  read(jm, "jumps", "background", cfg.jumps.background);
  read(jm, "jumps", "coefficient", cfg.jumps.coefficient);
  read(jm, "jumps", "coefficient_rel_unc", cfg.jumps.coefficient_rel_unc);
  read(jm, "jumps", "gate_threshold", cfg.jumps.gate_threshold);
  read(jm, "jumps", "gate_window_ms", cfg.jumps.gate_window_ms);
  read(jm, "jumps", "gate_histogram", cfg.jumps.gate_histogram);

  read_int(root, "", "seed", cfg.seed);
  read_int(root, "", "threads", cfg.threads);
  read(root, "", "out", cfg.out);

  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  return parse_config(io::read_file(path));
}

void validate(const RunConfig& cfg) {
  require(cfg.trap.mass_u > 0.0, "trap.mass_u", "must be positive");
  require(cfg.trap.charge_e != 0.0, "trap.charge_e", "must be non-zero");
  require(cfg.trap.separation_um > 0.0, "trap.separation_um", "must be positive");
  require(!cfg.trap.axial_hz || *cfg.trap.axial_hz > 0.0, "trap.axial_hz", "must be positive");
  require(!cfg.trap.radial_hz || *cfg.trap.radial_hz > 0.0, "trap.radial_hz", "must be positive");
  spectrum(cfg);

  require(cfg.beam.polarization == "perp" || cfg.beam.polarization == "inplane",
          "beam.polarization", "expected \"perp\" or \"inplane\"");
  beam_geometry(cfg);

  wrap("detector.channel", [&] { return parse_channel(cfg.detector.channel); });
  detector_config(cfg);
  scatter_config(cfg);

  require(cfg.thermal.T_X_mK >= 0.0, "thermal.T_X_mK", "must be non-negative");
  require(!cfg.thermal.T_Y_mK || *cfg.thermal.T_Y_mK >= 0.0, "thermal.T_Y_mK",
          "must be non-negative");
  require(!cfg.thermal.T_Z_mK || *cfg.thermal.T_Z_mK >= 0.0, "thermal.T_Z_mK",
          "must be non-negative");
  fringe_scene(cfg);

  require(cfg.noise.exposure_scale >= 0.0, "noise.exposure_scale", "must be non-negative");
  require(cfg.noise.background_rate >= 0.0, "noise.background_rate", "must be non-negative");

  require(cfg.fit.profile_Phi_deg[0] <= cfg.fit.profile_Phi_deg[1], "fit.profile_Phi_deg",
          "low must not exceed high");
  require(cfg.fit.T_guess_mK >= 0.0, "fit.T_guess_mK", "must be non-negative");
  require(cfg.fit.visibility_guess >= 0.0 && cfg.fit.visibility_guess <= 1.05,
          "fit.visibility_guess", "must lie in [0, 1.05]");
  require(cfg.fit.background_guess >= 0.0, "fit.background_guess", "must be non-negative");
  require(cfg.fit.max_iter > 0, "fit.max_iter", "must be positive");

  require(cfg.jumps.duration_s > 0.0, "jumps.duration_s", "must be positive");
  require(cfg.jumps.bin_ms > 0.0, "jumps.bin_ms", "must be positive");
  require(cfg.jumps.duration_s * 1e3 >= cfg.jumps.bin_ms, "jumps.duration_s",
          "must cover at least one bin");
  require(cfg.jumps.rate_per_on_ion >= 0.0, "jumps.rate_per_on_ion", "must be non-negative");
  require(cfg.jumps.background >= 0.0, "jumps.background", "must be non-negative");
  require(cfg.jumps.coefficient > 0.0, "jumps.coefficient", "must be positive");
  require(cfg.jumps.coefficient_rel_unc >= 0.0, "jumps.coefficient_rel_unc",
          "must be non-negative");
  require(cfg.jumps.gate_threshold >= 0.0, "jumps.gate_threshold", "must be non-negative");
  require(cfg.jumps.gate_window_ms > 0.0, "jumps.gate_window_ms", "must be positive");
  jump_rates(cfg);

  require(cfg.threads >= 0, "threads", "must be non-negative");
}

nlohmann::json to_json(const RunConfig& cfg) {
  json j;
  j["trap"] = {{"mass_u", cfg.trap.mass_u},
               {"charge_e", cfg.trap.charge_e},
               {"axial_hz", optional_json(cfg.trap.axial_hz)},
               {"separation_um", cfg.trap.separation_um},
               {"radial_hz", optional_json(cfg.trap.radial_hz)}};
  j["beam"] = {{"theta_deg", cfg.beam.theta_deg},
               {"wavelength_nm", cfg.beam.wavelength_nm},
               {"polarization", cfg.beam.polarization}};
  j["detector"] = {{"phi_deg", cfg.detector.phi_deg},
                   {"Phi_deg", cfg.detector.Phi_deg},
                   {"n_phi", cfg.detector.n_phi},
                   {"n_Phi", cfg.detector.n_Phi},
                   {"channel", cfg.detector.channel},
                   {"visibility_scale", cfg.detector.visibility_scale}};
  j["thermal"] = {{"T_X_mK", cfg.thermal.T_X_mK},
                  {"T_Y_mK", optional_json(cfg.thermal.T_Y_mK)},
                  {"T_Z_mK", optional_json(cfg.thermal.T_Z_mK)}};
  j["scatter"] = {{"detuning_mhz", cfg.scatter.detuning_mhz},
                  {"linewidth_mhz", cfg.scatter.linewidth_mhz}};
  j["noise"] = {{"enabled", cfg.noise.enabled},
                {"exposure_scale", cfg.noise.exposure_scale},
                {"background_rate", cfg.noise.background_rate}};
  j["fit"] = {{"profile_Phi_deg", cfg.fit.profile_Phi_deg},
              {"T_guess_mK", cfg.fit.T_guess_mK},
              {"visibility_guess", cfg.fit.visibility_guess},
              {"background_guess", cfg.fit.background_guess},
              {"fit_background", cfg.fit.fit_background},
              {"fit_visibility", cfg.fit.fit_visibility},
              {"max_iter", cfg.fit.max_iter}};
  j["jumps"] = {{"ratio", cfg.jumps.ratio},
                {"off_dwell_s", cfg.jumps.off_dwell_s},
                {"duration_s", cfg.jumps.duration_s},
                {"bin_ms", cfg.jumps.bin_ms},
                {"rate_per_on_ion", cfg.jumps.rate_per_on_ion},
                {"background", cfg.jumps.background},
                {"coefficient", cfg.jumps.coefficient},
                {"coefficient_rel_unc", cfg.jumps.coefficient_rel_unc},
                {"gate_threshold", cfg.jumps.gate_threshold},
                {"gate_window_ms", cfg.jumps.gate_window_ms},
                {"gate_histogram", cfg.jumps.gate_histogram}};
  j["seed"] = cfg.seed;
  j["threads"] = cfg.threads;
  j["out"] = cfg.out;
  return j;
}

TrapConfig trap_config(const RunConfig& cfg) {
  return wrap("trap", [&] {
    TrapConfig trap;
    trap.mass = cfg.trap.mass_u * k::amu;
    trap.charge = cfg.trap.charge_e * k::e;
    trap.omega_Z = cfg.trap.axial_hz
                       ? 2.0 * k::pi * *cfg.trap.axial_hz
                       : axial_frequency_for_separation(trap.mass, trap.charge,
                                                        cfg.trap.separation_um * 1e-6);
    trap.omega_R = cfg.trap.radial_hz ? 2.0 * k::pi * *cfg.trap.radial_hz : 2.0 * trap.omega_Z;
    trap.validate();
    return trap;
  });
}

ModeSpectrum spectrum(const RunConfig& cfg) {
  const TrapConfig trap = trap_config(cfg);
  return wrap("trap", [&] { return mode_spectrum(trap); });
}

BeamGeometry beam_geometry(const RunConfig& cfg) {
  return wrap("beam", [&] {
    const double theta = cfg.beam.theta_deg * k::deg;
    const Vec3 eps = cfg.beam.polarization == "inplane" ? in_plane_polarization(theta)
                                                        : perpendicular_polarization();
    return BeamGeometry::make(theta, cfg.beam.wavelength_nm * 1e-9, eps);
  });
}

DetectorConfig detector_config(const RunConfig& cfg) {
  return wrap("detector", [&] {
    DetectorConfig det;
    det.phi_min = cfg.detector.phi_deg[0] * k::deg;
    det.phi_max = cfg.detector.phi_deg[1] * k::deg;
    det.Phi_min = cfg.detector.Phi_deg[0] * k::deg;
    det.Phi_max = cfg.detector.Phi_deg[1] * k::deg;
    det.n_phi = cfg.detector.n_phi;
    det.n_Phi = cfg.detector.n_Phi;
    det.channel = parse_channel(cfg.detector.channel);
    det.visibility_scale = cfg.detector.visibility_scale;
    det.validate();
    return det;
  });
}

ScatterConfig scatter_config(const RunConfig& cfg) {
  return wrap("scatter", [&] {
    if (!(cfg.scatter.linewidth_mhz > 0.0)) throw DomainError("linewidth_mhz must be positive");
    const ScatterConfig sc =
        ScatterConfig::make(cfg.beam.wavelength_nm * 1e-9, 2.0 * k::pi * cfg.scatter.linewidth_mhz * 1e6,
                            2.0 * k::pi * cfg.scatter.detuning_mhz * 1e6);
    sc.validate();
    return sc;
  });
}

ModeTemperatures mode_temperatures(const RunConfig& cfg) {
  return wrap("thermal", [&] {
    ModeTemperatures t;
    t.x = cfg.thermal.T_X_mK * 1e-3;
    t.y = cfg.thermal.T_Y_mK ? *cfg.thermal.T_Y_mK * 1e-3 : t.x;
    if (cfg.thermal.T_Z_mK) {
      t.z = *cfg.thermal.T_Z_mK * 1e-3;
    } else {
      const double theta = cfg.beam.theta_deg * k::deg;
      if (!(theta > 0.0 && theta < k::pi / 2.0)) {
        throw DomainError("T_Z_mK must be given when theta_deg is not in (0, 90)");
      }
      t.z = temperature_ratio(theta) * t.x;
    }
    return t;
  });
}

FringeScene fringe_scene(const RunConfig& cfg) {
  FringeScene scene;
  scene.beam = beam_geometry(cfg);
  const ModeSpectrum spec = spectrum(cfg);
  scene.separation = spec.separation;
  scene.thermal.spectrum = spec;
  scene.thermal.mass = cfg.trap.mass_u * k::amu;
  scene.thermal.temperatures = mode_temperatures(cfg);
  scene.scatter = scatter_config(cfg);
  wrap("thermal", [&] {
    scene.thermal.validate();
    return 0;
  });
  return scene;
}

NoiseConfig noise_config(const RunConfig& cfg) {
  NoiseConfig noise;
  noise.exposure_scale = cfg.noise.exposure_scale;
  noise.background_rate = cfg.noise.background_rate;
  noise.seed = rng::derive_seed(cfg.seed, "image-noise");
  wrap("noise", [&] {
    noise.validate();
    return 0;
  });
  return noise;
}

FringeModelFixed fit_fixed(const RunConfig& cfg) {
  const FringeScene scene = fringe_scene(cfg);
  FringeModelFixed fixed;
  fixed.beam = scene.beam;
  fixed.separation = scene.separation;
  fixed.spectrum = scene.thermal.spectrum;
  fixed.mass = scene.thermal.mass;
  fixed.channel = parse_channel(cfg.detector.channel);
  const auto& t = scene.thermal.temperatures;
  fixed.temperature_ratio = t.x > 0.0 ? t.z / t.x : temperature_ratio(scene.beam.theta_in);
  return fixed;
}

FitOptions fit_options(const RunConfig& cfg) {
  FitOptions opt;
  opt.lm.max_iter = cfg.fit.max_iter;
  opt.fit_background = cfg.fit.fit_background;
  opt.fit_visibility = cfg.fit.fit_visibility;
  return opt;
}

FringeModelParams fit_guess(const RunConfig& cfg) {
  FringeModelParams p;
  p.amplitude = 0.0;  // matched to the data by fit_profile
  p.background = cfg.fit.background_guess;
  p.T_X = cfg.fit.T_guess_mK * 1e-3;
  p.visibility = cfg.fit.visibility_guess;
  return p;
}

JumpRates jump_rates(const RunConfig& cfg) {
  return wrap("jumps", [&] {
    const JumpRates r = JumpRates::from_ratio(cfg.jumps.ratio, cfg.jumps.off_dwell_s);
    r.validate();
    return r;
  });
}

TraceConfig trace_config(const RunConfig& cfg) {
  TraceConfig t;
  t.bin_width = cfg.jumps.bin_ms * 1e-3;
  t.rate_per_on_ion = cfg.jumps.rate_per_on_ion;
  t.background = cfg.jumps.background;
  t.seed = rng::derive_seed(cfg.seed, "telegraph");
  return t;
}

SaturationCalib saturation_calib(const RunConfig& cfg) {
  return {cfg.jumps.coefficient, cfg.jumps.coefficient_rel_unc};
}

}  // namespace ionfringe
