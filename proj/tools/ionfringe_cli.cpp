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

// Command-line front end. Exit codes: 0 ok, 1 numeric or model failure,
// 2 usage or configuration error, 3 file IO error.

#include <omp.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "ionfringe/config.hpp"
#include "ionfringe/constants.hpp"
#include "ionfringe/error.hpp"
#include "ionfringe/fitfringe.hpp"
#include "ionfringe/imaging.hpp"
#include "ionfringe/io.hpp"
#include "ionfringe/jumps.hpp"
#include "ionfringe/modes.hpp"
#include "ionfringe/selfcheck.hpp"
#include "ionfringe/thermal.hpp"

namespace {

using nlohmann::json;
using namespace ionfringe;
namespace k = ionfringe::constants;
namespace fs = std::filesystem;

constexpr int kOk = 0;
constexpr int kNumeric = 1;
constexpr int kUsage = 2;
constexpr int kIo = 3;

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> channel;
  std::string out;
  std::string report = "json";
  std::string profile;
  std::string trace;
  std::optional<double> ratio;
  std::optional<double> duration;
};

RunConfig resolve(const Options& opt) {
  RunConfig cfg;
  std::string path = opt.config;
  if (path.empty()) {
    if (const char* env = std::getenv(kConfigEnvVar)) path = env;
  }
  if (!path.empty()) cfg = load_config(path);
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.threads) cfg.threads = *opt.threads;
  if (opt.channel) cfg.detector.channel = *opt.channel;
  if (opt.ratio) cfg.jumps.ratio = *opt.ratio;
  if (opt.duration) cfg.jumps.duration_s = *opt.duration;
  if (!opt.out.empty()) cfg.out = opt.out;
  validate(cfg);
  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
  return cfg;
}

json report_header(const std::string& command, const RunConfig& cfg) {
  return {{"command", command}, {"seed", cfg.seed}, {"config", to_json(cfg)}};
}

json derived_physics(const RunConfig& cfg) {
  const TrapConfig trap = trap_config(cfg);
  const ModeSpectrum spec = spectrum(cfg);
  const ModeTemperatures t = mode_temperatures(cfg);
  return {{"axial_hz", trap.omega_Z / (2.0 * k::pi)},
          {"radial_hz", trap.omega_R / (2.0 * k::pi)},
          {"stretch_hz", spec.stretch() / (2.0 * k::pi)},
          {"tilt_hz", spec.tilt() / (2.0 * k::pi)},
          {"separation_um", spec.separation * 1e6},
          {"T_X_mK", t.x * 1e3},
          {"T_Y_mK", t.y * 1e3},
          {"T_Z_mK", t.z * 1e3}};
}

// Base name without a trailing extension from `known`.
std::string strip_extension(const std::string& path, std::initializer_list<const char*> known) {
  const fs::path p(path);
  for (const char* ext : known) {
    if (p.extension() == ext) return (p.parent_path() / p.stem()).string();
  }
  return path;
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
  } else {
    io::write_file_atomic(out, text);
  }
}

// --report is a format (json or text) or a file that receives the JSON
// report while the text summary goes to --out or stdout.
void emit_report(const Options& opt, const RunConfig& cfg, const json& rep, const std::string& text) {
  if (opt.report == "json") {
    emit(rep.dump(2) + "\n", cfg.out);
  } else if (opt.report == "text") {
    emit(text, cfg.out);
  } else {
    io::write_file_atomic(opt.report, rep.dump(2) + "\n");
    emit(text, cfg.out);
  }
}

int cmd_modes_info(const RunConfig& cfg, const Options& opt) {
  const TrapConfig trap = trap_config(cfg);
  const ModeSpectrum spec = spectrum(cfg);
  const double theta = cfg.beam.theta_deg * k::deg;
  const double ratio = spec.stretch() / trap.omega_Z;
  json rep = report_header("modes-info", cfg);
  rep["derived"] = derived_physics(cfg);
  rep["stretch_over_axial"] = ratio;
  rep["recoil_hz"] = recoil_energy(trap.mass, cfg.beam.wavelength_nm * 1e-9) / k::h;
  if (theta > 0.0 && theta < k::pi / 2.0) rep["temperature_ratio"] = temperature_ratio(theta);
  std::ostringstream os;
  os.precision(6);
  const auto& d = rep["derived"];
  os << "axial    " << d["axial_hz"].get<double>() / 1e3 << " kHz\n"
     << "radial   " << d["radial_hz"].get<double>() / 1e3 << " kHz\n"
     << "stretch  " << d["stretch_hz"].get<double>() / 1e3 << " kHz\n"
     << "tilt     " << d["tilt_hz"].get<double>() / 1e3 << " kHz\n"
     << "spacing  " << d["separation_um"].get<double>() << " um\n"
     << "stretch/axial = " << ratio << " (sqrt 3 = " << std::sqrt(3.0) << ")\n";
  if (rep.contains("temperature_ratio")) {
    os << "T_Z/T_X  " << rep["temperature_ratio"].get<double>() << "\n";
  }
  emit_report(opt, cfg, rep, os.str());
  return kOk;
}

FringeImage make_image(const RunConfig& cfg, json& meta) {
  const FringeScene scene = fringe_scene(cfg);
  const DetectorConfig det = detector_config(cfg);
  FringeImage img = synthesize_image(scene, det);
  if (cfg.noise.enabled) {
    const NoiseConfig noise = noise_config(cfg);
    img = add_shot_noise(img, noise);
    meta["noise_seed"] = noise.seed;
  }
  return img;
}

int cmd_simulate_image(const RunConfig& cfg) {
  const std::string base =
      strip_extension(cfg.out.empty() ? "fringe" : cfg.out, {".pgm", ".csv", ".json"});
  json rep = report_header("simulate-image", cfg);
  rep["derived"] = derived_physics(cfg);
  const FringeImage img = make_image(cfg, rep);
  const double scale = io::write_pgm16(base + ".pgm", img);
  io::write_file_atomic(base + ".csv", io::image_csv(img));
  rep["outputs"] = {{"pgm", base + ".pgm"}, {"csv", base + ".csv"}};
  rep["pgm_scale"] = scale;
  rep["counts"] = img.counts;
  rep["shape"] = {img.rows(), img.cols()};
  io::write_file_atomic(base + ".json", rep.dump(2) + "\n");
  std::cout << "wrote " << base << ".pgm, " << base << ".csv, " << base << ".json\n";
  return kOk;
}

int cmd_simulate_profile(const RunConfig& cfg) {
  const std::string out = cfg.out.empty() ? "profile.csv" : cfg.out;
  json rep = report_header("simulate-profile", cfg);
  rep["derived"] = derived_physics(cfg);
  const FringeImage img = make_image(cfg, rep);
  const Profile prof = collapse_profile(img, cfg.fit.profile_Phi_deg[0] * k::deg,
                                        cfg.fit.profile_Phi_deg[1] * k::deg);
  io::write_file_atomic(out, io::profile_csv(prof));
  rep["outputs"] = {{"profile", out}};
  rep["points"] = prof.phi.size();
  io::write_file_atomic(out + ".json", rep.dump(2) + "\n");
  std::cout << "wrote " << out << " and " << out << ".json\n";
  return kOk;
}

int cmd_fit(const RunConfig& cfg, const Options& opt) {
  const Profile prof = io::parse_profile_csv(io::read_file(opt.profile));
  const FringeModelFixed fixed = fit_fixed(cfg);
  const FitResult res = fit_profile(prof, fit_guess(cfg), fixed, fit_options(cfg));
  const VisibilityEstimate vis = extrapolated_visibility(res, fixed);

  json rep = report_header("fit", cfg);
  rep["derived"] = derived_physics(cfg);
  rep["input"] = {{"profile", opt.profile}, {"points", prof.phi.size()}, {"counts", prof.counts}};
  const std::array<const char*, 4> names{"amplitude", "background", "T_X_mK", "visibility"};
  const std::array<double, 4> value{res.params.amplitude, res.params.background,
                                    res.params.T_X * 1e3, res.params.visibility};
  const std::array<double, 4> err{res.one_sigma.amplitude, res.one_sigma.background,
                                  res.one_sigma.T_X * 1e3, res.one_sigma.visibility};
  json params = json::object();
  for (std::size_t i = 0; i < 4; ++i) {
    params[names[i]] = {{"value", value[i]},
                        {"error", err[i]},
                        {"free", res.free[i]},
                        {"at_bound", res.at_bound[i]}};
  }
  rep["params"] = params;
  rep["T_Z_mK"] = res.params.T_X * fixed.temperature_ratio * 1e3;
  json cov = json::array();
  for (int r = 0; r < 4; ++r) {
    json row = json::array();
    for (int c = 0; c < 4; ++c) row.push_back(res.covariance(r, c));
    cov.push_back(row);
  }
  rep["covariance"] = {{"order", names}, {"units", "T in K"}, {"matrix", cov}};
  rep["reduced_chi2"] = res.reduced_chi2;
  rep["chi2"] = res.chi2;
  rep["dof"] = res.dof;
  rep["condition"] = res.condition;
  rep["n_iter"] = res.n_iter;
  rep["status"] = res.status;
  rep["visibility_at_phi0"] = {{"V0", vis.value},
                               {"error", vis.error},
                               {"debye_waller", vis.dw_at_zero},
                               {"model", vis.model_at_zero}};
  rep["method"] = {{"optimizer", "Levenberg-Marquardt, central-difference Jacobian"},
                   {"weights", prof.counts ? "sqrt(max(counts,1)), then sqrt(max(model,1)) reweighting"
                                           : "supplied standard errors"},
                   {"phase_offset", fixed.phase_offset},
                   {"model_Phi", fixed.Phi},
                   {"temperature_ratio", fixed.temperature_ratio}};
  std::ostringstream os;
  os.precision(5);
  for (std::size_t i = 0; i < 4; ++i) {
    os << names[i] << " = " << value[i] << " +/- " << err[i] << (res.free[i] ? "" : " (fixed)")
       << "\n";
  }
  os << "reduced chi2 = " << res.reduced_chi2 << " (dof " << res.dof << ")\n";
  emit_report(opt, cfg, rep, os.str());
  return kOk;
}

int cmd_jumps_sim(const RunConfig& cfg) {
  const std::string out = cfg.out.empty() ? "trace.csv" : cfg.out;
  const JumpRates rates = jump_rates(cfg);
  const TraceConfig tc = trace_config(cfg);
  const CountTrace trace = simulate_telegraph(rates, cfg.jumps.duration_s, tc);
  io::write_file_atomic(out, io::trace_csv(trace.counts));
  json rep = report_header("jumps-sim", cfg);
  const double p_on = rates.p_on();
  const double p_off = rates.p_off();
  rep["rates"] = {{"on_to_off", rates.on_to_off}, {"off_to_on", rates.off_to_on}};
  rep["expected_occupancy"] = {p_off * p_off, 2.0 * p_off * p_on, p_on * p_on};
  rep["expected_saturation"] = saturation_from_ratio(rates.ratio(), 0.0, saturation_calib(cfg)).value;
  rep["telegraph_seed"] = tc.seed;
  rep["bins"] = trace.counts.size();
  rep["outputs"] = {{"trace", out}};
  io::write_file_atomic(out + ".json", rep.dump(2) + "\n");
  std::cout << "wrote " << out << " (" << trace.counts.size() << " bins) and " << out << ".json\n";
  return kOk;
}

int cmd_jumps_calibrate(const RunConfig& cfg, const Options& opt) {
  const auto counts = io::parse_trace_csv(io::read_file(opt.trace));
  std::optional<std::vector<bool>> mask;
  if (cfg.jumps.gate_histogram) {
    mask = gate_filter(counts, cfg.jumps.bin_ms * 1e-3, cfg.jumps.gate_threshold,
                       cfg.jumps.gate_window_ms * 1e-3);
  }
  const CalibrationResult cal =
      calibrate_trace(counts, saturation_calib(cfg), mask ? &*mask : nullptr);

  json rep = report_header("jumps-calibrate", cfg);
  rep["input"] = {{"trace", opt.trace}, {"bins", counts.size()}, {"bins_used", cal.bins_used}};
  json peaks = json::array();
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& p = cal.fit.peaks[i];
    peaks.push_back({{"ions_shelved", 2 - static_cast<int>(i)},
                     {"mean", p.mean},
                     {"width", p.width},
                     {"area", p.area},
                     {"area_ratio", cal.fit.area_ratios[i]},
                     {"area_ratio_error",
                      std::sqrt(cal.fit.area_ratio_cov(i, i)) * cal.inflation[i]}});
  }
  rep["peaks"] = peaks;
  rep["correlation_inflation"] = cal.inflation;
  rep["reduced_chi2"] = cal.fit.reduced_chi2;
  rep["p_ratio"] = {{"value", cal.p_ratio.value},
                    {"error", cal.p_ratio.error},
                    {"from_single", cal.p_ratio.from_single},
                    {"from_double", cal.p_ratio.from_double},
                    {"consistency_chi2", cal.p_ratio.chi2}};
  rep["saturation"] = {{"value", cal.saturation.value}, {"error", cal.saturation.error}};
  rep["visibility_limit"] = saturation_visibility_correction(cal.saturation.value);
  std::ostringstream os;
  os.precision(4);
  os << "area ratios " << cal.fit.area_ratios[0] << " : " << cal.fit.area_ratios[1] << " : "
     << cal.fit.area_ratios[2] << "\n"
     << "p_off/p_on  " << cal.p_ratio.value << " +/- " << cal.p_ratio.error << "\n"
     << "s           " << cal.saturation.value << " +/- " << cal.saturation.error << "\n";
  emit_report(opt, cfg, rep, os.str());
  return kOk;
}

int cmd_selfcheck(const RunConfig& cfg, const Options& opt) {
  const auto checks = run_selfcheck(cfg.seed);
  bool ok = true;
  json rep = report_header("selfcheck", cfg);
  json list = json::array();
  std::ostringstream os;
  for (const auto& c : checks) {
    ok = ok && c.passed;
    list.push_back({{"name", c.name},
                    {"passed", c.passed},
                    {"value", c.value},
                    {"tolerance", c.tolerance},
                    {"detail", c.detail}});
    os << (c.passed ? "PASS " : "FAIL ") << c.name << "  [" << c.value << " <= " << c.tolerance
       << "]" << (c.detail.empty() ? "" : "  " + c.detail) << "\n";
  }
  rep["checks"] = list;
  rep["passed"] = ok;
  emit_report(opt, cfg, rep, os.str());
  return ok ? kOk : kNumeric;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-ion interference fringe simulator and analysis tools"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  Options opt;
  app.add_option("--config", opt.config,
                 std::string("JSON config file (default: $") + kConfigEnvVar + ")");
  app.add_option("--seed", opt.seed, "root random seed");
  app.add_option("--threads", opt.threads, "OpenMP threads")->check(CLI::PositiveNumber);

  auto* modes = app.add_subcommand("modes-info", "trap mode frequencies and ion spacing");
  auto* image = app.add_subcommand("simulate-image", "fringe image (.pgm, .csv, .json)");
  auto* profile = app.add_subcommand("simulate-profile", "collapsed fringe profile (.csv)");
  auto* fit = app.add_subcommand("fit", "fit a fringe profile");
  auto* jsim = app.add_subcommand("jumps-sim", "simulate a two-ion quantum-jump trace");
  auto* jcal = app.add_subcommand("jumps-calibrate", "saturation from a jump trace");
  auto* check = app.add_subcommand("selfcheck", "run the oracle suite");

  const std::vector<std::string> channels{"pi", "sigma", "unpol"};
  for (auto* sub : {image, profile, fit}) {
    sub->add_option("--channel", opt.channel, "detected polarization")
        ->check(CLI::IsMember(channels));
  }
  for (auto* sub : {modes, image, profile, fit, jsim, jcal, check}) {
    sub->add_option("--out", opt.out, "output path");
  }
  for (auto* sub : {modes, fit, jcal, check}) {
    sub->add_option("--report", opt.report, "json, text, or a file for the JSON report");
  }
  fit->add_option("--profile", opt.profile, "profile CSV (phi_deg,value,stderr)")->required();
  jsim->add_option("--ratio", opt.ratio, "p_off/p_on")->check(CLI::PositiveNumber);
  jsim->add_option("--duration", opt.duration, "seconds")->check(CLI::PositiveNumber);
  jcal->add_option("--trace", opt.trace, "trace CSV (bin_index,counts)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  // Summaries read best as text unless asked otherwise.
  if ((modes->parsed() && modes->count("--report") == 0) ||
      (check->parsed() && check->count("--report") == 0)) {
    opt.report = "text";
  }

  try {
    const RunConfig cfg = resolve(opt);
    if (modes->parsed()) return cmd_modes_info(cfg, opt);
    if (image->parsed()) return cmd_simulate_image(cfg);
    if (profile->parsed()) return cmd_simulate_profile(cfg);
    if (fit->parsed()) return cmd_fit(cfg, opt);
    if (jsim->parsed()) return cmd_jumps_sim(cfg);
    if (jcal->parsed()) return cmd_jumps_calibrate(cfg, opt);
    if (check->parsed()) return cmd_selfcheck(cfg, opt);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kIo;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kNumeric;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumeric;
  }
  return kUsage;
}
