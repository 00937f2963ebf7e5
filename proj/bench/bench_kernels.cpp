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

// Serial reference kernels against their OpenMP versions. The argument of each
// OpenMP benchmark is the thread count.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "ionfringe/constants.hpp"
#include "ionfringe/imaging.hpp"
#include "ionfringe/modes.hpp"
#include "ionfringe/thermal.hpp"

using namespace ionfringe;
namespace k = ionfringe::constants;

namespace {

constexpr double kMass = 197.967 * k::amu;

FringeScene scene() {
  const double wz = 2.0 * k::pi * 7e5;
  const ModeSpectrum s = mode_spectrum({kMass, k::e, 2.0 * wz, wz});
  const BeamGeometry beam = BeamGeometry::make(62.0 * k::deg, 194.2e-9, perpendicular_polarization());
  return {beam, s.separation, {{1.08e-3, 1.08e-3, 1.9e-3}, s, kMass},
          ScatterConfig::make(194.2e-9, 2.0 * k::pi * 70e6)};
}

DetectorConfig detector() {
  DetectorConfig det;
  det.phi_min = 15.0 * k::deg;
  det.phi_max = 45.0 * k::deg;
  det.Phi_min = -15.0 * k::deg;
  det.Phi_max = 15.0 * k::deg;
  det.n_phi = 256;
  det.n_Phi = 64;
  return det;
}

// Momentum transfer of a 194 nm photon scattered through about 90 degrees.
const Vec3 kQ{0.4 * 4.58e7, 0.0, 0.8 * 4.58e7};

void BM_SynthesizeSerial(benchmark::State& state) {
  const FringeScene sc = scene();
  const DetectorConfig det = detector();
  for (auto _ : state) benchmark::DoNotOptimize(synthesize_image_serial(sc, det));
}

void BM_SynthesizeOmp(benchmark::State& state) {
  omp_set_num_threads(static_cast<int>(state.range(0)));
  const FringeScene sc = scene();
  const DetectorConfig det = detector();
  for (auto _ : state) benchmark::DoNotOptimize(synthesize_image(sc, det));
}

void BM_ShotNoiseSerial(benchmark::State& state) {
  const FringeImage img = synthesize_image_serial(scene(), detector());
  const NoiseConfig noise{4000.0, 2.0, 1};
  for (auto _ : state) benchmark::DoNotOptimize(add_shot_noise_serial(img, noise));
}

void BM_ShotNoiseOmp(benchmark::State& state) {
  omp_set_num_threads(static_cast<int>(state.range(0)));
  const FringeImage img = synthesize_image_serial(scene(), detector());
  const NoiseConfig noise{4000.0, 2.0, 1};
  for (auto _ : state) benchmark::DoNotOptimize(add_shot_noise(img, noise));
}

void BM_MonteCarloSerial(benchmark::State& state) {
  const ThermalState st = scene().thermal;
  for (auto _ : state) benchmark::DoNotOptimize(dw_oracle_gaussian_mc_serial(kQ, st, 1 << 20, 7));
}

void BM_MonteCarloOmp(benchmark::State& state) {
  omp_set_num_threads(static_cast<int>(state.range(0)));
  const ThermalState st = scene().thermal;
  for (auto _ : state) benchmark::DoNotOptimize(dw_oracle_gaussian_mc(kQ, st, 1 << 20, 7));
}

}  // namespace

BENCHMARK(BM_SynthesizeSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SynthesizeOmp)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ShotNoiseSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ShotNoiseOmp)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_MonteCarloSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_MonteCarloOmp)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
