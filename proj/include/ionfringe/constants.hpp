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

#include <numbers>

namespace ionfringe::constants {

// CODATA 2018 exact / recommended values, SI units.
inline constexpr double pi = std::numbers::pi;
inline constexpr double h = 6.62607015e-34;            // J s
inline constexpr double hbar = h / (2.0 * pi);         // J s
inline constexpr double c = 299792458.0;               // m/s
inline constexpr double e = 1.602176634e-19;           // C
inline constexpr double eps0 = 8.8541878128e-12;       // F/m
inline constexpr double kB = 1.380649e-23;             // J/K
inline constexpr double amu = 1.66053906660e-27;       // kg

inline constexpr double deg = pi / 180.0;

}  // namespace ionfringe::constants
