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

#include <cstdint>
#include <string>
#include <vector>

namespace ionfringe {

struct CheckOutcome {
  std::string name;
  bool passed = false;
  double value = 0.0;      // measured discrepancy or quantity
  double tolerance = 0.0;  // bound it was compared against
  std::string detail;
};

/// Quick oracle suite: closed forms against brute-force or Monte Carlo
/// references at a handful of points. Finishes in a few seconds.
std::vector<CheckOutcome> run_selfcheck(std::uint64_t seed);

}  // namespace ionfringe
