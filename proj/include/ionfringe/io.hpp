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
#include <filesystem>
#include <string>
#include <vector>

#include "ionfringe/imaging.hpp"

namespace ionfringe::io {

/// Writes via a sibling temporary file and rename, so readers never see a
/// partial file. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

/// 16-bit binary PGM (big-endian samples), top row = largest Phi. Count images
/// that fit in 16 bits are written unscaled; otherwise the maximum maps to 65535.
/// Returns the multiplicative scale that was applied.
double write_pgm16(const std::filesystem::path& path, const FringeImage& img);

/// Row-major CSV; first row holds phi in degrees, first column Phi in degrees.
std::string image_csv(const FringeImage& img);

/// Columns phi_deg,value,stderr.
std::string profile_csv(const Profile& profile);
Profile parse_profile_csv(const std::string& text);

/// Columns bin_index,counts.
std::string trace_csv(const std::vector<std::int64_t>& counts);
std::vector<std::int64_t> parse_trace_csv(const std::string& text);

}  // namespace ionfringe::io
