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

#include "ionfringe/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "ionfringe/constants.hpp"
#include "ionfringe/error.hpp"

namespace ionfringe::io {

namespace fs = std::filesystem;

void write_file_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into place at " + path.string());
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double write_pgm16(const fs::path& path, const FringeImage& img) {
  double max_val = 0.0;
  for (double v : img.pixels) max_val = std::max(max_val, v);
  double scale = 1.0;
  if (!img.counts || max_val > 65535.0) scale = max_val > 0.0 ? 65535.0 / max_val : 1.0;

  std::string data = "P5\n" + std::to_string(img.cols()) + " " + std::to_string(img.rows()) +
                     "\n65535\n";
  data.reserve(data.size() + 2 * img.pixels.size());
  for (std::size_t rr = img.rows(); rr-- > 0;) {
    for (std::size_t c = 0; c < img.cols(); ++c) {
      const double v = std::clamp(std::round(img.at(rr, c) * scale), 0.0, 65535.0);
      const auto s = static_cast<std::uint16_t>(v);
      data.push_back(static_cast<char>(s >> 8));
      data.push_back(static_cast<char>(s & 0xFF));
    }
  }
  write_file_atomic(path, data);
  return scale;
}

namespace {

std::ostringstream precise_stream() {
  std::ostringstream out;
  out << std::setprecision(17);
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  return out;
}

double to_double(const std::string& s, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (s.find_first_not_of(" \t\r", used) == std::string::npos) return v;
  } catch (const std::exception&) {
  }
  throw IoError("bad number '" + s + "' on line " + std::to_string(line_no));
}

}  // namespace

std::string image_csv(const FringeImage& img) {
  auto out = precise_stream();
  out << "Phi_deg\\phi_deg";
  for (double p : img.phi) out << ',' << p / constants::deg;
  out << '\n';
  for (std::size_t r = 0; r < img.rows(); ++r) {
    out << img.Phi[r] / constants::deg;
    for (std::size_t c = 0; c < img.cols(); ++c) out << ',' << img.at(r, c);
    out << '\n';
  }
  return out.str();
}

std::string profile_csv(const Profile& profile) {
  auto out = precise_stream();
  out << "phi_deg,value,stderr\n";
  for (std::size_t i = 0; i < profile.phi.size(); ++i) {
    out << profile.phi[i] / constants::deg << ',' << profile.value[i] << ','
        << profile.std_error[i] << '\n';
  }
  return out.str();
}

Profile parse_profile_csv(const std::string& text) {
  Profile p;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool all_integral = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (line_no == 1 && line.rfind("phi", 0) == 0) continue;
    const auto cells = split(line, ',');
    if (cells.size() < 2) throw IoError("profile line " + std::to_string(line_no) + " too short");
    p.phi.push_back(to_double(cells[0], line_no) * constants::deg);
    const double v = to_double(cells[1], line_no);
    p.value.push_back(v);
    p.std_error.push_back(cells.size() > 2 ? to_double(cells[2], line_no) : 0.0);
    all_integral = all_integral && v >= 0.0 && std::floor(v) == v;
  }
  if (p.phi.empty()) throw IoError("profile has no data rows");
  bool any_err = false;
  for (double e : p.std_error) any_err = any_err || e > 0.0;
  // Poisson errors equal sqrt(value) exactly for count profiles.
  bool poisson = any_err && all_integral;
  for (std::size_t i = 0; poisson && i < p.value.size(); ++i) {
    poisson = std::abs(p.std_error[i] - std::sqrt(p.value[i])) <= 1e-9 * (1.0 + p.std_error[i]);
  }
  p.counts = poisson;
  return p;
}

std::string trace_csv(const std::vector<std::int64_t>& counts) {
  std::string out = "bin_index,counts\n";
  for (std::size_t i = 0; i < counts.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += std::to_string(counts[i]);
    out += '\n';
  }
  return out;
}

std::vector<std::int64_t> parse_trace_csv(const std::string& text) {
  std::vector<std::int64_t> counts;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (line_no == 1 && line.rfind("bin", 0) == 0) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 2) throw IoError("trace line " + std::to_string(line_no) + " malformed");
    try {
      const long long v = std::stoll(cells[1]);
      if (v < 0) throw IoError("negative count on line " + std::to_string(line_no));
      counts.push_back(v);
    } catch (const std::logic_error&) {
      throw IoError("bad count on line " + std::to_string(line_no));
    }
  }
  if (counts.empty()) throw IoError("trace has no data rows");
  return counts;
}

}  // namespace ionfringe::io
