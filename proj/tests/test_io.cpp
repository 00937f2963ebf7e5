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

#include <filesystem>
#include <string>
#include <unistd.h>

#include "doctest.h"
#include "ionfringe/constants.hpp"
#include "ionfringe/error.hpp"
#include "ionfringe/io.hpp"

using namespace ionfringe;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / ("ionfringe_io_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("atomic write replaces the file and leaves no temporary") {
  const fs::path dir = scratch_dir();
  const fs::path p = dir / "a.txt";
  io::write_file_atomic(p, "first");
  io::write_file_atomic(p, "second");
  CHECK(io::read_file(p) == "second");
  CHECK_FALSE(fs::exists(dir / "a.txt.tmp"));
  CHECK_THROWS_AS(io::write_file_atomic(dir / "missing" / "b.txt", "x"), IoError);
  CHECK_THROWS_AS(io::read_file(dir / "nope.txt"), IoError);
  fs::remove_all(dir);
}

TEST_CASE("profile CSV roundtrip") {
  Profile p;
  p.phi = {0.1, 0.2, 0.3};
  p.value = {1.0 / 3.0, 2.5e-7, 1e6};
  p.std_error = {0.01, 0.02, 0.03};
  const Profile back = io::parse_profile_csv(io::profile_csv(p));
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back.phi[i] == doctest::Approx(p.phi[i]).epsilon(1e-15));
    CHECK(back.value[i] == p.value[i]);
    CHECK(back.std_error[i] == p.std_error[i]);
  }
  CHECK_FALSE(back.counts);
}

TEST_CASE("count profiles are recognized") {
  const Profile counts = io::parse_profile_csv("phi_deg,value,stderr\n1,4,2\n2,9,3\n3,0,0\n");
  CHECK(counts.counts);
  CHECK(counts.phi[0] == doctest::Approx(constants::deg));
  const Profile plain = io::parse_profile_csv("1,4\n2,9\n");
  CHECK_FALSE(plain.counts);
  CHECK(plain.std_error == std::vector<double>{0.0, 0.0});
}

TEST_CASE("malformed profile input") {
  CHECK_THROWS_WITH_AS(io::parse_profile_csv("1,2x\n"), doctest::Contains("bad number '2x' on line 1"),
                       IoError);
  CHECK_THROWS_AS(io::parse_profile_csv("1\n"), IoError);
  CHECK_THROWS_AS(io::parse_profile_csv("phi_deg,value\n"), IoError);
  CHECK_THROWS_AS(io::parse_profile_csv("# comment only\n"), IoError);
}

TEST_CASE("trace CSV roundtrip and errors") {
  const std::vector<std::int64_t> counts{0, 5, 120, 7};
  CHECK(io::parse_trace_csv(io::trace_csv(counts)) == counts);
  CHECK_THROWS_AS(io::parse_trace_csv("0,-1\n"), IoError);
  CHECK_THROWS_AS(io::parse_trace_csv("0,abc\n"), IoError);
  CHECK_THROWS_AS(io::parse_trace_csv("0,1,2\n"), IoError);
  CHECK_THROWS_AS(io::parse_trace_csv("bin_index,counts\n"), IoError);
}

TEST_CASE("image CSV layout") {
  FringeImage img;
  img.phi = {0.0, constants::deg};
  img.Phi = {-constants::deg};
  img.pixels = {1.5, 2.5};
  const std::string csv = io::image_csv(img);
  CHECK(csv.rfind("Phi_deg\\phi_deg,0,1\n", 0) == 0);
  CHECK(csv.find("-1,1.5,2.5\n") != std::string::npos);
}

TEST_CASE("16-bit PGM") {
  const fs::path dir = scratch_dir();
  FringeImage img;
  img.phi = {0.0, 1.0, 2.0};
  img.Phi = {0.0, 1.0};
  img.pixels = {0, 1, 2, 300, 65535, 7};
  img.counts = true;
  CHECK(io::write_pgm16(dir / "c.pgm", img) == 1.0);
  const std::string data = io::read_file(dir / "c.pgm");
  const std::string header = "P5\n3 2\n65535\n";
  REQUIRE(data.size() == header.size() + 12);
  CHECK(data.substr(0, header.size()) == header);
  // Top row is the largest Phi.
  auto sample = [&](std::size_t i) {
    return (static_cast<unsigned char>(data[header.size() + 2 * i]) << 8) |
           static_cast<unsigned char>(data[header.size() + 2 * i + 1]);
  };
  CHECK(sample(0) == 300);
  CHECK(sample(1) == 65535);
  CHECK(sample(3) == 0);
  CHECK(sample(5) == 2);

  img.counts = false;
  img.pixels = {0.0, 0.5, 1.0, 0.25, 0.0, 0.0};
  CHECK(io::write_pgm16(dir / "f.pgm", img) == doctest::Approx(65535.0));
  fs::remove_all(dir);
}

}  // TEST_SUITE
