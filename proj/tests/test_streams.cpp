// Copyright 2026 The cvoc Authors.
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

#include <doctest.h>

#include <fstream>
#include <random>

#include "cvoc/common.hpp"
#include "cvoc/streams.hpp"
#include "helpers.hpp"

using namespace cvoc;

namespace {

ParamTrack make_track(std::size_t n_frames, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ParamTrack t;
  t.f0.hop = 80;
  t.mvf.hop = 80;
  t.mgc.hop = 80;
  t.mgc.n_frames = n_frames;
  t.mgc.order = 24;
  for (std::size_t i = 0; i < n_frames; ++i) {
    t.f0.values_hz.push_back(80.0 + 200.0 * u(rng));
    t.mvf.values_hz.push_back(800.0 + 7000.0 * u(rng));
    for (int m = 0; m < 25; ++m) t.mgc.coeffs.push_back(u(rng) - 0.5);
  }
  return t;
}

}  // namespace

TEST_CASE("param track round-trips through the stream files") {
  const auto dir = test::temp_dir("streams");
  const auto t = make_track(40, 5);
  save_param_track(dir + "/utt", t, 16000);
  const auto r = load_param_track(dir + "/utt", 16000);

  REQUIRE(r.n_frames() == t.n_frames());
  for (std::size_t i = 0; i < t.n_frames(); ++i) {
    CHECK(r.f0.values_hz[i] ==
          doctest::Approx(t.f0.values_hz[i]).epsilon(1e-5));
    CHECK(r.mvf.values_hz[i] ==
          doctest::Approx(t.mvf.values_hz[i]).epsilon(1e-5));
  }
  for (std::size_t i = 0; i < t.mgc.coeffs.size(); ++i)
    CHECK(r.mgc.coeffs[i] == doctest::Approx(t.mgc.coeffs[i]).epsilon(1e-5));
  CHECK(r.mgc.order == 24);
  CHECK(r.mgc.alpha == doctest::Approx(t.mgc.alpha));
  CHECK(r.mgc.gamma == doctest::Approx(t.mgc.gamma));
}

TEST_CASE("the lf0 stream holds natural-log Hz") {
  const auto dir = test::temp_dir("streams");
  auto t = make_track(8, 6);
  save_param_track(dir + "/utt", t, 16000);
  const auto lf0 = read_float_stream(dir + "/utt.lf0");
  REQUIRE(lf0.size() == 8);
  for (std::size_t i = 0; i < lf0.size(); ++i)
    CHECK(lf0[i] == doctest::Approx(std::log(t.f0.values_hz[i])).epsilon(1e-5));
}

TEST_CASE("the sidecar carries the analysis metadata") {
  const auto dir = test::temp_dir("streams");
  save_param_track(dir + "/utt", make_track(4, 7), 16000);
  std::ifstream meta(dir + "/utt.mgc.meta");
  std::string text((std::istreambuf_iterator<char>(meta)),
               std::istreambuf_iterator<char>());
  CHECK(text.find("order=24") != std::string::npos);
  CHECK(text.find("alpha=0.42") != std::string::npos);
  CHECK(text.find("hop_ms=5") != std::string::npos);
  CHECK(text.find("sample_rate=16000") != std::string::npos);
}

TEST_CASE("mismatched stream lengths are rejected") {
  auto t = make_track(10, 8);
  t.mvf.values_hz.pop_back();
  CHECK_THROWS_AS(t.validate(), InvalidArgument);
}

TEST_CASE("stream files with odd byte counts are rejected") {
  const auto dir = test::temp_dir("streams");
  {
    std::ofstream f(dir + "/bad.lf0", std::ios::binary);
    f << "abcde";  // 5 bytes
  }
  CHECK_THROWS_AS((void)read_float_stream(dir + "/bad.lf0"), TruncatedError);
}

TEST_CASE("sample-rate mismatch with the sidecar is rejected") {
  const auto dir = test::temp_dir("streams");
  save_param_track(dir + "/utt", make_track(4, 9), 16000);
  CHECK_THROWS_AS((void)load_param_track(dir + "/utt", 22050), FormatError);
}
