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

#include <cmath>

#include "cvoc/common.hpp"
#include "cvoc/pitch.hpp"
#include "helpers.hpp"

using namespace cvoc;

TEST_CASE("sawtooth F0 is recovered within 2% on interior frames") {
  const auto w = test::sawtooth(120.0, 2.0, 16000);
  const auto pr = track_f0_continuous(w);
  REQUIRE(pr.f0.n_frames() == 400);
  for (std::size_t t = 20; t + 20 < pr.f0.n_frames(); ++t)
    CHECK(pr.f0.values_hz[t] == doctest::Approx(120.0).epsilon(0.02));
}

TEST_CASE("white noise falls back to the geometric-mean anchor") {
  const auto w = test::white_noise(1.0, 16000, 42);
  const auto pr = track_f0_continuous(w);
  const double anchor = std::sqrt(60.0 * 400.0);
  for (std::size_t t = 0; t < pr.f0.n_frames(); ++t) {
    CHECK(pr.f0.values_hz[t] == doctest::Approx(anchor).epsilon(1e-9));
    CHECK(pr.f0.values_hz[t] > 0.0);
    CHECK(pr.anchored[t] == 0);
  }
}

TEST_CASE("two-tone input gives a monotone transition with correct endpoints") {
  auto a = test::sawtooth(100.0, 1.0, 16000);
  const auto b = test::sawtooth(200.0, 1.0, 16000);
  a.samples.insert(a.samples.end(), b.samples.begin(), b.samples.end());
  const auto pr = track_f0_continuous(a);
  REQUIRE(pr.f0.n_frames() == 400);
  for (std::size_t t = 20; t < 180; ++t)
    CHECK(pr.f0.values_hz[t] == doctest::Approx(100.0).epsilon(0.02));
  for (std::size_t t = 220; t + 20 < 400; ++t)
    CHECK(pr.f0.values_hz[t] == doctest::Approx(200.0).epsilon(0.02));
  for (std::size_t t = 180; t < 220; ++t)
    CHECK(pr.f0.values_hz[t + 1] >= pr.f0.values_hz[t] - 1.0);
}

TEST_CASE("waveform shorter than one analysis window is rejected") {
  Waveform w;
  w.sample_rate = 16000;
  w.samples.assign(100, 0.0);
  CHECK_THROWS_AS((void)track_f0_continuous(w), InvalidArgument);
}

TEST_CASE("config bounds are validated") {
  const auto w = test::sawtooth(120.0, 1.0, 16000);
  F0Config cfg;
  cfg.floor_hz = 40.0;
  CHECK_THROWS_AS((void)track_f0_continuous(w, cfg), InvalidArgument);
  cfg = {};
  cfg.ceil_hz = 600.0;
  CHECK_THROWS_AS((void)track_f0_continuous(w, cfg), InvalidArgument);
}

TEST_CASE("contour is positive, finite, and in bounds on varied inputs") {
  const F0Config cfg;
  std::vector<Waveform> inputs;
  inputs.push_back(test::white_noise(0.6, 16000, 1));
  inputs.push_back(test::sawtooth(90.0, 0.6, 16000));
  inputs.push_back(test::sine(300.0, 0.6, 16000));
  {
    Waveform silence;
    silence.sample_rate = 16000;
    silence.samples.assign(9600, 0.0);
    inputs.push_back(silence);
  }
  {
    auto mixed = test::sawtooth(150.0, 0.3, 16000);
    const auto tail = test::white_noise(0.3, 16000, 5);
    mixed.samples.insert(mixed.samples.end(), tail.samples.begin(),
                         tail.samples.end());
    inputs.push_back(mixed);
  }
  for (const auto& w : inputs) {
    const auto pr = track_f0_continuous(w, cfg);
    for (double v : pr.f0.values_hz) {
      CHECK(std::isfinite(v));
      CHECK(v >= cfg.floor_hz);
      CHECK(v <= cfg.ceil_hz);
    }
  }
}

TEST_CASE("tracking is invariant to the source sample rate after resampling") {
  for (int src_rate : {22050, 44100, 48000}) {
    const auto w = test::sawtooth(150.0, 1.0, src_rate);
    const auto r = resample(w, 16000);
    const auto pr = track_f0_continuous(r);
    for (std::size_t t = 20; t + 20 < pr.f0.n_frames(); ++t)
      CHECK(pr.f0.values_hz[t] == doctest::Approx(150.0).epsilon(0.02));
  }
}
