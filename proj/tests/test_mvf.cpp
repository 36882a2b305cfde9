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
#include "cvoc/mvf.hpp"
#include "helpers.hpp"

using namespace cvoc;

namespace {

F0Track constant_track(const Waveform& w, double hz) {
  F0Track f0;
  f0.hop = hop_samples(w.sample_rate);
  f0.values_hz.assign(frame_grid(w, 25.0).n_frames, hz);
  return f0;
}

double fraction_within(const MvfTrack& mvf, double lo, double hi) {
  std::size_t good = 0;
  for (double v : mvf.values_hz)
    if (v >= lo && v <= hi) ++good;
  return static_cast<double>(good) / mvf.n_frames();
}

}  // namespace

TEST_CASE("harmonics-plus-noise recovers the voiced/unvoiced boundary") {
  const auto w = test::harmonic_signal(150.0, 3000.0, 1.0, 16000, 7, true);
  const auto mvf = estimate_mvf(w, constant_track(w, 150.0));
  CHECK(fraction_within(mvf, 2500.0, 3500.0) >= 0.8);
}

TEST_CASE("fully harmonic signal yields a high MVF") {
  const auto w = test::harmonic_signal(150.0, 7900.0, 1.0, 16000, 9, false);
  const auto mvf = estimate_mvf(w, constant_track(w, 150.0));
  CHECK(fraction_within(mvf, 7000.0, 8000.0) >= 0.8);
}

TEST_CASE("white noise clamps to the floor") {
  const auto w = test::white_noise(1.0, 16000, 11);
  const auto mvf = estimate_mvf(w, constant_track(w, 155.0));
  std::size_t clamped = 0;
  for (double v : mvf.values_hz)
    if (v <= 800.0 + 1e-9) ++clamped;
  CHECK(static_cast<double>(clamped) / mvf.n_frames() >= 0.8);
}

TEST_CASE("track invariants hold for every input") {
  for (uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    const auto w = test::harmonic_signal(120.0, 2000.0 + 1000.0 * seed, 0.5,
                                         16000, seed, seed % 2 == 0);
    const auto mvf = estimate_mvf(w, constant_track(w, 120.0));
    for (double v : mvf.values_hz) {
      CHECK(std::isfinite(v));
      CHECK(v >= 800.0);
      CHECK(v <= 8000.0);
    }
  }
}

TEST_CASE("grid mismatch between F0 and waveform is an error") {
  const auto w = test::harmonic_signal(150.0, 3000.0, 0.5, 16000, 7, false);
  F0Track bad;
  bad.hop = hop_samples(w.sample_rate);
  bad.values_hz.assign(frame_grid(w, 25.0).n_frames + 3, 150.0);
  CHECK_THROWS_AS((void)estimate_mvf(w, bad), InvalidArgument);
}
