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

#ifndef CVOC_MVF_HPP_
#define CVOC_MVF_HPP_

#include <vector>

#include "cvoc/pitch.hpp"
#include "cvoc/waveform.hpp"

namespace cvoc {

// Per-frame Maximum Voiced Frequency in Hz, clamped to
// [floor, Nyquist] everywhere.
struct MvfTrack {
  std::vector<double> values_hz;
  int hop = 0;

  std::size_t n_frames() const { return values_hz.size(); }
};

struct MvfConfig {
  double floor_hz = 800.0;
  int fft_len = 1024;
  // Harmonic band peaks must clear the inter-harmonic level by this
  // normalized prominence to count as voiced.
  double prominence_threshold = 0.15;
  // Scan stops after this many consecutive non-harmonic bands.
  int stop_after_misses = 3;
  int median_width = 5;
};

// Estimates the MVF as the frequency of the last harmonic of the
// frame's F0 whose spectral peak is prominent over the inter-harmonic
// floor, before `stop_after_misses` consecutive harmonics fail.
// Requires f0 to be on the waveform's 5 ms grid.
MvfTrack estimate_mvf(const Waveform& w, const F0Track& f0,
                      const MvfConfig& cfg = {});

}  // namespace cvoc

#endif  // CVOC_MVF_HPP_
