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

#ifndef CVOC_PITCH_HPP_
#define CVOC_PITCH_HPP_

#include <cstdint>
#include <vector>

#include "cvoc/waveform.hpp"

namespace cvoc {

// Continuous fundamental-frequency contour: one strictly positive value
// per 5 ms frame, including unvoiced regions.
struct F0Track {
  std::vector<double> values_hz;
  int hop = 0;

  std::size_t n_frames() const { return values_hz.size(); }
};

struct F0Config {
  double floor_hz = 60.0;
  double ceil_hz = 400.0;
  // Frames whose normalized periodicity falls below this are treated as
  // interpolation targets rather than anchors.
  double periodicity_threshold = 0.45;
  // First CMND dip below this absolute level wins over the global minimum.
  double yin_threshold = 0.15;
};

// Per-frame tracker output. `anchored` marks frames whose raw estimate
// came from a periodicity peak; the contour between anchors is
// interpolated in log-F0 and then median + moving-average smoothed.
struct PitchResult {
  F0Track f0;
  std::vector<uint8_t> anchored;
  std::vector<double> periodicity;
};

// Cumulative-mean-normalized difference (YIN-style) tracker producing a
// continuous contour: no zeros, no NaNs, all values within the config
// bounds. Throws if the waveform is shorter than one analysis buffer.
PitchResult track_f0_continuous(const Waveform& w, const F0Config& cfg = {});

}  // namespace cvoc

#endif  // CVOC_PITCH_HPP_
