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

#ifndef CVOC_STREAMS_HPP_
#define CVOC_STREAMS_HPP_

#include <string>
#include <vector>

#include "cvoc/mgc.hpp"
#include "cvoc/mvf.hpp"
#include "cvoc/pitch.hpp"

namespace cvoc {

// The three per-frame vocoder parameter streams on one frame clock.
// F0 is stored in Hz in memory; the .lf0 file holds natural-log Hz.
struct ParamTrack {
  F0Track f0;
  MvfTrack mvf;
  MgcTrack mgc;

  std::size_t n_frames() const { return f0.n_frames(); }
  int hop() const { return f0.hop; }
  // Throws unless all three streams share one frame count and hop.
  void validate() const;
};

// Raw little-endian float32 stream files, frame-major, no header.
void write_float_stream(const std::string& path,
                        const std::vector<double>& values);
std::vector<double> read_float_stream(const std::string& path);

// Stream-file bundle under a common stem: <stem>.lf0, <stem>.mvf,
// <stem>.mgc and the text sidecar <stem>.mgc.meta (key=value lines:
// order, alpha, gamma, hop_ms, sample_rate).
void save_param_track(const std::string& stem, const ParamTrack& track,
                      int sample_rate);
ParamTrack load_param_track(const std::string& stem, int sample_rate);

}  // namespace cvoc

#endif  // CVOC_STREAMS_HPP_
