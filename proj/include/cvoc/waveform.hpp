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

#ifndef CVOC_WAVEFORM_HPP_
#define CVOC_WAVEFORM_HPP_

#include <cstddef>
#include <string>
#include <vector>

namespace cvoc {

// Working sample rate used throughout the toolkit. All inputs are
// resampled to this rate on ingest so every parameter stream shares
// one frame clock.
inline constexpr int kWorkingRate = 16000;
inline constexpr double kHopMs = 5.0;

// Mono audio signal. Samples are nominally within [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate = kWorkingRate;

  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

// Analysis frame layout shared by every parameter stream.
struct FrameGrid {
  int hop = 0;        // samples per frame shift
  int frame_len = 0;  // samples per analysis window
  std::size_t n_frames = 0;
};

int hop_samples(int sample_rate);

// Reads a RIFF/WAVE file: PCM 8/16/24-bit integer or 32-bit float,
// any channel count (channels are averaged to mono). Samples are
// normalized to [-1, 1]. Throws FileError for a missing file,
// FormatError for a non-PCM codec and TruncatedError when the file
// ends before the declared header or data is complete.
Waveform read_wav(const std::string& path);

// Writes 16-bit PCM mono, little-endian. Samples outside [-1, 1] are
// clipped; the number of clipped samples is returned.
std::size_t write_wav(const std::string& path, const Waveform& w);

// Band-limited polyphase sample-rate conversion (Kaiser-windowed sinc,
// beta = 8, 64 taps per phase at the lower of the two rates).
Waveform resample(const Waveform& w, int target_rate);

// Builds the 5 ms frame clock. Frame t is centered at sample t*hop;
// edge frames are zero-padded by consumers. window_ms must be >= 5.
FrameGrid frame_grid(const Waveform& w, double window_ms);

// Copies frame_len samples centered at `center`, zero-padding outside
// the signal.
std::vector<double> extract_frame(const std::vector<double>& samples,
                                  long center, int frame_len);

}  // namespace cvoc

#endif  // CVOC_WAVEFORM_HPP_
