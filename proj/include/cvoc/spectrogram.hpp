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

#ifndef CVOC_SPECTROGRAM_HPP_
#define CVOC_SPECTROGRAM_HPP_

#include <optional>
#include <string>
#include <vector>

#include "cvoc/mvf.hpp"
#include "cvoc/waveform.hpp"

namespace cvoc {

struct SpectrogramConfig {
  int fft_len = 1024;
  double window_ms = 25.0;
  double dynamic_range_db = 70.0;
  int zoom = 1;
};

// Log-magnitude STFT on the 5 ms grid, clipped to the top
// dynamic_range_db. columns x (fft_len/2 + 1) values in dB.
struct SpectrogramMatrix {
  std::size_t columns = 0;
  std::size_t bins = 0;
  std::vector<double> db;  // column-major: column * bins + bin

  double at(std::size_t col, std::size_t bin) const {
    return db[col * bins + bin];
  }
};

SpectrogramMatrix compute_spectrogram(const Waveform& w,
                                      const SpectrogramConfig& cfg = {});

// 8-bit greyscale PNG raster, time left to right, 0 Hz at the bottom.
// The optional MVF contour is drawn as a white curve.
void render_spectrogram(const Waveform& w, const std::string& png_path,
                        const SpectrogramConfig& cfg = {},
                        const MvfTrack* overlay_mvf = nullptr);

// Minimal deterministic 8-bit greyscale PNG encoder (zlib-backed).
void write_png_gray8(const std::string& path, std::size_t width,
                     std::size_t height,
                     const std::vector<unsigned char>& pixels);

}  // namespace cvoc

#endif  // CVOC_SPECTROGRAM_HPP_
