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

#ifndef CVOC_MGC_HPP_
#define CVOC_MGC_HPP_

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "cvoc/waveform.hpp"

namespace cvoc {

// Mel-generalized cepstral coefficients c0..c_order per frame.
//
// The amplitude model is |H(w)| = exp(c0) * phi_gamma(q(w)) with
// q(w) = 2 * sum_{m>=1} c_m cos(m * warp(w)) and phi_gamma the
// generalized exponential (1 + gamma q)^(1/gamma), exp(q) at gamma 0.
// With alpha = 0 and gamma = 0 the coefficients are the real cepstrum
// of the frame.
struct MgcTrack {
  std::size_t n_frames = 0;
  int order = 24;
  double alpha = 0.42;
  double gamma = -1.0 / 3.0;
  int hop = 0;
  std::vector<double> coeffs;  // row-major, n_frames x (order+1)

  int width() const { return order + 1; }
  std::span<const double> frame(std::size_t t) const {
    return {coeffs.data() + t * width(), static_cast<std::size_t>(width())};
  }
  std::span<double> frame(std::size_t t) {
    return {coeffs.data() + t * width(), static_cast<std::size_t>(width())};
  }
};

struct MgcConfig {
  int order = 24;
  double alpha = 0.42;
  double gamma = -1.0 / 3.0;
  int fft_len = 1024;
  double window_ms = 25.0;
};

// Phase response of the first-order all-pass warp at omega (radians).
double warp_frequency(double omega, double alpha);

// Per-frame generalized-log spectral fit against the Hann-windowed
// periodogram on the warped axis. The basis projection is precomputed,
// so construct once per configuration and reuse across frames.
class MgcAnalyzer {
 public:
  MgcAnalyzer(int sample_rate, const MgcConfig& cfg = {});
  ~MgcAnalyzer();
  MgcAnalyzer(MgcAnalyzer&&) noexcept;
  MgcAnalyzer& operator=(MgcAnalyzer&&) noexcept;

  // Analyzes one frame of raw samples (frame_len(), centered); applies
  // the Hann window internally. Sets *used_fallback when the
  // generalized fit degenerated and the gamma = 0 solution was used.
  std::vector<double> analyze_frame(std::span<const double> frame,
                                    bool* used_fallback = nullptr);

  // Analyzes the whole waveform on the 5 ms grid. Frames where the
  // generalized fit degenerates fall back to the gamma = 0 solution;
  // the count is reported through fallback_count.
  MgcTrack analyze(const Waveform& w, std::size_t* fallback_count = nullptr);

  int frame_len() const;
  const MgcConfig& config() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

MgcTrack mgc_analyze(const Waveform& w, const MgcConfig& cfg = {},
                     std::size_t* fallback_count = nullptr);

// Amplitude spectrum (fft_len/2 + 1 bins) of one coefficient frame.
// Strictly positive and finite for finite inputs.
std::vector<double> mgc_to_spectrum(std::span<const double> coeffs,
                                    int fft_len, double alpha, double gamma);

// Cached-basis variant for per-frame synthesis loops.
class MgcSpectrumTable {
 public:
  MgcSpectrumTable(int order, int fft_len, double alpha, double gamma);
  std::vector<double> evaluate(std::span<const double> coeffs) const;

 private:
  int order_;
  int fft_len_;
  double gamma_;
  std::vector<double> cos_table_;  // (fft_len/2+1) x order
};

}  // namespace cvoc

#endif  // CVOC_MGC_HPP_
