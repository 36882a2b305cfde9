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

#include "cvoc/mvf.hpp"

#include <algorithm>
#include <cmath>

#include "cvoc/common.hpp"
#include "cvoc/dsp.hpp"

namespace cvoc {

namespace {

// Peak magnitude over [lo_hz, hi_hz], clipped to the valid bin range.
double band_peak(const std::vector<double>& mag, double bin_hz, double lo_hz,
                 double hi_hz) {
  int lo = std::max(1, static_cast<int>(std::floor(lo_hz / bin_hz)));
  int hi = std::min(static_cast<int>(mag.size()) - 1,
                    static_cast<int>(std::ceil(hi_hz / bin_hz)));
  double peak = 0.0;
  for (int b = lo; b <= hi; ++b) peak = std::max(peak, mag[b]);
  return peak;
}

}  // namespace

MvfTrack estimate_mvf(const Waveform& w, const F0Track& f0,
                      const MvfConfig& cfg) {
  const FrameGrid grid = frame_grid(w, 25.0);
  if (f0.hop != grid.hop || f0.n_frames() != grid.n_frames)
    throw InvalidArgument("estimate_mvf: F0 track is not on this frame grid");

  const double sr = w.sample_rate;
  const double nyquist = sr / 2.0;
  const double bin_hz = sr / cfg.fft_len;
  // The analysis window matches the FFT length; a 25 ms window cannot
  // resolve harmonics near the 60 Hz floor.
  const auto window = dsp::hann_periodic(cfg.fft_len);

  MvfTrack mvf;
  mvf.hop = grid.hop;
  mvf.values_hz.resize(grid.n_frames);

  std::vector<double> raw(grid.n_frames, cfg.floor_hz);
  for (std::size_t t = 0; t < grid.n_frames; ++t) {
    const long center = static_cast<long>(t) * grid.hop;
    auto frame = extract_frame(w.samples, center, cfg.fft_len);
    double mean = 0.0;
    for (double v : frame) mean += v;
    mean /= frame.size();
    for (std::size_t i = 0; i < frame.size(); ++i)
      frame[i] = (frame[i] - mean) * window[i];

    const auto bins = dsp::rfft(frame, cfg.fft_len);
    std::vector<double> mag(bins.size());
    for (std::size_t b = 0; b < bins.size(); ++b) mag[b] = std::abs(bins[b]);

    const double hz = f0.values_hz[t];
    int misses = 0;
    int last_harmonic = 0;
    for (int k = 1;; ++k) {
      const double fk = k * hz;
      if (fk + hz / 4.0 >= nyquist) break;
      const double peak = band_peak(mag, bin_hz, fk - hz / 4.0, fk + hz / 4.0);
      // Reference level: the louder of the two inter-harmonic gaps. A
      // true harmonic towers over both; in noise the band peak and the
      // gap peaks are statistically interchangeable.
      const double gap_lo =
          band_peak(mag, bin_hz, fk - 0.5 * hz - hz / 6.0,
                    fk - 0.5 * hz + hz / 6.0);
      const double gap_hi =
          band_peak(mag, bin_hz, fk + 0.5 * hz - hz / 6.0,
                    std::min(nyquist, fk + 0.5 * hz + hz / 6.0));
      const double floor_level = std::max(gap_lo, gap_hi);
      const double prom = (peak - floor_level) / (peak + floor_level + 1e-30);
      if (prom >= cfg.prominence_threshold) {
        last_harmonic = k;
        misses = 0;
      } else if (++misses >= cfg.stop_after_misses) {
        break;
      }
    }
    raw[t] = std::clamp(last_harmonic * hz, cfg.floor_hz, nyquist);
  }

  raw = dsp::median_filter(raw, cfg.median_width);
  for (std::size_t t = 0; t < grid.n_frames; ++t)
    mvf.values_hz[t] = std::clamp(raw[t], cfg.floor_hz, nyquist);
  return mvf;
}

}  // namespace cvoc
