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

#ifndef CVOC_TESTS_HELPERS_HPP_
#define CVOC_TESTS_HELPERS_HPP_

#include <atomic>
#include <cmath>
#include <complex>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "cvoc/dsp.hpp"
#include "cvoc/waveform.hpp"

namespace cvoc::test {

inline Waveform sawtooth(double f0, double dur_s, int sr, double amp = 0.8) {
  Waveform w;
  w.sample_rate = sr;
  const std::size_t n = static_cast<std::size_t>(dur_s * sr);
  w.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sr * f0;
    w.samples[i] = amp * (2.0 * (t - std::floor(t)) - 1.0);
  }
  return w;
}

inline Waveform sine(double f0, double dur_s, int sr, double amp = 0.5) {
  Waveform w;
  w.sample_rate = sr;
  const std::size_t n = static_cast<std::size_t>(dur_s * sr);
  w.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    w.samples[i] =
        amp * std::sin(2.0 * std::numbers::pi * f0 * i / sr);
  return w;
}

inline Waveform white_noise(double dur_s, int sr, uint64_t seed,
                            double amp = 0.3) {
  Waveform w;
  w.sample_rate = sr;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  w.samples.resize(static_cast<std::size_t>(dur_s * sr));
  for (auto& v : w.samples) v = amp * g(rng);
  return w;
}

// Harmonics of f0 up to cutoff_hz, optional band-limited noise above the
// cutoff about 20 dB below the per-harmonic spectral peaks.
inline Waveform harmonic_signal(double f0, double cutoff_hz, double dur_s,
                                int sr, uint64_t seed, bool noise_above) {
  Waveform w;
  w.sample_rate = sr;
  const std::size_t n = static_cast<std::size_t>(dur_s * sr);
  w.samples.assign(n, 0.0);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  const int kmax = static_cast<int>(cutoff_hz / f0);
  for (int k = 1; k <= kmax; ++k) {
    const double ph = (rng() % 1000) / 1000.0 * 2.0 * std::numbers::pi;
    for (std::size_t i = 0; i < n; ++i)
      w.samples[i] += std::cos(2.0 * std::numbers::pi * k * f0 * i / sr + ph);
  }
  for (auto& v : w.samples) v /= kmax;

  if (noise_above) {
    std::vector<double> noise(n);
    for (auto& v : noise) v = g(rng);
    const auto lp = dsp::lowpass_kernel(129, cutoff_hz / (sr / 2.0), 8.0);
    std::vector<double> hp(n, 0.0);
    const int half = static_cast<int>(lp.size()) / 2;
    for (std::size_t i = 0; i < n; ++i) {
      double acc = noise[i];
      for (std::size_t k = 0; k < lp.size(); ++k) {
        const long idx = static_cast<long>(i) - static_cast<long>(k) + half;
        if (idx >= 0 && idx < static_cast<long>(n)) acc -= lp[k] * noise[idx];
      }
      hp[i] = acc;
    }
    // Calibrate the noise-band peak 20 dB below the harmonic peak.
    auto band_peaks = [&](const std::vector<double>& x) {
      const auto win = dsp::hann_periodic(1024);
      std::vector<double> fr(1024);
      for (int i = 0; i < 1024; ++i) fr[i] = x[n / 2 + i] * win[i];
      const auto spec = dsp::rfft(fr, 1024);
      double below = 0.0, above = 0.0;
      for (std::size_t b = 0; b < spec.size(); ++b) {
        const double hz = b * static_cast<double>(sr) / 1024;
        const double a = std::abs(spec[b]);
        if (hz < cutoff_hz) below = std::max(below, a);
        if (hz > cutoff_hz) above = std::max(above, a);
      }
      return std::pair<double, double>(below, above);
    };
    const double harmonic_peak = band_peaks(w.samples).first;
    const double noise_peak = band_peaks(hp).second;
    const double scale = 0.1 * harmonic_peak / std::max(1e-30, noise_peak);
    for (std::size_t i = 0; i < n; ++i) w.samples[i] += scale * hp[i];
  }
  return w;
}

// Power spectrum of a Hann-windowed slice, for FFT-peak oracles.
inline std::vector<double> windowed_power_spectrum(
    const std::vector<double>& x, std::size_t offset, std::size_t fft_len) {
  const auto win = dsp::hann_periodic(fft_len);
  std::vector<double> fr(fft_len, 0.0);
  for (std::size_t i = 0; i < fft_len && offset + i < x.size(); ++i)
    fr[i] = x[offset + i] * win[i];
  const auto spec = dsp::rfft(fr, fft_len);
  std::vector<double> p(spec.size());
  for (std::size_t b = 0; b < spec.size(); ++b) p[b] = std::norm(spec[b]);
  return p;
}

inline std::string temp_dir(const std::string& tag) {
  static std::atomic<uint64_t> counter{0};
  const auto dir = std::filesystem::temp_directory_path() /
                   ("cvoc_test_" + tag + "_" + std::to_string(::getpid()) +
                    "_" + std::to_string(counter.fetch_add(1)));
  std::filesystem::create_directories(dir);
  return dir.string();
}

}  // namespace cvoc::test

#endif  // CVOC_TESTS_HELPERS_HPP_
