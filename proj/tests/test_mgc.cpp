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
#include <complex>
#include <numbers>
#include <random>

#include "cvoc/common.hpp"
#include "cvoc/dsp.hpp"
#include "cvoc/mgc.hpp"
#include "helpers.hpp"

using namespace cvoc;

namespace {
constexpr double kPi = std::numbers::pi;

Waveform ar2_signal(double pole_radius, double pole_angle, double dur_s,
                    int sr, uint64_t seed) {
  const double a1 = 2.0 * pole_radius * std::cos(pole_angle);
  const double a2 = -pole_radius * pole_radius;
  Waveform w;
  w.sample_rate = sr;
  w.samples.assign(static_cast<std::size_t>(dur_s * sr), 0.0);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 0.1);
  double y1 = 0.0, y2 = 0.0;
  for (auto& v : w.samples) {
    const double y = a1 * y1 + a2 * y2 + g(rng);
    y2 = y1;
    y1 = y;
    v = y;
  }
  return w;
}

double ar2_truth_db(double pole_radius, double pole_angle, double omega) {
  const double a1 = 2.0 * pole_radius * std::cos(pole_angle);
  const double a2 = -pole_radius * pole_radius;
  const std::complex<double> den =
      1.0 - a1 * std::exp(std::complex<double>(0.0, -omega)) -
      a2 * std::exp(std::complex<double>(0.0, -2.0 * omega));
  return -20.0 * std::log10(std::abs(den));
}

}  // namespace

TEST_CASE("a flat-spectrum impulse puts all information in c0") {
  MgcAnalyzer analyzer(16000);
  std::vector<double> frame(analyzer.frame_len(), 0.0);
  frame[analyzer.frame_len() / 2] = 1.0;
  const auto c = analyzer.analyze_frame(frame);
  double tail = 0.0;
  for (int m = 1; m <= 24; ++m) tail += c[m] * c[m];
  CHECK(tail <= 1e-6);
}

TEST_CASE("alpha 0 gamma 0 equals the direct FFT-log-IFFT cepstrum") {
  MgcConfig cfg;
  cfg.alpha = 0.0;
  cfg.gamma = 0.0;
  MgcAnalyzer analyzer(16000, cfg);
  const auto wn = test::white_noise(0.5, 16000, 3);
  const auto frame = extract_frame(wn.samples, 2000, analyzer.frame_len());
  const auto c = analyzer.analyze_frame(frame);

  // Oracle: real cepstrum of the same Hann-windowed periodogram by a
  // direct forward FFT, log magnitude, inverse FFT.
  const auto win = dsp::hann_periodic(analyzer.frame_len());
  std::vector<double> fw(frame.size());
  for (std::size_t i = 0; i < frame.size(); ++i) fw[i] = frame[i] * win[i];
  const auto spec = dsp::rfft(fw, cfg.fft_len);
  std::vector<std::complex<double>> logmag(cfg.fft_len);
  for (int k = 0; k <= cfg.fft_len / 2; ++k)
    logmag[k] = std::log(std::max(1e-5, std::abs(spec[k])));
  for (int k = 1; k < cfg.fft_len / 2; ++k)
    logmag[cfg.fft_len - k] = logmag[k];
  dsp::fft(logmag, true);
  for (int m = 0; m <= cfg.order; ++m)
    CHECK(c[m] == doctest::Approx(logmag[m].real()).epsilon(1e-6));
}

TEST_CASE("AR(2) spectrum is reconstructed accurately") {
  const double r = 0.95, theta = 0.3 * kPi;
  const auto w = ar2_signal(r, theta, 2.0, 16000, 17);
  std::size_t fallbacks = 0;
  const auto track = mgc_analyze(w, {}, &fallbacks);
  CHECK(fallbacks == 0);

  // The reconstructed spectrum of a stationary signal is the log-domain
  // average of the per-frame reconstructions.
  const MgcSpectrumTable table(24, 1024, 0.42, -1.0 / 3.0);
  const int kbins = static_cast<int>(7000.0 / 8000.0 * 512);
  std::vector<double> avg_db(kbins, 0.0);
  std::size_t count = 0;
  double per_frame_sum = 0.0;
  for (std::size_t t = 10; t + 10 < track.n_frames; ++t) {
    const auto amp = table.evaluate(track.frame(t));
    double frame_bias = 0.0;
    std::vector<double> diff(kbins);
    for (int b = 0; b < kbins; ++b) {
      const double db = 20.0 * std::log10(amp[b]);
      avg_db[b] += db;
      diff[b] = db - ar2_truth_db(r, theta, kPi * b / 512.0);
      frame_bias += diff[b];
    }
    frame_bias /= kbins;
    double frame_lsd = 0.0;
    for (int b = 0; b < kbins; ++b)
      frame_lsd += std::abs(diff[b] - frame_bias);
    per_frame_sum += frame_lsd / kbins;
    ++count;
  }
  double bias = 0.0;
  std::vector<double> diff(kbins);
  for (int b = 0; b < kbins; ++b) {
    diff[b] = avg_db[b] / static_cast<double>(count) -
              ar2_truth_db(r, theta, kPi * b / 512.0);
    bias += diff[b];
  }
  bias /= kbins;
  double lsd = 0.0;
  for (int b = 0; b < kbins; ++b) lsd += std::abs(diff[b] - bias);
  lsd /= kbins;
  CHECK(lsd <= 1.5);
  // per-frame distortion is dominated by periodogram variance; keep a
  // sanity bound so regressions stay visible
  CHECK(per_frame_sum / static_cast<double>(count) <= 4.0);
}

TEST_CASE("doubling the input moves only c0") {
  auto w = test::sawtooth(150.0, 0.5, 16000);
  const auto t1 = mgc_analyze(w);
  for (auto& v : w.samples) v *= 2.0;
  const auto t2 = mgc_analyze(w);
  REQUIRE(t1.n_frames == t2.n_frames);
  for (std::size_t t = 0; t < t1.n_frames; ++t) {
    CHECK(t2.frame(t)[0] - t1.frame(t)[0] ==
          doctest::Approx(std::log(2.0)).epsilon(1e-6));
    for (int m = 1; m <= 24; ++m)
      CHECK(std::abs(t1.frame(t)[m] - t2.frame(t)[m]) <= 1e-4);
  }
}

TEST_CASE("zero coefficients give a flat unit spectrum") {
  std::vector<double> c(25, 0.0);
  const auto amp = mgc_to_spectrum(c, 1024, 0.42, -1.0 / 3.0);
  REQUIRE(amp.size() == 513);
  for (double v : amp) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("a gain-only frame is flat and monotone in the gain") {
  double prev = 0.0;
  for (double gain : {-1.0, 0.0, 1.0, 2.0}) {
    std::vector<double> c(25, 0.0);
    c[0] = gain;
    const auto amp = mgc_to_spectrum(c, 1024, 0.42, -1.0 / 3.0);
    for (double v : amp) CHECK(v == doctest::Approx(amp[0]).epsilon(1e-12));
    if (gain > -1.0) CHECK(amp[0] > prev);
    prev = amp[0];
  }
}

TEST_CASE("reconstructed spectra stay positive and finite") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> c(25);
    for (auto& v : c) v = u(rng);
    const auto amp = mgc_to_spectrum(c, 1024, 0.42, -1.0 / 3.0);
    for (double v : amp) {
      CHECK(v > 0.0);
      CHECK(std::isfinite(v));
    }
  }
}

TEST_CASE("track records its configuration") {
  const auto w = test::sawtooth(150.0, 0.5, 16000);
  MgcConfig cfg;
  const auto track = mgc_analyze(w, cfg);
  CHECK(track.order == 24);
  CHECK(track.alpha == doctest::Approx(0.42));
  CHECK(track.gamma == doctest::Approx(-1.0 / 3.0));
  CHECK(track.hop == 80);
  CHECK(track.n_frames == frame_grid(w, cfg.window_ms).n_frames);
  for (double v : track.coeffs) CHECK(std::isfinite(v));
}

TEST_CASE("configuration preconditions are enforced") {
  CHECK_THROWS_AS(MgcAnalyzer(16000, MgcConfig{24, 0.42, 0.5, 1024, 25.0}),
                  InvalidArgument);
  CHECK_THROWS_AS(MgcAnalyzer(16000, MgcConfig{24, 1.0, -0.3, 1024, 25.0}),
                  InvalidArgument);
  CHECK_THROWS_AS(MgcAnalyzer(16000, MgcConfig{0, 0.42, -0.3, 1024, 25.0}),
                  InvalidArgument);
  CHECK_THROWS_AS(MgcAnalyzer(16000, MgcConfig{24, 0.42, -0.3, 1000, 25.0}),
                  InvalidArgument);
}
