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

#include "cvoc/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "cvoc/common.hpp"
#include "cvoc/dsp.hpp"

namespace cvoc {

namespace {

// Steeper requested slopes get longer complementary kernels.
int crossover_taps(double slope_db_oct) {
  int taps = static_cast<int>(std::lround(slope_db_oct * 4.0 / 3.0));
  taps = std::max(taps, 17);
  if (taps % 2 == 0) ++taps;
  return taps;
}

constexpr double kCrossoverBeta = 6.0;

// Portable seeded gaussian source (Box-Muller over mt19937_64).
class GaussianSource {
 public:
  explicit GaussianSource(uint64_t seed) : rng_(seed) {}
  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1;
    do {
      u1 = uniform();
    } while (u1 <= 1e-300);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  double uniform() {
    return (rng_() >> 11) * (1.0 / 9007199254740992.0);  // 53-bit mantissa
  }
  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

double sample_at(const std::vector<double>& x, long i) {
  return (i >= 0 && i < static_cast<long>(x.size())) ? x[i] : 0.0;
}

// Per-frame FIR filtering with 50%-overlap Hann OLA (exact COLA).
// kernel_for(frame) returns the taps, or an empty span for identity.
template <typename KernelFn, typename ShapeFn>
std::vector<double> frame_filter_ola(const std::vector<double>& x,
                                     std::size_t n_frames, int hop,
                                     KernelFn kernel_for, ShapeFn shape_for) {
  const int win_len = 2 * hop;
  const auto window = dsp::hann_periodic(win_len);
  std::vector<double> out(x.size(), 0.0);
  for (std::size_t f = 0; f < n_frames; ++f) {
    const long c = static_cast<long>(f) * hop;
    const std::span<const double> kernel = kernel_for(f);
    for (int i = 0; i < win_len; ++i) {
      const long pos = c - hop + i;
      if (pos < 0 || pos >= static_cast<long>(out.size())) continue;
      double v;
      if (kernel.empty()) {
        v = sample_at(x, pos);
      } else {
        const int half = static_cast<int>(kernel.size()) / 2;
        double acc = 0.0;
        for (int k = 0; k < static_cast<int>(kernel.size()); ++k)
          acc += kernel[k] * sample_at(x, pos - k + half);
        v = acc;
      }
      out[pos] += v * window[i] * shape_for(f, i);
    }
  }
  return out;
}

}  // namespace

void SynthesisConfig::validate(int hop) const {
  if (fft_len < 2 * hop)
    throw InvalidArgument("SynthesisConfig: fft_len must be >= 2*hop");
  if (!dsp::is_pow2(fft_len))
    throw InvalidArgument("SynthesisConfig: fft_len must be a power of two");
  if (crossover_slope_db_oct <= 0.0)
    throw InvalidArgument("SynthesisConfig: crossover slope must be > 0");
}

Waveform build_voiced_excitation(const F0Track& f0,
                                 const ResidualPrototype& proto,
                                 std::size_t n_samples, int sample_rate,
                                 ExcitationNorm norm) {
  if (f0.values_hz.empty())
    throw InvalidArgument("build_voiced_excitation: empty F0 track");
  for (double v : f0.values_hz)
    if (!(v > 0.0))
      throw InvalidArgument("build_voiced_excitation: F0 must be positive");
  if (proto.pulse.empty())
    throw InvalidArgument("build_voiced_excitation: empty prototype");

  Waveform out;
  out.sample_rate = sample_rate;
  out.samples.assign(n_samples, 0.0);

  const int hop = f0.hop;
  const std::size_t n_frames = f0.n_frames();
  auto f0_at = [&](double t) {
    const std::size_t idx = std::min<std::size_t>(
        n_frames - 1,
        static_cast<std::size_t>(std::max(0.0, t / hop + 0.5)));
    return f0.values_hz[idx];
  };

  // The prototype is stretched to two periods of the local F0 and
  // evaluated at the exact fractional center by windowed-sinc
  // interpolation. Any quantization of length or position aliases the
  // period jitter into an audible (and trackable) subharmonic.
  const double proto_len = static_cast<double>(proto.pulse.size());
  const double proto_center = proto_len / 2.0;
  constexpr double kBeta = 8.0;
  const double i0beta = dsp::bessel_i0(kBeta);

  auto render_pulse = [&](double center, double period,
                          std::vector<double>& buf, long& start) {
    const double ratio = proto_center / period;  // proto samples per output
    const double cutoff = std::min(1.0, 1.0 / ratio);
    const double half_width = 16.0 * std::max(1.0, ratio);
    start = static_cast<long>(std::ceil(center - period));
    const long stop = static_cast<long>(std::floor(center + period));
    buf.assign(static_cast<std::size_t>(std::max(0L, stop - start + 1)), 0.0);
    double energy = 0.0;
    for (long idx = start; idx <= stop; ++idx) {
      const double d = static_cast<double>(idx) - center;  // [-T, T]
      const double u = proto_center + d * ratio;
      const long k_lo = std::max(0L, static_cast<long>(std::ceil(u - half_width)));
      const long k_hi = std::min(static_cast<long>(proto_len) - 1,
                                 static_cast<long>(std::floor(u + half_width)));
      double acc = 0.0;
      for (long k = k_lo; k <= k_hi; ++k) {
        const double x = u - static_cast<double>(k);
        const double arg = std::numbers::pi * cutoff * x;
        const double s = (std::abs(arg) < 1e-12) ? 1.0 : std::sin(arg) / arg;
        const double rr = x / half_width;
        acc += proto.pulse[k] * cutoff * s *
               dsp::bessel_i0(kBeta * std::sqrt(std::max(0.0, 1.0 - rr * rr))) /
               i0beta;
      }
      const double window = 0.5 + 0.5 * std::cos(std::numbers::pi * d / period);
      const double v = acc * window;
      buf[idx - start] = v;
      energy += v * v;
    }
    const double target =
        (norm == ExcitationNorm::kPerFrame) ? period / hop : 1.0;
    const double scale = energy > 0.0 ? std::sqrt(target / energy) : 0.0;
    for (auto& v : buf) v *= scale;
  };

  // Instants by integrating the instantaneous F0.
  std::vector<double> buf;
  double t = 0.5 * sample_rate / f0_at(0.0);
  while (t < static_cast<double>(n_samples)) {
    const double period = sample_rate / f0_at(t);
    long start = 0;
    render_pulse(t, period, buf, start);
    for (std::size_t i = 0; i < buf.size(); ++i) {
      const long idx = start + static_cast<long>(i);
      if (idx >= 0 && idx < static_cast<long>(n_samples))
        out.samples[idx] += buf[i];
    }
    t += period;
  }
  return out;
}

Waveform build_noise_excitation(const MvfTrack& mvf, std::size_t n_samples,
                                const SynthesisConfig& cfg, uint64_t seed,
                                int sample_rate,
                                std::span<const double> frame_gain) {
  const int hop = mvf.hop;
  cfg.validate(hop);
  const std::size_t n_frames = mvf.n_frames();
  const double nyquist = sample_rate / 2.0;

  GaussianSource gauss(seed);
  std::vector<double> noise(n_samples);
  for (auto& v : noise) v = gauss.next();

  // Kernels cached per cutoff bin (25 Hz quantization).
  const int taps = crossover_taps(cfg.crossover_slope_db_oct);
  std::map<int, std::vector<double>> kernels;
  auto highpass_for = [&](double cutoff_hz) -> const std::vector<double>& {
    const int key = static_cast<int>(std::lround(cutoff_hz / 25.0));
    auto it = kernels.find(key);
    if (it != kernels.end()) return it->second;
    auto lp = dsp::lowpass_kernel(taps, (key * 25.0) / nyquist,
                                  kCrossoverBeta);
    // Complementary high-pass: delta minus the low-pass.
    for (auto& v : lp) v = -v;
    lp[lp.size() / 2] += 1.0;
    return kernels.emplace(key, std::move(lp)).first->second;
  };

  auto is_unvoiced = [&](std::size_t f) {
    return mvf.values_hz[f] <= cfg.mvf_floor_hz + 1.0;
  };

  auto kernel_for = [&](std::size_t f) -> std::span<const double> {
    if (is_unvoiced(f)) return {};  // full-band
    return highpass_for(std::clamp(mvf.values_hz[f], 0.0, nyquist));
  };

  auto shape_for = [&](std::size_t f, int i) {
    if (!is_unvoiced(f)) return 1.0;
    switch (cfg.unvoiced_envelope) {
      case UnvoicedEnvelope::kTriangular:
        return 1.0 - std::abs(i - hop) / static_cast<double>(hop);
      case UnvoicedEnvelope::kAmplitudeFollow: {
        if (frame_gain.empty()) return 1.0;
        // Follow the local gain trajectory, normalized at the frame center.
        const double here = frame_gain[std::min(f, frame_gain.size() - 1)];
        if (here <= 0.0) return 1.0;
        const double pos = f + (i - hop) / static_cast<double>(hop);
        const double lo = std::clamp(std::floor(pos), 0.0,
                                     static_cast<double>(frame_gain.size() - 1));
        const double hi = std::min(lo + 1.0,
                                   static_cast<double>(frame_gain.size() - 1));
        const double frac = std::clamp(pos - lo, 0.0, 1.0);
        const double g =
            (1.0 - frac) * frame_gain[static_cast<std::size_t>(lo)] +
            frac * frame_gain[static_cast<std::size_t>(hi)];
        return std::clamp(g / here, 0.0, 4.0);
      }
      case UnvoicedEnvelope::kNone:
        return 1.0;
    }
    return 1.0;
  };

  Waveform out;
  out.sample_rate = sample_rate;
  out.samples = frame_filter_ola(noise, n_frames, hop, kernel_for, shape_for);
  if (cfg.noise_gain != 1.0)
    for (auto& v : out.samples) v *= cfg.noise_gain;
  return out;
}

Waveform synthesize(const ParamTrack& p, const ResidualPrototype& proto,
                    const SynthesisConfig& cfg, int sample_rate) {
  p.validate();
  const int hop = p.hop();
  cfg.validate(hop);
  const std::size_t n_frames = p.n_frames();
  const std::size_t n_samples = n_frames * hop;
  const double nyquist = sample_rate / 2.0;

  // Per-frame spectral gains drive the unvoiced amplitude envelope.
  std::vector<double> frame_gain(n_frames);
  for (std::size_t f = 0; f < n_frames; ++f)
    frame_gain[f] = std::exp(p.mgc.frame(f)[0]);

  const Waveform voiced =
      build_voiced_excitation(p.f0, proto, n_samples, sample_rate,
                              cfg.excitation_norm);
  const Waveform noise = build_noise_excitation(
      p.mvf, n_samples, cfg, cfg.noise_seed, sample_rate, frame_gain);

  // Low-pass the voiced branch at the per-frame MVF (complement of the
  // noise branch's high-pass).
  const int taps = crossover_taps(cfg.crossover_slope_db_oct);
  std::map<int, std::vector<double>> kernels;
  auto lowpass_for = [&](double cutoff_hz) -> const std::vector<double>& {
    const int key = static_cast<int>(std::lround(cutoff_hz / 25.0));
    auto it = kernels.find(key);
    if (it != kernels.end()) return it->second;
    auto lp = dsp::lowpass_kernel(taps, (key * 25.0) / nyquist,
                                  kCrossoverBeta);
    return kernels.emplace(key, std::move(lp)).first->second;
  };
  auto kernel_for = [&](std::size_t f) -> std::span<const double> {
    return lowpass_for(std::clamp(p.mvf.values_hz[f], 0.0, nyquist));
  };
  auto no_shape = [](std::size_t, int) { return 1.0; };
  std::vector<double> voiced_lp =
      frame_filter_ola(voiced.samples, n_frames, hop, kernel_for, no_shape);

  // Excitation: spectral balance at the crossover follows the local F0
  // (a unit-energy pulse per period has per-sample power f0/sr).
  std::vector<double> excitation(n_samples, 0.0);
  for (std::size_t f = 0; f < n_frames; ++f) {
    const double sigma = std::sqrt(p.f0.values_hz[f] / sample_rate);
    const long begin = static_cast<long>(f) * hop;
    const long end = std::min<long>(n_samples, begin + hop);
    for (long i = begin; i < end; ++i)
      excitation[i] = voiced_lp[i] + sigma * noise.samples[i];
  }

  // Frequency-domain envelope filtering, 50% Hann OLA.
  const MgcSpectrumTable envelope_table(p.mgc.order, cfg.fft_len, p.mgc.alpha,
                                        p.mgc.gamma);
  const int win_len = 2 * hop;
  const auto window = dsp::hann_periodic(win_len);
  std::vector<double> out(n_samples, 0.0);
  std::vector<double> seg(win_len);
  for (std::size_t f = 0; f < n_frames; ++f) {
    const long c = static_cast<long>(f) * hop;
    for (int i = 0; i < win_len; ++i)
      seg[i] = sample_at(excitation, c - hop + i) * window[i];

    auto bins = dsp::rfft(seg, cfg.fft_len);
    const auto amp = envelope_table.evaluate(p.mgc.frame(f));
    for (std::size_t b = 0; b < bins.size(); ++b) bins[b] *= amp[b];
    const auto filtered = dsp::irfft(bins, cfg.fft_len);

    for (int j = 0; j < cfg.fft_len; ++j) {
      const long offset = (j <= cfg.fft_len / 2) ? j : j - cfg.fft_len;
      const long idx = c - hop + offset;
      if (idx >= 0 && idx < static_cast<long>(n_samples))
        out[idx] += filtered[j];
    }
  }

  for (double v : out)
    if (!std::isfinite(v))
      throw Error("synthesize: non-finite sample produced");

  Waveform result;
  result.sample_rate = sample_rate;
  result.samples = std::move(out);
  return result;
}

}  // namespace cvoc
