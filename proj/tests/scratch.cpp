// Scratch experiments (not part of the shipped test suite).
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <vector>

#include "cvoc/dsp.hpp"
#include "cvoc/evaluation.hpp"
#include "cvoc/gci.hpp"
#include "cvoc/mgc.hpp"
#include "cvoc/mvf.hpp"
#include "cvoc/pitch.hpp"
#include "cvoc/prototype.hpp"
#include "cvoc/synthcorpus.hpp"
#include "cvoc/synthesis.hpp"
#include "cvoc/vocoder.hpp"

using namespace cvoc;
constexpr double kPi = std::numbers::pi;

Waveform sawtooth(double f0, double dur, int sr) {
  Waveform w; w.sample_rate = sr;
  const std::size_t n = static_cast<std::size_t>(dur * sr);
  w.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double t = static_cast<double>(i) / sr * f0;
    w.samples[i] = 0.8 * (2.0 * (t - std::floor(t)) - 1.0);
  }
  return w;
}

Waveform white_noise(double dur, int sr, uint64_t seed, double amp = 0.3) {
  Waveform w; w.sample_rate = sr;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  w.samples.resize(static_cast<std::size_t>(dur * sr));
  for (auto& v : w.samples) v = amp * g(rng);
  return w;
}

void probe_pitch() {
  for (double f : {90.0, 120.0, 200.0, 330.0}) {
    auto w = sawtooth(f, 2.0, 16000);
    auto pr = track_f0_continuous(w);
    std::size_t n = pr.f0.n_frames(), good = 0, interior = 0;
    double worst = 0;
    for (std::size_t t = 20; t + 20 < n; ++t) {
      ++interior;
      double rel = std::abs(pr.f0.values_hz[t] - f) / f;
      worst = std::max(worst, rel);
      if (rel <= 0.02) ++good;
    }
    std::printf("pitch saw %.0f: good %zu/%zu worst %.4f\n", f, good, interior, worst);
  }
  auto wn = white_noise(1.0, 16000, 42);
  auto pr = track_f0_continuous(wn);
  double mn = 1e9, mx = 0; int anchored = 0;
  for (std::size_t t = 0; t < pr.f0.n_frames(); ++t) {
    mn = std::min(mn, pr.f0.values_hz[t]); mx = std::max(mx, pr.f0.values_hz[t]);
    anchored += pr.anchored[t];
  }
  std::printf("pitch noise: min %.3f max %.3f anchored %d geo %.3f\n", mn, mx, anchored, std::sqrt(60.0*400.0));

  Waveform two; two.sample_rate = 16000;
  auto a = sawtooth(100, 1.0, 16000), b = sawtooth(200, 1.0, 16000);
  two.samples = a.samples;
  two.samples.insert(two.samples.end(), b.samples.begin(), b.samples.end());
  auto pr2 = track_f0_continuous(two);
  std::printf("two-tone: f[40]=%.2f f[160]=%.2f f[240]=%.2f f[360]=%.2f\n",
              pr2.f0.values_hz[40], pr2.f0.values_hz[160], pr2.f0.values_hz[240], pr2.f0.values_hz[360]);
  bool monotone = true;
  for (std::size_t t = 185; t < 220; ++t)
    if (pr2.f0.values_hz[t+1] < pr2.f0.values_hz[t] - 1.0) monotone = false;
  std::printf("two-tone monotone transition: %d\n", monotone);
}

Waveform harmonic_plus_noise(double f0, double cutoff, double dur, int sr, uint64_t seed, bool add_noise) {
  Waveform w; w.sample_rate = sr;
  const std::size_t n = static_cast<std::size_t>(dur * sr);
  w.samples.assign(n, 0.0);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  int kmax = static_cast<int>(cutoff / f0);
  for (int k = 1; k <= kmax; ++k) {
    double ph = (rng() % 1000) / 1000.0 * 2 * kPi;
    for (std::size_t i = 0; i < n; ++i)
      w.samples[i] += std::cos(2 * kPi * k * f0 * i / sr + ph);
  }
  for (auto& v : w.samples) v /= kmax;
  if (add_noise) {
    std::vector<double> noise(n);
    for (auto& v : noise) v = g(rng);
    auto lp = dsp::lowpass_kernel(129, cutoff / (sr / 2.0), 8.0);
    std::vector<double> hp(noise.size(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double acc = noise[i];
      for (std::size_t k2 = 0; k2 < lp.size(); ++k2) {
        long idx = static_cast<long>(i) - static_cast<long>(k2) + 64;
        if (idx >= 0 && idx < static_cast<long>(n)) acc -= lp[k2] * noise[idx];
      }
      hp[i] = acc;
    }
    const double target_ratio = std::pow(10.0, -20.0 / 20.0);
    auto spec_of = [&](const std::vector<double>& x) {
      auto win = dsp::hann_periodic(1024);
      std::vector<double> fr(1024);
      for (int i = 0; i < 1024; ++i) fr[i] = x[8000 + i] * win[i];
      return dsp::rfft(fr, 1024);
    };
    auto hs = spec_of(w.samples);
    auto ns = spec_of(hp);
    double hpk = 0, npk = 0;
    for (std::size_t b2 = 0; b2 < hs.size(); ++b2) {
      double hz = b2 * 16000.0 / 1024;
      if (hz < cutoff) hpk = std::max(hpk, std::abs(hs[b2]));
      if (hz > cutoff) npk = std::max(npk, std::abs(ns[b2]));
    }
    const double scale = target_ratio * hpk / npk;
    for (std::size_t i = 0; i < n; ++i) w.samples[i] += scale * hp[i];
  }
  return w;
}

void probe_mvf() {
  for (double cutoff : {2000.0, 3000.0, 5000.0}) {
    auto w = harmonic_plus_noise(150.0, cutoff, 1.0, 16000, 7, true);
    F0Track f0; f0.hop = 80; f0.values_hz.assign(frame_grid(w, 25.0).n_frames, 150.0);
    auto mvf = estimate_mvf(w, f0);
    std::size_t good = 0;
    for (double v : mvf.values_hz) if (std::abs(v - cutoff) <= 500.0) ++good;
    std::printf("mvf cutoff %.0f: within500 %zu/%zu\n", cutoff, good, mvf.n_frames());
  }
  auto w = harmonic_plus_noise(150.0, 7900.0, 1.0, 16000, 9, false);
  F0Track f0; f0.hop = 80; f0.values_hz.assign(frame_grid(w, 25.0).n_frames, 150.0);
  auto mvf = estimate_mvf(w, f0);
  std::size_t good = 0;
  for (double v : mvf.values_hz) if (v >= 7000.0) ++good;
  std::printf("mvf full harmonic: >=7000 %zu/%zu\n", good, mvf.n_frames());

  auto wn = white_noise(1.0, 16000, 11);
  F0Track f02; f02.hop = 80; f02.values_hz.assign(frame_grid(wn, 25.0).n_frames, 155.0);
  auto mvf2 = estimate_mvf(wn, f02);
  std::size_t clamped = 0;
  for (double v : mvf2.values_hz) if (v <= 801.0) ++clamped;
  std::printf("mvf noise: clamped %zu/%zu\n", clamped, mvf2.n_frames());
}

void probe_gci() {
  const int sr = 16000;
  const double period_s = 0.010;
  Waveform w; w.sample_rate = sr;
  w.samples.assign(sr * 3 / 2, 0.0);
  std::vector<long> truth;
  for (long i = 400; i < static_cast<long>(w.samples.size()) - 400; i += static_cast<long>(period_s * sr)) {
    w.samples[i] = -1.0;
    truth.push_back(i);
  }
  {
    const double r = 0.97, th = 2 * kPi * 800.0 / sr;
    double y1 = 0, y2 = 0;
    for (auto& v : w.samples) {
      double y = v + 2 * r * std::cos(th) * y1 - r * r * y2;
      y2 = y1; y1 = y; v = 0.2 * y;
    }
  }
  auto pr = track_f0_continuous(w);
  auto g = detect_gci(w, pr);
  std::size_t within = 0;
  for (long det : g.instants) {
    long best = 1 << 30;
    for (long t : truth) best = std::min(best, std::labs(det - t));
    if (best <= 4) ++within;
  }
  std::printf("gci: detected %zu truth %zu within0.25ms %zu\n", g.size(), truth.size(), within);

  auto wn = white_noise(2.0, sr, 5);
  auto prn = track_f0_continuous(wn);
  auto gn = detect_gci(wn, prn);
  std::printf("gci noise: %zu (budget 4)\n", gn.size());
}

void probe_mgc() {
  const int sr = 16000;
  {
    MgcConfig cfg; cfg.alpha = 0.0; cfg.gamma = 0.0;
    MgcAnalyzer an(sr, cfg);
    auto wn = white_noise(0.5, sr, 3);
    auto frame = extract_frame(wn.samples, 2000, an.frame_len());
    auto c = an.analyze_frame(frame);
    auto win = dsp::hann_periodic(an.frame_len());
    std::vector<double> fw(frame.size());
    for (std::size_t i = 0; i < frame.size(); ++i) fw[i] = frame[i] * win[i];
    auto spec = dsp::rfft(fw, 1024);
    std::vector<std::complex<double>> logspec(1024);
    for (int k = 0; k < 513; ++k) {
      double a = std::max(1e-5, std::abs(spec[k]));
      logspec[k] = std::log(a);
    }
    for (int k = 1; k < 512; ++k) logspec[1024 - k] = logspec[k];
    dsp::fft(logspec, true);
    double worst = 0;
    for (int m = 0; m <= 24; ++m)
      worst = std::max(worst, std::abs(c[m] - logspec[m].real()));
    std::printf("mgc cepstrum equality worst: %.3g\n", worst);
  }
  {
    MgcAnalyzer an(sr, {});
    std::vector<double> frame(an.frame_len(), 0.0);
    frame[an.frame_len() / 2] = 1.0;
    auto c = an.analyze_frame(frame);
    double s = 0; for (int m = 1; m <= 24; ++m) s += c[m] * c[m];
    std::printf("mgc impulse sum_sq %.3g c0 %.3f\n", s, c[0]);
  }
  {
    const double r = 0.95, th = 0.3 * kPi;
    const double a1 = 2 * r * std::cos(th), a2 = -r * r;
    Waveform w; w.sample_rate = sr;
    w.samples.assign(sr * 2, 0.0);
    std::mt19937_64 rng(17); std::normal_distribution<double> g(0.0, 0.1);
    double y1 = 0, y2 = 0;
    for (auto& v : w.samples) {
      double y = a1 * y1 + a2 * y2 + g(rng);
      y2 = y1; y1 = y; v = y;
    }
    std::size_t fb = 0;
    auto track = mgc_analyze(w, {}, &fb);
    MgcSpectrumTable table(24, 1024, 0.42, -1.0 / 3.0);
    double mean_lsd = 0; std::size_t cnt = 0;
    const int kbins = static_cast<int>(7000.0 / 8000.0 * 512);
    for (std::size_t t = 10; t + 10 < track.n_frames; t += 5) {
      auto amp = table.evaluate(track.frame(t));
      double acc = 0, bias = 0;
      std::vector<double> diff(kbins);
      for (int b = 0; b < kbins; ++b) {
        double om = kPi * b / 512.0;
        std::complex<double> den = 1.0 - a1 * std::exp(std::complex<double>(0, -om)) - a2 * std::exp(std::complex<double>(0, -2 * om));
        double truth = 1.0 / std::abs(den);
        diff[b] = 20.0 * std::log10(amp[b] / truth);
        bias += diff[b];
      }
      bias /= kbins;
      for (int b = 0; b < kbins; ++b) acc += std::abs(diff[b] - bias);
      mean_lsd += acc / kbins; ++cnt;
    }
    std::printf("mgc AR2 mean LSD %.3f dB (fallbacks %zu)\n", mean_lsd / cnt, fb);
  }
  {
    auto w = sawtooth(150, 0.5, sr);
    auto t1 = mgc_analyze(w, {});
    for (auto& v : w.samples) v *= 2.0;
    auto t2 = mgc_analyze(w, {});
    double worst = 0;
    for (std::size_t t = 0; t < t1.n_frames; ++t)
      for (int m = 1; m <= 24; ++m)
        worst = std::max(worst, std::abs(t1.frame(t)[m] - t2.frame(t)[m]));
    std::printf("mgc gain covariance worst dc1..24 %.3g; c0 diff %.6f (ln2=%.6f)\n",
                worst, t2.frame(5)[0] - t1.frame(5)[0], std::log(2.0));
  }
}

void probe_copysyn() {
  auto w = generate_vowel(1, 1.5);
  auto t0 = std::chrono::steady_clock::now();
  auto res = copy_synthesis(w);
  auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("copysyn: in %zu out %zu (%.2fs)\n", w.samples.size(), res.waveform.samples.size(), dt);
  auto in_tracks = analyze_tracks(w);
  auto out_tracks = analyze_tracks(res.waveform);
  align_tracks(in_tracks.mgc, out_tracks.mgc);
  align_tracks(in_tracks.f0, out_tracks.f0);
  double m = mcd(in_tracks.mgc, out_tracks.mgc);
  double c = f0_corr(in_tracks.f0, out_tracks.f0);
  std::printf("copysyn: MCD %.3f F0CORR %.4f\n", m, c);
  double peak = 0;
  for (double v : res.waveform.samples) peak = std::max(peak, std::abs(v));
  std::printf("copysyn peak %.3f proto share %.3f cycles %zu\n", peak, res.prototype.energy_share, res.prototype.source_cycle_count);
}

void probe_excitation() {
  ResidualPrototype proto;
  proto.pulse.assign(512, 0.0);
  proto.pulse[256] = -1.0;
  F0Track f0; f0.hop = 80; f0.values_hz.assign(200, 100.0);
  auto exc = build_voiced_excitation(f0, proto, 16000, 16000);
  double energy = 0;
  for (double v : exc.samples) energy += v * v;
  std::printf("exc energy(100Hz,1s) %.2f\n", energy);

  MvfTrack mvf; mvf.hop = 80; mvf.values_hz.assign(800, 4000.0);
  SynthesisConfig scfg;
  auto noise = build_noise_excitation(mvf, 64000, scfg, 1, 16000);
  auto win = dsp::hann_periodic(4096);
  double lo = 0, hi = 0;
  for (int seg = 0; seg < 14; ++seg) {
    std::vector<double> fr(4096);
    for (int i = 0; i < 4096; ++i) fr[i] = noise.samples[seg * 4096 + i] * win[i];
    auto spec = dsp::rfft(fr, 4096);
    for (std::size_t b = 0; b < spec.size(); ++b) {
      double hz = b * 16000.0 / 4096;
      double p = std::norm(spec[b]);
      if (hz < 3500) lo += p;
      if (hz > 4500) hi += p;
    }
  }
  std::printf("noise split: lo/hi dB %.1f\n", 10 * std::log10(lo / hi));
}

int main() {
  probe_pitch();
  probe_mvf();
  probe_gci();
  probe_mgc();
  probe_excitation();
  probe_copysyn();
  return 0;
}
