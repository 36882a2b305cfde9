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

#include "cvoc/synthcorpus.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

#include "cvoc/common.hpp"
#include "cvoc/training.hpp"

namespace cvoc {

namespace {

struct PhoneSpec {
  const char* symbol;
  bool voiced;
  double f1, f2;      // resonator centers (voiced) or band center (noise)
  double amplitude;
};

// Formant-like settings; the noise phones use f1 as the band center.
constexpr PhoneSpec kPhones[] = {
    {"sil", false, 0.0, 0.0, 0.0},
    {"aa", true, 780.0, 1200.0, 1.0},
    {"ee", true, 480.0, 2100.0, 0.72},
    {"ii", true, 260.0, 2700.0, 0.5},
    {"oo", true, 600.0, 880.0, 0.9},
    {"uu", true, 300.0, 700.0, 0.62},
    {"nn", true, 240.0, 1500.0, 0.4},
    {"ss", false, 4800.0, 0.0, 0.33},
    {"ff", false, 2200.0, 0.0, 0.28},
};
constexpr std::size_t kNumPhones = sizeof(kPhones) / sizeof(kPhones[0]);

const PhoneSpec& phone_spec(const std::string& symbol) {
  for (const auto& p : kPhones)
    if (symbol == p.symbol) return p;
  throw InvalidArgument("synth corpus: unknown phone '" + symbol + "'");
}

// Two-pole resonator applied in place.
void resonate(std::vector<double>& x, double center_hz, double bw_hz,
              int sample_rate) {
  const double r = std::exp(-std::numbers::pi * bw_hz / sample_rate);
  const double c = 2.0 * r * std::cos(2.0 * std::numbers::pi * center_hz /
                                      sample_rate);
  const double r2 = r * r;
  double y1 = 0.0, y2 = 0.0;
  for (auto& v : x) {
    const double y = v + c * y1 - r2 * y2;
    y2 = y1;
    y1 = y;
    v = y;
  }
}

}  // namespace

PhoneInventory synth_inventory() {
  std::vector<std::string> symbols;
  for (const auto& p : kPhones) symbols.emplace_back(p.symbol);
  return PhoneInventory(std::move(symbols));
}

SpeakerVoice speaker_voice(std::size_t speaker_index) {
  SpeakerVoice v;
  v.f0_base_hz = 110.0 + 34.0 * static_cast<double>(speaker_index % 5) +
                 9.0 * static_cast<double>(speaker_index / 5);
  v.formant_scale = 0.88 + 0.065 * static_cast<double>((speaker_index + 2) % 5);
  return v;
}

namespace {

// Renders one phone span into out[begin, end).
void render_phone(std::vector<double>& out, std::size_t begin,
                  std::size_t end, const PhoneSpec& spec,
                  const SpeakerVoice& voice, double utt_total_s,
                  int sample_rate, std::mt19937_64& rng, double vibrato_phase,
                  double& pitch_phase) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const std::size_t n = end - begin;
  std::vector<double> seg(n, 0.0);

  if (!spec.voiced) {
    if (spec.amplitude == 0.0) {
      // Silence keeps a tiny noise floor so analysis stays stable.
      for (auto& v : seg) v = 1e-4 * unit(rng);
    } else {
      for (auto& v : seg) v = unit(rng);
      resonate(seg, spec.f1 * voice.formant_scale, 1200.0, sample_rate);
      double rms = 0.0;
      for (double v : seg) rms += v * v;
      rms = std::sqrt(rms / n);
      const double g = spec.amplitude * 0.25 / std::max(1e-9, rms);
      for (auto& v : seg) v *= g;
    }
  } else {
    // Glottal-like pulse train with declination and gentle vibrato.
    for (std::size_t i = 0; i < n; ++i) {
      const double t_abs = static_cast<double>(begin + i) / sample_rate;
      const double decl = 1.12 - 0.18 * (t_abs / std::max(0.2, utt_total_s));
      const double vib =
          1.0 + 0.035 * std::sin(2.0 * std::numbers::pi * 2.3 * t_abs +
                                 vibrato_phase);
      const double f0 = voice.f0_base_hz * decl * vib;
      pitch_phase += f0 / sample_rate;
      if (pitch_phase >= 1.0) {
        pitch_phase -= 1.0;
        seg[i] = -1.0;  // closure-like negative impulse
      }
    }
    resonate(seg, spec.f1 * voice.formant_scale, 70.0, sample_rate);
    resonate(seg, spec.f2 * voice.formant_scale, 110.0, sample_rate);
    double rms = 0.0;
    for (double v : seg) rms += v * v;
    rms = std::sqrt(rms / n);
    const double g = spec.amplitude * 0.28 / std::max(1e-9, rms);
    for (auto& v : seg) v *= g;
    for (auto& v : seg) v += 2e-4 * unit(rng);
  }

  // 5 ms attack/release ramps against clicks.
  const std::size_t ramp =
      std::min<std::size_t>(n / 2, sample_rate / 200);
  for (std::size_t i = 0; i < ramp; ++i) {
    const double g = static_cast<double>(i) / ramp;
    seg[i] *= g;
    seg[n - 1 - i] *= g;
  }
  for (std::size_t i = 0; i < n; ++i) out[begin + i] += seg[i];
}

}  // namespace

GeneratedUtterance generate_utterance(std::size_t speaker_index,
                                      std::size_t utterance_index,
                                      const SynthCorpusConfig& cfg) {
  std::mt19937_64 rng(cfg.seed ^ (0x9e3779b97f4a7c15ULL * (speaker_index + 1)) ^
                      (0xc2b2ae3d27d4eb4fULL * (utterance_index + 1)));
  std::uniform_int_distribution<int> n_phones_dist(cfg.min_phones,
                                                   cfg.max_phones);
  std::uniform_real_distribution<double> dur_dist(cfg.min_phone_s,
                                                  cfg.max_phone_s);

  GeneratedUtterance gu;
  {
    std::ostringstream id;
    id << "s" << std::setw(2) << std::setfill('0') << speaker_index << "_u"
       << std::setw(3) << std::setfill('0') << utterance_index;
    gu.id = id.str();
  }
  {
    std::ostringstream spk;
    spk << "S" << std::setw(2) << std::setfill('0') << speaker_index;
    gu.speaker = spk.str();
  }

  // sil + random phones + sil; vowels weighted 3:1 over noise phones.
  std::vector<std::size_t> phone_pool;
  for (std::size_t p = 1; p < kNumPhones; ++p) {
    const int copies = kPhones[p].voiced ? 3 : 1;
    for (int c = 0; c < copies; ++c) phone_pool.push_back(p);
  }
  std::uniform_int_distribution<std::size_t> pool_dist(0, phone_pool.size() - 1);
  std::vector<std::pair<std::string, double>> seq;
  seq.emplace_back("sil", 0.04 + 0.03 * (rng() % 100) / 100.0);
  const int n_core = n_phones_dist(rng);
  for (int i = 0; i < n_core; ++i) {
    const std::size_t p = phone_pool[pool_dist(rng)];
    double dur = dur_dist(rng);
    if (!kPhones[p].voiced) dur *= 0.6;  // keep noise frames scarce
    seq.emplace_back(kPhones[p].symbol, dur);
  }
  seq.emplace_back("sil", 0.04 + 0.03 * (rng() % 100) / 100.0);

  double total = 0.0;
  for (const auto& [sym, dur] : seq) total += dur;

  const SpeakerVoice voice = speaker_voice(speaker_index);
  const std::size_t n_samples =
      static_cast<std::size_t>(std::lround(total * cfg.sample_rate));
  gu.wav.sample_rate = cfg.sample_rate;
  gu.wav.samples.assign(n_samples, 0.0);

  gu.alignment.id = gu.id;
  gu.alignment.speaker = gu.speaker;
  double t = 0.0;
  const double vibrato_phase =
      2.0 * std::numbers::pi * static_cast<double>(speaker_index % 7) / 7.0;
  double pitch_phase = 0.0;
  for (const auto& [sym, dur] : seq) {
    const auto begin =
        static_cast<std::size_t>(std::lround(t * cfg.sample_rate));
    auto end =
        static_cast<std::size_t>(std::lround((t + dur) * cfg.sample_rate));
    end = std::min(end, n_samples);
    if (end > begin)
      render_phone(gu.wav.samples, begin, end, phone_spec(sym), voice, total,
                   cfg.sample_rate, rng, vibrato_phase, pitch_phase);
    gu.alignment.entries.push_back(
        {sym, t, t + dur});
    t += dur;
  }
  // Snap the last entry to the rendered length.
  gu.alignment.entries.back().end_s =
      static_cast<double>(n_samples) / cfg.sample_rate;

  double peak = 0.0;
  for (double v : gu.wav.samples) peak = std::max(peak, std::abs(v));
  if (peak > 0.0)
    for (auto& v : gu.wav.samples) v *= 0.45 / peak;
  return gu;
}

Waveform generate_vowel(std::size_t speaker_index, double duration_s,
                        const SynthCorpusConfig& cfg) {
  std::mt19937_64 rng(cfg.seed ^ (0xa0761d6478bd642fULL * (speaker_index + 7)));
  const SpeakerVoice voice = speaker_voice(speaker_index);
  const std::size_t n =
      static_cast<std::size_t>(std::lround(duration_s * cfg.sample_rate));
  Waveform w;
  w.sample_rate = cfg.sample_rate;
  w.samples.assign(n, 0.0);
  double pitch_phase = 0.0;
  render_phone(w.samples, 0, n, phone_spec("aa"), voice, duration_s,
               cfg.sample_rate, rng, 0.7, pitch_phase);
  double peak = 0.0;
  for (double v : w.samples) peak = std::max(peak, std::abs(v));
  if (peak > 0.0)
    for (auto& v : w.samples) v *= 0.45 / peak;
  return w;
}

std::string write_synth_corpus(const std::string& out_dir,
                               const SynthCorpusConfig& cfg) {
  namespace fs = std::filesystem;
  fs::create_directories(fs::path(out_dir) / "wav");
  fs::create_directories(fs::path(out_dir) / "lab");

  synth_inventory().to_file((fs::path(out_dir) / "phones.txt").string());

  std::ostringstream manifest;
  manifest << "id,speaker,wav,alignment,split\n";
  for (std::size_t s = 0; s < cfg.n_speakers; ++s) {
    const auto splits = assign_splits(cfg.utterances_per_speaker,
                                      SplitFractions{}, cfg.seed + s);
    for (std::size_t u = 0; u < cfg.utterances_per_speaker; ++u) {
      GeneratedUtterance gu = generate_utterance(s, u, cfg);
      const std::string wav_rel = "wav/" + gu.id + ".wav";
      const std::string lab_rel = "lab/" + gu.id + ".lab";
      write_wav((fs::path(out_dir) / wav_rel).string(), gu.wav);
      std::ofstream lab((fs::path(out_dir) / lab_rel).string(),
                        std::ios::trunc);
      for (const auto& e : gu.alignment.entries)
        lab << e.phone << "\t" << e.start_s << "\t" << e.end_s << "\n";
      const char* split = splits[u] == Split::kTrain
                              ? "train"
                              : (splits[u] == Split::kDev ? "dev" : "test");
      manifest << gu.id << "," << gu.speaker << "," << wav_rel << ","
               << lab_rel << "," << split << "\n";
    }
  }
  const std::string manifest_path =
      (fs::path(out_dir) / "manifest.csv").string();
  std::ofstream mf(manifest_path, std::ios::trunc);
  if (!mf) throw FileError("write_synth_corpus: cannot write manifest");
  mf << manifest.str();
  return manifest_path;
}

}  // namespace cvoc
