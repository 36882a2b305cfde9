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

#include "cvoc/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "cvoc/common.hpp"
#include "cvoc/dsp.hpp"

namespace cvoc {

namespace {

uint32_t read_u32le(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t read_u16le(const unsigned char* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void put_u32le(std::vector<unsigned char>& out, uint32_t v) {
  out.push_back(v & 0xff);
  out.push_back((v >> 8) & 0xff);
  out.push_back((v >> 16) & 0xff);
  out.push_back((v >> 24) & 0xff);
}

void put_u16le(std::vector<unsigned char>& out, uint16_t v) {
  out.push_back(v & 0xff);
  out.push_back((v >> 8) & 0xff);
}

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;
constexpr uint16_t kFormatExtensible = 0xFFFE;

}  // namespace

int hop_samples(int sample_rate) {
  return static_cast<int>(std::lround(kHopMs / 1000.0 * sample_rate));
}

Waveform read_wav(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FileError("read_wav: cannot open file: " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(f)),
                                   std::istreambuf_iterator<char>());

  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw TruncatedError("read_wav: truncated or invalid RIFF header: " + path);

  uint16_t format = 0;
  uint16_t channels = 0;
  uint32_t sample_rate = 0;
  uint16_t bits = 0;
  bool have_fmt = false;

  const unsigned char* data_ptr = nullptr;
  uint32_t data_len = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const char* id = reinterpret_cast<const char*>(bytes.data() + pos);
    const uint32_t chunk_len = read_u32le(bytes.data() + pos + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (body + 16 > bytes.size())
        throw TruncatedError("read_wav: truncated fmt chunk: " + path);
      format = read_u16le(bytes.data() + body);
      channels = read_u16le(bytes.data() + body + 2);
      sample_rate = read_u32le(bytes.data() + body + 4);
      bits = read_u16le(bytes.data() + body + 14);
      if (format == kFormatExtensible) {
        // Subformat GUID starts with the effective format tag.
        if (body + 26 > bytes.size())
          throw TruncatedError("read_wav: truncated fmt extension: " + path);
        format = read_u16le(bytes.data() + body + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      data_ptr = bytes.data() + body;
      data_len = chunk_len;
      if (body + data_len > bytes.size())
        throw TruncatedError(
            "read_wav: data chunk declares more bytes than the file holds: " +
            path);
    }
    pos = body + chunk_len + (chunk_len & 1);  // chunks are word-aligned
  }

  if (!have_fmt)
    throw TruncatedError("read_wav: missing fmt chunk: " + path);
  if (data_ptr == nullptr)
    throw TruncatedError("read_wav: missing data chunk: " + path);
  if (format != kFormatPcm && format != kFormatFloat)
    throw FormatError("read_wav: unsupported non-PCM codec (format tag " +
                      std::to_string(format) + "): " + path);
  if (channels == 0 || sample_rate == 0)
    throw FormatError("read_wav: invalid fmt chunk: " + path);
  if (format == kFormatPcm && bits != 8 && bits != 16 && bits != 24)
    throw FormatError("read_wav: unsupported PCM bit depth " +
                      std::to_string(bits) + ": " + path);
  if (format == kFormatFloat && bits != 32)
    throw FormatError("read_wav: unsupported float bit depth " +
                      std::to_string(bits) + ": " + path);

  const std::size_t bytes_per_sample = bits / 8;
  const std::size_t frame_bytes = bytes_per_sample * channels;
  const std::size_t n_frames = frame_bytes ? data_len / frame_bytes : 0;

  Waveform w;
  w.sample_rate = static_cast<int>(sample_rate);
  w.samples.resize(n_frames);
  for (std::size_t i = 0; i < n_frames; ++i) {
    double acc = 0.0;
    for (uint16_t c = 0; c < channels; ++c) {
      const unsigned char* p = data_ptr + i * frame_bytes + c * bytes_per_sample;
      double v = 0.0;
      switch (bits) {
        case 8:
          v = (static_cast<int>(p[0]) - 128) / 128.0;
          break;
        case 16: {
          const int16_t s = static_cast<int16_t>(p[0] | (p[1] << 8));
          v = s / 32768.0;
          break;
        }
        case 24: {
          int32_t s = p[0] | (p[1] << 8) | (p[2] << 16);
          if (s & 0x800000) s |= ~0xFFFFFF;
          v = s / 8388608.0;
          break;
        }
        case 32: {
          uint32_t u = read_u32le(p);
          float fval;
          std::memcpy(&fval, &u, sizeof fval);
          v = fval;
          break;
        }
        default:
          break;
      }
      acc += v;
    }
    double s = acc / channels;
    if (!std::isfinite(s))
      throw FormatError("read_wav: non-finite sample in float data: " + path);
    w.samples[i] = std::clamp(s, -1.0, 1.0);
  }
  return w;
}

std::size_t write_wav(const std::string& path, const Waveform& w) {
  for (double s : w.samples)
    if (!std::isfinite(s))
      throw InvalidArgument("write_wav: non-finite sample");
  if (w.sample_rate <= 0)
    throw InvalidArgument("write_wav: sample rate must be positive");

  std::size_t clipped = 0;
  const uint32_t n = static_cast<uint32_t>(w.samples.size());
  std::vector<unsigned char> out;
  out.reserve(44 + 2 * n);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  put_u32le(out, 36 + 2 * n);
  out.insert(out.end(), {'W', 'A', 'V', 'E'});
  out.insert(out.end(), {'f', 'm', 't', ' '});
  put_u32le(out, 16);
  put_u16le(out, kFormatPcm);
  put_u16le(out, 1);  // mono
  put_u32le(out, static_cast<uint32_t>(w.sample_rate));
  put_u32le(out, static_cast<uint32_t>(w.sample_rate) * 2);
  put_u16le(out, 2);
  put_u16le(out, 16);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  put_u32le(out, 2 * n);
  for (double s : w.samples) {
    if (s > 1.0 || s < -1.0) {
      ++clipped;
      s = std::clamp(s, -1.0, 1.0);
    }
    const int v = static_cast<int>(std::lround(s * 32767.0));
    put_u16le(out, static_cast<uint16_t>(static_cast<int16_t>(v)));
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw FileError("write_wav: cannot open for writing: " + path);
  f.write(reinterpret_cast<const char*>(out.data()),
          static_cast<std::streamsize>(out.size()));
  if (!f) throw FileError("write_wav: write failed: " + path);
  return clipped;
}

Waveform resample(const Waveform& w, int target_rate) {
  if (target_rate <= 0)
    throw InvalidArgument("resample: target rate must be positive");
  if (w.sample_rate <= 0)
    throw InvalidArgument("resample: source rate must be positive");
  if (target_rate == w.sample_rate) return w;

  const long g = std::gcd(static_cast<long>(w.sample_rate),
                          static_cast<long>(target_rate));
  const long up = target_rate / g;    // L
  const long down = w.sample_rate / g;  // M

  // Kernel support: 32 zero crossings per side at the lower rate.
  const double stretch = std::max(1.0, static_cast<double>(down) / up);
  const double cutoff = 0.95 / stretch;  // relative to input Nyquist
  const double half_width = 32.0 * stretch;
  const int taps_left = static_cast<int>(std::floor(half_width));
  const int taps = 2 * taps_left + 1;
  constexpr double kBeta = 8.0;
  const double i0beta = dsp::bessel_i0(kBeta);

  // Polyphase table: one row per phase p, taps evaluated at j - p/L.
  std::vector<std::vector<double>> table(up);
  for (long p = 0; p < up; ++p) {
    auto& row = table[p];
    row.resize(taps);
    const double frac = static_cast<double>(p) / up;
    double sum = 0.0;
    for (int j = 0; j < taps; ++j) {
      const double u = static_cast<double>(j - taps_left) - frac;
      double v = 0.0;
      if (std::abs(u) <= half_width) {
        const double arg = std::numbers::pi * cutoff * u;
        const double s = (std::abs(arg) < 1e-12) ? 1.0 : std::sin(arg) / arg;
        const double r = u / half_width;
        v = cutoff * s *
            dsp::bessel_i0(kBeta * std::sqrt(std::max(0.0, 1.0 - r * r))) /
            i0beta;
      }
      row[j] = v;
      sum += v;
    }
    if (sum != 0.0)
      for (auto& v : row) v /= sum;
  }

  const long n_in = static_cast<long>(w.samples.size());
  const long n_out = (n_in * up + down - 1) / down;
  Waveform out;
  out.sample_rate = target_rate;
  out.samples.resize(static_cast<std::size_t>(std::max(0L, n_out)), 0.0);
  for (long n = 0; n < n_out; ++n) {
    const long num = n * down;
    const long i0 = num / up;
    const long phase = num % up;
    const auto& row = table[phase];
    double acc = 0.0;
    for (int j = 0; j < taps; ++j) {
      const long idx = i0 + j - taps_left;
      if (idx >= 0 && idx < n_in) acc += w.samples[idx] * row[j];
    }
    out.samples[n] = acc;
  }
  return out;
}

FrameGrid frame_grid(const Waveform& w, double window_ms) {
  if (window_ms < kHopMs)
    throw InvalidArgument("frame_grid: window must be at least the 5 ms hop");
  FrameGrid g;
  g.hop = hop_samples(w.sample_rate);
  g.frame_len = static_cast<int>(std::lround(window_ms / 1000.0 *
                                             w.sample_rate));
  g.n_frames = (w.samples.size() + g.hop - 1) / g.hop;
  return g;
}

std::vector<double> extract_frame(const std::vector<double>& samples,
                                  long center, int frame_len) {
  std::vector<double> out(frame_len, 0.0);
  const long start = center - frame_len / 2;
  const long n = static_cast<long>(samples.size());
  for (int i = 0; i < frame_len; ++i) {
    const long idx = start + i;
    if (idx >= 0 && idx < n) out[i] = samples[idx];
  }
  return out;
}

}  // namespace cvoc
