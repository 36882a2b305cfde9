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

#include "cvoc/spectrogram.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <fstream>

#include "cvoc/common.hpp"
#include "cvoc/dsp.hpp"

namespace cvoc {

SpectrogramMatrix compute_spectrogram(const Waveform& w,
                                      const SpectrogramConfig& cfg) {
  if (w.samples.empty())
    throw InvalidArgument("compute_spectrogram: empty waveform");
  if (!dsp::is_pow2(cfg.fft_len))
    throw InvalidArgument("compute_spectrogram: fft_len must be a power of two");

  const FrameGrid grid = frame_grid(w, cfg.window_ms);
  const int win_len = std::min(cfg.fft_len, grid.frame_len);
  const auto window = dsp::hann_periodic(win_len);

  SpectrogramMatrix m;
  m.columns = grid.n_frames;
  m.bins = cfg.fft_len / 2 + 1;
  m.db.resize(m.columns * m.bins);

  double peak_db = -1e300;
  for (std::size_t t = 0; t < grid.n_frames; ++t) {
    auto frame =
        extract_frame(w.samples, static_cast<long>(t) * grid.hop, win_len);
    for (int i = 0; i < win_len; ++i) frame[i] *= window[i];
    const auto bins = dsp::rfft(frame, cfg.fft_len);
    for (std::size_t b = 0; b < m.bins; ++b) {
      const double db = 20.0 * std::log10(std::abs(bins[b]) + 1e-12);
      m.db[t * m.bins + b] = db;
      peak_db = std::max(peak_db, db);
    }
  }
  const double floor_db = peak_db - cfg.dynamic_range_db;
  for (auto& v : m.db) v = std::max(v, floor_db);
  return m;
}

void render_spectrogram(const Waveform& w, const std::string& png_path,
                        const SpectrogramConfig& cfg,
                        const MvfTrack* overlay_mvf) {
  const SpectrogramMatrix m = compute_spectrogram(w, cfg);
  const int zoom = std::max(1, cfg.zoom);

  double peak = -1e300, floor = 1e300;
  for (double v : m.db) {
    peak = std::max(peak, v);
    floor = std::min(floor, v);
  }
  const double range = std::max(1e-9, peak - floor);

  const std::size_t width = m.columns * zoom;
  const std::size_t height = m.bins * zoom;
  std::vector<unsigned char> pixels(width * height, 0);
  for (std::size_t col = 0; col < m.columns; ++col) {
    for (std::size_t bin = 0; bin < m.bins; ++bin) {
      const double v = (m.at(col, bin) - floor) / range;
      const auto g = static_cast<unsigned char>(
          std::clamp(std::lround(v * 255.0), 0L, 255L));
      // 0 Hz at the bottom of the image.
      const std::size_t row0 = (m.bins - 1 - bin) * zoom;
      for (int zy = 0; zy < zoom; ++zy)
        for (int zx = 0; zx < zoom; ++zx)
          pixels[(row0 + zy) * width + col * zoom + zx] = g;
    }
  }

  if (overlay_mvf != nullptr) {
    const double nyquist = w.sample_rate / 2.0;
    for (std::size_t col = 0; col < m.columns; ++col) {
      const std::size_t f =
          std::min(col, overlay_mvf->n_frames() ? overlay_mvf->n_frames() - 1
                                                : 0);
      if (overlay_mvf->n_frames() == 0) break;
      const double hz = std::clamp(overlay_mvf->values_hz[f], 0.0, nyquist);
      const auto bin = static_cast<std::size_t>(
          std::lround(hz / nyquist * (m.bins - 1)));
      const long row_c = static_cast<long>((m.bins - 1 - bin) * zoom);
      for (long dr = -1; dr <= 1; ++dr) {
        const long row = row_c + dr;
        if (row < 0 || row >= static_cast<long>(height)) continue;
        for (int zx = 0; zx < zoom; ++zx)
          pixels[row * width + col * zoom + zx] = 255;
      }
    }
  }

  write_png_gray8(png_path, width, height, pixels);
}

namespace {

void put_u32be(std::vector<unsigned char>& out, uint32_t v) {
  out.push_back((v >> 24) & 0xff);
  out.push_back((v >> 16) & 0xff);
  out.push_back((v >> 8) & 0xff);
  out.push_back(v & 0xff);
}

void put_chunk(std::vector<unsigned char>& out, const char type[4],
               const std::vector<unsigned char>& body) {
  put_u32be(out, static_cast<uint32_t>(body.size()));
  const std::size_t crc_start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), body.begin(), body.end());
  const uLong crc =
      crc32(0L, out.data() + crc_start, static_cast<uInt>(4 + body.size()));
  put_u32be(out, static_cast<uint32_t>(crc));
}

}  // namespace

void write_png_gray8(const std::string& path, std::size_t width,
                     std::size_t height,
                     const std::vector<unsigned char>& pixels) {
  if (width == 0 || height == 0 || pixels.size() != width * height)
    throw InvalidArgument("write_png_gray8: bad dimensions");

  // Scanlines with filter byte 0.
  std::vector<unsigned char> raw((width + 1) * height);
  for (std::size_t y = 0; y < height; ++y) {
    raw[y * (width + 1)] = 0;
    std::copy(pixels.begin() + y * width, pixels.begin() + (y + 1) * width,
              raw.begin() + y * (width + 1) + 1);
  }

  uLongf bound = compressBound(static_cast<uLong>(raw.size()));
  std::vector<unsigned char> compressed(bound);
  if (compress2(compressed.data(), &bound, raw.data(),
                static_cast<uLong>(raw.size()), 6) != Z_OK)
    throw Error("write_png_gray8: zlib compression failed");
  compressed.resize(bound);

  std::vector<unsigned char> out;
  const unsigned char sig[8] = {137, 80, 78, 71, 13, 10, 26, 10};
  out.insert(out.end(), sig, sig + 8);

  std::vector<unsigned char> ihdr;
  put_u32be(ihdr, static_cast<uint32_t>(width));
  put_u32be(ihdr, static_cast<uint32_t>(height));
  ihdr.push_back(8);  // bit depth
  ihdr.push_back(0);  // greyscale
  ihdr.push_back(0);  // compression
  ihdr.push_back(0);  // filter
  ihdr.push_back(0);  // no interlace
  put_chunk(out, "IHDR", ihdr);
  put_chunk(out, "IDAT", compressed);
  put_chunk(out, "IEND", {});

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw FileError("write_png_gray8: cannot open: " + path);
  f.write(reinterpret_cast<const char*>(out.data()),
          static_cast<std::streamsize>(out.size()));
  if (!f) throw FileError("write_png_gray8: write failed: " + path);
}

}  // namespace cvoc
