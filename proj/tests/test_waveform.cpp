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

#include <cstring>
#include <filesystem>
#include <fstream>

#include "cvoc/common.hpp"
#include "cvoc/waveform.hpp"
#include "helpers.hpp"

using namespace cvoc;
using cvoc::test::temp_dir;

namespace {

void put_u32(std::vector<unsigned char>& v, uint32_t x) {
  for (int i = 0; i < 4; ++i) v.push_back((x >> (8 * i)) & 0xff);
}
void put_u16(std::vector<unsigned char>& v, uint16_t x) {
  v.push_back(x & 0xff);
  v.push_back((x >> 8) & 0xff);
}

// Hand-built RIFF file, independent of write_wav.
std::vector<unsigned char> make_wav_bytes(uint16_t format, uint16_t channels,
                                          uint32_t rate, uint16_t bits,
                                          const std::vector<unsigned char>& data) {
  std::vector<unsigned char> v;
  v.insert(v.end(), {'R', 'I', 'F', 'F'});
  put_u32(v, 36 + static_cast<uint32_t>(data.size()));
  v.insert(v.end(), {'W', 'A', 'V', 'E'});
  v.insert(v.end(), {'f', 'm', 't', ' '});
  put_u32(v, 16);
  put_u16(v, format);
  put_u16(v, channels);
  put_u32(v, rate);
  put_u32(v, rate * channels * bits / 8);
  put_u16(v, channels * bits / 8);
  put_u16(v, bits);
  v.insert(v.end(), {'d', 'a', 't', 'a'});
  put_u32(v, static_cast<uint32_t>(data.size()));
  v.insert(v.end(), data.begin(), data.end());
  return v;
}

std::string write_bytes(const std::string& dir, const std::string& name,
                        const std::vector<unsigned char>& bytes) {
  const std::string path = dir + "/" + name;
  std::ofstream f(path, std::ios::binary);
  f.write(reinterpret_cast<const char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  return path;
}

}  // namespace

TEST_CASE("read_wav scales 16-bit PCM linearly") {
  const auto dir = temp_dir("wav");
  std::vector<unsigned char> data;
  for (int16_t s : {int16_t(0), int16_t(16384), int16_t(-16384)})
    put_u16(data, static_cast<uint16_t>(s));
  const auto path =
      write_bytes(dir, "mono16.wav", make_wav_bytes(1, 1, 16000, 16, data));
  const Waveform w = read_wav(path);
  REQUIRE(w.samples.size() == 3);
  CHECK(w.samples[0] == doctest::Approx(0.0));
  CHECK(w.samples[1] == doctest::Approx(0.5));
  CHECK(w.samples[2] == doctest::Approx(-0.5));
  CHECK(w.sample_rate == 16000);
}

TEST_CASE("read_wav averages channels to mono") {
  const auto dir = temp_dir("wav");
  // float32 stereo, one frame: {1.0, 0.0}
  std::vector<unsigned char> data;
  auto put_f32 = [&](float f) {
    uint32_t u;
    std::memcpy(&u, &f, 4);
    put_u32(data, u);
  };
  put_f32(1.0f);
  put_f32(0.0f);
  const auto path =
      write_bytes(dir, "stereo.wav", make_wav_bytes(3, 2, 16000, 32, data));
  const Waveform w = read_wav(path);
  REQUIRE(w.samples.size() == 1);
  CHECK(w.samples[0] == doctest::Approx(0.5));
}

TEST_CASE("read_wav reports declared-length overrun as truncation") {
  const auto dir = temp_dir("wav");
  const auto w = test::sine(440.0, 0.05, 16000);
  const std::string path = dir + "/valid.wav";
  write_wav(path, w);
  // Byte-edit the data chunk length to exceed the actual payload.
  std::fstream f(path, std::ios::binary | std::ios::in | std::ios::out);
  f.seekp(40);
  const uint32_t huge = 1 << 30;
  unsigned char b[4] = {huge & 0xff, (huge >> 8) & 0xff, (huge >> 16) & 0xff,
                        (huge >> 24) & 0xff};
  f.write(reinterpret_cast<char*>(b), 4);
  f.close();
  CHECK_THROWS_AS((void)read_wav(path), TruncatedError);
}

TEST_CASE("read_wav error kinds are distinct") {
  const auto dir = temp_dir("wav");
  CHECK_THROWS_AS((void)read_wav(dir + "/does_not_exist.wav"), FileError);
  // non-PCM codec tag (0x55 = mp3)
  const auto path = write_bytes(dir, "mp3ish.wav",
                                make_wav_bytes(0x55, 1, 16000, 16, {0, 0}));
  CHECK_THROWS_AS((void)read_wav(path), FormatError);
}

TEST_CASE("write_wav/read_wav roundtrip within one quantization step") {
  const auto dir = temp_dir("wav");
  const auto w = test::sine(440.0, 1.0, 16000, 0.9);
  CHECK(write_wav(dir + "/sine.wav", w) == 0);
  const Waveform r = read_wav(dir + "/sine.wav");
  REQUIRE(r.samples.size() == w.samples.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < r.samples.size(); ++i)
    worst = std::max(worst, std::abs(r.samples[i] - w.samples[i]));
  CHECK(worst <= std::pow(2.0, -15.0));
}

TEST_CASE("write_wav handles the empty waveform") {
  const auto dir = temp_dir("wav");
  Waveform w;
  w.sample_rate = 16000;
  CHECK(write_wav(dir + "/empty.wav", w) == 0);
  const Waveform r = read_wav(dir + "/empty.wav");
  CHECK(r.samples.empty());
}

TEST_CASE("write_wav clips out-of-range samples and counts them") {
  const auto dir = temp_dir("wav");
  Waveform w;
  w.sample_rate = 16000;
  w.samples = {0.0, 1.5, -0.25};
  CHECK(write_wav(dir + "/clip.wav", w) == 1);
  const Waveform r = read_wav(dir + "/clip.wav");
  CHECK(r.samples[1] == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("resample at the same rate is the identity") {
  const auto w = test::sine(1000.0, 0.1, 16000);
  const Waveform r = resample(w, 16000);
  REQUIRE(r.samples.size() == w.samples.size());
  for (std::size_t i = 0; i < r.samples.size(); ++i)
    CHECK(r.samples[i] == w.samples[i]);
}

TEST_CASE("resample preserves the tone frequency (FFT-peak oracle)") {
  const auto w = test::sine(1000.0, 1.0, 48000);
  const Waveform r = resample(w, 16000);
  CHECK(std::abs(static_cast<double>(r.samples.size()) -
                 16000.0) <= 1.0);  // duration preserved
  const auto p = test::windowed_power_spectrum(r.samples, 2000, 8192);
  std::size_t peak = 0;
  for (std::size_t b = 1; b < p.size(); ++b)
    if (p[b] > p[peak]) peak = b;
  const double bin_hz = 16000.0 / 8192;
  CHECK(std::abs(peak * bin_hz - 1000.0) <= bin_hz + 1e-9);
}

TEST_CASE("resample keeps aliased energy at least 40 dB down") {
  const auto w = test::sine(7900.0, 1.0, 48000);
  const Waveform r = resample(w, 16000);
  const auto p = test::windowed_power_spectrum(r.samples, 2000, 8192);
  std::size_t peak = 0;
  for (std::size_t b = 1; b < p.size(); ++b)
    if (p[b] > p[peak]) peak = b;
  const double bin_hz = 16000.0 / 8192;
  CHECK(std::abs(peak * bin_hz - 7900.0) <= bin_hz + 1e-9);
  double spurious = 0.0;
  for (std::size_t b = 1; b < p.size(); ++b) {
    if (b + 16 >= peak && b <= peak + 16) continue;  // window leakage skirt
    spurious = std::max(spurious, p[b]);
  }
  CHECK(10.0 * std::log10(p[peak] / spurious) >= 40.0);
}

TEST_CASE("frame_grid arithmetic") {
  Waveform w;
  w.sample_rate = 16000;

  w.samples.assign(16000, 0.0);
  FrameGrid g = frame_grid(w, 25.0);
  CHECK(g.hop == 80);
  CHECK(g.frame_len == 400);
  CHECK(g.n_frames == 200);

  w.samples.assign(81, 0.0);
  CHECK(frame_grid(w, 25.0).n_frames == 2);

  w.samples.clear();
  CHECK(frame_grid(w, 25.0).n_frames == 0);

  CHECK_THROWS_AS((void)frame_grid(w, 4.0), InvalidArgument);
}

TEST_CASE("frame count of a concatenation loses at most one frame") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t na = rng() % 1000;
    const std::size_t nb = rng() % 1000;
    Waveform a, b, ab;
    a.samples.assign(na, 0.0);
    b.samples.assign(nb, 0.0);
    ab.samples.assign(na + nb, 0.0);
    const auto fa = frame_grid(a, 25.0).n_frames;
    const auto fb = frame_grid(b, 25.0).n_frames;
    const auto fab = frame_grid(ab, 25.0).n_frames;
    CHECK(fab + 1 >= fa + fb);
  }
}

TEST_CASE("write_wav roundtrip property on random signals") {
  const auto dir = temp_dir("wav");
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    Waveform w;
    w.sample_rate = 16000;
    w.samples.resize(500 + rng() % 500);
    for (auto& v : w.samples) v = u(rng);
    write_wav(dir + "/rt.wav", w);
    const Waveform r = read_wav(dir + "/rt.wav");
    REQUIRE(r.samples.size() == w.samples.size());
    for (std::size_t i = 0; i < r.samples.size(); ++i)
      CHECK(std::abs(r.samples[i] - w.samples[i]) <= 1.0 / 32768.0 + 1e-12);
  }
}
