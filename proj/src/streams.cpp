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

#include "cvoc/streams.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "cvoc/common.hpp"
#include "cvoc/serialize.hpp"

namespace cvoc {

void ParamTrack::validate() const {
  const std::size_t n = f0.n_frames();
  if (mvf.n_frames() != n || mgc.n_frames != n)
    throw InvalidArgument("ParamTrack: stream frame counts differ (lf0 " +
                          std::to_string(n) + ", mvf " +
                          std::to_string(mvf.n_frames()) + ", mgc " +
                          std::to_string(mgc.n_frames) + ")");
  if (mvf.hop != f0.hop || mgc.hop != f0.hop)
    throw InvalidArgument("ParamTrack: stream hops differ");
}

void write_float_stream(const std::string& path,
                        const std::vector<double>& values) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw FileError("write_float_stream: cannot open: " + path);
  ByteWriter bw;
  for (double v : values) bw.f32(static_cast<float>(v));
  bw.to_stream(f);
  if (!f) throw FileError("write_float_stream: write failed: " + path);
}

std::vector<double> read_float_stream(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FileError("read_float_stream: cannot open: " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(f)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() % 4 != 0)
    throw TruncatedError("read_float_stream: size not a multiple of 4: " +
                         path);
  std::vector<double> out(bytes.size() / 4);
  for (std::size_t i = 0; i < out.size(); ++i) {
    uint32_t u = static_cast<uint32_t>(bytes[4 * i]) |
                 (static_cast<uint32_t>(bytes[4 * i + 1]) << 8) |
                 (static_cast<uint32_t>(bytes[4 * i + 2]) << 16) |
                 (static_cast<uint32_t>(bytes[4 * i + 3]) << 24);
    float v;
    static_assert(sizeof v == 4);
    std::memcpy(&v, &u, 4);
    out[i] = v;
  }
  return out;
}

namespace {

std::map<std::string, std::string> read_meta(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw FileError("load_param_track: missing sidecar: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(f, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

}  // namespace

void save_param_track(const std::string& stem, const ParamTrack& track,
                      int sample_rate) {
  track.validate();
  std::vector<double> lf0(track.f0.values_hz.size());
  for (std::size_t i = 0; i < lf0.size(); ++i) {
    if (track.f0.values_hz[i] <= 0.0)
      throw InvalidArgument("save_param_track: non-positive F0 value");
    lf0[i] = std::log(track.f0.values_hz[i]);
  }
  write_float_stream(stem + ".lf0", lf0);
  write_float_stream(stem + ".mvf", track.mvf.values_hz);
  write_float_stream(stem + ".mgc", track.mgc.coeffs);

  std::ofstream meta(stem + ".mgc.meta", std::ios::trunc);
  if (!meta) throw FileError("save_param_track: cannot open sidecar");
  meta << "order=" << track.mgc.order << "\n"
       << "alpha=" << track.mgc.alpha << "\n"
       << "gamma=" << track.mgc.gamma << "\n"
       << "hop_ms=" << 1000.0 * track.hop() / sample_rate << "\n"
       << "sample_rate=" << sample_rate << "\n";
}

ParamTrack load_param_track(const std::string& stem, int sample_rate) {
  const auto meta = read_meta(stem + ".mgc.meta");
  auto need = [&](const std::string& key) {
    const auto it = meta.find(key);
    if (it == meta.end())
      throw FormatError("load_param_track: sidecar missing key '" + key +
                        "': " + stem + ".mgc.meta");
    return it->second;
  };
  const int order = std::stoi(need("order"));
  const double alpha = std::stod(need("alpha"));
  const double gamma = std::stod(need("gamma"));
  const int meta_rate = std::stoi(need("sample_rate"));
  if (meta_rate != sample_rate)
    throw FormatError("load_param_track: sample rate mismatch (" +
                      std::to_string(meta_rate) + " vs " +
                      std::to_string(sample_rate) + "): " + stem);

  ParamTrack track;
  const int hop = hop_samples(sample_rate);
  const auto lf0 = read_float_stream(stem + ".lf0");
  track.f0.hop = hop;
  track.f0.values_hz.resize(lf0.size());
  for (std::size_t i = 0; i < lf0.size(); ++i)
    track.f0.values_hz[i] = std::exp(lf0[i]);

  track.mvf.hop = hop;
  track.mvf.values_hz = read_float_stream(stem + ".mvf");

  track.mgc.order = order;
  track.mgc.alpha = alpha;
  track.mgc.gamma = gamma;
  track.mgc.hop = hop;
  track.mgc.coeffs = read_float_stream(stem + ".mgc");
  if (track.mgc.coeffs.size() % (order + 1) != 0)
    throw TruncatedError("load_param_track: mgc stream not a multiple of " +
                         std::to_string(order + 1) + " values: " + stem);
  track.mgc.n_frames = track.mgc.coeffs.size() / (order + 1);

  track.validate();
  return track;
}

}  // namespace cvoc
