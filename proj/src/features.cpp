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

#include "cvoc/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "cvoc/common.hpp"
#include "cvoc/serialize.hpp"

namespace cvoc {

PhoneInventory::PhoneInventory(std::vector<std::string> symbols)
    : symbols_(std::move(symbols)) {
  if (symbols_.empty())
    throw InvalidArgument("PhoneInventory: empty symbol list");
  if (std::find(symbols_.begin(), symbols_.end(), kEdgeSymbol) ==
      symbols_.end())
    symbols_.push_back(kEdgeSymbol);
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (!lookup_.emplace(symbols_[i], i).second)
      throw InvalidArgument("PhoneInventory: duplicate symbol '" +
                            symbols_[i] + "'");
  }
  edge_index_ = lookup_.at(kEdgeSymbol);
}

PhoneInventory PhoneInventory::from_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw FileError("PhoneInventory: cannot open: " + path);
  std::vector<std::string> symbols;
  std::string line;
  while (std::getline(f, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
      line.pop_back();
    if (!line.empty()) symbols.push_back(line);
  }
  return PhoneInventory(std::move(symbols));
}

void PhoneInventory::to_file(const std::string& path) const {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw FileError("PhoneInventory: cannot write: " + path);
  for (const auto& s : symbols_) f << s << "\n";
}

std::size_t PhoneInventory::index(const std::string& symbol) const {
  const auto it = lookup_.find(symbol);
  if (it == lookup_.end())
    throw InvalidArgument("unknown phone symbol '" + symbol + "'");
  return it->second;
}

bool PhoneInventory::contains(const std::string& symbol) const {
  return lookup_.count(symbol) > 0;
}

void AlignedUtterance::validate() const {
  if (entries.empty())
    throw InvalidArgument("AlignedUtterance: no entries");
  double prev_end = 0.0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (e.start_s < 0.0 || e.end_s <= e.start_s)
      throw InvalidArgument("AlignedUtterance: non-increasing times at entry " +
                            std::to_string(i + 1));
    if (i > 0) {
      if (e.start_s < prev_end - 1e-9)
        throw InvalidArgument("AlignedUtterance: overlapping entry " +
                              std::to_string(i + 1));
      if (e.start_s > prev_end + 1e-3)
        throw InvalidArgument("AlignedUtterance: gap longer than 1 ms before entry " +
                              std::to_string(i + 1));
    }
    prev_end = e.end_s;
  }
}

AlignedUtterance parse_alignment(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw FileError("parse_alignment: cannot open: " + path);

  AlignedUtterance u;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r')) line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    AlignedPhone e;
    if (!(ss >> e.phone >> e.start_s >> e.end_s))
      throw FormatError("parse_alignment: unparseable line " +
                        std::to_string(line_no) + " in " + path);
    u.entries.push_back(e);
  }
  if (u.entries.empty())
    throw FormatError("parse_alignment: no entries in " + path);

  try {
    u.validate();
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("parse_alignment: ") + e.what() + " in " +
                      path);
  }
  return u;
}

namespace {

// Index of the phone covering time t (last phone for t past the end).
std::size_t phone_at(const AlignedUtterance& u, double t) {
  for (std::size_t i = 0; i < u.entries.size(); ++i)
    if (t < u.entries[i].end_s) return i;
  return u.entries.size() - 1;
}

void set_context_onehots(const AlignedUtterance& u, const PhoneInventory& inv,
                         std::size_t phone_idx, std::span<double> row) {
  const std::size_t width = inv.size();
  const long n = static_cast<long>(u.entries.size());
  for (int slot = 0; slot < 5; ++slot) {
    const long j = static_cast<long>(phone_idx) + slot - 2;
    const std::size_t sym =
        (j < 0 || j >= n) ? inv.edge_index() : inv.index(u.entries[j].phone);
    row[slot * width + sym] = 1.0;
  }
}

}  // namespace

FeatureMatrix encode_linguistic_features(const AlignedUtterance& u,
                                         const PhoneInventory& inv,
                                         const FrameGrid& grid) {
  u.validate();
  for (const auto& e : u.entries) (void)inv.index(e.phone);

  FeatureMatrix fm;
  fm.rows = grid.n_frames;
  fm.cols = 5 * inv.size() + 3;
  fm.data.assign(fm.rows * fm.cols, 0.0);
  fm.schema = "phone5x" + std::to_string(inv.size()) + "+pos3";

  const double total = u.total_duration_s();
  const double hop_s = kHopMs / 1000.0;  // the grid is the 5 ms clock
  for (std::size_t t = 0; t < grid.n_frames; ++t) {
    const double tc = static_cast<double>(t) * hop_s;
    auto row = std::span<double>(fm.data.data() + t * fm.cols, fm.cols);
    const std::size_t pi = phone_at(u, tc);
    set_context_onehots(u, inv, pi, row);
    const auto& e = u.entries[pi];
    const double dur = e.end_s - e.start_s;
    row[5 * inv.size() + 0] =
        std::clamp((tc - e.start_s) / std::max(1e-9, dur), 0.0, 1.0);
    row[5 * inv.size() + 1] = dur;
    row[5 * inv.size() + 2] = std::clamp(tc / std::max(1e-9, total), 0.0, 1.0);
  }
  return fm;
}

DurationFeatures encode_duration_features(const AlignedUtterance& u,
                                          const PhoneInventory& inv,
                                          int hop, int sample_rate) {
  u.validate();
  for (const auto& e : u.entries) (void)inv.index(e.phone);

  DurationFeatures out;
  auto& fm = out.features;
  fm.rows = u.entries.size();
  fm.cols = 5 * inv.size() + 1;
  fm.data.assign(fm.rows * fm.cols, 0.0);
  fm.schema = "phone5x" + std::to_string(inv.size()) + "+pos1";

  const double frames_per_s = static_cast<double>(sample_rate) / hop;
  for (std::size_t i = 0; i < u.entries.size(); ++i) {
    auto row = std::span<double>(fm.data.data() + i * fm.cols, fm.cols);
    set_context_onehots(u, inv, i, row);
    row[5 * inv.size()] =
        u.entries.size() > 1
            ? static_cast<double>(i) / (u.entries.size() - 1)
            : 0.0;
    const double dur = u.entries[i].end_s - u.entries[i].start_s;
    out.target_frames.push_back(std::max(1.0, std::round(dur * frames_per_s)));
  }
  return out;
}

void NormStats::apply(FeatureMatrix& fm) const {
  if (fm.cols != cols())
    throw InvalidArgument("NormStats: column count mismatch");
  for (std::size_t r = 0; r < fm.rows; ++r)
    apply_row({fm.data.data() + r * fm.cols, fm.cols});
}

void NormStats::apply_row(std::span<double> row) const {
  if (row.size() != cols())
    throw InvalidArgument("NormStats: column count mismatch");
  for (std::size_t c = 0; c < row.size(); ++c) {
    if (degenerate[c]) continue;
    if (kind == Kind::kMinMax) {
      row[c] = 0.01 + 0.98 * (row[c] - a[c]) / (b[c] - a[c]);
    } else {
      row[c] = (row[c] - a[c]) / b[c];
    }
  }
}

void NormStats::invert_row(std::span<double> row) const {
  if (row.size() != cols())
    throw InvalidArgument("NormStats: column count mismatch");
  for (std::size_t c = 0; c < row.size(); ++c) {
    if (degenerate[c]) continue;
    if (kind == Kind::kMinMax) {
      row[c] = a[c] + (row[c] - 0.01) / 0.98 * (b[c] - a[c]);
    } else {
      row[c] = row[c] * b[c] + a[c];
    }
  }
}

NormStats compute_stats(const std::vector<const FeatureMatrix*>& corpus,
                        NormStats::Kind kind) {
  if (corpus.empty() || corpus[0]->rows == 0)
    throw InvalidArgument("compute_stats: empty corpus");
  const std::size_t cols = corpus[0]->cols;
  for (const auto* fm : corpus)
    if (fm->cols != cols)
      throw InvalidArgument("compute_stats: inconsistent feature width");

  NormStats st;
  st.kind = kind;
  st.a.assign(cols, 0.0);
  st.b.assign(cols, 0.0);
  st.degenerate.assign(cols, 0);

  if (kind == NormStats::Kind::kMinMax) {
    std::vector<double> mn(cols, 1e300), mx(cols, -1e300);
    for (const auto* fm : corpus)
      for (std::size_t r = 0; r < fm->rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
          mn[c] = std::min(mn[c], fm->at(r, c));
          mx[c] = std::max(mx[c], fm->at(r, c));
        }
    for (std::size_t c = 0; c < cols; ++c) {
      st.a[c] = mn[c];
      st.b[c] = mx[c];
      if (mx[c] - mn[c] < 1e-12) st.degenerate[c] = 1;
    }
  } else {
    std::vector<double> sum(cols, 0.0), sq(cols, 0.0);
    std::size_t n = 0;
    for (const auto* fm : corpus) {
      n += fm->rows;
      for (std::size_t r = 0; r < fm->rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
          sum[c] += fm->at(r, c);
          sq[c] += fm->at(r, c) * fm->at(r, c);
        }
    }
    for (std::size_t c = 0; c < cols; ++c) {
      const double mean = sum[c] / n;
      const double var = std::max(0.0, sq[c] / n - mean * mean);
      st.a[c] = mean;
      st.b[c] = std::sqrt(var);
      if (st.b[c] < 1e-12) {
        st.degenerate[c] = 1;
        st.b[c] = 1.0;
      }
    }
  }
  return st;
}

void save_stats(const std::string& path, const NormStats& stats) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw FileError("save_stats: cannot open: " + path);
  ByteWriter bw;
  bw.bytes("CVST", 4);
  bw.u16(1);
  bw.u8(static_cast<uint8_t>(stats.kind));
  bw.u32(static_cast<uint32_t>(stats.cols()));
  for (double v : stats.a) bw.f64(v);
  for (double v : stats.b) bw.f64(v);
  for (uint8_t v : stats.degenerate) bw.u8(v);
  bw.to_stream(f);
  if (!f) throw FileError("save_stats: write failed: " + path);
}

NormStats load_stats(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FileError("load_stats: cannot open: " + path);
  ByteReader br(f, path);
  char magic[4];
  br.bytes(magic, 4);
  if (std::memcmp(magic, "CVST", 4) != 0)
    throw FormatError("load_stats: bad magic: " + path);
  if (br.u16() != 1) throw FormatError("load_stats: unsupported version");
  NormStats st;
  st.kind = static_cast<NormStats::Kind>(br.u8());
  const uint32_t cols = br.u32();
  st.a.resize(cols);
  st.b.resize(cols);
  st.degenerate.resize(cols);
  for (auto& v : st.a) v = br.f64();
  for (auto& v : st.b) v = br.f64();
  for (auto& v : st.degenerate) v = br.u8();
  return st;
}

}  // namespace cvoc
