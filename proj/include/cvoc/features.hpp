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

#ifndef CVOC_FEATURES_HPP_
#define CVOC_FEATURES_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "cvoc/waveform.hpp"

namespace cvoc {

// Symbol used for out-of-utterance context slots; always a member of
// the inventory so every one-hot slot carries exactly one 1.
inline constexpr const char* kEdgeSymbol = "<edge>";

class PhoneInventory {
 public:
  // Preserves the given order; appends the edge symbol if absent.
  explicit PhoneInventory(std::vector<std::string> symbols);

  static PhoneInventory from_file(const std::string& path);
  void to_file(const std::string& path) const;

  std::size_t size() const { return symbols_.size(); }
  const std::vector<std::string>& symbols() const { return symbols_; }
  std::size_t index(const std::string& symbol) const;  // throws on unknown
  std::size_t edge_index() const { return edge_index_; }
  bool contains(const std::string& symbol) const;

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, std::size_t> lookup_;
  std::size_t edge_index_ = 0;
};

struct AlignedPhone {
  std::string phone;
  double start_s = 0.0;
  double end_s = 0.0;
};

struct AlignedUtterance {
  std::string id;
  std::string speaker;
  std::vector<AlignedPhone> entries;

  double total_duration_s() const {
    return entries.empty() ? 0.0 : entries.back().end_s;
  }
  void validate() const;  // contiguous, non-overlapping, increasing
};

// Text alignment file: one "phone<TAB>start<TAB>end" line per entry,
// seconds as decimals. Errors carry the offending line number.
AlignedUtterance parse_alignment(const std::string& path);

// Rows-by-columns feature container with a schema tag.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;  // row-major
  std::string schema;

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<const double> row(std::size_t r) const {
    return {data.data() + r * cols, cols};
  }
};

// Per-frame features: one-hot of the current phone and +-2 context
// phones (5*|inv| dims), fraction-through-phone, phone duration in
// seconds, fraction-through-utterance. Width = 5*|inv| + 3.
FeatureMatrix encode_linguistic_features(const AlignedUtterance& u,
                                         const PhoneInventory& inv,
                                         const FrameGrid& grid);

// Per-phone features: one-hot + context one-hots + position in the
// utterance. Width = 5*|inv| + 1. Targets (duration in frames at the
// 5 ms hop) are returned separately.
struct DurationFeatures {
  FeatureMatrix features;
  std::vector<double> target_frames;
};
DurationFeatures encode_duration_features(const AlignedUtterance& u,
                                          const PhoneInventory& inv,
                                          int hop, int sample_rate);

// Column-wise normalization: min-max to [0.01, 0.99] for inputs,
// mean/variance for output parameter streams. Zero-variance columns
// pass through and are flagged.
struct NormStats {
  enum class Kind : uint8_t { kMinMax = 0, kMeanVar = 1 };
  Kind kind = Kind::kMinMax;
  std::vector<double> a;  // min or mean per column
  std::vector<double> b;  // max or std per column
  std::vector<uint8_t> degenerate;

  std::size_t cols() const { return a.size(); }
  void apply(FeatureMatrix& fm) const;
  void apply_row(std::span<double> row) const;
  void invert_row(std::span<double> row) const;
};

NormStats compute_stats(const std::vector<const FeatureMatrix*>& corpus,
                        NormStats::Kind kind);

// Versioned binary sidecar, magic "CVST".
void save_stats(const std::string& path, const NormStats& stats);
NormStats load_stats(const std::string& path);

}  // namespace cvoc

#endif  // CVOC_FEATURES_HPP_
