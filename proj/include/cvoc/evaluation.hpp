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

#ifndef CVOC_EVALUATION_HPP_
#define CVOC_EVALUATION_HPP_

#include <optional>
#include <string>
#include <vector>

#include "cvoc/mgc.hpp"
#include "cvoc/pitch.hpp"
#include "cvoc/vocoder.hpp"

namespace cvoc {

enum class McdScaling {
  kAsPrinted,   // (1/N) sum_j sqrt(sum_i (x_ij - y_ij)^2)
  kStandardDb,  // each frame term multiplied by 10*sqrt(2)/ln 10
};

struct McdOptions {
  McdScaling scaling = McdScaling::kAsPrinted;
  bool skip_c0 = true;
  // Truncate/zero-pad both tracks to this coefficient count before the
  // distance; 0 keeps the tracks' own order.
  int force_order = 0;
};

// Mel-cepstral distortion between two aligned equal-length tracks.
double mcd(const MgcTrack& x, const MgcTrack& y, const McdOptions& opt = {});

// Pearson correlation between two aligned F0 tracks. Throws when the
// lengths differ, are < 2, or both tracks are constant.
struct F0CorrOptions {
  // Exclude frames where the reference is 0 (discontinuous references).
  bool skip_zero_reference = false;
};
double f0_corr(const F0Track& reference, const F0Track& produced,
               const F0CorrOptions& opt = {});

// Truncates both tracks to the shorter length; returns frames dropped.
std::size_t align_tracks(F0Track& a, F0Track& b);
std::size_t align_tracks(MgcTrack& a, MgcTrack& b);

struct EvalEntry {
  std::string ref_path;   // reference wav
  std::string syn_path;   // synthesized wav, or a stream stem
  std::string speaker;
  std::string split;      // "dev" or "test"
};

struct UtteranceScore {
  std::string id;
  std::string speaker;
  std::string split;
  double mcd_db = 0.0;
  double f0_corr = 0.0;
  bool ok = false;
  std::string error;
};

struct SpeakerAggregate {
  std::string speaker;
  double mcd_dev = 0.0, mcd_test = 0.0;
  double corr_dev = 0.0, corr_test = 0.0;
  std::size_t n_dev = 0, n_test = 0;
};

struct EvalReport {
  std::vector<UtteranceScore> utterances;
  std::vector<SpeakerAggregate> speakers;
  std::size_t failed = 0;

  std::string to_csv() const;
  // Text tables in the dev/test layout of the published results.
  std::string to_table() const;
};

struct EvalConfig {
  AnalysisConfig analysis;
  McdOptions mcd;
  F0CorrOptions corr;
};

// Reads the manifest entries, analyzes both sides (or loads streams
// when syn_path is a stem), aligns, scores and aggregates per
// speaker x split. Per-entry failures are recorded, not fatal.
EvalReport evaluate_corpus(const std::vector<EvalEntry>& manifest,
                           const EvalConfig& cfg = {});

// Manifest CSV with header "ref,syn,speaker,split".
std::vector<EvalEntry> load_eval_manifest(const std::string& path);

EvalReport aggregate_report(std::vector<UtteranceScore> scores);

}  // namespace cvoc

#endif  // CVOC_EVALUATION_HPP_
