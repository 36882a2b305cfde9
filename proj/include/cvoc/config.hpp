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

#ifndef CVOC_CONFIG_HPP_
#define CVOC_CONFIG_HPP_

#include <map>
#include <string>
#include <vector>

#include "cvoc/network.hpp"
#include "cvoc/training.hpp"
#include "cvoc/vocoder.hpp"

namespace cvoc {

// INI-style key=value sections; '#' and ';' start comments.
class Ini {
 public:
  Ini() = default;
  static Ini parse(const std::string& text);
  static Ini from_file(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key,
                  const std::string& fallback) const;
  double get_num(const std::string& section, const std::string& key,
                 double fallback) const;
  void set(const std::string& section, const std::string& key,
           const std::string& value);
  // "section.key=value"
  void apply_override(const std::string& line);

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

// One configuration governs analyze/train/synthesize so the streams
// always share a frame clock.
struct ProjectConfig {
  AnalysisConfig analysis;
  SynthesisConfig synthesis;
  TrainConfig train;
  AdaptConfig adapt;
  SplitFractions splits;
  int acoustic_width = 1024;
  int acoustic_depth = 6;
  int duration_width = 512;
  int duration_depth = 4;
  uint64_t seed = 1234;
  std::string corpus_root;
  std::string model_dir;
  std::string output_dir;

  static ProjectConfig defaults();
  static ProjectConfig from_ini(const Ini& ini);
  static ProjectConfig from_file(const std::string& path,
                                 const std::vector<std::string>& overrides = {});
};

struct ManifestRow {
  std::string id;
  std::string speaker;
  std::string wav_path;
  std::string alignment_path;
  std::string split;  // train | dev | test
};

// CSV with header "id,speaker,wav,alignment,split". Relative paths are
// resolved against the manifest's directory. Ids must be unique.
std::vector<ManifestRow> load_corpus_manifest(const std::string& path);

}  // namespace cvoc

#endif  // CVOC_CONFIG_HPP_
