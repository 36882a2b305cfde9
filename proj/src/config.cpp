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

#include "cvoc/config.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "cvoc/common.hpp"

namespace cvoc {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

Ini Ini::parse(const std::string& text) {
  Ini ini;
  std::istringstream ss(text);
  std::string line;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw FormatError("ini: malformed section header at line " +
                          std::to_string(line_no));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw FormatError("ini: expected key=value at line " +
                        std::to_string(line_no));
    ini.sections_[section][trim(line.substr(0, eq))] =
        trim(line.substr(eq + 1));
  }
  return ini;
}

Ini Ini::from_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw FileError("ini: cannot open: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

bool Ini::has(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  return s != sections_.end() && s->second.count(key) > 0;
}

std::string Ini::get(const std::string& section, const std::string& key,
                     const std::string& fallback) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return fallback;
  const auto k = s->second.find(key);
  return k == s->second.end() ? fallback : k->second;
}

double Ini::get_num(const std::string& section, const std::string& key,
                    double fallback) const {
  if (!has(section, key)) return fallback;
  const std::string v = get(section, key, "");
  try {
    return std::stod(v);
  } catch (const std::exception&) {
    throw FormatError("ini: key " + section + "." + key +
                      " is not numeric: '" + v + "'");
  }
}

void Ini::set(const std::string& section, const std::string& key,
              const std::string& value) {
  sections_[section][key] = value;
}

void Ini::apply_override(const std::string& line) {
  const auto eq = line.find('=');
  const auto dot = line.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq)
    throw InvalidArgument("override must look like section.key=value: " +
                          line);
  set(trim(line.substr(0, dot)), trim(line.substr(dot + 1, eq - dot - 1)),
      trim(line.substr(eq + 1)));
}

ProjectConfig ProjectConfig::defaults() { return ProjectConfig{}; }

ProjectConfig ProjectConfig::from_ini(const Ini& ini) {
  ProjectConfig pc;
  pc.analysis.sample_rate =
      static_cast<int>(ini.get_num("audio", "sample_rate", kWorkingRate));
  pc.analysis.window_ms = ini.get_num("audio", "window_ms", 25.0);
  pc.analysis.mgc.window_ms = pc.analysis.window_ms;
  pc.analysis.residual.window_ms = pc.analysis.window_ms;

  pc.analysis.f0.floor_hz = ini.get_num("f0", "floor", 60.0);
  pc.analysis.f0.ceil_hz = ini.get_num("f0", "ceil", 400.0);
  pc.analysis.f0.periodicity_threshold =
      ini.get_num("f0", "periodicity_threshold", 0.45);

  pc.analysis.mvf.floor_hz = ini.get_num("mvf", "floor", 800.0);
  pc.synthesis.mvf_floor_hz = pc.analysis.mvf.floor_hz;

  pc.analysis.mgc.order = static_cast<int>(ini.get_num("mgc", "order", 24));
  pc.analysis.mgc.alpha = ini.get_num("mgc", "alpha", 0.42);
  pc.analysis.mgc.gamma = ini.get_num("mgc", "gamma", -1.0 / 3.0);
  pc.analysis.residual.lpc_order =
      static_cast<int>(ini.get_num("mgc", "lpc_order", 24));

  pc.synthesis.fft_len =
      static_cast<int>(ini.get_num("synthesis", "fft_len", 1024));
  pc.synthesis.noise_seed =
      static_cast<uint64_t>(ini.get_num("synthesis", "seed", 0));
  pc.synthesis.crossover_slope_db_oct =
      ini.get_num("synthesis", "crossover_slope", 48.0);
  pc.synthesis.noise_gain = ini.get_num("synthesis", "noise_gain", 1.0);
  const std::string env =
      ini.get("synthesis", "unvoiced_envelope", "amplitude-follow");
  if (env == "none")
    pc.synthesis.unvoiced_envelope = UnvoicedEnvelope::kNone;
  else if (env == "triangular")
    pc.synthesis.unvoiced_envelope = UnvoicedEnvelope::kTriangular;
  else if (env == "amplitude-follow")
    pc.synthesis.unvoiced_envelope = UnvoicedEnvelope::kAmplitudeFollow;
  else
    throw FormatError("config: unknown unvoiced_envelope '" + env + "'");

  pc.train.batch_size =
      static_cast<int>(ini.get_num("train", "batch_size", 265));
  pc.train.lr = ini.get_num("train", "lr", 0.02);
  pc.train.lr_end = ini.get_num("train", "lr_end", 0.002);
  pc.train.epochs = static_cast<int>(ini.get_num("train", "epochs", 25));
  pc.seed = static_cast<uint64_t>(ini.get_num("train", "seed", 1234));
  pc.train.seed = pc.seed;

  pc.splits.train = ini.get_num("train", "split_train", 0.90);
  pc.splits.dev = ini.get_num("train", "split_dev", 0.05);
  pc.splits.test = ini.get_num("train", "split_test", 0.05);

  pc.adapt.lr_scale = ini.get_num("adapt", "lr_scale", 0.1);
  pc.adapt.epochs = static_cast<int>(ini.get_num("adapt", "epochs", 10));
  pc.adapt.top_k_layers =
      static_cast<int>(ini.get_num("adapt", "top_k_layers", 0));
  pc.adapt.batch_size = pc.train.batch_size;
  pc.adapt.lr = pc.train.lr;
  pc.adapt.seed = pc.seed;

  pc.acoustic_width =
      static_cast<int>(ini.get_num("network", "hidden_width", 1024));
  pc.acoustic_depth =
      static_cast<int>(ini.get_num("network", "hidden_depth", 6));
  pc.duration_width =
      static_cast<int>(ini.get_num("duration", "hidden_width", 512));
  pc.duration_depth =
      static_cast<int>(ini.get_num("duration", "hidden_depth", 4));

  pc.corpus_root = ini.get("paths", "corpus_root", "");
  pc.model_dir = ini.get("paths", "model_dir", "");
  pc.output_dir = ini.get("paths", "output_dir", "");
  return pc;
}

ProjectConfig ProjectConfig::from_file(
    const std::string& path, const std::vector<std::string>& overrides) {
  Ini ini = path.empty() ? Ini() : Ini::from_file(path);
  for (const auto& ov : overrides) ini.apply_override(ov);
  return from_ini(ini);
}

std::vector<ManifestRow> load_corpus_manifest(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw FileError("load_corpus_manifest: cannot open: " + path);
  const std::filesystem::path base =
      std::filesystem::path(path).parent_path();

  auto resolve = [&](const std::string& p) {
    if (p.empty()) return p;
    std::filesystem::path fp(p);
    return fp.is_absolute() ? p : (base / fp).string();
  };

  std::vector<ManifestRow> rows;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(f, line)) {
    ++line_no;
    while (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!header_seen) {
      header_seen = true;
      if (!fields.empty() && fields[0] == "id") continue;
    }
    if (fields.size() != 5)
      throw FormatError("load_corpus_manifest: expected 5 fields at line " +
                        std::to_string(line_no) + " in " + path);
    ManifestRow row{fields[0], fields[1], resolve(fields[2]),
                    resolve(fields[3]), fields[4]};
    if (!ids.insert(row.id).second)
      throw FormatError("load_corpus_manifest: duplicate id '" + row.id +
                        "' at line " + std::to_string(line_no));
    if (row.split != "train" && row.split != "dev" && row.split != "test")
      throw FormatError("load_corpus_manifest: unknown split '" + row.split +
                        "' at line " + std::to_string(line_no));
    rows.push_back(std::move(row));
  }
  if (rows.empty())
    throw FormatError("load_corpus_manifest: no rows in " + path);
  return rows;
}

}  // namespace cvoc
