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

#include "cvoc/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "cvoc/common.hpp"

namespace cvoc {

double mcd(const MgcTrack& x, const MgcTrack& y, const McdOptions& opt) {
  if (x.n_frames != y.n_frames)
    throw InvalidArgument("mcd: frame counts differ (" +
                          std::to_string(x.n_frames) + " vs " +
                          std::to_string(y.n_frames) + ")");
  if (x.n_frames == 0) throw InvalidArgument("mcd: empty tracks");

  int order = 0;
  if (opt.force_order > 0) {
    order = opt.force_order;
  } else {
    if (x.order != y.order)
      throw InvalidArgument("mcd: orders differ (" + std::to_string(x.order) +
                            " vs " + std::to_string(y.order) + ")");
    order = x.order;
  }

  const int first = opt.skip_c0 ? 1 : 0;
  double acc = 0.0;
  for (std::size_t t = 0; t < x.n_frames; ++t) {
    const auto xf = x.frame(t);
    const auto yf = y.frame(t);
    double sq = 0.0;
    for (int i = first; i <= order; ++i) {
      const double xv = i < static_cast<int>(xf.size()) ? xf[i] : 0.0;
      const double yv = i < static_cast<int>(yf.size()) ? yf[i] : 0.0;
      const double d = xv - yv;
      sq += d * d;
    }
    acc += std::sqrt(sq);
  }
  double value = acc / static_cast<double>(x.n_frames);
  if (opt.scaling == McdScaling::kStandardDb)
    value *= 10.0 * std::sqrt(2.0) / std::log(10.0);
  return value;
}

double f0_corr(const F0Track& reference, const F0Track& produced,
               const F0CorrOptions& opt) {
  if (reference.n_frames() != produced.n_frames())
    throw InvalidArgument("f0_corr: track lengths differ");

  std::vector<double> x, y;
  x.reserve(reference.n_frames());
  for (std::size_t i = 0; i < reference.n_frames(); ++i) {
    if (opt.skip_zero_reference && reference.values_hz[i] == 0.0) continue;
    x.push_back(reference.values_hz[i]);
    y.push_back(produced.values_hz[i]);
  }
  if (x.size() < 2)
    throw InvalidArgument("f0_corr: need at least 2 comparable frames");

  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 && syy == 0.0)
    throw InvalidArgument("f0_corr: both tracks are constant; correlation undefined");
  if (sxx == 0.0 || syy == 0.0)
    throw InvalidArgument("f0_corr: one track is constant; correlation undefined");
  return sxy / (std::sqrt(sxx) * std::sqrt(syy));
}

std::size_t align_tracks(F0Track& a, F0Track& b) {
  const std::size_t n = std::min(a.n_frames(), b.n_frames());
  const std::size_t dropped = a.n_frames() + b.n_frames() - 2 * n;
  a.values_hz.resize(n);
  b.values_hz.resize(n);
  return dropped;
}

std::size_t align_tracks(MgcTrack& a, MgcTrack& b) {
  const std::size_t n = std::min(a.n_frames, b.n_frames);
  const std::size_t dropped = a.n_frames + b.n_frames - 2 * n;
  a.coeffs.resize(n * a.width());
  b.coeffs.resize(n * b.width());
  a.n_frames = n;
  b.n_frames = n;
  return dropped;
}

std::vector<EvalEntry> load_eval_manifest(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw FileError("load_eval_manifest: cannot open: " + path);
  std::vector<EvalEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(f, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r')) line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!header_seen) {
      header_seen = true;
      if (fields.size() >= 1 && fields[0] == "ref") continue;  // header row
    }
    if (fields.size() != 4)
      throw FormatError("load_eval_manifest: expected 4 fields at line " +
                        std::to_string(line_no) + " in " + path);
    entries.push_back({fields[0], fields[1], fields[2], fields[3]});
  }
  return entries;
}

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string basename_no_ext(const std::string& path) {
  const auto slash = path.find_last_of("/\\");
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  const auto dot = base.find_last_of('.');
  if (dot != std::string::npos) base = base.substr(0, dot);
  return base;
}

}  // namespace

EvalReport aggregate_report(std::vector<UtteranceScore> scores) {
  EvalReport report;
  report.utterances = std::move(scores);

  std::map<std::string, SpeakerAggregate> agg;
  for (const auto& s : report.utterances) {
    if (!s.ok) {
      ++report.failed;
      continue;
    }
    auto& a = agg[s.speaker];
    a.speaker = s.speaker;
    if (s.split == "test") {
      a.mcd_test += s.mcd_db;
      a.corr_test += s.f0_corr;
      ++a.n_test;
    } else {
      a.mcd_dev += s.mcd_db;
      a.corr_dev += s.f0_corr;
      ++a.n_dev;
    }
  }
  for (auto& [name, a] : agg) {
    if (a.n_dev) {
      a.mcd_dev /= a.n_dev;
      a.corr_dev /= a.n_dev;
    }
    if (a.n_test) {
      a.mcd_test /= a.n_test;
      a.corr_test /= a.n_test;
    }
    report.speakers.push_back(a);
  }
  return report;
}

EvalReport evaluate_corpus(const std::vector<EvalEntry>& manifest,
                           const EvalConfig& cfg) {
  std::vector<UtteranceScore> scores;
  scores.reserve(manifest.size());
  for (const auto& entry : manifest) {
    UtteranceScore s;
    s.id = basename_no_ext(entry.ref_path);
    s.speaker = entry.speaker;
    s.split = entry.split;
    try {
      const Waveform ref = read_wav(entry.ref_path);
      TrackPair ref_tracks = analyze_tracks(ref, cfg.analysis);

      TrackPair syn_tracks;
      if (ends_with(entry.syn_path, ".wav")) {
        const Waveform syn = read_wav(entry.syn_path);
        syn_tracks = analyze_tracks(syn, cfg.analysis);
      } else {
        const ParamTrack pt =
            load_param_track(entry.syn_path, cfg.analysis.sample_rate);
        syn_tracks.f0 = pt.f0;
        syn_tracks.mgc = pt.mgc;
      }

      align_tracks(ref_tracks.f0, syn_tracks.f0);
      align_tracks(ref_tracks.mgc, syn_tracks.mgc);
      s.mcd_db = mcd(ref_tracks.mgc, syn_tracks.mgc, cfg.mcd);
      s.f0_corr = f0_corr(ref_tracks.f0, syn_tracks.f0, cfg.corr);
      s.ok = true;
    } catch (const std::exception& e) {
      s.ok = false;
      s.error = e.what();
    }
    scores.push_back(std::move(s));
  }
  return aggregate_report(std::move(scores));
}

std::string EvalReport::to_csv() const {
  std::ostringstream os;
  os << "id,speaker,split,mcd_db,f0_corr,status\n";
  os << std::setprecision(10);
  for (const auto& s : utterances) {
    os << s.id << "," << s.speaker << "," << s.split << ",";
    if (s.ok)
      os << s.mcd_db << "," << s.f0_corr << ",ok\n";
    else
      os << ",,error: " << s.error << "\n";
  }
  return os.str();
}

std::string EvalReport::to_table() const {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3);
  os << "MCD errors on the dev/test sets.\n";
  os << "+------+---------------------+\n";
  os << "| Spkr | Continuous vocoder  |\n";
  os << "+------+---------------------+\n";
  for (const auto& a : speakers) {
    os << "| " << std::setw(4) << a.speaker << " | " << std::setw(7)
       << a.mcd_dev << " / " << std::setw(7) << a.mcd_test << "   |\n";
  }
  os << "+------+---------------------+\n\n";
  os << "F0-CORR on the dev/test sets.\n";
  os << "+------+---------------------+\n";
  os << "| Spkr | Continuous vocoder  |\n";
  os << "+------+---------------------+\n";
  for (const auto& a : speakers) {
    os << "| " << std::setw(4) << a.speaker << " | " << std::setw(7)
       << a.corr_dev << " / " << std::setw(7) << a.corr_test << "   |\n";
  }
  os << "+------+---------------------+\n";
  return os.str();
}

}  // namespace cvoc
