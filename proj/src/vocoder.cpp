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

#include "cvoc/vocoder.hpp"

#include "cvoc/common.hpp"

namespace cvoc {

AnalysisResult analyze(const Waveform& input, const AnalysisConfig& cfg) {
  const Waveform w = resample(input, cfg.sample_rate);

  AnalysisResult res;
  res.pitch = track_f0_continuous(w, cfg.f0);
  res.params.f0 = res.pitch.f0;
  res.params.mvf = estimate_mvf(w, res.pitch.f0, cfg.mvf);
  res.params.mgc = mgc_analyze(w, cfg.mgc, &res.mgc_fallback_count);
  res.gcis = detect_gci(w, res.pitch, cfg.residual);
  res.params.validate();
  return res;
}

TrackPair analyze_tracks(const Waveform& input, const AnalysisConfig& cfg) {
  const Waveform w = resample(input, cfg.sample_rate);
  TrackPair out;
  out.f0 = track_f0_continuous(w, cfg.f0).f0;
  out.mgc = mgc_analyze(w, cfg.mgc);
  return out;
}

CopySynthesisResult copy_synthesis(const Waveform& input,
                                   const AnalysisConfig& analysis,
                                   const SynthesisConfig& synthesis) {
  if (input.duration_s() < 0.5)
    throw InvalidArgument("copy_synthesis: need at least 0.5 s of audio");
  const Waveform w = resample(input, analysis.sample_rate);

  AnalysisResult ar = analyze(w, analysis);
  PrototypeConfig proto_cfg = analysis.prototype;
  proto_cfg.residual = analysis.residual;

  CopySynthesisResult out;
  out.prototype = build_residual_prototype(w, ar.gcis, ar.pitch, proto_cfg);
  out.params = std::move(ar.params);
  out.waveform =
      synthesize(out.params, out.prototype, synthesis, analysis.sample_rate);
  return out;
}

}  // namespace cvoc
