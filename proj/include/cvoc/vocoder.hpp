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

#ifndef CVOC_VOCODER_HPP_
#define CVOC_VOCODER_HPP_

#include "cvoc/gci.hpp"
#include "cvoc/mgc.hpp"
#include "cvoc/mvf.hpp"
#include "cvoc/pitch.hpp"
#include "cvoc/prototype.hpp"
#include "cvoc/streams.hpp"
#include "cvoc/synthesis.hpp"
#include "cvoc/waveform.hpp"

namespace cvoc {

// One configuration governs analysis, training and synthesis so every
// stream shares the same frame clock.
struct AnalysisConfig {
  int sample_rate = kWorkingRate;
  double window_ms = 25.0;
  F0Config f0;
  MvfConfig mvf;
  MgcConfig mgc;
  ResidualConfig residual;
  PrototypeConfig prototype;
};

struct AnalysisResult {
  ParamTrack params;
  PitchResult pitch;
  GciList gcis;
  std::size_t mgc_fallback_count = 0;
};

// Resamples to the working rate and extracts the three parameter
// streams plus GCIs. Does not build the prototype (cycle extraction is
// separate so prototypes can pool cycles across utterances).
AnalysisResult analyze(const Waveform& w, const AnalysisConfig& cfg = {});

// F0 + MGC only; used by evaluation where MVF/GCI are not needed.
struct TrackPair {
  F0Track f0;
  MgcTrack mgc;
};
TrackPair analyze_tracks(const Waveform& w, const AnalysisConfig& cfg = {});

// Analysis immediately followed by synthesis; isolates vocoder quality
// from model quality. Returns the waveform and the intermediate track.
struct CopySynthesisResult {
  Waveform waveform;
  ParamTrack params;
  ResidualPrototype prototype;
};
CopySynthesisResult copy_synthesis(const Waveform& w,
                                   const AnalysisConfig& analysis = {},
                                   const SynthesisConfig& synthesis = {});

}  // namespace cvoc

#endif  // CVOC_VOCODER_HPP_
