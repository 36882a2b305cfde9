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

#ifndef CVOC_SYNTHESIS_HPP_
#define CVOC_SYNTHESIS_HPP_

#include <cstdint>
#include <span>

#include "cvoc/prototype.hpp"
#include "cvoc/streams.hpp"
#include "cvoc/waveform.hpp"

namespace cvoc {

enum class UnvoicedEnvelope { kNone, kTriangular, kAmplitudeFollow };
enum class ExcitationNorm { kPerPeriod, kPerFrame };

struct SynthesisConfig {
  int fft_len = 1024;
  uint64_t noise_seed = 0;
  UnvoicedEnvelope unvoiced_envelope = UnvoicedEnvelope::kAmplitudeFollow;
  // Roll-off of the complementary low/high split at the MVF.
  double crossover_slope_db_oct = 48.0;
  double noise_gain = 1.0;
  double mvf_floor_hz = 800.0;
  ExcitationNorm excitation_norm = ExcitationNorm::kPerPeriod;

  void validate(int hop) const;
};

// Pitch-synchronous overlap-add of the prototype pulse: the pulse is
// resampled to two periods of the local F0, Hann-windowed and placed at
// instants found by integrating the instantaneous F0. The instants (in
// samples) are reported through `instants` when non-null.
Waveform build_voiced_excitation(const F0Track& f0,
                                 const ResidualPrototype& proto,
                                 std::size_t n_samples, int sample_rate,
                                 ExcitationNorm norm =
                                     ExcitationNorm::kPerPeriod,
                                 std::vector<double>* instants = nullptr);

// Per-frame high-pass-filtered white noise with cutoff at the frame
// MVF, overlap-added at the 5 ms hop. Frames with MVF at the floor get
// full-band noise shaped by the configured time-domain envelope;
// frame_gain (one value per frame) drives the amplitude-follow shape.
Waveform build_noise_excitation(const MvfTrack& mvf, std::size_t n_samples,
                                const SynthesisConfig& cfg, uint64_t seed,
                                int sample_rate,
                                std::span<const double> frame_gain = {});

// Full synthesis: low-passed voiced excitation plus high-passed noise,
// filtered frame-by-frame in the frequency domain by the MGC envelope.
// Deterministic for a fixed (track, prototype, config) triple.
Waveform synthesize(const ParamTrack& p, const ResidualPrototype& proto,
                    const SynthesisConfig& cfg, int sample_rate);

}  // namespace cvoc

#endif  // CVOC_SYNTHESIS_HPP_
