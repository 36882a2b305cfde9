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

#ifndef CVOC_SYNTHCORPUS_HPP_
#define CVOC_SYNTHCORPUS_HPP_

#include <string>
#include <vector>

#include "cvoc/features.hpp"
#include "cvoc/waveform.hpp"

namespace cvoc {

// Seeded generator of formant-like pseudo-speech, so training and
// evaluation runs need no licensed corpus. Each pseudo-speaker has its
// own base F0 and formant scale; phones map to fixed resonator
// settings.
struct SynthCorpusConfig {
  std::size_t n_speakers = 3;
  std::size_t utterances_per_speaker = 50;
  uint64_t seed = 1000;
  int sample_rate = kWorkingRate;
  double min_phone_s = 0.12;
  double max_phone_s = 0.26;
  int min_phones = 3;
  int max_phones = 5;
};

struct GeneratedUtterance {
  std::string id;
  std::string speaker;
  Waveform wav;
  AlignedUtterance alignment;
};

PhoneInventory synth_inventory();

// Speaker voice parameters are a pure function of the speaker index.
struct SpeakerVoice {
  double f0_base_hz = 0.0;
  double formant_scale = 1.0;
};
SpeakerVoice speaker_voice(std::size_t speaker_index);

GeneratedUtterance generate_utterance(std::size_t speaker_index,
                                      std::size_t utterance_index,
                                      const SynthCorpusConfig& cfg);

// Sustained fully-voiced vowel with gentle vibrato and declination.
Waveform generate_vowel(std::size_t speaker_index, double duration_s,
                        const SynthCorpusConfig& cfg = {});

// Writes wav/, lab/, phones.txt and manifest.csv under out_dir.
// Returns the manifest path.
std::string write_synth_corpus(const std::string& out_dir,
                               const SynthCorpusConfig& cfg);

}  // namespace cvoc

#endif  // CVOC_SYNTHCORPUS_HPP_
