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

#ifndef CVOC_GCI_HPP_
#define CVOC_GCI_HPP_

#include <vector>

#include "cvoc/pitch.hpp"
#include "cvoc/waveform.hpp"

namespace cvoc {

// Strictly increasing glottal closure instants, in samples.
struct GciList {
  std::vector<long> instants;

  std::size_t size() const { return instants.size(); }
  bool strictly_increasing() const;
};

struct ResidualConfig {
  int lpc_order = 24;
  double preemphasis = 0.97;
  double window_ms = 25.0;
};

// Linear-prediction residual of the full signal: per-frame
// autocorrelation LPC on the pre-emphasized signal, inverse-filtered
// sample by sample with the nearest frame's coefficients.
std::vector<double> lp_residual(const Waveform& w,
                                const ResidualConfig& cfg = {});

// Places one instant per pitch period at the residual's dominant
// negative peak, only inside high-periodicity (anchored) regions.
GciList detect_gci(const Waveform& w, const PitchResult& pitch,
                   const ResidualConfig& cfg = {});

}  // namespace cvoc

#endif  // CVOC_GCI_HPP_
