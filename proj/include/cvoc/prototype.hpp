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

#ifndef CVOC_PROTOTYPE_HPP_
#define CVOC_PROTOTYPE_HPP_

#include <string>
#include <vector>

#include "cvoc/gci.hpp"
#include "cvoc/pitch.hpp"
#include "cvoc/waveform.hpp"

namespace cvoc {

inline constexpr int kPrototypeLength = 512;

// PCA-derived excitation pulse: the first principal component of
// GCI-aligned, Hann-windowed, length-normalized residual cycles.
// Unit Euclidean norm, dominant peak negative.
struct ResidualPrototype {
  std::vector<double> pulse;
  int component_index = 0;
  double energy_share = 0.0;
  std::size_t source_cycle_count = 0;
};

struct PrototypeConfig {
  int length = kPrototypeLength;
  std::size_t min_cycles = 10;
  ResidualConfig residual;
};

// First principal component of the row matrix (uncentered second-moment
// PCA). Returns the unit-norm component and the fraction of total
// energy it explains.
struct PrincipalComponent {
  std::vector<double> vector;
  double energy_share = 0.0;
};
PrincipalComponent principal_component(
    const std::vector<std::vector<double>>& rows);

// Extracts two-period Hann-windowed residual segments centered on each
// GCI, resampled to `length` samples.
std::vector<std::vector<double>> extract_residual_cycles(
    const Waveform& w, const GciList& gcis, const PitchResult& pitch,
    const PrototypeConfig& cfg = {});

// Builds the prototype from a prepared segment matrix. Throws if fewer
// than cfg.min_cycles rows are supplied.
ResidualPrototype build_prototype_from_cycles(
    const std::vector<std::vector<double>>& cycles,
    const PrototypeConfig& cfg = {});

// Full path: residual, cycle extraction, PCA.
ResidualPrototype build_residual_prototype(const Waveform& w,
                                           const GciList& gcis,
                                           const PitchResult& pitch,
                                           const PrototypeConfig& cfg = {});

// Prototype file: magic "CVRP", version u16, length u32, float32
// samples, little-endian.
void save_prototype(const std::string& path, const ResidualPrototype& p);
ResidualPrototype load_prototype(const std::string& path);

}  // namespace cvoc

#endif  // CVOC_PROTOTYPE_HPP_
