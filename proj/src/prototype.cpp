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

#include "cvoc/prototype.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "cvoc/common.hpp"
#include "cvoc/dsp.hpp"
#include "cvoc/serialize.hpp"

namespace cvoc {

PrincipalComponent principal_component(
    const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw InvalidArgument("principal_component: no rows");
  const std::size_t dim = rows[0].size();
  for (const auto& r : rows)
    if (r.size() != dim)
      throw InvalidArgument("principal_component: ragged rows");

  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index d = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXd x(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = rows[i][j];

  PrincipalComponent out;
  Eigen::VectorXd v;
  double lambda_max = 0.0;
  double trace = 0.0;

  if (n < d) {
    // Gram trick: eigenvectors of X X^T map to those of X^T X.
    const Eigen::MatrixXd gram = x * x.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    const Eigen::Index last = n - 1;
    lambda_max = es.eigenvalues()(last);
    trace = gram.trace();
    v = x.transpose() * es.eigenvectors().col(last);
  } else {
    const Eigen::MatrixXd scatter = x.transpose() * x;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(scatter);
    const Eigen::Index last = d - 1;
    lambda_max = es.eigenvalues()(last);
    trace = scatter.trace();
    v = es.eigenvectors().col(last);
  }

  const double norm = v.norm();
  if (norm <= 0.0)
    throw InvalidArgument("principal_component: zero input matrix");
  v /= norm;
  out.vector.assign(v.data(), v.data() + v.size());
  out.energy_share = trace > 0.0 ? std::clamp(lambda_max / trace, 0.0, 1.0)
                                 : 0.0;
  return out;
}

std::vector<std::vector<double>> extract_residual_cycles(
    const Waveform& w, const GciList& gcis, const PitchResult& pitch,
    const PrototypeConfig& cfg) {
  const auto residual = lp_residual(w, cfg.residual);
  const double sr = w.sample_rate;
  const int hop = pitch.f0.hop;
  const long n = static_cast<long>(residual.size());
  const std::size_t n_frames = pitch.f0.n_frames();

  std::vector<std::vector<double>> cycles;
  cycles.reserve(gcis.size());
  for (long g : gcis.instants) {
    const std::size_t t = std::min(
        n_frames - 1, static_cast<std::size_t>(std::max(0L, g / hop)));
    const int period =
        static_cast<int>(std::lround(sr / pitch.f0.values_hz[t]));
    const int seg_len = 2 * period;
    if (g - period < 0 || g + period >= n) continue;

    std::vector<double> seg(seg_len);
    const auto window = dsp::hann_symmetric(seg_len);
    for (int i = 0; i < seg_len; ++i)
      seg[i] = residual[g - period + i] * window[i];

    // Length-normalize to the canonical cycle length.
    Waveform tmp{std::move(seg), seg_len};
    Waveform res = resample(tmp, cfg.length);
    res.samples.resize(cfg.length, 0.0);
    cycles.push_back(std::move(res.samples));
  }
  return cycles;
}

ResidualPrototype build_prototype_from_cycles(
    const std::vector<std::vector<double>>& cycles,
    const PrototypeConfig& cfg) {
  if (cycles.size() < cfg.min_cycles)
    throw InvalidArgument(
        "build_residual_prototype: only " + std::to_string(cycles.size()) +
        " residual cycles available; need at least " +
        std::to_string(cfg.min_cycles) +
        " (supply more voiced speech)");
  auto pc = principal_component(cycles);

  ResidualPrototype proto;
  proto.pulse = std::move(pc.vector);
  proto.energy_share = pc.energy_share;
  proto.component_index = 0;
  proto.source_cycle_count = cycles.size();

  // Dominant peak negative.
  std::size_t peak = 0;
  for (std::size_t i = 1; i < proto.pulse.size(); ++i)
    if (std::abs(proto.pulse[i]) > std::abs(proto.pulse[peak])) peak = i;
  if (proto.pulse[peak] > 0.0)
    for (auto& v : proto.pulse) v = -v;
  return proto;
}

ResidualPrototype build_residual_prototype(const Waveform& w,
                                           const GciList& gcis,
                                           const PitchResult& pitch,
                                           const PrototypeConfig& cfg) {
  if (gcis.size() < cfg.min_cycles)
    throw InvalidArgument(
        "build_residual_prototype: only " + std::to_string(gcis.size()) +
        " GCIs detected; need at least " + std::to_string(cfg.min_cycles) +
        " (supply more voiced speech)");
  return build_prototype_from_cycles(
      extract_residual_cycles(w, gcis, pitch, cfg), cfg);
}

void save_prototype(const std::string& path, const ResidualPrototype& p) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw FileError("save_prototype: cannot open: " + path);
  ByteWriter bw;
  bw.bytes("CVRP", 4);
  bw.u16(1);
  bw.u32(static_cast<uint32_t>(p.pulse.size()));
  for (double v : p.pulse) bw.f32(static_cast<float>(v));
  bw.to_stream(f);
  if (!f) throw FileError("save_prototype: write failed: " + path);
}

ResidualPrototype load_prototype(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FileError("load_prototype: cannot open: " + path);
  ByteReader br(f, path);
  char magic[4];
  br.bytes(magic, 4);
  if (std::memcmp(magic, "CVRP", 4) != 0)
    throw FormatError("load_prototype: bad magic: " + path);
  const uint16_t version = br.u16();
  if (version != 1)
    throw FormatError("load_prototype: unsupported version " +
                      std::to_string(version) + ": " + path);
  const uint32_t len = br.u32();
  ResidualPrototype p;
  p.pulse.resize(len);
  for (uint32_t i = 0; i < len; ++i) p.pulse[i] = br.f32();
  return p;
}

}  // namespace cvoc
