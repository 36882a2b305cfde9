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

#include "cvoc/gci.hpp"

#include <algorithm>
#include <cmath>

#include "cvoc/common.hpp"
#include "cvoc/dsp.hpp"

namespace cvoc {

bool GciList::strictly_increasing() const {
  for (std::size_t i = 1; i < instants.size(); ++i)
    if (instants[i] <= instants[i - 1]) return false;
  return true;
}

std::vector<double> lp_residual(const Waveform& w, const ResidualConfig& cfg) {
  const std::size_t n = w.samples.size();
  std::vector<double> pre(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    pre[i] = w.samples[i] - (i > 0 ? cfg.preemphasis * w.samples[i - 1] : 0.0);

  const FrameGrid grid = frame_grid(w, cfg.window_ms);
  const auto window = dsp::hann_periodic(grid.frame_len);

  // Per-frame inverse filters.
  std::vector<std::vector<double>> filters(grid.n_frames);
  for (std::size_t t = 0; t < grid.n_frames; ++t) {
    auto frame = extract_frame(pre, static_cast<long>(t) * grid.hop,
                               grid.frame_len);
    for (int i = 0; i < grid.frame_len; ++i) frame[i] *= window[i];
    filters[t] = dsp::lpc_frame(frame, cfg.lpc_order).inverse_filter;
  }

  std::vector<double> residual(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t t = std::min(grid.n_frames - 1, i / grid.hop);
    const auto& a = filters[t];
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size() && k <= i; ++k)
      acc += a[k] * pre[i - k];
    residual[i] = acc;
  }
  return residual;
}

GciList detect_gci(const Waveform& w, const PitchResult& pitch,
                   const ResidualConfig& cfg) {
  GciList out;
  if (w.samples.empty() || pitch.f0.n_frames() == 0) return out;
  const auto residual = lp_residual(w, cfg);
  const double sr = w.sample_rate;
  const int hop = pitch.f0.hop;
  const long n = static_cast<long>(w.samples.size());
  const std::size_t n_frames = pitch.f0.n_frames();

  auto period_at = [&](long sample) {
    const std::size_t t =
        std::min(n_frames - 1, static_cast<std::size_t>(
                                   std::max(0L, sample / hop)));
    return sr / pitch.f0.values_hz[t];
  };

  // Most negative residual sample in [lo, hi].
  auto darkest = [&](long lo, long hi) {
    lo = std::max(0L, lo);
    hi = std::min(n - 1, hi);
    long best = -1;
    double val = 1e30;
    for (long i = lo; i <= hi; ++i) {
      if (residual[i] < val) {
        val = residual[i];
        best = i;
      }
    }
    return best;
  };

  // Scan maximal runs of anchored frames.
  std::size_t t = 0;
  while (t < n_frames) {
    if (!pitch.anchored[t]) {
      ++t;
      continue;
    }
    std::size_t run_end = t;
    while (run_end + 1 < n_frames && pitch.anchored[run_end + 1]) ++run_end;

    const long region_lo = std::max(0L, static_cast<long>(t) * hop - hop / 2);
    const long region_hi =
        std::min(n - 1, static_cast<long>(run_end) * hop + hop / 2);

    // Peaks must clear the region's residual level; ringing tails and
    // near-silence at region edges otherwise produce spurious instants.
    double rms = 0.0;
    for (long i = region_lo; i <= region_hi; ++i) rms += residual[i] * residual[i];
    rms = std::sqrt(rms / std::max(1L, region_hi - region_lo + 1));
    const double gate = -1.5 * rms;

    long cur = -1;
    long probe = region_lo;
    while (probe <= region_hi) {
      const double t0 = period_at(probe);
      const long cand = darkest(probe, probe + static_cast<long>(1.2 * t0));
      if (cand >= 0 && residual[cand] <= gate) {
        cur = cand;
        break;
      }
      probe += std::max(1L, static_cast<long>(std::lround(t0)));
    }
    if (cur < 0) {
      t = run_end + 1;
      continue;
    }
    out.instants.push_back(cur);
    for (;;) {
      const double period = period_at(cur);
      const long lo = cur + static_cast<long>(std::lround(0.7 * period));
      const long hi = cur + static_cast<long>(std::lround(1.3 * period));
      if (lo > region_hi) break;
      const long next = darkest(lo, std::min(hi, region_hi));
      if (next > cur && residual[next] <= gate) {
        out.instants.push_back(next);
        cur = next;
      } else {
        // Weak patch: keep phase, emit nothing.
        cur += std::max(1L, static_cast<long>(std::lround(period)));
      }
    }
    t = run_end + 1;
  }
  return out;
}

}  // namespace cvoc
