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

#include "cvoc/pitch.hpp"

#include <algorithm>
#include <cmath>

#include "cvoc/common.hpp"
#include "cvoc/dsp.hpp"

namespace cvoc {

namespace {

struct FrameEstimate {
  double f0 = 0.0;
  double periodicity = 0.0;
};

// One YIN-style frame: cumulative-mean-normalized difference over the
// lag range, absolute-threshold dip selection, parabolic refinement.
FrameEstimate yin_frame(const std::vector<double>& buf, int window,
                        int tau_min, int tau_max, double sr,
                        double yin_threshold) {
  const int n_tau = tau_max;
  std::vector<double> d(n_tau + 1, 0.0);
  for (int tau = 1; tau <= n_tau; ++tau) {
    double acc = 0.0;
    for (int j = 0; j < window; ++j) {
      const double diff = buf[j] - buf[j + tau];
      acc += diff * diff;
    }
    d[tau] = acc;
  }

  std::vector<double> cmnd(n_tau + 1, 1.0);
  double running = 0.0;
  for (int tau = 1; tau <= n_tau; ++tau) {
    running += d[tau];
    cmnd[tau] = (running > 0.0) ? d[tau] * tau / running : 1.0;
  }

  // Each dip is refined to its continuous-lag minimum before the
  // threshold test. A true period near a half-integer lag leaves both
  // neighboring integer lags visibly misaligned while the doubled lag
  // aligns exactly; without the refinement the octave wins.
  auto refine = [&](int tau) {
    double off = 0.0, val = cmnd[tau];
    if (tau > 1 && tau < n_tau) {
      const double ym1 = cmnd[tau - 1], y0 = cmnd[tau], yp1 = cmnd[tau + 1];
      const double denom = ym1 - 2.0 * y0 + yp1;
      if (denom > 1e-30) {
        off = std::clamp(0.5 * (ym1 - yp1) / denom, -0.5, 0.5);
        val = y0 - 0.125 * (ym1 - yp1) * (ym1 - yp1) / denom;
      }
    }
    return std::pair<double, double>(off, std::max(0.0, val));
  };

  int best = -1;
  double best_off = 0.0, best_val = 1e30;
  for (int tau = tau_min; tau <= tau_max; ++tau) {
    const bool local_min = cmnd[tau] <= cmnd[tau - 1] &&
                           (tau == n_tau || cmnd[tau] <= cmnd[tau + 1]);
    if (!local_min) continue;
    const auto [off, val] = refine(tau);
    if (val < yin_threshold) {
      best = tau;
      best_off = off;
      best_val = val;
      break;
    }
    if (val < best_val) {
      best = tau;
      best_off = off;
      best_val = val;
    }
  }
  if (best < 0) {
    for (int tau = tau_min; tau <= tau_max; ++tau) {
      if (cmnd[tau] < best_val) {
        best_val = cmnd[tau];
        best = tau;
      }
    }
  }

  // Sub-lag check against octave-down errors: a period near a
  // half-integer lag leaves the dip at the true period shallower than
  // the perfectly aligned dip at twice the period. Promote the half-lag
  // dip when it is itself clearly periodic and commensurate.
  for (int hops = 0; hops < 2; ++hops) {
    if (best / 2 < tau_min) break;
    int half = -1;
    double half_off = 0.0, half_val = 1e30;
    for (int tau = std::max(tau_min, best / 2 - 4);
         tau <= std::min(n_tau, best / 2 + 4); ++tau) {
      if (cmnd[tau] <= cmnd[tau - 1] &&
          (tau == n_tau || cmnd[tau] <= cmnd[tau + 1])) {
        const auto [off, val] = refine(tau);
        if (val < half_val) {
          half = tau;
          half_off = off;
          half_val = val;
        }
      }
    }
    if (half < 0 || half_val > 0.35 ||
        half_val > std::max(2.5 * best_val, best_val + 0.15))
      break;
    best = half;
    best_off = half_off;
    best_val = std::min(best_val, half_val);
  }

  FrameEstimate est;
  est.f0 = sr / (static_cast<double>(best) + best_off);
  est.periodicity = 1.0 - std::clamp(best_val, 0.0, 1.0);
  return est;
}

}  // namespace

PitchResult track_f0_continuous(const Waveform& w, const F0Config& cfg) {
  if (cfg.floor_hz < 50.0 || cfg.ceil_hz > 500.0 ||
      cfg.floor_hz >= cfg.ceil_hz)
    throw InvalidArgument("track_f0_continuous: need 50 <= floor < ceil <= 500");
  const double sr = w.sample_rate;
  const int tau_max = static_cast<int>(std::lround(sr / cfg.floor_hz));
  const int tau_min = std::max(2, static_cast<int>(std::lround(sr / cfg.ceil_hz)));
  const int window = tau_max;
  const int buf_len = window + tau_max;
  if (static_cast<long>(w.samples.size()) < buf_len)
    throw InvalidArgument(
        "track_f0_continuous: waveform shorter than one analysis window");

  const FrameGrid grid = frame_grid(w, 25.0);
  const std::size_t n = grid.n_frames;

  PitchResult res;
  res.f0.hop = grid.hop;
  res.f0.values_hz.resize(n);
  res.anchored.assign(n, 0);
  res.periodicity.assign(n, 0.0);

  std::vector<double> raw(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    const long center = static_cast<long>(t) * grid.hop;
    const auto buf = extract_frame(w.samples, center, buf_len);
    const auto est = yin_frame(buf, window, tau_min, tau_max, sr,
                               cfg.yin_threshold);
    raw[t] = std::clamp(est.f0, cfg.floor_hz, cfg.ceil_hz);
    res.periodicity[t] = est.periodicity;
    res.anchored[t] = est.periodicity >= cfg.periodicity_threshold ? 1 : 0;
  }

  // Continuous contour: linear interpolation in log-F0 between anchors,
  // edge extension outside, geometric-mean fallback with no anchors.
  std::vector<double> logf0(n, 0.0);
  std::vector<std::size_t> anchors;
  for (std::size_t t = 0; t < n; ++t)
    if (res.anchored[t]) anchors.push_back(t);

  if (anchors.empty()) {
    const double fallback = std::log(std::sqrt(cfg.floor_hz * cfg.ceil_hz));
    std::fill(logf0.begin(), logf0.end(), fallback);
  } else {
    for (std::size_t t = 0; t < n; ++t) {
      if (res.anchored[t]) {
        logf0[t] = std::log(raw[t]);
        continue;
      }
      auto it = std::lower_bound(anchors.begin(), anchors.end(), t);
      if (it == anchors.begin()) {
        logf0[t] = std::log(raw[anchors.front()]);
      } else if (it == anchors.end()) {
        logf0[t] = std::log(raw[anchors.back()]);
      } else {
        const std::size_t hi = *it;
        const std::size_t lo = *(it - 1);
        const double alpha = static_cast<double>(t - lo) / (hi - lo);
        logf0[t] = (1.0 - alpha) * std::log(raw[lo]) +
                   alpha * std::log(raw[hi]);
      }
    }
  }

  logf0 = dsp::median_filter(logf0, 3);
  logf0 = dsp::moving_average(logf0, 3);
  for (std::size_t t = 0; t < n; ++t)
    res.f0.values_hz[t] =
        std::clamp(std::exp(logf0[t]), cfg.floor_hz, cfg.ceil_hz);
  return res;
}

}  // namespace cvoc
