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

#include "cvoc/mgc.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "cvoc/common.hpp"
#include "cvoc/dsp.hpp"

namespace cvoc {

namespace {
constexpr double kAmplitudeFloor = 1e-5;  // periodogram floor 1e-10
constexpr double kPi = std::numbers::pi;

void validate_config(const MgcConfig& cfg) {
  if (cfg.gamma < -1.0 || cfg.gamma > 0.0)
    throw InvalidArgument("mgc: gamma must be in [-1, 0]");
  if (cfg.alpha < 0.0 || cfg.alpha >= 1.0)
    throw InvalidArgument("mgc: alpha must be in [0, 1)");
  if (cfg.order < 1) throw InvalidArgument("mgc: order must be >= 1");
  if (!dsp::is_pow2(cfg.fft_len) || cfg.fft_len < 256)
    throw InvalidArgument("mgc: fft_len must be a power of two >= 256");
}

// Generalized log s_gamma(a) = (a^gamma - 1)/gamma, log at gamma 0.
double generalized_log(double a, double gamma) {
  if (gamma == 0.0) return std::log(a);
  return (std::pow(a, gamma) - 1.0) / gamma;
}

}  // namespace

double warp_frequency(double omega, double alpha) {
  if (alpha == 0.0) return omega;
  return omega +
         2.0 * std::atan(alpha * std::sin(omega) /
                         (1.0 - alpha * std::cos(omega)));
}

struct MgcAnalyzer::Impl {
  MgcConfig cfg;
  int sample_rate = 0;
  int frame_len = 0;
  std::vector<double> window;
  // Weighted least-squares projector: coeff = projector * target.
  // Columns of the design matrix are [1, 2cos(m*warped_bin)]; bins 0 and
  // N/2 carry half the circle weight of interior bins.
  Eigen::MatrixXd projector;  // (order+1) x (fft_len/2+1)
};

MgcAnalyzer::MgcAnalyzer(int sample_rate, const MgcConfig& cfg)
    : impl_(std::make_unique<Impl>()) {
  validate_config(cfg);
  impl_->cfg = cfg;
  impl_->sample_rate = sample_rate;
  impl_->frame_len = static_cast<int>(
      std::lround(cfg.window_ms / 1000.0 * sample_rate));
  if (impl_->frame_len > cfg.fft_len)
    throw InvalidArgument("mgc: analysis window longer than fft_len");
  impl_->window = dsp::hann_periodic(impl_->frame_len);

  const int bins = cfg.fft_len / 2 + 1;
  const int width = cfg.order + 1;
  Eigen::MatrixXd design(bins, width);
  Eigen::VectorXd weights(bins);
  for (int k = 0; k < bins; ++k) {
    const double omega = kPi * k / (bins - 1);
    const double warped = warp_frequency(omega, cfg.alpha);
    design(k, 0) = 1.0;
    for (int m = 1; m <= cfg.order; ++m)
      design(k, m) = 2.0 * std::cos(m * warped);
    weights(k) = (k == 0 || k == bins - 1) ? 1.0 : 2.0;
  }
  const Eigen::MatrixXd wd = weights.asDiagonal() * design;
  const Eigen::MatrixXd gram = design.transpose() * wd;
  impl_->projector = gram.ldlt().solve(wd.transpose());
}

MgcAnalyzer::~MgcAnalyzer() = default;
MgcAnalyzer::MgcAnalyzer(MgcAnalyzer&&) noexcept = default;
MgcAnalyzer& MgcAnalyzer::operator=(MgcAnalyzer&&) noexcept = default;

int MgcAnalyzer::frame_len() const { return impl_->frame_len; }
const MgcConfig& MgcAnalyzer::config() const { return impl_->cfg; }

std::vector<double> MgcAnalyzer::analyze_frame(std::span<const double> frame,
                                               bool* used_fallback) {
  const auto& cfg = impl_->cfg;
  const int bins = cfg.fft_len / 2 + 1;
  if (used_fallback) *used_fallback = false;

  std::vector<double> windowed(impl_->frame_len, 0.0);
  const std::size_t m = std::min<std::size_t>(frame.size(), windowed.size());
  for (std::size_t i = 0; i < m; ++i)
    windowed[i] = frame[i] * impl_->window[i];

  const auto spec = dsp::rfft(windowed, cfg.fft_len);
  Eigen::VectorXd amp(bins);
  for (int k = 0; k < bins; ++k)
    amp(k) = std::max(kAmplitudeFloor, std::abs(spec[k]));

  // The generalized-log fit is linear in the unnormalized parameters
  // b: s_gamma(|H|) = b0 + 2 sum b_m cos(m w~). The gain-normalized
  // coefficients follow as c0 = log(1+gamma b0)/gamma, c_m = b_m/(1+gamma b0),
  // which is exactly scale-covariant. If the gain term degenerates the
  // frame falls back to the gamma = 0 (plain cepstral) solution.
  Eigen::VectorXd target(bins);
  std::vector<double> out(cfg.order + 1);
  if (cfg.gamma != 0.0) {
    for (int k = 0; k < bins; ++k)
      target(k) = generalized_log(amp(k), cfg.gamma);
    const Eigen::VectorXd b = impl_->projector * target;
    const double base = 1.0 + cfg.gamma * b(0);
    if (base > 1e-12 && std::isfinite(base)) {
      out[0] = std::log(base) / cfg.gamma;
      for (int i = 1; i <= cfg.order; ++i) out[i] = b(i) / base;
      return out;
    }
    // fall through to the log-domain solution
  }
  for (int k = 0; k < bins; ++k) target(k) = std::log(amp(k));
  const Eigen::VectorXd c = impl_->projector * target;
  for (int i = 0; i <= cfg.order; ++i) out[i] = c(i);
  if (used_fallback && cfg.gamma != 0.0) *used_fallback = true;
  return out;
}

MgcTrack MgcAnalyzer::analyze(const Waveform& w,
                              std::size_t* fallback_count) {
  const auto& cfg = impl_->cfg;
  const FrameGrid grid = frame_grid(w, cfg.window_ms);

  MgcTrack track;
  track.n_frames = grid.n_frames;
  track.order = cfg.order;
  track.alpha = cfg.alpha;
  track.gamma = cfg.gamma;
  track.hop = grid.hop;
  track.coeffs.resize(grid.n_frames * track.width());

  std::size_t fallbacks = 0;
  for (std::size_t t = 0; t < grid.n_frames; ++t) {
    auto frame = extract_frame(w.samples, static_cast<long>(t) * grid.hop,
                               impl_->frame_len);
    bool fell_back = false;
    const auto coeffs = analyze_frame(frame, &fell_back);
    if (fell_back) ++fallbacks;
    std::copy(coeffs.begin(), coeffs.end(),
              track.coeffs.begin() + t * track.width());
  }
  if (fallback_count) *fallback_count = fallbacks;
  return track;
}

MgcTrack mgc_analyze(const Waveform& w, const MgcConfig& cfg,
                     std::size_t* fallback_count) {
  MgcAnalyzer analyzer(w.sample_rate, cfg);
  return analyzer.analyze(w, fallback_count);
}

MgcSpectrumTable::MgcSpectrumTable(int order, int fft_len, double alpha,
                                   double gamma)
    : order_(order), fft_len_(fft_len), gamma_(gamma) {
  if (!dsp::is_pow2(fft_len) || fft_len < 256)
    throw InvalidArgument("mgc_to_spectrum: fft_len must be a power of two >= 256");
  const int bins = fft_len / 2 + 1;
  cos_table_.resize(static_cast<std::size_t>(bins) * order);
  for (int k = 0; k < bins; ++k) {
    const double warped = warp_frequency(kPi * k / (bins - 1), alpha);
    for (int m = 1; m <= order; ++m)
      cos_table_[static_cast<std::size_t>(k) * order + m - 1] =
          2.0 * std::cos(m * warped);
  }
}

std::vector<double> MgcSpectrumTable::evaluate(
    std::span<const double> coeffs) const {
  if (static_cast<int>(coeffs.size()) != order_ + 1)
    throw InvalidArgument("mgc_to_spectrum: coefficient count mismatch");
  const int bins = fft_len_ / 2 + 1;
  const double gain = std::exp(coeffs[0]);
  std::vector<double> amp(bins);
  for (int k = 0; k < bins; ++k) {
    double q = 0.0;
    const double* row = &cos_table_[static_cast<std::size_t>(k) * order_];
    for (int m = 1; m <= order_; ++m) q += row[m - 1] * coeffs[m];
    double v;
    if (gamma_ == 0.0) {
      v = std::exp(q);
    } else {
      const double base = std::max(1e-8, 1.0 + gamma_ * q);
      v = std::pow(base, 1.0 / gamma_);
    }
    amp[k] = gain * v;
  }
  return amp;
}

std::vector<double> mgc_to_spectrum(std::span<const double> coeffs,
                                    int fft_len, double alpha, double gamma) {
  MgcSpectrumTable table(static_cast<int>(coeffs.size()) - 1, fft_len, alpha,
                         gamma);
  return table.evaluate(coeffs);
}

}  // namespace cvoc
