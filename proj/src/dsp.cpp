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

#include "cvoc/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cvoc/common.hpp"

namespace cvoc::dsp {

namespace {
constexpr double kPi = std::numbers::pi;
}

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fft(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  if (!is_pow2(n)) throw InvalidArgument("fft: size must be a power of two");
  if (n < 2) return;

  // Bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = 2.0 * kPi / static_cast<double>(len) *
                       (inverse ? 1.0 : -1.0);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse) {
    const double inv_n = 1.0 / static_cast<double>(n);
    for (auto& z : a) z *= inv_n;
  }
}

std::vector<std::complex<double>> rfft(std::span<const double> x,
                                       std::size_t fft_len) {
  if (!is_pow2(fft_len)) throw InvalidArgument("rfft: power-of-two length");
  std::vector<std::complex<double>> buf(fft_len);
  const std::size_t m = std::min(x.size(), fft_len);
  for (std::size_t i = 0; i < m; ++i) buf[i] = x[i];
  fft(buf, false);
  buf.resize(fft_len / 2 + 1);
  return buf;
}

std::vector<double> irfft(std::span<const std::complex<double>> bins,
                          std::size_t fft_len) {
  if (!is_pow2(fft_len)) throw InvalidArgument("irfft: power-of-two length");
  if (bins.size() != fft_len / 2 + 1)
    throw InvalidArgument("irfft: bin count does not match fft length");
  std::vector<std::complex<double>> buf(fft_len);
  for (std::size_t i = 0; i < bins.size(); ++i) buf[i] = bins[i];
  for (std::size_t i = 1; i + 1 < bins.size(); ++i)
    buf[fft_len - i] = std::conj(bins[i]);
  fft(buf, true);
  std::vector<double> out(fft_len);
  for (std::size_t i = 0; i < fft_len; ++i) out[i] = buf[i].real();
  return out;
}

std::vector<double> hann_periodic(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(i) /
                                static_cast<double>(n));
  return w;
}

std::vector<double> hann_symmetric(std::size_t n) {
  std::vector<double> w(n);
  if (n == 1) {
    w[0] = 1.0;
    return w;
  }
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(i) /
                                static_cast<double>(n - 1));
  return w;
}

double bessel_i0(double x) {
  // Power series; converges quickly for the beta range used here.
  double sum = 1.0;
  double term = 1.0;
  const double half_x = x / 2.0;
  for (int k = 1; k < 64; ++k) {
    term *= (half_x / k) * (half_x / k);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

std::vector<double> kaiser(std::size_t n, double beta) {
  std::vector<double> w(n);
  if (n == 1) {
    w[0] = 1.0;
    return w;
  }
  const double denom = bessel_i0(beta);
  const double half = static_cast<double>(n - 1) / 2.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (static_cast<double>(i) - half) / half;
    w[i] = bessel_i0(beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / denom;
  }
  return w;
}

LpcResult levinson(std::span<const double> autocorr, int order) {
  if (static_cast<int>(autocorr.size()) < order + 1)
    throw InvalidArgument("levinson: need order+1 autocorrelation lags");
  LpcResult res;
  res.inverse_filter.assign(order + 1, 0.0);
  res.inverse_filter[0] = 1.0;
  double err = autocorr[0];
  if (err <= 0.0) {
    // Digital silence: identity filter.
    res.error_power = 0.0;
    return res;
  }
  err += 1e-9 * autocorr[0];
  std::vector<double> a(order + 1, 0.0);  // a[i] holds -a_i convention inline
  a[0] = 1.0;
  std::vector<double> tmp(order + 1, 0.0);
  for (int i = 1; i <= order; ++i) {
    double acc = autocorr[i];
    for (int j = 1; j < i; ++j) acc += a[j] * autocorr[i - j];
    const double k = -acc / err;
    tmp = a;
    for (int j = 1; j < i; ++j) a[j] = tmp[j] + k * tmp[i - j];
    a[i] = k;
    err *= (1.0 - k * k);
    if (err <= 0.0) {
      err = 1e-12;
      break;
    }
  }
  res.inverse_filter = a;
  res.error_power = err;
  return res;
}

LpcResult lpc_frame(std::span<const double> frame, int order) {
  const std::size_t n = frame.size();
  std::vector<double> r(order + 1, 0.0);
  for (int lag = 0; lag <= order; ++lag) {
    double acc = 0.0;
    for (std::size_t i = lag; i < n; ++i) acc += frame[i] * frame[i - lag];
    r[lag] = acc;
  }
  return levinson(r, order);
}

std::vector<double> median_filter(const std::vector<double>& x, int width) {
  if (width <= 1 || x.empty()) return x;
  const int half = width / 2;
  const int n = static_cast<int>(x.size());
  std::vector<double> out(x.size());
  std::vector<double> win;
  win.reserve(width);
  for (int i = 0; i < n; ++i) {
    win.clear();
    for (int j = i - half; j <= i + half; ++j)
      win.push_back(x[std::clamp(j, 0, n - 1)]);
    std::nth_element(win.begin(), win.begin() + win.size() / 2, win.end());
    out[i] = win[win.size() / 2];
  }
  return out;
}

std::vector<double> moving_average(const std::vector<double>& x, int width) {
  if (width <= 1 || x.empty()) return x;
  const int half = width / 2;
  const int n = static_cast<int>(x.size());
  std::vector<double> out(x.size());
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = i - half; j <= i + half; ++j)
      acc += x[std::clamp(j, 0, n - 1)];
    out[i] = acc / static_cast<double>(2 * half + 1);
  }
  return out;
}

double parabolic_offset(double ym1, double y0, double yp1) {
  const double denom = ym1 - 2.0 * y0 + yp1;
  if (std::abs(denom) < 1e-30) return 0.0;
  double off = 0.5 * (ym1 - yp1) / denom;
  return std::clamp(off, -0.5, 0.5);
}

std::vector<double> lowpass_kernel(std::size_t taps, double cutoff_norm,
                                   double beta) {
  if (taps % 2 == 0) ++taps;
  cutoff_norm = std::clamp(cutoff_norm, 0.0, 1.0);
  const auto win = kaiser(taps, beta);
  std::vector<double> h(taps);
  const int half = static_cast<int>(taps) / 2;
  double sum = 0.0;
  for (int i = 0; i < static_cast<int>(taps); ++i) {
    const double u = static_cast<double>(i - half);
    const double arg = kPi * cutoff_norm * u;
    const double s = (std::abs(arg) < 1e-12) ? 1.0 : std::sin(arg) / arg;
    h[i] = cutoff_norm * s * win[i];
    sum += h[i];
  }
  if (sum != 0.0)
    for (auto& v : h) v /= sum;
  return h;
}

}  // namespace cvoc::dsp
