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

#ifndef CVOC_DSP_HPP_
#define CVOC_DSP_HPP_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace cvoc::dsp {

bool is_pow2(std::size_t n);
std::size_t next_pow2(std::size_t n);

// In-place iterative radix-2 FFT. Size must be a power of two.
// The inverse transform includes the 1/N scaling.
void fft(std::vector<std::complex<double>>& a, bool inverse);

// Forward FFT of a real signal, zero-padded or truncated to fft_len.
// Returns fft_len/2 + 1 bins.
std::vector<std::complex<double>> rfft(std::span<const double> x,
                                       std::size_t fft_len);

// Inverse of rfft: reconstructs fft_len real samples from fft_len/2+1 bins.
std::vector<double> irfft(std::span<const std::complex<double>> bins,
                          std::size_t fft_len);

// Periodic Hann window (sums to a constant under 50% overlap-add).
std::vector<double> hann_periodic(std::size_t n);
// Symmetric Hann window (zero at both endpoints).
std::vector<double> hann_symmetric(std::size_t n);

double bessel_i0(double x);
std::vector<double> kaiser(std::size_t n, double beta);

// Levinson-Durbin solution of the autocorrelation normal equations.
// Returns order+1 coefficients {1, -a1, ..., -ap} of the inverse filter
// A(z) = 1 - sum a_i z^-i, i.e. e[n] = sum_k coeff[k] * x[n-k].
struct LpcResult {
  std::vector<double> inverse_filter;  // order+1 taps, first tap 1.0
  double error_power = 0.0;
};
LpcResult levinson(std::span<const double> autocorr, int order);

// Autocorrelation-method LPC of one windowed frame.
LpcResult lpc_frame(std::span<const double> frame, int order);

std::vector<double> median_filter(const std::vector<double>& x, int width);
std::vector<double> moving_average(const std::vector<double>& x, int width);

// Refines the position of an extremum at integer index i using the
// parabola through (i-1, i, i+1). Returns the fractional offset in
// [-0.5, 0.5] to add to i.
double parabolic_offset(double ym1, double y0, double yp1);

// Kaiser-windowed sinc low-pass prototype with the given normalized
// cutoff (1.0 = Nyquist). Odd length, unit DC gain, linear phase.
std::vector<double> lowpass_kernel(std::size_t taps, double cutoff_norm,
                                   double beta);

}  // namespace cvoc::dsp

#endif  // CVOC_DSP_HPP_
