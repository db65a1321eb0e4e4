// include/sfvoc/fft.h

// Copyright 2026  sfvoc authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SFVOC_FFT_H_
#define SFVOC_FFT_H_

#include <complex>
#include <span>
#include <vector>

namespace sfvoc {

using Complex = std::complex<double>;

// Unnormalized complex DFT of a fixed size.  Power-of-two sizes use an
// iterative radix-2 transform, other sizes fall back to a direct O(n^2) sum.
class Fft {
 public:
  explicit Fft(int n);

  int size() const { return n_; }

  // In place; `inverse` uses exp(+i...) and does not scale.
  void Transform(std::span<Complex> data, bool inverse) const;

  // One-sided spectrum of a real signal: out has n/2 + 1 entries.
  void Rfft(std::span<const double> in, std::span<Complex> out) const;

  // Inverse of Rfft for even n, scaled by 1/n.  Imaginary parts of the DC and
  // Nyquist bins are ignored.
  void Irfft(std::span<const Complex> in, std::span<double> out) const;

 private:
  int n_;
  bool pow2_;
  std::vector<Complex> twiddles_;  // exp(-2 pi i k / n), k < n/2 (or n)
  std::vector<int> bitrev_;
  mutable std::vector<Complex> scratch_;
};

// Returns a plan shared by the current thread.
const Fft &GetFft(int n);

}  // namespace sfvoc

#endif  // SFVOC_FFT_H_
