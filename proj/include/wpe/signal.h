// Copyright 2026 The wpe Authors
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


#ifndef WPE_SIGNAL_H_
#define WPE_SIGNAL_H_

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "wpe/error.h"
#include "wpe/weights.h"

namespace wpe {

using Complex = std::complex<double>;

// c exp(i eta x) exp(-A (x - x0)^2) with A = 1/(2 sigma^2) - i chirp.
struct GaussianAtom {
  Complex c = 1.0;
  double x0 = 0.0;
  double sigma = 1.0;
  double eta = 0.0;
  double chirp = 0.0;

  Complex A() const { return {0.5 / (sigma * sigma), -chirp}; }
};

// Finite sums of Gaussian atoms. The spectrum is exact inside each atom's
// band and set to zero outside it, where the Gaussian factor is below
// e^-80; every signal of this class is therefore band-limited.
class AnalyticSignal {
 public:
  AnalyticSignal() = default;
  explicit AnalyticSignal(std::vector<GaussianAtom> atoms);

  static AnalyticSignal Gaussian(double sigma, double center = 0.0);
  static AnalyticSignal ModulatedGaussian(double sigma, double center,
                                          double eta0);
  static AnalyticSignal Chirp(double sigma, double center, double eta0,
                              double rate);
  // `count` atoms with centres in [-spread, spread], frequencies in `band`
  // and complex normal coefficients.
  static AnalyticSignal BandLimitedNoise(std::uint64_t seed, int count,
                                         double sigma, double spread,
                                         Interval band);

  const std::vector<GaussianAtom>& atoms() const { return atoms_; }
  bool empty() const { return atoms_.empty(); }

  Complex Value(double x) const;
  // f^(xi) = int exp(-i xi x) f(x) dx.
  Complex Spectrum(double xi) const;
  // Frequency interval outside of which Spectrum is exactly zero.
  Interval Band() const;
  // Bands of the individual atoms.
  std::vector<Interval> AtomBands() const;
  // Interval outside of which |f| < e^-40 max|c|.
  Interval Support() const;
  // Exact squared L^2 norm.
  double L2NormSquared() const;

  AnalyticSignal Translated(double a) const;  // f(x - a)
  AnalyticSignal Modulated(double eta0) const;  // e^{i eta0 x} f(x)
  AnalyticSignal Dilated(double r) const;  // f(x / r)
  AnalyticSignal Scaled(Complex s) const;
  AnalyticSignal Plus(const AnalyticSignal& g) const;

 private:
  std::vector<GaussianAtom> atoms_;
};

// Samples f_j = f(x0 + j h), j = 0..n-1, with trapezoid weights.
class SampledSignal {
 public:
  SampledSignal() = default;
  SampledSignal(double x0, double h, std::vector<Complex> values);

  static SampledSignal FromAnalytic(std::shared_ptr<const AnalyticSignal> f,
                                    double x0, double h, std::size_t n);
  // Samples on [-L, L] with spacing h (L a multiple of h).
  static SampledSignal FromAnalytic(std::shared_ptr<const AnalyticSignal> f,
                                    double L, double h);
  // Three columns x,re,im with uniformly spaced x.
  static SampledSignal FromCsv(const std::string& path);
  void WriteCsv(const std::string& path) const;

  double x0() const { return x0_; }
  double h() const { return h_; }
  std::size_t size() const { return values_.size(); }
  double x(std::size_t j) const { return x0_ + h_ * static_cast<double>(j); }
  double end() const { return x(values_.empty() ? 0 : values_.size() - 1); }
  const std::vector<Complex>& values() const { return values_; }
  double weight(std::size_t j) const;  // trapezoid weight
  const std::shared_ptr<const AnalyticSignal>& analytic() const {
    return analytic_;
  }

  bool IsZero() const;
  double L2Norm() const;
  // (sum |f_j|^q w(cell_j))^(1/q), cells of width h centred at x_j and
  // clipped to the grid.
  double LqNorm(double q, const Weight& w) const;
  // Discrete-time Fourier transform sum_j weight_j f_j e^{-i xi x_j}.
  Complex Dtft(double xi) const;

  // Covariant images. Translation moves the grid with the signal, dilation
  // rescales it; the analytic descriptor follows along.
  SampledSignal Translated(double a) const;
  SampledSignal Modulated(double eta0) const;
  SampledSignal Dilated(double r) const;
  SampledSignal Scaled(Complex s) const;

 private:
  double x0_ = 0.0;
  double h_ = 1.0;
  std::vector<Complex> values_;
  std::shared_ptr<const AnalyticSignal> analytic_;
};

}  // namespace wpe

#endif  // WPE_SIGNAL_H_
