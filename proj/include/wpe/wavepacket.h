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


#ifndef WPE_WAVEPACKET_H_
#define WPE_WAVEPACKET_H_

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include "wpe/error.h"
#include "wpe/signal.h"
#include "wpe/tents.h"

namespace wpe {

// phi^(xi) = exp(1 - 1/(1 - (xi/delta)^2)) on (-delta, delta), zero
// elsewhere, so phi^(0) = 1. phi is real and even; it is tabulated on
// [0, time_extent] from the cosine integral and interpolated with cubic
// Lagrange polynomials.
class MotherWavelet {
 public:
  static std::shared_ptr<const MotherWavelet> Build(double delta,
                                                    double time_extent,
                                                    std::size_t n_samples);
  // delta = 2^-8 b, extent 2^10 / delta, spacing 1; cached per b.
  static std::shared_ptr<const MotherWavelet> Standard(double b = 0.5);

  double delta() const { return delta_; }
  double time_extent() const { return extent_; }
  double h() const { return h_; }
  double normalization() const { return 1.0; }
  // Radius beyond which |phi| is treated as negligible by the spectral
  // transform; half the tabulated extent.
  double tail_radius() const { return 0.5 * extent_; }

  double Profile(double xi) const;     // phi^
  double operator()(double x) const;   // phi, zero beyond the extent
  const std::vector<double>& samples() const { return samples_; }

  double L2NormSquared() const { return l2_squared_; }
  double L1Norm() const;
  // max over samples of |phi(x)| (1 + |x|)^N.
  double DecayConstant(int N) const;

 private:
  MotherWavelet() = default;

  double delta_ = 0.0;
  double extent_ = 0.0;
  double h_ = 0.0;
  double l2_squared_ = 0.0;
  std::vector<double> samples_;  // phi(k h), k = 0 .. n + 2
};

using WaveletPtr = std::shared_ptr<const MotherWavelet>;

// phi_{y,eta,t}(x) = e^{-i eta (y - x)} (1/t) phi((y - x)/t).
Complex eval_wave_packet(const MotherWavelet& phi, const Point3& p, double x);

// <f, phi_p> by the trapezoid rule on f's grid. Requires t >= max(t_min, 4h).
Complex transform(const SampledSignal& f, const MotherWavelet& phi,
                  const Point3& p, double t_min = 0.0);

// Frequency-side evaluation of the same transform:
//   P f(y, eta, t) = (1/2pi) int f^(xi) phi^(t (xi - eta)) e^{i xi y} dxi,
// discretised with a node spacing fine enough that the periodic images of
// y -> P f(y, eta, t) stay outside the evaluation range. f^ is the exact
// spectrum when f carries an analytic descriptor and the trapezoid DTFT of
// the samples otherwise; both agree with `transform` up to sampling error.
struct EngineOptions {
  double safety = 1.25;
  bool use_analytic = true;
};

class TransformEngine {
 public:
  TransformEngine(WaveletPtr phi, SampledSignal f, EngineOptions options = {});

  Complex operator()(const Point3& p) const;
  // out[i] = P f(ys[i], eta, t).
  void Row(double eta, double t, const double* ys, std::size_t n,
           Complex* out) const;
  // True when f^ vanishes on (eta - delta/t, eta + delta/t), so that the
  // transform is exactly zero.
  bool Vanishes(double eta, double t) const;

  const MotherWavelet& phi() const { return *phi_; }
  const WaveletPtr& phi_ptr() const { return phi_; }
  const SampledSignal& signal() const { return f_; }
  double t_floor() const { return 4.0 * f_.h(); }

 private:
  WaveletPtr phi_;
  SampledSignal f_;
  EngineOptions options_;
  bool analytic_ = false;
  bool zero_ = false;
  std::vector<Interval> bands_;  // merged, sorted; empty means unbounded
  double center_ = 0.0;
  double radius_ = 0.0;

  Complex Spectrum(double xi) const;
};

struct Grid3 {
  std::vector<double> y, eta, t;
};

// Values ordered t-major, then eta, then y.
std::vector<Complex> transform_batch(const TransformEngine& engine,
                                     const Grid3& grid);

// <phi_p1, phi_p2>, computed on the frequency side; exactly zero when the
// two frequency supports are disjoint. `refine` scales the node density.
Complex packet_inner_product(const MotherWavelet& phi, const Point3& p1,
                             const Point3& p2, double refine = 1.0);

struct DecayReport {
  double max_ratio = 0.0;
  std::size_t worst_pair = 0;
  std::vector<double> ratios;
};

// max over pairs of |<phi_p, phi_p'>| t' [1 + ((y - y')/t')^2]^N with
// t' >= t; pairs given in the other order are swapped.
DecayReport check_decay_bound(const MotherWavelet& phi,
                              const std::vector<std::pair<Point3, Point3>>& pairs,
                              int N, double refine = 1.0);

}  // namespace wpe

#endif  // WPE_WAVEPACKET_H_
