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

#ifndef WPE_WEIGHTS_H_
#define WPE_WEIGHTS_H_

#include <memory>
#include <string>
#include <vector>

#include "wpe/error.h"

namespace wpe {

// A weight on the real line. Power weights |x|^a need a > -1 so that they
// are locally integrable. Sampled weights interpolate linearly between
// samples and are undefined outside their grid.
class Weight {
 public:
  enum class Kind { kLebesgue, kPower, kShiftedPower, kSampled };

  static Weight Lebesgue();
  static Weight Power(double a);
  static Weight ShiftedPower(double a);
  static Weight Sampled(double x0, double h, std::vector<double> values);
  // Two columns x,w with uniformly spaced, strictly increasing x.
  static Weight FromCsv(const std::string& path);

  Kind kind() const { return kind_; }
  double exponent() const { return a_; }
  std::string descriptor() const;
  Interval domain() const;

  double operator()(double x) const;
  // Integral of w over (a, b).
  double Integral(double a, double b) const;
  // Integral of w^r over (a, b); +infinity when it diverges.
  double PowerIntegral(double a, double b, double r) const;

 private:
  struct SampledData {
    double x0 = 0.0;
    double h = 1.0;
    std::vector<double> values;
    std::vector<double> prefix;  // exact integrals of the interpolant
  };

  Kind kind_ = Kind::kLebesgue;
  double a_ = 0.0;
  std::shared_ptr<const SampledData> sampled_;

  double SampledIntegralTo(double x) const;
};

double weight_integral(const Weight& w, double a, double b);

struct ApEstimate {
  double p = 2.0;
  double value = 1.0;
  Interval window;
  int resolution = 1;
};

// Max of (avg w)(avg w^{-1/(p-1)})^{p-1} over the dyadic subintervals of
// `window` at levels 0..resolution and the unions of adjacent pairs.
ApEstimate ap_constant(const Weight& w, double p, Interval window,
                       int resolution);

// Max of w(2I)/w(I) over the same test family; 2I is the concentric double.
double doubling_constant(const Weight& w, Interval window, int resolution);

double chi_localizer(Interval I, double x);

}  // namespace wpe

#endif  // WPE_WEIGHTS_H_
