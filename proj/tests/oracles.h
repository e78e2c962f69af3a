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


#ifndef WPE_TESTS_ORACLES_H_
#define WPE_TESTS_ORACLES_H_

#include <cmath>
#include <functional>

namespace wpe::testing {

// Adaptive Simpson, written independently of the library's quadratures.
inline double SimpsonStep(const std::function<double(double)>& f, double a,
                          double b, double fa, double fm, double fb,
                          double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double diff = left + right - whole;
  if (depth <= 0 || std::abs(diff) <= 15.0 * tol) {
    return left + right + diff / 15.0;
  }
  return SimpsonStep(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         SimpsonStep(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double Simpson(const std::function<double(double)>& f, double a,
                      double b, double tol = 1e-13, int depth = 50) {
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return SimpsonStep(f, a, b, fa, fm, fb, whole, tol, depth);
}

// int_lo^hi |x|^a dx for a > -1 by Simpson after x = u^k on each side of 0,
// which makes the integrand k u^{k(a+1)-1} bounded.
inline double PowerIntegral(double a, double lo, double hi) {
  double k = std::ceil(1.0 / (a + 1.0)) + 1.0;
  auto side = [&](double B) {  // int_0^B x^a dx
    if (B <= 0.0) return 0.0;
    return Simpson(
        [&](double u) { return k * std::pow(u, k * (a + 1.0) - 1.0); }, 0.0,
        std::pow(B, 1.0 / k));
  };
  if (lo >= 0.0) return side(hi) - side(lo);
  if (hi <= 0.0) return side(-lo) - side(-hi);
  return side(-lo) + side(hi);
}

}  // namespace wpe::testing

#endif  // WPE_TESTS_ORACLES_H_
