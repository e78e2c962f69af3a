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


#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "oracles.h"
#include "wpe/weights.h"

using wpe::ErrorCode;
using wpe::Interval;
using wpe::Weight;

namespace {

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const wpe::Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::kConfig;
}

// Brute-force A_p over the same family: every dyadic subinterval and every
// union of two neighbours, averages by Simpson.
double BruteAp(double a, double p, Interval W, int res) {
  double best = 0.0;
  for (int lev = 0; lev <= res; ++lev) {
    int n = 1 << lev;
    double h = W.length() / n;
    for (int i = 0; i < n; ++i) {
      for (int span : {1, 2}) {
        if (i + span > n) continue;
        double lo = W.lo + h * i, hi = lo + h * span;
        auto avg = [&](double e) {
          return wpe::testing::PowerIntegral(e, lo, hi) / (hi - lo);
        };
        best = std::max(best, avg(a) * std::pow(avg(-a / (p - 1.0)), p - 1.0));
      }
    }
  }
  return best;
}

}  // namespace

TEST_SUITE("weights") {
  TEST_CASE("integrals of the built-in kinds") {
    CHECK(Weight::Lebesgue().Integral(-2, 2) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(Weight::Power(1.0).Integral(-1, 1) == doctest::Approx(1.0).epsilon(1e-15));
    double oracle = wpe::testing::Simpson(
        [](double x) { return std::sqrt(1.0 + std::abs(x)); }, 2.0, 4.0);
    CHECK(Weight::ShiftedPower(0.5).Integral(2, 4) ==
          doctest::Approx(oracle).epsilon(1e-9));
    double across = wpe::testing::PowerIntegral(-0.5, -1.0, 3.0);
    CHECK(Weight::Power(-0.5).Integral(-1, 3) == doctest::Approx(across).epsilon(1e-9));
  }

  TEST_CASE("integrals are additive") {
    for (const Weight& w : {Weight::Power(0.7), Weight::ShiftedPower(-0.4),
                            Weight::Power(-0.3)}) {
      for (double b : {-1.5, 0.0, 0.25, 2.0}) {
        double lhs = w.Integral(-3, b) + w.Integral(b, 5);
        CHECK(lhs == doctest::Approx(w.Integral(-3, 5)).epsilon(1e-12));
      }
    }
    std::vector<double> v;
    for (int j = 0; j <= 40; ++j) v.push_back(1.0 + std::sin(0.3 * j) * 0.5);
    Weight s = Weight::Sampled(-2.0, 0.1, v);
    CHECK(s.Integral(-1.93, 0.3) + s.Integral(0.3, 1.71) ==
          doctest::Approx(s.Integral(-1.93, 1.71)).epsilon(1e-9));
  }

  TEST_CASE("sampled weights integrate their linear interpolant") {
    // Interpolant of 1, 3, 2 at 0, 1, 2: pieces integrate to 2 and 2.5.
    Weight s = Weight::Sampled(0.0, 1.0, {1.0, 3.0, 2.0});
    CHECK(s.Integral(0, 2) == doctest::Approx(4.5));
    CHECK(s.Integral(0.5, 1.5) == doctest::Approx(0.5 * (2.0 + 3.0) * 0.5 + 0.5 * (3.0 + 2.5) * 0.5));
    CHECK(CodeOf([&] { s.Integral(-1, 1); }) == ErrorCode::kOutOfDomain);
  }

  TEST_CASE("weights from csv") {
    std::string path = "/tmp/wpe_weight_test.csv";
    {
      std::ofstream f(path);
      f << "x,w\n0,5\n0.5,5\n1,5\n1.5,5\n2,5\n";
    }
    Weight s = Weight::FromCsv(path);
    CHECK(s.Integral(0.25, 1.75) == doctest::Approx(7.5));
    CHECK(wpe::doubling_constant(s, {0.0, 2.0}, 3) <= 2.0 + 1e-12);
    std::remove(path.c_str());
  }

  TEST_CASE("interval errors") {
    CHECK(CodeOf([] { Weight::Lebesgue().Integral(1, 1); }) == ErrorCode::kInvalidInterval);
    CHECK(CodeOf([] { Weight::Lebesgue().Integral(2, 1); }) == ErrorCode::kInvalidInterval);
    CHECK(CodeOf([] { Weight::Power(-1.0); }) != ErrorCode::kConfig);
  }

  TEST_CASE("A_p constant") {
    for (double p : {1.5, 2.0, 3.0}) {
      CHECK(wpe::ap_constant(Weight::Lebesgue(), p, {-4, 4}, 5).value ==
            doctest::Approx(1.0).epsilon(1e-15));
    }
    double a05 = wpe::ap_constant(Weight::Power(0.5), 2.0, {-4, 4}, 6).value;
    double a09 = wpe::ap_constant(Weight::Power(0.9), 2.0, {-4, 4}, 6).value;
    CHECK(a05 >= 1.0);
    CHECK(a09 > a05);
    CHECK(a05 == doctest::Approx(BruteAp(0.5, 2.0, {-4, 4}, 6)).epsilon(1e-6));
    CHECK(CodeOf([] { wpe::ap_constant(Weight::Lebesgue(), 1.0, {0, 1}, 2); }) ==
          ErrorCode::kInvalidExponent);
  }

  TEST_CASE("A_p estimate diverges for a >= p - 1") {
    bool exceeded = false;
    for (int res = 1; res < 12 && !exceeded; ++res) {
      exceeded = wpe::ap_constant(Weight::Power(1.5), 2.0, {-4, 4}, res).value > 1e3;
    }
    CHECK(exceeded);
  }

  TEST_CASE("A_p estimate is monotone in the resolution") {
    double prev = 0.0;
    for (int res = 1; res <= 8; ++res) {
      double v = wpe::ap_constant(Weight::ShiftedPower(0.8), 3.0, {-3, 5}, res).value;
      CHECK(v >= prev);
      prev = v;
    }
  }

  TEST_CASE("doubling constant") {
    CHECK(wpe::doubling_constant(Weight::Lebesgue(), {-3, 3}, 5) ==
          doctest::Approx(2.0).epsilon(1e-15));
    // w(-2r, 2r) / w(-r, r) = 4 for |x|, and [-1, 1] is a test interval.
    Weight w = Weight::Power(1.0);
    CHECK(w.Integral(-2, 2) / w.Integral(-1, 1) == doctest::Approx(4.0));
    CHECK(wpe::doubling_constant(w, {-2, 2}, 4) >= 4.0 - 1e-12);
    CHECK(wpe::doubling_constant(Weight::Sampled(-10, 0.5, std::vector<double>(41, 5.0)),
                                 {-2, 2}, 4) == doctest::Approx(2.0));
    CHECK(CodeOf([] {
            wpe::doubling_constant(Weight::Sampled(-10, 1, std::vector<double>(21, 0.0)),
                                   {-2, 2}, 3);
          }) == ErrorCode::kDegenerateWeight);
  }

  TEST_CASE("localizer") {
    CHECK(wpe::chi_localizer({-1, 1}, 0) == 1.0);
    CHECK(wpe::chi_localizer({-1, 1}, 2) == doctest::Approx(0.5));
    CHECK(wpe::chi_localizer({0, 1}, 3) == doctest::Approx(4.0 / 29.0));
    double prev = 2.0;
    for (double d = 0.0; d < 10.0; d += 0.37) {
      double v = wpe::chi_localizer({2, 5}, 3.5 + d);
      CHECK(v == doctest::Approx(wpe::chi_localizer({2, 5}, 3.5 - d)));
      CHECK(v < prev);
      prev = v;
    }
  }
}
