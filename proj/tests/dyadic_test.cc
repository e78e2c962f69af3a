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


#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "wpe/dyadic.h"
#include "wpe/harness.h"
#include "wpe/selection.h"

using namespace wpe;

namespace {

// Brute-force cover: scan levels coarse to fine, shifts in order, and return
// the first dyadic interval of admissible length that contains I.
GridCover CoverOracle(Interval I) {
  long double len = static_cast<long double>(I.hi) - I.lo;
  for (int j = -80; j <= 80; ++j) {
    long double L = std::ldexp(1.0L, -j);
    if (L < 3 * len || L > 6 * len) continue;
    for (int k = 0; k < 3; ++k) {
      long double off = ((j % 2 == 0) ? 1 : -1) * k / 3.0L;
      long double m = std::floor(I.lo / L - off);
      long double lo = L * (m + off), hi = L * (m + 1 + off);
      if (lo <= I.lo && I.hi < hi) {
        GridCover c;
        c.shift_index = k;
        c.J.shift = k;
        c.J.level = j;
        c.J.m = static_cast<std::int64_t>(m);
        return c;
      }
    }
  }
  return {};
}

int Level(const SampledFunction& g) {
  return -static_cast<int>(std::lround(std::log2(std::max(g.end() - g.x0, g.h))));
}

// ((1/|Q|) int_Q |g|^p w)^{1/p}, cell by cell.
double AverageOracle(const SampledFunction& g, double p, const Weight& w, double lo,
                     double hi) {
  double s = 0.0;
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    double a = std::max(lo, g.x0 + g.h * i), b = std::min(hi, g.x0 + g.h * (i + 1));
    if (a < b) s += std::pow(std::abs(g.values[i]), p) * w.Integral(a, b);
  }
  return std::pow(s / (hi - lo), 1.0 / p);
}

double MaximalOracle(const SampledFunction& g, double p, const Weight& w, double x,
                     int depth) {
  int jc = Level(g);
  double best = 0.0;
  for (int j = jc - depth; j <= jc + depth; ++j) {
    double L = std::ldexp(1.0, -j), lo = L * std::floor(x / L);
    best = std::max(best, AverageOracle(g, p, w, lo, lo + L));
  }
  return best;
}

// Sampled infimum over c in {0, sample values, mean}.
double SharpOracle(const SampledFunction& g, double x, int depth) {
  int jc = Level(g);
  double best = 0.0;
  for (int j = jc - depth; j <= jc + depth; ++j) {
    double L = std::ldexp(1.0, -j), lo = L * std::floor(x / L), hi = lo + L;
    std::vector<double> cs = {0.0, AverageOracle(g, 1, Weight::Lebesgue(), lo, hi)};
    for (double v : g.values) cs.push_back(std::abs(v));
    double inf = INFINITY;
    for (double c : cs) {
      double s = 0.0, covered = 0.0;
      for (std::size_t i = 0; i < g.values.size(); ++i) {
        double a = std::max(lo, g.x0 + g.h * i), b = std::min(hi, g.x0 + g.h * (i + 1));
        if (a < b) {
          s += std::abs(std::abs(g.values[i]) - c) * (b - a);
          covered += b - a;
        }
      }
      s += c * (L - covered);
      inf = std::min(inf, s / L);
    }
    best = std::max(best, inf);
  }
  return best;
}

SampledFunction RandomFunction(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SampledFunction g{-0.3, 1.0 / 32, {}};
  for (int i = 0; i < n; ++i) g.values.push_back(u(rng));
  return g;
}

}  // namespace

TEST_SUITE("dyadic") {
  TEST_CASE("grids tile the line") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    for (int k = 0; k < 3; ++k) {
      DyadicGrid grid(k);
      for (int j = -6; j <= 12; ++j) {
        for (int n = 0; n < 50; ++n) {
          double x = u(rng);
          DyadicInterval Q = grid.Locate(x, j);
          CHECK(Q.Contains(x));
          CHECK(Q.length() == std::ldexp(1.0, -j));
          DyadicInterval left = Q, right = Q;
          --left.m;
          ++right.m;
          CHECK_FALSE(left.Contains(x));
          CHECK_FALSE(right.Contains(x));
          CHECK(left.hi() == Q.lo());
        }
      }
    }
    // Shifted endpoints at level j are (m + (-1)^j k/3) 2^-j.
    DyadicInterval a{1, 0, 0}, b{1, 1, 0}, c{2, 2, 1};
    CHECK(a.lo() == doctest::Approx(1.0 / 3));
    CHECK(b.lo() == doctest::Approx(-1.0 / 6));
    CHECK(c.lo() == doctest::Approx((1 + 2.0 / 3) / 4));
    CHECK(DyadicGrid(1).Locate(0.34, 0).lo() == doctest::Approx(1.0 / 3));
    // The double nearest 1/3 lies below 1/3, so it belongs to the previous cell.
    CHECK(DyadicGrid(1).Locate(1.0 / 3, 0).lo() == doctest::Approx(-2.0 / 3));
    CHECK_THROWS_AS(DyadicGrid(3), Error);
  }

  TEST_CASE("three grids cover examples") {
    GridCover c = three_grids_cover({0.9, 1.1});
    CHECK(c.shift_index == 1);
    CHECK(c.J.lo() == doctest::Approx(1.0 / 3));
    CHECK(c.J.hi() == doctest::Approx(4.0 / 3));
    GridCover d = three_grids_cover({0.0, std::ldexp(1.0, -10)});
    CHECK(d.J.length() == std::ldexp(1.0, -8));
    CHECK(d.J.ContainsClosed(0.0, std::ldexp(1.0, -10)));
  }

  TEST_CASE("three grids cover on random intervals") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> lg(-20.0, 20.0), u(-1.0, 1.0);
    for (int n = 0; n < 10000; ++n) {
      double len = std::exp2(lg(rng));
      double a = u(rng) * 8.0 * std::max(1.0, len);
      Interval I{a, a + len};
      GridCover c = three_grids_cover(I);
      REQUIRE(c.J.ContainsClosed(I.lo, I.hi));
      REQUIRE(c.J.length() >= 3 * I.length() * (1 - 1e-12));
      REQUIRE(c.J.length() <= 6 * I.length() * (1 + 1e-12));
      GridCover o = CoverOracle(I);
      REQUIRE(o.J.length() == c.J.length());
      REQUIRE(o.shift_index == c.shift_index);
      REQUIRE(o.J.m == c.J.m);
    }
    // Determinism.
    GridCover x = three_grids_cover({0.12, 0.37}), y = three_grids_cover({0.12, 0.37});
    CHECK(x.J.m == y.J.m);
    CHECK(x.shift_index == y.shift_index);
  }

  TEST_CASE("maximal function examples") {
    SampledFunction one{0.0, 1.0 / 64, std::vector<double>(64, 1.0)};
    CHECK(dyadic_maximal(one, 1, Weight::Lebesgue(), 2.0) == doctest::Approx(0.25));
    CHECK(dyadic_maximal(one, 1, Weight::Lebesgue(), 0.5) == doctest::Approx(1.0));
    CHECK(dyadic_maximal(one, 3, Weight::Lebesgue(), 0.25) == doctest::Approx(1.0));
    // p = 2 at x = 2 picks [0,4): (1/4)^{1/2}.
    CHECK(dyadic_maximal(one, 2, Weight::Lebesgue(), 2.0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(dyadic_maximal(one, 0.5, Weight::Lebesgue(), 0.0), Error);
    CHECK_THROWS_AS(dyadic_maximal(one, 1, Weight::Lebesgue(), 0.0, 0), Error);
  }

  TEST_CASE("maximal function against brute force") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ux(-3.0, 3.0);
    SampledFunction g = RandomFunction(rng, 48);
    for (const Weight& w : {Weight::Lebesgue(), Weight::ShiftedPower(0.5), Weight::Power(-0.5)}) {
      for (double p : {1.0, 1.5, 3.0}) {
        DyadicMaximal M(g, p, w, 12);
        for (int n = 0; n < 40; ++n) {
          double x = ux(rng);
          double ref = MaximalOracle(g, p, w, x, 12);
          CHECK(M(x) == doctest::Approx(ref).epsilon(1e-10));
          CHECK(dyadic_maximal(g, p, w, x, 12) == doctest::Approx(ref).epsilon(1e-10));
        }
      }
    }
  }

  TEST_CASE("maximal function monotone in depth and p") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> ux(-2.0, 2.0);
    SampledFunction g = RandomFunction(rng, 40);
    Weight leb = Weight::Lebesgue();
    DyadicMaximal d4(g, 2, leb, 4), d8(g, 2, leb, 8), p1(g, 1, leb, 8), p3(g, 3, leb, 8);
    for (int n = 0; n < 200; ++n) {
      double x = ux(rng);
      CHECK(d4(x) <= d8(x) + 1e-12);
      CHECK(p1(x) <= d8(x) + 1e-12);
      CHECK(d8(x) <= p3(x) + 1e-12);
    }
  }

  TEST_CASE("sharp maximal function") {
    SampledFunction one{0.0, 1.0 / 64, std::vector<double>(64, 1.0)};
    CHECK(sharp_maximal(one, 0.5) == doctest::Approx(0.5));
    SampledFunction five = one;
    for (double& v : five.values) v = 5.0;
    CHECK(sharp_maximal(five, 0.5) == doctest::Approx(2.5));
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> ux(-2.0, 2.0);
    SampledFunction g = RandomFunction(rng, 32);
    DyadicMaximal M(g, 1, Weight::Lebesgue(), 10);
    for (int n = 0; n < 60; ++n) {
      double x = ux(rng);
      double s = sharp_maximal(g, x, 10);
      CHECK(s <= 2 * M(x) + 1e-12);
      CHECK(s == doctest::Approx(SharpOracle(g, x, 10)).epsilon(1e-10));
    }
    CHECK_THROWS_AS(sharp_maximal(g, 0.0, 0), Error);
  }

  TEST_CASE("counting function") {
    CountingFunction N({{0, 1}, {0, 1}, {0.5, 1.5}});
    CHECK(N(0.75) == 3);
    CHECK(counting_function(N, 1.25) == 1);
    CHECK(N(2.0) == 0);
    CHECK(N.Restricted({0, 1}, 0.75) == 2);
    CHECK(N.RestrictedTo({0, 1})(0.75) == 2);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-4.0, 4.0), l(0.01, 2.0);
    std::vector<Interval> iv;
    for (int k = 0; k < 60; ++k) {
      double a = u(rng);
      iv.push_back({a, a + l(rng)});
    }
    CountingFunction R(iv);
    for (const Weight& w : {Weight::Lebesgue(), Weight::ShiftedPower(1.0)}) {
      double sum = 0.0;
      for (const Interval& I : iv) sum += w.Integral(I.lo, I.hi);
      CHECK(R.Integral(w) == doctest::Approx(sum).epsilon(1e-9));
      double pieces = 0.0;
      for (const auto& pc : R.Pieces()) pieces += pc.value * w.Integral(pc.lo, pc.hi);
      CHECK(pieces == doctest::Approx(sum).epsilon(1e-9));
    }
    for (const auto& pc : R.Pieces()) {
      CHECK(pc.value >= 0);
      CHECK(R(0.5 * (pc.lo + pc.hi)) == pc.value);
    }
    // Layer cake: int N = sum_k |{N > k}|.
    double layers = 0.0;
    for (int k = 0; k < 60; ++k) layers += R.LevelMass(Weight::Lebesgue(), k);
    CHECK(layers == doctest::Approx(R.Integral(Weight::Lebesgue())).epsilon(1e-9));
  }

  TEST_CASE("good lambda") {
    SampledFunction f{-1.0, 1.0 / 64, std::vector<double>(128, 1.0)};
    std::vector<double> t_grid = {1, 2, 4, 8}, c_grid = {0.01, 0.1, 1.0};
    GoodLambdaReport empty = good_lambda_report(CountingFunction(), f, Weight::Lebesgue(), 4, 0.5,
                                                1.0, t_grid, c_grid);
    CHECK(empty.trivially_holds);
    CHECK(std::isinf(empty.c_max));

    ExperimentConfig cfg = ExperimentConfig::FromJson(
        {{"window", {{"y", {-0.5, 0.5}}, {"eta", {0.6, 0.8}}, {"t_min", 0.125}, {"t_max", 0.25}}},
         {"signal", {{"family", "modulated_gaussian"}, {"sigma", 1.0}, {"eta0", 0.7},
                     {"half_length", 256.0}, {"h", 0.015625}}}});
    FieldSetup fs = build_field(cfg, 1, Weight::Lebesgue());
    double peak = 0.0;
    fs.table->ForEachSample([&](const Point3&, double v) { peak = std::max(peak, v); });
    SampledSignal s = cfg.signal.Sample(1);
    SampledFunction absf{s.x0(), s.h(), {}};
    for (const Complex& v : s.values()) absf.values.push_back(std::abs(v));
    auto counting = [&](double lam) {
      std::vector<Interval> iv;
      for (const SelectionStep& st : select_linfty(*fs.table, lam).steps) {
        Tent T = st.tent.tent(TentParams{});
        iv.push_back({T.x - T.s, T.x + T.s});
      }
      return CountingFunction(iv);
    };
    CountingFunction lo = counting(0.2 * peak), hi = counting(0.6 * peak);
    REQUIRE(!lo.intervals().empty());
    std::vector<double> cs;
    for (int k = -12; k <= 2; ++k) cs.push_back(std::exp2(k));
    GoodLambdaReport r = good_lambda_report(lo, absf, Weight::Lebesgue(), 4, 0.5, 0.2 * peak,
                                            {0.5, 1, 2, 4}, cs, 12);
    CHECK(r.c_max > 0.0);
    for (const auto& row : r.rows) {
      CHECK(row.mass_N_t <= row.mass_N_quarter + 1e-12);
      for (std::size_t i = 1; i < row.mass_M.size(); ++i) CHECK(row.mass_M[i] <= row.mass_M[i - 1]);
    }
    // Level masses of one counting function decrease in t. Across different
    // lam the greedy covers differ, so no ordering between runs is asserted.
    double prev = INFINITY;
    for (double t : {0.0, 0.5, 1.0, 2.0, 4.0}) {
      double m = hi.LevelMass(Weight::Lebesgue(), t);
      CHECK(m <= prev);
      prev = m;
    }
  }
}
