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
#include "wpe/tents.h"

using wpe::LatticePoint;
using wpe::Point3;
using wpe::Region;
using wpe::Tent;
using wpe::TentParams;

namespace {

const TentParams kTheta{1.0, 1.0, 0.5};

// Every lattice point of scale 2^k near p that passes the three
// containment inequalities, by enumeration.
std::vector<LatticePoint> Admissible(const Point3& p, int k, double b) {
  std::vector<LatticePoint> out;
  double s = std::ldexp(1.0, k);
  if (!(s / 8.0 <= p.t && p.t <= s / 4.0)) return out;
  double dx = s / 16.0, dxi = b / (256.0 * s);
  auto n0 = static_cast<std::int64_t>(std::floor(p.y / dx)) - 3;
  auto m0 = static_cast<std::int64_t>(std::floor(p.eta / dxi)) - 3;
  for (std::int64_t n = n0; n <= n0 + 6; ++n) {
    for (std::int64_t m = m0; m <= m0 + 6; ++m) {
      double x = dx * static_cast<double>(n), xi = dxi * static_cast<double>(m);
      if (std::abs(p.y - x) <= s / 16.0 && std::abs(p.eta - xi) <= b / (256.0 * s)) {
        out.push_back({k, n, m});
      }
    }
  }
  return out;
}

}  // namespace

TEST_SUITE("tents") {
  TEST_CASE("membership by region") {
    Tent T{0, 0, 1, kTheta};
    CHECK(tent_contains(T, {0, 0, 0.5}, Region::kCore));
    CHECK_FALSE(tent_contains(T, {0, 0, 0.5}, Region::kLacunary));
    CHECK(tent_contains(T, {0, 1.5, 0.5}, Region::kLacunaryUpper));
    CHECK_FALSE(tent_contains(T, {0, 1.5, 0.5}, Region::kLacunaryLower));
    CHECK_FALSE(tent_contains(T, {0.6, 0, 0.5}, Region::kWhole));
    CHECK_FALSE(tent_contains(T, {0, 2.0, 0.5}, Region::kWhole));  // eta - xi = C2/t
    CHECK(tent_contains(T, {0, -1.9, 0.5}, Region::kLacunaryLower));
    CHECK_FALSE(tent_contains(T, {0, 0, 1.0}, Region::kWhole));
  }

  TEST_CASE("regions partition the tent") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    TentParams asym{2.0, 1.0, 0.5};
    for (const TentParams& th : {kTheta, asym}) {
      Tent T{0.3, -0.2, 2.0, th};
      for (int i = 0; i < 20000; ++i) {
        Point3 p{0.3 + 2.0 * u(rng), -0.2 + 4.0 * u(rng), 1.0 + u(rng)};
        bool whole = tent_contains(T, p, Region::kWhole);
        bool core = tent_contains(T, p, Region::kCore);
        bool lac = tent_contains(T, p, Region::kLacunary);
        bool up = tent_contains(T, p, Region::kLacunaryUpper);
        bool lo = tent_contains(T, p, Region::kLacunaryLower);
        CHECK(whole == (core || lac));
        CHECK_FALSE((core && lac));
        CHECK(lac == (up || lo));
        CHECK_FALSE((up && lo));
        if (up) CHECK(p.eta >= T.xi);
      }
    }
  }

  TEST_CASE("lattice coordinates") {
    LatticePoint lp{0, 3, -2};
    CHECK(lp.x() == 3.0 / 16.0);
    CHECK(lp.xi(0.5) == -std::ldexp(1.0, -8));
    CHECK(lp.s() == 1.0);
    for (int k = -40; k <= 40; k += 7) {
      LatticePoint q{k, 12345, -678};
      CHECK(q.x() == std::ldexp(12345.0, k - 4));
      CHECK(q.xi(0.5) == std::ldexp(-678.0 * 0.5, -k - 8));
      CHECK(q.s() == std::ldexp(1.0, k));
    }
  }

  TEST_CASE("lattice enumeration") {
    wpe::Window3 w{{0.0, 0.1}, {-0.1, 0.1}, 0.9, 1.1};
    auto tents = lattice_tents(w, kTheta);
    CHECK(std::find(tents.begin(), tents.end(), LatticePoint{0, 0, 0}) != tents.end());
    CHECK(std::is_sorted(tents.begin(), tents.end(), wpe::LatticeOrderLess));
    for (const LatticePoint& lp : tents) {
      Tent T = lp.tent(kTheta);
      CHECK(T.s > w.t_min);
      CHECK(T.s <= 2.0 * w.t_max);
      CHECK(T.x - T.s < w.y.hi);
      CHECK(T.x + T.s > w.y.lo);
      CHECK(T.xi >= w.eta.lo - kTheta.c_max() / T.s);
      CHECK(T.xi <= w.eta.hi + kTheta.c_max() / T.s);
    }
    // Scale 1 at n = 0: count m directly.
    auto at = std::count_if(tents.begin(), tents.end(),
                            [](const LatticePoint& lp) { return lp.k == 0 && lp.n == 0; });
    // |xi| <= 1.1 with step 2^-9: m in [-563, 563].
    CHECK(at == 2 * 563 + 1);
    wpe::LatticeOptions small;
    small.cap = 100;
    CHECK_THROWS_AS(lattice_tents(w, kTheta, small), wpe::Error);
    wpe::Window3 bad{{0.0, 0.1}, {0.0, 0.1}, 1.0, 0.5};
    CHECK_THROWS_AS(lattice_tents(bad, kTheta), wpe::Error);
  }

  TEST_CASE("central parents match enumeration") {
    auto par = central_lattice_parents({0, 0, 1}, kTheta);
    CHECK(par.lower == LatticePoint{2, 0, 0});
    CHECK(par.upper == LatticePoint{2, 0, 0});
    auto q = central_lattice_parents({0.2, 0, 1}, kTheta);
    CHECK(q.lower.s() == 4.0);
    CHECK(std::abs(0.2 - q.lower.x()) <= q.lower.s() / 16.0);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
      Point3 p{64.0 * u(rng) - 32.0, 8.0 * u(rng) - 4.0, std::exp2(12.0 * u(rng) - 6.0)};
      auto pr = central_lattice_parents(p, kTheta);
      // Smallest admissible scale: nothing admissible one scale down.
      int k = pr.lower.k;
      CHECK(Admissible(p, k - 1, 0.5).empty());
      auto cands = Admissible(p, k, 0.5);
      bool found_lo = false, found_hi = false;
      for (const LatticePoint& c : cands) {
        found_lo = found_lo || c == pr.lower;
        found_hi = found_hi || c == pr.upper;
      }
      CHECK(found_lo);
      CHECK(found_hi);
      CHECK(pr.lower.xi(0.5) <= p.eta);
      CHECK(p.eta <= pr.upper.xi(0.5));
      CHECK(tent_contains(pr.lower.tent(kTheta), p, Region::kWhole));
      CHECK(tent_contains(pr.upper.tent(kTheta), p, Region::kWhole));
    }
  }

  TEST_CASE("strip intersection") {
    Tent T{0, 0, 4, kTheta};
    auto r = strip_intersect(T, 3, 2);
    REQUIRE(r.has_value());
    CHECK(r->x == 2.5);
    CHECK(r->s == 1.5);
    CHECK(r->xi == 0.0);
    auto same = strip_intersect(T, 0, 10);
    REQUIRE(same.has_value());
    CHECK(same->x == T.x);
    CHECK(same->s == T.s);
    CHECK_FALSE(strip_intersect(T, 10, 2).has_value());

    // Pointwise identity on a 20^3 grid.
    int bad = 0;
    for (int i = 0; i < 20; ++i) {
      for (int j = 0; j < 20; ++j) {
        for (int l = 0; l < 20; ++l) {
          Point3 p{-4.0 + 8.0 * (i + 0.5) / 20, -3.0 + 6.0 * (j + 0.5) / 20,
                   4.0 * (l + 0.5) / 20};
          bool lhs = tent_contains(T, p, Region::kWhole) && wpe::in_strip(3, 2, p);
          bool rhs = tent_contains(*r, p, Region::kWhole);
          bad += lhs != rhs;
        }
      }
    }
    CHECK(bad == 0);
  }
}
