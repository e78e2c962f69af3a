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
#include <memory>
#include <random>

#include "doctest.h"
#include "oracles.h"
#include "wpe/harness.h"
#include "wpe/outer.h"

using namespace wpe;

namespace {

const TentParams kTheta{1.0, 1.0, 0.5};

FieldPtr Indicator(const Tent& T, Region r, Complex c) {
  return std::make_shared<FunctionField>(
      [T, r, c](const Point3& p) { return tent_contains(T, p, r) ? c : Complex(0.0); });
}

// A window whose lattice family is the single tent T(0, 0, 1).
Window3 SingleTentWindow() { return {{-0.01, 0.01}, {-0.001, 0.001}, 0.6, 0.9}; }

LatticeOptions Tight() {
  LatticeOptions o;
  o.x_reach = 0.0;
  o.xi_pad = 0.0;
  return o;
}

}  // namespace

TEST_SUITE("outer") {
  TEST_CASE("premeasure") {
    CHECK(premeasure(Weight::Lebesgue(), {0, 5, 2, kTheta}) == 4.0);
    CHECK(premeasure(Weight::Power(1.0), {0, 0, 1, kTheta}) == doctest::Approx(1.0));
    CHECK(premeasure(Weight::Power(1.0), {3, 0, 1, kTheta}) == doctest::Approx(6.0));
  }

  TEST_CASE("square function on a lacunary indicator") {
    Tent T{0, 0, 1, kTheta};
    TentQuadrature q{64, 8, 256, 0.25, 6};
    CHECK(square_function_ST(FunctionField([](const Point3&) { return Complex(0.0); }), T,
                             0.0, q) == 0.0);
    // int_{1/4}^1 2 min(t, 1-t) (C1 - b + C2 - b) dt / t^2 = 2.
    double oracle = wpe::testing::Simpson(
        [](double t) { return 2.0 * std::min(t, 1.0 - t) / (t * t); }, 0.25, 1.0);
    CHECK(oracle == doctest::Approx(2.0).epsilon(1e-9));
    double v = square_function_ST(*Indicator(T, Region::kLacunary, 1.0), T, 0.0, q);
    CHECK(v * v == doctest::Approx(oracle).epsilon(0.01));
    CHECK(square_function_ST(*Indicator(T, Region::kCore, 1.0), T, 0.0, q) == 0.0);
    TentQuadrature late = q;
    late.t_min = 2.0;
    CHECK(square_function_ST(*Indicator(T, Region::kLacunary, 1.0), T, 0.0, late) == 0.0);
  }

  TEST_CASE("size closed forms") {
    Tent T{0, 0, 1, kTheta};
    Weight leb = Weight::Lebesgue();
    TentQuadrature q{32, 8, 128, 0.25, 6};
    CHECK(size(FunctionField([](const Point3&) { return Complex(0.0); }), T, leb, q) == 0.0);
    CHECK(size(*Indicator(T, Region::kCore, Complex(0.0, 3.0)), T, leb, q) ==
          doctest::Approx(3.0));
    // F = 1 on the tent: 1 + sqrt(2 [ln t - t]_{1/4}^1).
    double closed = 1.0 + std::sqrt(2.0 * (std::log(4.0) - 0.75));
    CHECK(size(*Indicator(T, Region::kWhole, 1.0), T, leb, q) ==
          doctest::Approx(closed).epsilon(0.01));
    SizeParts deg = size_parts(*Indicator(T, Region::kWhole, 1.0), T,
                               Weight::Sampled(-2.0, 1.0, {0, 0, 0, 0, 0}), q);
    CHECK(deg.degenerate);
    CHECK(deg.value == doctest::Approx(1.0));
  }

  TEST_CASE("size sup is stable under refinement") {
    auto phi = MotherWavelet::Standard();
    auto a = std::make_shared<const AnalyticSignal>(
        AnalyticSignal::ModulatedGaussian(2.0, 0.0, 0.7));
    auto engine = std::make_shared<TransformEngine>(
        phi, SampledSignal::FromAnalytic(a, 256.0, 0.0625));
    TransformField F(engine, EverywhereWindow());
    Tent T{0.1, 0.7, 2.0, kTheta};
    // Odd n_gamma puts a core node on gamma = 0.
    TentQuadrature q{16, 9, 16, 0.25, 6}, q2{32, 17, 32, 0.25, 6};
    double s1 = size(F, T, Weight::Lebesgue(), q), s2 = size(F, T, Weight::Lebesgue(), q2);
    CHECK(std::abs(s2 / s1 - 1.0) <= 0.05);
  }

  TEST_CASE("size axioms") {
    Tent T{0, 0.3, 1, kTheta};
    TentQuadrature q{8, 4, 8, 0.0, 5};
    Weight w = Weight::ShiftedPower(0.5);
    FunctionField zero([](const Point3&) { return Complex(0.0); });
    CHECK(size_axioms_check(zero, zero, T, w, q).passed());
    FunctionField F([](const Point3& p) { return Complex(std::cos(3 * p.y), p.eta * p.t); });
    FunctionField G2([](const Point3& p) { return 2.0 * Complex(std::cos(3 * p.y), p.eta * p.t); });
    CHECK(size_axioms_check(F, G2, T, w, q).passed());
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int i = 0; i < 10; ++i) {
      double a = n(rng), b = n(rng), c = n(rng), d = n(rng);
      FunctionField X([=](const Point3& p) {
        return Complex(a * std::sin(p.y * 5 + b), c * std::cos(p.eta * 7 - p.t));
      });
      FunctionField Y([=](const Point3& p) {
        return Complex(d * std::cos(p.y + p.eta), b * p.t);
      });
      CHECK(size_axioms_check(X, Y, T, w, q).passed());
    }
  }

  TEST_CASE("outer measure of tents") {
    Weight w = Weight::ShiftedPower(0.5);
    TentQuadrature q{4, 4, 4, 0.0, 3};
    LatticePoint lp{0, 16, 200};
    Tent T0 = lp.tent(kTheta);
    auto target = TentTargetPoints(T0, q);
    Window3 win{{T0.x - 0.07, T0.x + 0.07}, {T0.xi - 0.001, T0.xi + 0.001}, 0.3, 1.0};
    auto cands = lattice_tents(win, kTheta, Tight());
    CoverResult g = outer_measure(w, target, cands, kTheta, CoverMode::kGreedy);
    CoverResult e = outer_measure(w, target, cands, kTheta, CoverMode::kExhaustive, 20);
    CHECK(g.cost == doctest::Approx(premeasure(w, T0)).epsilon(1e-12));
    CHECK(e.cost == doctest::Approx(premeasure(w, T0)).epsilon(1e-12));
    CHECK(g.cost >= e.cost);

    // Two far apart tents.
    LatticePoint lq{0, -800, 200};
    auto both = target;
    auto more = TentTargetPoints(lq.tent(kTheta), q);
    both.insert(both.end(), more.begin(), more.end());
    auto far_cands = cands;
    Window3 win2{{lq.x() - 0.07, lq.x() + 0.07}, win.eta, 0.3, 1.0};
    auto c2 = lattice_tents(win2, kTheta, Tight());
    far_cands.insert(far_cands.end(), c2.begin(), c2.end());
    CoverResult g2 = outer_measure(w, both, far_cands, kTheta, CoverMode::kGreedy);
    CHECK(g2.cost == doctest::Approx(premeasure(w, T0) + premeasure(w, lq.tent(kTheta))));
    CoverResult cost_sum = g2;
    double sum = 0.0;
    for (const LatticePoint& t : g2.tents) sum += premeasure(w, t.tent(kTheta));
    CHECK(cost_sum.cost == doctest::Approx(sum).epsilon(1e-12));
  }

  TEST_CASE("super-level measure and norms of a core indicator") {
    Tent T0{0, 0, 1, kTheta};
    const double c = 3.0;
    auto lat = lattice_tents(SingleTentWindow(), kTheta, Tight());
    REQUIRE(lat.size() == 1);
    REQUIRE(lat[0] == LatticePoint{0, 0, 0});
    TentQuadrature q{8, 4, 8, 0.0, 6};
    // c on the inner half of the core, so no jump sits on the core boundary
    // (the table extends samples as piecewise constants across cells).
    FieldPtr F = std::make_shared<FunctionField>([T0, c](const Point3& p) {
      bool in = tent_contains(T0, p, Region::kWhole) &&
                std::abs(p.eta - T0.xi) * p.t <= 0.5 * T0.params.b;
      return in ? Complex(c) : Complex(0.0);
    });
    TentTable table(*F, lat, kTheta, Weight::Lebesgue(), q);
    CHECK(table.Size(0) == doctest::Approx(c));
    CoverResult up = superlevel_upper(table, c / 2);
    CoverResult ex = superlevel_exhaustive(table, c / 2);
    CHECK(up.cost == 2.0);
    CHECK(ex.cost == 2.0);
    CHECK(up.residual_sup_size <= c / 2);
    CHECK(superlevel_upper(table, c).cost == 0.0);
    NormPair n = outer_norms(table, 2.0);
    CHECK(n.strong.upper == doctest::Approx(c * std::sqrt(2.0)).epsilon(1e-9));
    CHECK(n.strong.lower <= n.strong.upper);
    CHECK(n.strong.lower_exact);
    CHECK(n.weak.upper == doctest::Approx(c * std::sqrt(2.0)).epsilon(0.2));
    CHECK(n.weak.upper <= n.strong.upper);

    FunctionField zero([](const Point3&) { return Complex(0.0); });
    TentTable zt(zero, lat, kTheta, Weight::Lebesgue(), q);
    NormPair nz = outer_norms(zt, 2.0);
    CHECK(nz.strong.upper == 0.0);
    CHECK(nz.strong.lower == 0.0);
    CHECK(superlevel_upper(zt, 1.0).tents.empty());
  }

  TEST_CASE("table sizes agree with direct sizes") {
    auto phi = MotherWavelet::Standard();
    auto a = std::make_shared<const AnalyticSignal>(
        AnalyticSignal::ModulatedGaussian(2.0, 0.0, 0.7));
    auto engine = std::make_shared<TransformEngine>(
        phi, SampledSignal::FromAnalytic(a, 256.0, 0.0625));
    Window3 win{{-0.25, 0.25}, {0.69, 0.71}, 0.25, 1.0};
    TransformField F(engine, win);
    auto lat = lattice_tents(win, kTheta, Tight());
    REQUIRE(!lat.empty());
    TentQuadrature q{16, 33, 16, 0.25, 6};
    TableOptions fine;
    fine.y_refine = 4;
    fine.core_rows = 64;
    Weight w = Weight::ShiftedPower(0.5);
    TentTable table(F, lat, kTheta, w, q, {}, SizeVariant::kStandard, fine);
    double worst = 0.0;
    for (std::size_t i = 0; i < table.size(); i += table.size() / 6 + 1) {
      double direct = size(F, table.tent(i), w, q);
      REQUIRE(direct > 0.0);
      worst = std::max(worst, std::abs(table.Size(i) / direct - 1.0));
    }
    CHECK(worst <= 0.05);
  }

  TEST_CASE("lambda grid") {
    auto g = make_lambda_grid(8.0, {24, 12.0});
    REQUIRE(g.size() == 24);
    CHECK(g.front() == doctest::Approx(8.0 / 4096.0));
    CHECK(g.back() == doctest::Approx(8.0));
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
  }

  TEST_CASE("axiom suite and its negative control") {
    ExperimentConfig cfg = ExperimentConfig::FromJson(Json::object());
    CHECK(run_axiom_suite(cfg, 6).passed());
    CHECK_FALSE(run_axiom_suite(cfg, 6, SizeVariant::kUnnormalized).passed());
  }
}
