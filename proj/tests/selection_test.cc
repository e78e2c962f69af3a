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

#include "doctest.h"
#include "wpe/harness.h"
#include "wpe/selection.h"

using namespace wpe;

namespace {

const TentParams kTheta{1.0, 1.0, 0.5};

ExperimentConfig GaussianConfig(double eta0 = 0.7) {
  Json j = {{"window", {{"y", {-0.5, 0.5}}, {"eta", {0.6, 0.8}}, {"t_min", 0.125}, {"t_max", 0.25}}},
            {"signal", {{"family", "modulated_gaussian"}, {"sigma", 1.0}, {"eta0", eta0},
                        {"half_length", 256.0}, {"h", 0.015625}}}};
  return ExperimentConfig::FromJson(j);
}

ExperimentConfig ZeroConfig() {
  ExperimentConfig cfg = GaussianConfig();
  cfg.signal.family = "zero";
  return cfg;
}

double Peak(const TentTable& t) {
  double m = 0.0;
  t.ForEachSample([&](const Point3&, double v) { m = std::max(m, v); });
  return m;
}

}  // namespace

TEST_SUITE("selection") {
  TEST_CASE("point separation") {
    double beta = std::ldexp(0.5, -6);
    CHECK(check_point_separation({{0, 0, 1}, {0.3, 0, 1}}, 0.25, beta).passed());
    CHECK(check_point_separation({{0, 0, 1}, {0.1, 0, 1}}, 0.25, beta).violations.size() == 1);
    CHECK(check_point_separation({{0, 0, 1}, {0, 3 * beta, 0.5}}, 0.25, beta).passed());
    CHECK(check_point_separation({{0, 0, 1}, {0, 1.5 * beta, 0.5}}, 0.25, beta).violations.size() == 1);
  }

  TEST_CASE("partial tent separation") {
    double beta = std::ldexp(0.5, -6), B = std::ldexp(1.0 / 0.5, 8);
    TentQuadrature q{4, 5, 4, 0.0, 10};
    PartialTent A{{0, 0, 1, kTheta}, Region::kLacunaryUpper, {}};
    CHECK(check_partial_tent_separation({A}, 1.0, beta, B, q).passed());
    // A small tent nested under A at the same frequency: its core reaches
    // A's frequencies within beta/t' and its positions sit under A's centre.
    PartialTent small{{0, 0, std::ldexp(1.0, -6), kTheta}, Region::kWhole, {}};
    CHECK_FALSE(check_partial_tent_separation({A, small}, 1.0, beta, B, q).passed());
    // Exclusion removes points from the partial tent.
    PartialTent cut{{0, 0, 1, kTheta}, Region::kWhole, {{0, 0, 0.5, kTheta}}};
    CHECK(cut.Contains({0.0, 0.0, 0.75}));
    CHECK_FALSE(cut.Contains({0.0, 0.0, 0.25}));
  }

  TEST_CASE("sup selection of a modulated gaussian") {
    ExperimentConfig cfg = GaussianConfig();
    Weight w = Weight::Lebesgue();
    FieldSetup fs = build_field(cfg, 1, w);
    double peak = Peak(*fs.table);
    REQUIRE(peak > 0.0);
    SelectionResult r = select_linfty(*fs.table, 0.5 * peak);
    REQUIRE(!r.steps.empty());
    CHECK(r.certified());
    CHECK(r.residual_certificate <= 0.5 * peak);
    double cost = 0.0;
    std::vector<Point3> witnesses;
    for (std::size_t i = 0; i < r.steps.size(); ++i) {
      const SelectionStep& st = r.steps[i];
      REQUIRE(st.has_witness);
      CHECK(centrally_contains(st.tent, kTheta, st.witness));
      CHECK(st.quantity > 0.5 * peak);
      if (i > 0) CHECK(st.tent.s() <= r.steps[i - 1].tent.s());
      Tent T = st.tent.tent(kTheta);
      cost += w.Integral(T.x - T.s, T.x + T.s);
      witnesses.push_back(st.witness);
    }
    CHECK(r.total_cost == doctest::Approx(cost).epsilon(1e-12));
    CHECK(check_point_separation(witnesses, 0.25, std::ldexp(0.5, -6)).passed());

    // Above the a priori bound nothing is selected.
    const TransformEngine& e = *fs.engine;
    double bound = e.signal().L2Norm() * std::sqrt(e.phi().L2NormSquared()) /
                   std::sqrt(cfg.window.t_min);
    CHECK(bound >= peak);
    CHECK(select_linfty(*fs.table, bound).steps.empty());
  }

  TEST_CASE("selections of the zero signal are empty") {
    ExperimentConfig cfg = ZeroConfig();
    FieldSetup fs = build_field(cfg, 1, Weight::Lebesgue());
    CHECK(select_linfty(*fs.table, 1e-12).steps.empty());
    CHECK(select_l2(*fs.table, 1e-12, NodeKind::kLacunaryUpper, 4.0, {}).steps.empty());
  }

  TEST_CASE("L2 selection order, certificate and separation") {
    ExperimentConfig cfg = GaussianConfig();
    Weight w = Weight::ShiftedPower(0.5);
    FieldSetup fs = build_field(cfg, 1, w);
    double lam = 0.1 * Peak(*fs.table);
    double c_sel = 2.0 * doubling_constant(w, cfg.window.y, 6);
    for (NodeKind half : {NodeKind::kLacunaryUpper, NodeKind::kLacunaryLower}) {
      SelectionResult r = select_l2(*fs.table, lam, half, c_sel, {});
      CHECK(r.certified());
      CHECK(r.threshold == doctest::Approx(lam * lam / c_sel));
      for (std::size_t i = 1; i < r.steps.size(); ++i) {
        int c = CompareXi(r.steps[i].tent, r.steps[i - 1].tent);
        if (half == NodeKind::kLacunaryUpper) CHECK(c <= 0);
        if (half == NodeKind::kLacunaryLower) CHECK(c >= 0);
        if (c == 0) CHECK(r.steps[i].tent.s() <= r.steps[i - 1].tent.s());
      }
      for (const SelectionStep& st : r.steps) CHECK(st.quantity >= r.threshold);
      auto parts = residual_partial_tents(r, {});
      CHECK(parts.size() == r.steps.size());
      auto sep = check_partial_tent_separation(parts, 1.0, std::ldexp(0.5, -6),
                                               std::ldexp(2.0, 8), {4, 4, 8, 0.0, 10});
      CHECK(sep.passed());
      CHECK(sep.overlaps == 0);
      // Deterministic: a second run selects the same tents.
      SelectionResult again = select_l2(*fs.table, lam, half, c_sel, {});
      REQUIRE(again.steps.size() == r.steps.size());
      for (std::size_t i = 0; i < r.steps.size(); ++i) {
        CHECK(again.steps[i].tent == r.steps[i].tent);
      }
    }
    // A threshold above every size selects nothing.
    CHECK(select_l2(*fs.table, 2.0 * fs.table->MaxSize(), NodeKind::kLacunaryUpper, c_sel, {})
              .steps.empty());
  }

  TEST_CASE("discrete restriction") {
    ExperimentConfig cfg = GaussianConfig();
    auto engine = std::make_shared<TransformEngine>(make_wavelet(cfg), cfg.signal.Sample(1));
    double beta = std::ldexp(0.5, -6);
    auto pts = random_separated_points(4, 50, cfg.window, 0.25, beta);
    REQUIRE(pts.size() > 5);
    CHECK(check_point_separation(pts, 0.25, beta).passed());
    RestrictionReport r = verify_restriction_discrete(*engine, pts, 1.0 / 3.0, 0.25, beta);
    CHECK(std::isfinite(r.ratio));
    CHECK(r.ratio > 0.0);
    CHECK(r.lhs == doctest::Approx(r.ratio * r.rhs));
    // One point: lhs is t^{1/2} |P f| <= |f| |phi| <= rhs |phi|.
    auto one = verify_restriction_discrete(*engine, {pts[0]}, 0.5, 0.25, beta);
    CHECK(one.lhs <= one.norm_f * std::sqrt(engine->phi().L2NormSquared()) + 1e-12);
    CHECK_THROWS_AS(verify_restriction_discrete(*engine, {{0, 0.7, 0.2}, {0.01, 0.7, 0.2}},
                                                0.5, 0.25, beta),
                    Error);
    ExperimentConfig z = ZeroConfig();
    TransformEngine ze(make_wavelet(z), z.signal.Sample(1));
    CHECK(verify_restriction_discrete(ze, pts, 0.5, 0.25, beta).ratio == 0.0);
  }

  TEST_CASE("continuous restriction on one lacunary tent") {
    ExperimentConfig cfg = GaussianConfig();
    auto engine = std::make_shared<TransformEngine>(make_wavelet(cfg), cfg.signal.Sample(1));
    PartialTent T{{0, 0.7, 0.5, kTheta}, Region::kLacunaryUpper, {}};
    ContinuousCheck chk;
    chk.q = {8, 8, 8, 0.0, 6};
    RestrictionReport r = verify_restriction_continuous(*engine, {T}, 1.0 / 3.0, chk);
    CHECK(std::isfinite(r.ratio));
    CHECK(r.lhs > 0.0);
    auto sub = verify_restriction_subset(*engine, {T},
                                         [](const Point3& p) { return p.t > 0.2; }, chk);
    CHECK(sub.lhs <= r.lhs + 1e-15);
    CHECK(std::isfinite(sub.ratio));
    ExperimentConfig z = ZeroConfig();
    TransformEngine ze(make_wavelet(z), z.signal.Sample(1));
    CHECK(verify_restriction_continuous(ze, {T}, 1.0 / 3.0, chk).lhs == 0.0);
  }
}
