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
#include <complex>
#include <memory>
#include <random>

#include "doctest.h"
#include "oracles.h"
#include "wpe/wavepacket.h"

using wpe::AnalyticSignal;
using wpe::Complex;
using wpe::MotherWavelet;
using wpe::Point3;
using wpe::SampledSignal;

namespace {

double Bump(double u) {
  return std::abs(u) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - u * u)) : 0.0;
}

// phi(x) = (1/pi) int_0^delta bump(xi/delta) cos(xi x) dxi.
double PhiOracle(double delta, double x) {
  return wpe::testing::Simpson(
             [&](double xi) { return Bump(xi / delta) * std::cos(xi * x); },
             0.0, delta, 1e-16) /
         M_PI;
}

SampledSignal Gaussian(double sigma, double x0, double eta0, double L = 512.0,
                       double h = 0.0625) {
  auto a = std::make_shared<const AnalyticSignal>(
      AnalyticSignal::ModulatedGaussian(sigma, x0, eta0));
  return SampledSignal::FromAnalytic(a, L, h);
}

double Rel(Complex a, Complex b) {
  double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

}  // namespace

TEST_SUITE("wavepacket") {
  TEST_CASE("mother wavelet profile") {
    auto phi = MotherWavelet::Standard();
    CHECK(phi->delta() == std::ldexp(0.5, -8));
    CHECK(phi->Profile(0.0) == 1.0);
    CHECK(phi->Profile(phi->delta()) == 0.0);
    CHECK(phi->Profile(-phi->delta()) == 0.0);
    CHECK(phi->Profile(2.0 * phi->delta()) == 0.0);
    CHECK(phi->Profile(0.5 * phi->delta()) == doctest::Approx(std::exp(1.0 - 4.0 / 3.0)));
  }

  TEST_CASE("tabulated wavelet matches the inverse Fourier integral") {
    auto phi = MotherWavelet::Standard();
    double d = phi->delta();
    double scale = PhiOracle(d, 0.0);
    for (double x : {0.0, 1.3, 57.25, 400.0, 1234.5, 9000.0}) {
      CHECK(std::abs((*phi)(x) - PhiOracle(d, x)) <= 1e-9 * scale);
    }
    CHECK((*phi)(-57.25) == (*phi)(57.25));
    // Parseval: ||phi||^2 = (1/pi) int_0^delta bump^2.
    double l2 = wpe::testing::Simpson([&](double xi) { return Bump(xi / d) * Bump(xi / d); },
                                      0.0, d, 1e-18) / M_PI;
    CHECK(phi->L2NormSquared() == doctest::Approx(l2).epsilon(1e-10));
    CHECK(std::isfinite(phi->L1Norm()));
    CHECK(phi->L1Norm() >= 1.0 - 1e-9);  // |phi^(0)| <= ||phi||_1
  }

  TEST_CASE("decay fits a single constant") {
    auto phi = MotherWavelet::Standard();
    for (int N : {2, 4}) {
      double C = phi->DecayConstant(N);
      CHECK(std::isfinite(C));
      for (double x : {0.0, 100.0, 2000.0, 30000.0}) {
        CHECK(std::abs((*phi)(x)) <= C * std::pow(1.0 + x, -N) * (1.0 + 1e-12));
      }
    }
    // Far in the tail the wavelet is tiny against its peak.
    double far = 0.25 * phi->time_extent();
    CHECK(std::abs(PhiOracle(phi->delta(), far)) < 1e-8 * std::abs((*phi)(0.0)));
  }

  TEST_CASE("wavelet construction errors") {
    auto code = [](auto f) {
      try {
        f();
      } catch (const wpe::Error& e) {
        return e.code();
      }
      return wpe::ErrorCode::kConfig;
    };
    CHECK(code([] { MotherWavelet::Build(0.0, 1024.0, 4096); }) ==
          wpe::ErrorCode::kInvalidArgument);
    CHECK(code([] { MotherWavelet::Build(1e-3, 1024.0, 16); }) ==
          wpe::ErrorCode::kInvalidArgument);
    CHECK(code([] { MotherWavelet::Build(1e-3, 16.0, 1 << 10); }) ==
          wpe::ErrorCode::kUnderResolved);
  }

  TEST_CASE("wave packet at trivial points") {
    auto phi = MotherWavelet::Standard();
    double p0 = (*phi)(0.0);
    CHECK(eval_wave_packet(*phi, {0, 0, 1}, 0.0) == Complex(p0, 0.0));
    CHECK(eval_wave_packet(*phi, {0, 3.7, 1}, 0.0) == Complex(p0, 0.0));
    CHECK(std::abs(eval_wave_packet(*phi, {0, 0, 2}, 0.0) - p0 / 2.0) < 1e-18);
    // The modulation phase at y - x = 5.
    Complex v = eval_wave_packet(*phi, {5, 0.3, 1}, 0.0);
    CHECK(Rel(v, std::exp(Complex(0, -1.5)) * (*phi)(5.0)) < 1e-14);
  }

  TEST_CASE("transform of zero and scale errors") {
    auto phi = MotherWavelet::Standard();
    SampledSignal z(-8.0, 0.0625, std::vector<Complex>(257, 0.0));
    CHECK(transform(z, *phi, {0, 0.5, 1}) == Complex(0.0));
    CHECK_THROWS_AS(transform(z, *phi, {0, 0.5, 0.125}), wpe::Error);
    CHECK_THROWS_AS(transform(z, *phi, {0, 0.5, 1}, 2.0), wpe::Error);
  }

  TEST_CASE("transform matches the frequency side") {
    auto phi = MotherWavelet::Standard();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
      double sigma = 3.0 + 10.0 * u(rng), x0 = 20.0 * u(rng) - 10.0, eta0 = u(rng);
      AnalyticSignal a = AnalyticSignal::ModulatedGaussian(sigma, x0, eta0);
      SampledSignal f = Gaussian(sigma, x0, eta0);
      Point3 p{x0 + sigma * (u(rng) - 0.5), eta0 + (u(rng) - 0.5) / sigma,
               0.5 + 4.0 * u(rng)};
      // Closed-form Gaussian spectrum, independent of the library's.
      auto spec = [&](double xi) {
        double d = xi - eta0;
        return std::sqrt(2.0 * M_PI) * sigma * std::exp(-0.5 * sigma * sigma * d * d) *
               std::exp(Complex(0.0, -d * x0));
      };
      double r = phi->delta() / p.t;
      int n = 4000;
      Complex sum = 0.0;
      for (int j = 1; j < n; ++j) {
        double xi = p.eta - r + 2.0 * r * j / n;
        sum += spec(xi) * Bump((xi - p.eta) / r) * std::exp(Complex(0.0, xi * p.y));
      }
      Complex oracle = sum * (2.0 * r / n) / (2.0 * M_PI);
      CHECK(Rel(transform(f, *phi, p), oracle) < 1e-6);
      wpe::TransformEngine engine(phi, f);
      CHECK(Rel(engine(p), transform(f, *phi, p)) < 1e-8);
      CHECK(Rel(a.Spectrum(p.eta), spec(p.eta)) < 1e-12);
    }
  }

  TEST_CASE("batch rows agree with pointwise values") {
    auto phi = MotherWavelet::Standard();
    SampledSignal f = Gaussian(6.0, 1.0, 0.6);
    wpe::TransformEngine engine(phi, f);
    wpe::TransformEngine sampled(phi, f, {1.25, false});
    std::vector<double> ys{-3.0, -0.5, 0.0, 2.25, 7.0};
    std::vector<Complex> row(ys.size()), srow(ys.size());
    engine.Row(0.62, 0.75, ys.data(), ys.size(), row.data());
    sampled.Row(0.62, 0.75, ys.data(), ys.size(), srow.data());
    for (std::size_t i = 0; i < ys.size(); ++i) {
      Complex direct = transform(f, *phi, {ys[i], 0.62, 0.75});
      CHECK(Rel(row[i], direct) < 1e-8);
      CHECK(Rel(srow[i], direct) < 1e-8);
    }
    wpe::Grid3 g{{0.0, 1.0}, {0.55, 0.65}, {0.5, 1.0}};
    std::vector<Complex> batch = wpe::transform_batch(engine, g);
    REQUIRE(batch.size() == 8);
    for (const Complex& v : batch) CHECK(std::isfinite(std::abs(v)));
  }

  TEST_CASE("covariance under translation, modulation and dilation") {
    auto phi = MotherWavelet::Standard();
    SampledSignal f = Gaussian(5.0, -2.0, 0.8);
    Point3 p{0.7, 0.75, 1.5};
    Complex base = transform(f, *phi, p);
    double a = 3.0625;  // a multiple of h
    CHECK(Rel(transform(f.Translated(a), *phi, {p.y + a, p.eta, p.t}), base) < 1e-10);
    double m = 0.37;
    CHECK(Rel(transform(f.Modulated(m), *phi, {p.y, p.eta + m, p.t}),
              std::exp(Complex(0.0, m * p.y)) * base) < 1e-10);
    CHECK(Rel(transform(f.Dilated(2.0), *phi, {2.0 * p.y, p.eta / 2.0, 2.0 * p.t}), base) <
          1e-8);
  }

  TEST_CASE("a priori bound and frequency support") {
    auto phi = MotherWavelet::Standard();
    SampledSignal f = Gaussian(4.0, 0.0, 0.7);
    double bound_f = f.L2Norm() * std::sqrt(phi->L2NormSquared());
    wpe::TransformEngine engine(phi, f);
    for (double t : {0.5, 1.0, 4.0, 16.0}) {
      for (double eta : {0.6, 0.7, 0.75}) {
        CHECK(std::abs(transform(f, *phi, {0.3, eta, t})) <= bound_f / std::sqrt(t));
      }
    }
    AnalyticSignal a = AnalyticSignal::ModulatedGaussian(4.0, 0.0, 0.7);
    wpe::Interval band = a.Band();
    double t = 2.0;
    Point3 far{0.0, band.hi + phi->delta() / t + 0.01, t};
    CHECK(engine.Vanishes(far.eta, far.t));
    CHECK(engine(far) == Complex(0.0));
    CHECK(std::abs(transform(f, *phi, far)) < 1e-10 * f.L2Norm());
  }

  TEST_CASE("packet inner products") {
    auto phi = MotherWavelet::Standard();
    Complex self = packet_inner_product(*phi, {0, 0, 1}, {0, 0, 1});
    CHECK(self.imag() == doctest::Approx(0.0));
    CHECK(self.real() == doctest::Approx(phi->L2NormSquared()).epsilon(1e-9));
    CHECK(std::abs(packet_inner_product(*phi, {0, 0, 1}, {0, 8.0 * phi->delta(), 1})) < 1e-10);
    // Time-domain oracle for an overlapping pair.
    Point3 p1{0.0, 0.5, 1.0}, p2{30.0, 0.5 + 0.3 * phi->delta(), 2.0};
    double reach = 0.5 * phi->time_extent() * 2.0;
    int n = 1 << 18;
    Complex sum = 0.0;
    for (int j = 0; j <= n; ++j) {
      double x = -reach + 2.0 * reach * j / n;
      sum += eval_wave_packet(*phi, p1, x) * std::conj(eval_wave_packet(*phi, p2, x));
    }
    Complex direct = sum * (2.0 * reach / n);
    CHECK(Rel(packet_inner_product(*phi, p1, p2), direct) < 1e-6);
  }

  TEST_CASE("decay ratios") {
    auto phi = MotherWavelet::Standard();
    std::vector<std::pair<Point3, Point3>> same{{{0, 0, 2}, {0, 0, 2}}};
    auto r = check_decay_bound(*phi, same, 1);
    CHECK(r.max_ratio == doctest::Approx(phi->L2NormSquared()).epsilon(1e-9));
    // Unordered pairs are swapped, not rejected.
    std::vector<std::pair<Point3, Point3>> pair{{{3, 0.5, 4}, {0, 0.5, 1}}};
    std::vector<std::pair<Point3, Point3>> swapped{{{0, 0.5, 1}, {3, 0.5, 4}}};
    CHECK(check_decay_bound(*phi, pair, 2).max_ratio ==
          check_decay_bound(*phi, swapped, 2).max_ratio);
    std::vector<std::pair<Point3, Point3>> far{{{0, 0, 1}, {0, 1.0, 1}}};
    CHECK(check_decay_bound(*phi, far, 1).max_ratio == 0.0);
    CHECK_THROWS_AS(check_decay_bound(*phi, far, 0), wpe::Error);
  }
}
