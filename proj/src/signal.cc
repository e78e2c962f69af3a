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

#include "wpe/signal.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

namespace wpe {

namespace {

constexpr double kBandExponent = 80.0;
constexpr double kSupportExponent = 40.0;

Complex GaussianIntegral(Complex alpha, Complex beta, Complex gamma) {
  // int exp(-alpha x^2 + beta x + gamma) dx for Re alpha > 0.
  return std::sqrt(M_PI / alpha) * std::exp(beta * beta / (4.0 * alpha) + gamma);
}

}  // namespace

AnalyticSignal::AnalyticSignal(std::vector<GaussianAtom> atoms)
    : atoms_(std::move(atoms)) {
  for (const GaussianAtom& a : atoms_) {
    if (!(a.sigma > 0.0) || !std::isfinite(a.sigma)) {
      throw Error(ErrorCode::kInvalidArgument, "atom width must be positive");
    }
  }
}

AnalyticSignal AnalyticSignal::Gaussian(double sigma, double center) {
  return AnalyticSignal({GaussianAtom{1.0, center, sigma, 0.0, 0.0}});
}

AnalyticSignal AnalyticSignal::ModulatedGaussian(double sigma, double center,
                                                 double eta0) {
  return AnalyticSignal({GaussianAtom{1.0, center, sigma, eta0, 0.0}});
}

AnalyticSignal AnalyticSignal::Chirp(double sigma, double center, double eta0,
                                     double rate) {
  return AnalyticSignal({GaussianAtom{1.0, center, sigma, eta0, rate}});
}

AnalyticSignal AnalyticSignal::BandLimitedNoise(std::uint64_t seed, int count,
                                                double sigma, double spread,
                                                Interval band) {
  if (count < 1 || !(band.hi >= band.lo)) {
    throw Error(ErrorCode::kInvalidArgument, "noise needs count >= 1 and a band");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(-spread, spread);
  std::uniform_real_distribution<double> freq(band.lo, band.hi);
  std::normal_distribution<double> normal(0.0, 1.0);
  double scale = 1.0 / std::sqrt(static_cast<double>(count));
  std::vector<GaussianAtom> atoms;
  for (int k = 0; k < count; ++k) {
    GaussianAtom a;
    a.x0 = pos(rng);
    a.eta = freq(rng);
    double re = normal(rng);
    double im = normal(rng);
    a.c = Complex(re, im) * scale;
    a.sigma = sigma;
    atoms.push_back(a);
  }
  return AnalyticSignal(std::move(atoms));
}

Complex AnalyticSignal::Value(double x) const {
  Complex sum = 0.0;
  for (const GaussianAtom& a : atoms_) {
    double d = x - a.x0;
    sum += a.c * std::exp(Complex(0.0, a.eta * x) - a.A() * (d * d));
  }
  return sum;
}

std::vector<Interval> AnalyticSignal::AtomBands() const {
  std::vector<Interval> out;
  for (const GaussianAtom& a : atoms_) {
    Complex A = a.A();
    double half = std::sqrt(4.0 * kBandExponent * std::norm(A) / A.real());
    out.push_back({a.eta - half, a.eta + half});
  }
  return out;
}

Complex AnalyticSignal::Spectrum(double xi) const {
  Complex sum = 0.0;
  for (const GaussianAtom& a : atoms_) {
    Complex A = a.A();
    double d = xi - a.eta;
    Complex e = d * d / (4.0 * A);
    if (e.real() >= kBandExponent) continue;
    sum += a.c * std::sqrt(M_PI / A) * std::exp(Complex(0.0, -d * a.x0) - e);
  }
  return sum;
}

Interval AnalyticSignal::Band() const {
  if (atoms_.empty()) return {0.0, 0.0};
  Interval hull{std::numeric_limits<double>::infinity(),
                -std::numeric_limits<double>::infinity()};
  for (const Interval& b : AtomBands()) {
    hull.lo = std::min(hull.lo, b.lo);
    hull.hi = std::max(hull.hi, b.hi);
  }
  return hull;
}

Interval AnalyticSignal::Support() const {
  if (atoms_.empty()) return {0.0, 0.0};
  Interval hull{std::numeric_limits<double>::infinity(),
                -std::numeric_limits<double>::infinity()};
  for (const GaussianAtom& a : atoms_) {
    double r = std::sqrt(kSupportExponent / a.A().real());
    hull.lo = std::min(hull.lo, a.x0 - r);
    hull.hi = std::max(hull.hi, a.x0 + r);
  }
  return hull;
}

double AnalyticSignal::L2NormSquared() const {
  Complex total = 0.0;
  for (const GaussianAtom& p : atoms_) {
    for (const GaussianAtom& q : atoms_) {
      Complex Ap = p.A(), Aq = std::conj(q.A());
      Complex alpha = Ap + Aq;
      Complex beta = 2.0 * Ap * p.x0 + 2.0 * Aq * q.x0 +
                     Complex(0.0, p.eta - q.eta);
      Complex gamma = -Ap * (p.x0 * p.x0) - Aq * (q.x0 * q.x0);
      total += p.c * std::conj(q.c) * GaussianIntegral(alpha, beta, gamma);
    }
  }
  return total.real();
}

AnalyticSignal AnalyticSignal::Translated(double a) const {
  std::vector<GaussianAtom> out = atoms_;
  for (GaussianAtom& g : out) {
    g.c *= std::exp(Complex(0.0, -g.eta * a));
    g.x0 += a;
  }
  return AnalyticSignal(std::move(out));
}

AnalyticSignal AnalyticSignal::Modulated(double eta0) const {
  std::vector<GaussianAtom> out = atoms_;
  for (GaussianAtom& g : out) g.eta += eta0;
  return AnalyticSignal(std::move(out));
}

AnalyticSignal AnalyticSignal::Dilated(double r) const {
  if (!(r > 0.0)) throw Error(ErrorCode::kInvalidArgument, "dilation r > 0");
  std::vector<GaussianAtom> out = atoms_;
  for (GaussianAtom& g : out) {
    g.x0 *= r;
    g.sigma *= r;
    g.eta /= r;
    g.chirp /= r * r;
  }
  return AnalyticSignal(std::move(out));
}

AnalyticSignal AnalyticSignal::Scaled(Complex s) const {
  std::vector<GaussianAtom> out = atoms_;
  for (GaussianAtom& g : out) g.c *= s;
  return AnalyticSignal(std::move(out));
}

AnalyticSignal AnalyticSignal::Plus(const AnalyticSignal& g) const {
  std::vector<GaussianAtom> out = atoms_;
  out.insert(out.end(), g.atoms_.begin(), g.atoms_.end());
  return AnalyticSignal(std::move(out));
}

SampledSignal::SampledSignal(double x0, double h, std::vector<Complex> values)
    : x0_(x0), h_(h), values_(std::move(values)) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw Error(ErrorCode::kInvalidArgument, "grid spacing must be positive");
  }
  for (const Complex& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw Error(ErrorCode::kInvalidArgument, "signal values must be finite");
    }
  }
}

SampledSignal SampledSignal::FromAnalytic(
    std::shared_ptr<const AnalyticSignal> f, double x0, double h,
    std::size_t n) {
  std::vector<Complex> v(n);
  for (std::size_t j = 0; j < n; ++j) {
    v[j] = f->Value(x0 + h * static_cast<double>(j));
  }
  SampledSignal s(x0, h, std::move(v));
  s.analytic_ = std::move(f);
  return s;
}

SampledSignal SampledSignal::FromAnalytic(
    std::shared_ptr<const AnalyticSignal> f, double L, double h) {
  auto half = static_cast<std::size_t>(std::llround(L / h));
  return FromAnalytic(std::move(f), -h * static_cast<double>(half), h,
                      2 * half + 1);
}

SampledSignal SampledSignal::FromCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfig, "cannot open " + path);
  std::vector<double> xs;
  std::vector<Complex> vs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double x, re, im = 0.0;
    if (!(ss >> x >> re)) {
      if (xs.empty()) continue;  // header
      throw Error(ErrorCode::kConfig, "bad signal row: " + line);
    }
    ss >> im;
    xs.push_back(x);
    vs.emplace_back(re, im);
  }
  if (xs.size() < 2) throw Error(ErrorCode::kConfig, "signal needs >= 2 rows");
  double h = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
  for (std::size_t j = 0; j < xs.size(); ++j) {
    double expect = xs.front() + h * static_cast<double>(j);
    if (std::abs(xs[j] - expect) > 1e-9 * std::max(1.0, std::abs(expect))) {
      throw Error(ErrorCode::kConfig, "signal grid is not uniform");
    }
  }
  return SampledSignal(xs.front(), h, std::move(vs));
}

void SampledSignal::WriteCsv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kConfig, "cannot write " + path);
  out << "x,re,im\n" << std::setprecision(17);
  for (std::size_t j = 0; j < size(); ++j) {
    out << x(j) << ',' << values_[j].real() << ',' << values_[j].imag()
        << '\n';
  }
}

double SampledSignal::weight(std::size_t j) const {
  if (values_.size() == 1) return h_;
  return (j == 0 || j + 1 == values_.size()) ? 0.5 * h_ : h_;
}

bool SampledSignal::IsZero() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](const Complex& v) { return v == 0.0; });
}

double SampledSignal::L2Norm() const {
  double s = 0.0;
  for (std::size_t j = 0; j < size(); ++j) s += weight(j) * std::norm(values_[j]);
  return std::sqrt(s);
}

double SampledSignal::LqNorm(double q, const Weight& w) const {
  if (!(q > 0.0)) throw Error(ErrorCode::kInvalidExponent, "need q > 0");
  double s = 0.0;
  for (std::size_t j = 0; j < size(); ++j) {
    double a = std::abs(values_[j]);
    if (a == 0.0) continue;
    double lo = std::max(x0_, x(j) - 0.5 * h_);
    double hi = std::min(end(), x(j) + 0.5 * h_);
    if (lo < hi) s += std::pow(a, q) * w.Integral(lo, hi);
  }
  return std::pow(s, 1.0 / q);
}

Complex SampledSignal::Dtft(double xi) const {
  Complex sum = 0.0;
  for (std::size_t j = 0; j < size(); ++j) {
    if (values_[j] == 0.0) continue;
    sum += weight(j) * values_[j] * std::exp(Complex(0.0, -xi * x(j)));
  }
  return sum;
}

SampledSignal SampledSignal::Translated(double a) const {
  SampledSignal s(x0_ + a, h_, values_);
  if (analytic_) {
    s.analytic_ = std::make_shared<AnalyticSignal>(analytic_->Translated(a));
  }
  return s;
}

SampledSignal SampledSignal::Modulated(double eta0) const {
  std::vector<Complex> v = values_;
  for (std::size_t j = 0; j < v.size(); ++j) {
    v[j] *= std::exp(Complex(0.0, eta0 * x(j)));
  }
  SampledSignal s(x0_, h_, std::move(v));
  if (analytic_) {
    s.analytic_ = std::make_shared<AnalyticSignal>(analytic_->Modulated(eta0));
  }
  return s;
}

SampledSignal SampledSignal::Dilated(double r) const {
  if (!(r > 0.0)) throw Error(ErrorCode::kInvalidArgument, "dilation r > 0");
  SampledSignal s(x0_ * r, h_ * r, values_);
  if (analytic_) {
    s.analytic_ = std::make_shared<AnalyticSignal>(analytic_->Dilated(r));
  }
  return s;
}

SampledSignal SampledSignal::Scaled(Complex c) const {
  std::vector<Complex> v = values_;
  for (Complex& z : v) z *= c;
  SampledSignal s(x0_, h_, std::move(v));
  if (analytic_) {
    s.analytic_ = std::make_shared<AnalyticSignal>(analytic_->Scaled(c));
  }
  return s;
}

}  // namespace wpe
