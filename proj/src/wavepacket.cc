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

#include "wpe/wavepacket.h"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace wpe {

namespace {

constexpr int kZeroPad = 4;  // frequency grid spacing pi / (kZeroPad * 2E)
constexpr double kMinSupportSamples = 64.0;

double Bump(double u) {
  double v = 1.0 - u * u;
  if (v <= 0.0) return 0.0;
  return std::exp(1.0 - 1.0 / v);
}

}  // namespace

std::shared_ptr<const MotherWavelet> MotherWavelet::Build(
    double delta, double time_extent, std::size_t n_samples) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw Error(ErrorCode::kInvalidArgument, "delta must be positive");
  }
  if (!(time_extent > 0.0) || !std::isfinite(time_extent)) {
    throw Error(ErrorCode::kInvalidArgument, "time extent must be positive");
  }
  if (n_samples < (1u << 10)) {
    throw Error(ErrorCode::kInvalidArgument, "need at least 2^10 samples");
  }
  double h = time_extent / static_cast<double>(n_samples);
  std::size_t n_dct = kZeroPad * n_samples + 1;
  double dxi = M_PI / (static_cast<double>(n_dct - 1) * h);
  if (2.0 * delta / dxi < kMinSupportSamples) {
    throw Error(ErrorCode::kUnderResolved,
                "fewer than 64 frequency samples inside the support");
  }
  if (h * delta > 0.25) {
    throw Error(ErrorCode::kUnderResolved,
                "time spacing too coarse for the frequency support");
  }

  std::vector<double> in(n_dct), out(n_dct);
  for (std::size_t j = 0; j < n_dct; ++j) {
    in[j] = Bump(static_cast<double>(j) * dxi / delta);
  }
  fftw_plan plan = fftw_plan_r2r_1d(static_cast<int>(n_dct), in.data(),
                                    out.data(), FFTW_REDFT00, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);

  auto phi = std::shared_ptr<MotherWavelet>(new MotherWavelet());
  phi->delta_ = delta;
  phi->extent_ = time_extent;
  phi->h_ = h;
  phi->samples_.resize(n_samples + 3);
  for (std::size_t k = 0; k < phi->samples_.size(); ++k) {
    phi->samples_[k] = dxi / M_PI * 0.5 * out[k];
  }

  // (1/2pi) int phi^2 = (1/pi) int_0^delta Bump^2, trapezoid on a fine
  // grid (spectrally accurate for a smooth compactly supported integrand).
  const int m = 1 << 14;
  double s = 0.5;
  for (int j = 1; j < m; ++j) {
    double b = Bump(static_cast<double>(j) / m);
    s += b * b;
  }
  phi->l2_squared_ = s * (delta / m) / M_PI;
  return phi;
}

std::shared_ptr<const MotherWavelet> MotherWavelet::Standard(double b) {
  static std::mutex mu;
  static std::map<double, std::shared_ptr<const MotherWavelet>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(b);
  if (it != cache.end()) return it->second;
  double delta = std::ldexp(b, -8);
  double extent = std::ldexp(1.0, 10) / delta;
  auto n = static_cast<std::size_t>(std::llround(extent));
  auto phi = Build(delta, extent, std::max<std::size_t>(n, 1u << 10));
  cache.emplace(b, phi);
  return phi;
}

double MotherWavelet::Profile(double xi) const { return Bump(xi / delta_); }

double MotherWavelet::operator()(double x) const {
  double ax = std::abs(x);
  if (ax > extent_) return 0.0;
  double u = ax / h_;
  auto k = static_cast<std::ptrdiff_t>(std::floor(u));
  double f = u - static_cast<double>(k);
  auto at = [&](std::ptrdiff_t i) {
    return samples_[static_cast<std::size_t>(i < 0 ? -i : i)];
  };
  double p0 = at(k - 1), p1 = at(k), p2 = at(k + 1), p3 = at(k + 2);
  // Lagrange weights on nodes -1, 0, 1, 2.
  double w0 = -f * (f - 1.0) * (f - 2.0) / 6.0;
  double w1 = (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0;
  double w2 = -(f + 1.0) * f * (f - 2.0) / 2.0;
  double w3 = (f + 1.0) * f * (f - 1.0) / 6.0;
  return w0 * p0 + w1 * p1 + w2 * p2 + w3 * p3;
}

double MotherWavelet::L1Norm() const {
  std::size_t n = samples_.size() - 3;
  double s = 0.5 * std::abs(samples_[0]) + 0.5 * std::abs(samples_[n]);
  for (std::size_t k = 1; k < n; ++k) s += std::abs(samples_[k]);
  return 2.0 * s * h_;
}

double MotherWavelet::DecayConstant(int N) const {
  double best = 0.0;
  std::size_t n = samples_.size() - 3;
  for (std::size_t k = 0; k <= n; ++k) {
    double x = h_ * static_cast<double>(k);
    best = std::max(best, std::abs(samples_[k]) * std::pow(1.0 + x, N));
  }
  return best;
}

Complex eval_wave_packet(const MotherWavelet& phi, const Point3& p, double x) {
  if (!(p.t > 0.0)) throw Error(ErrorCode::kInvalidArgument, "need t > 0");
  double d = p.y - x;
  return std::exp(Complex(0.0, -p.eta * d)) * (phi(d / p.t) / p.t);
}

Complex transform(const SampledSignal& f, const MotherWavelet& phi,
                  const Point3& p, double t_min) {
  if (!(p.t > 0.0) || p.t < t_min) {
    throw Error(ErrorCode::kUnderResolvedScale, "t below configured t_min");
  }
  if (p.t < 4.0 * f.h()) {
    throw Error(ErrorCode::kUnderResolvedScale, "t below 4h");
  }
  if (f.size() == 0) return 0.0;
  double reach = phi.time_extent() * p.t;
  double jlo = std::ceil((p.y - reach - f.x0()) / f.h());
  double jhi = std::floor((p.y + reach - f.x0()) / f.h());
  jlo = std::max(jlo, 0.0);
  jhi = std::min(jhi, static_cast<double>(f.size()) - 1.0);
  Complex sum = 0.0;
  for (auto j = static_cast<std::ptrdiff_t>(jlo);
       j <= static_cast<std::ptrdiff_t>(jhi); ++j) {
    auto ju = static_cast<std::size_t>(j);
    const Complex& v = f.values()[ju];
    if (v == 0.0) continue;
    double d = p.y - f.x(ju);
    sum += f.weight(ju) * v * std::exp(Complex(0.0, p.eta * d)) *
           phi(d / p.t);
  }
  return sum / p.t;
}

TransformEngine::TransformEngine(WaveletPtr phi, SampledSignal f,
                                 EngineOptions options)
    : phi_(std::move(phi)), f_(std::move(f)), options_(options) {
  zero_ = f_.IsZero();
  const auto& a = f_.analytic();
  analytic_ = options_.use_analytic && a != nullptr;
  if (analytic_) {
    zero_ = zero_ || a->empty();
    std::vector<Interval> bands = a->AtomBands();
    std::sort(bands.begin(), bands.end(),
              [](const Interval& u, const Interval& v) { return u.lo < v.lo; });
    for (const Interval& b : bands) {
      if (!bands_.empty() && b.lo <= bands_.back().hi) {
        bands_.back().hi = std::max(bands_.back().hi, b.hi);
      } else {
        bands_.push_back(b);
      }
    }
    Interval s = a->Support();
    center_ = s.center();
    radius_ = 0.5 * s.length();
  } else {
    center_ = 0.5 * (f_.x0() + f_.end());
    radius_ = 0.5 * (f_.end() - f_.x0());
  }
}

Complex TransformEngine::Spectrum(double xi) const {
  return analytic_ ? f_.analytic()->Spectrum(xi) : f_.Dtft(xi);
}

bool TransformEngine::Vanishes(double eta, double t) const {
  if (zero_) return true;
  if (!analytic_) return false;
  double lo = eta - phi_->delta() / t, hi = eta + phi_->delta() / t;
  for (const Interval& b : bands_) {
    if (b.lo < hi && lo < b.hi) return false;
  }
  return true;
}

void TransformEngine::Row(double eta, double t, const double* ys,
                          std::size_t n, Complex* out) const {
  if (!(t > 0.0) || t < t_floor()) {
    throw Error(ErrorCode::kUnderResolvedScale, "t below 4h");
  }
  std::fill(out, out + n, Complex(0.0));
  if (n == 0 || Vanishes(eta, t)) return;
  double ymax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ymax = std::max(ymax, std::abs(ys[i] - center_));
  }
  double period = (ymax + radius_ + phi_->tail_radius() * t) * options_.safety;
  double max_step = 2.0 * M_PI / period;
  double half = phi_->delta() / t;
  // Integrate over each band piece meeting the support separately.
  std::vector<Interval> pieces;
  if (analytic_) {
    for (const Interval& b : bands_) {
      double lo = std::max(b.lo, eta - half), hi = std::min(b.hi, eta + half);
      if (lo < hi) pieces.push_back({lo, hi});
    }
  } else {
    pieces.push_back({eta - half, eta + half});
  }
  std::vector<double> nodes;
  std::vector<Complex> weights;
  for (const Interval& piece : pieces) {
    auto m = static_cast<std::size_t>(std::ceil(piece.length() / max_step));
    m = std::max<std::size_t>(m, 2);
    double step = piece.length() / static_cast<double>(m);
    for (std::size_t j = 0; j <= m; ++j) {
      double xi = piece.lo + step * static_cast<double>(j);
      double g = phi_->Profile(t * (xi - eta));
      if (g == 0.0) continue;
      double wt = (j == 0 || j == m) ? 0.5 * step : step;
      Complex v = Spectrum(xi) * (g * wt / (2.0 * M_PI));
      if (v == 0.0) continue;
      nodes.push_back(xi);
      weights.push_back(v);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    Complex sum = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      double ph = nodes[j] * ys[i];
      sum += weights[j] * Complex(std::cos(ph), std::sin(ph));
    }
    out[i] = sum;
  }
}

Complex TransformEngine::operator()(const Point3& p) const {
  Complex v;
  Row(p.eta, p.t, &p.y, 1, &v);
  return v;
}

std::vector<Complex> transform_batch(const TransformEngine& engine,
                                     const Grid3& grid) {
  std::vector<Complex> out(grid.t.size() * grid.eta.size() * grid.y.size());
  std::size_t ny = grid.y.size();
  std::size_t at = 0;
  for (double t : grid.t) {
    for (double eta : grid.eta) {
      engine.Row(eta, t, grid.y.data(), ny, out.data() + at);
      at += ny;
    }
  }
  return out;
}

Complex packet_inner_product(const MotherWavelet& phi, const Point3& p1,
                             const Point3& p2, double refine) {
  if (!(p1.t > 0.0) || !(p2.t > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "need t > 0");
  }
  double d = phi.delta();
  double lo = std::max(p1.eta - d / p1.t, p2.eta - d / p2.t);
  double hi = std::min(p1.eta + d / p1.t, p2.eta + d / p2.t);
  if (!(lo < hi)) return 0.0;
  double dy = p1.y - p2.y;
  double period =
      (std::abs(dy) + phi.tail_radius() * (p1.t + p2.t)) * 1.25 * refine;
  auto m = static_cast<std::size_t>(std::ceil((hi - lo) * period / (2 * M_PI)));
  m = std::max<std::size_t>(m, 16);
  double step = (hi - lo) / static_cast<double>(m);
  Complex sum = 0.0;
  for (std::size_t j = 1; j < m; ++j) {
    double xi = lo + step * static_cast<double>(j);
    double g = phi.Profile(p1.t * (xi - p1.eta)) * phi.Profile(p2.t * (xi - p2.eta));
    if (g == 0.0) continue;
    sum += g * std::exp(Complex(0.0, -xi * dy));
  }
  return sum * (step / (2.0 * M_PI));
}

DecayReport check_decay_bound(
    const MotherWavelet& phi,
    const std::vector<std::pair<Point3, Point3>>& pairs, int N,
    double refine) {
  if (N < 1) throw Error(ErrorCode::kInvalidArgument, "need N >= 1");
  DecayReport rep;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    Point3 a = pairs[i].first, b = pairs[i].second;
    if (b.t < a.t) std::swap(a, b);
    double ip = std::abs(packet_inner_product(phi, a, b, refine));
    double u = (a.y - b.y) / b.t;
    double r = ip * b.t * std::pow(1.0 + u * u, N);
    rep.ratios.push_back(r);
    if (r > rep.max_ratio) {
      rep.max_ratio = r;
      rep.worst_pair = i;
    }
  }
  return rep;
}

}  // namespace wpe
