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

#include "wpe/dyadic.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace wpe {

namespace {

using Wide = long double;  // 64-bit mantissa: exact for 3x * 2^j below

int Parity(int j) { return (j % 2 == 0) ? 1 : -1; }

// Exact endpoint numerator e = 3m + (-1)^j k; the endpoint is e 2^-j / 3.
Wide EndpointNumerator(int shift, int level, std::int64_t m) {
  return 3.0L * static_cast<Wide>(m) +
         static_cast<Wide>(Parity(level) * shift);
}

// 3 x 2^j, exact for double x.
Wide Scaled(double x, int level) {
  return std::ldexp(3.0L * static_cast<Wide>(x), level);
}

int CoarseLevel(double length) {
  return -static_cast<int>(std::lround(std::log2(length)));
}

}  // namespace

double DyadicInterval::lo() const {
  return static_cast<double>(
      std::ldexp(EndpointNumerator(shift, level, m), -level) / 3.0L);
}

double DyadicInterval::hi() const {
  return static_cast<double>(
      std::ldexp(EndpointNumerator(shift, level, m + 1), -level) / 3.0L);
}

double DyadicInterval::length() const { return std::ldexp(1.0, -level); }

bool DyadicInterval::Contains(double x) const {
  Wide sx = Scaled(x, level);
  return EndpointNumerator(shift, level, m) <= sx &&
         sx < EndpointNumerator(shift, level, m + 1);
}

bool DyadicInterval::ContainsClosed(double a, double b) const {
  return EndpointNumerator(shift, level, m) <= Scaled(a, level) &&
         Scaled(b, level) < EndpointNumerator(shift, level, m + 1);
}

DyadicGrid::DyadicGrid(int shift_index) : shift_(shift_index) {
  if (shift_index < 0 || shift_index > 2) {
    throw Error(ErrorCode::kInvalidArgument, "shift index must be 0, 1 or 2");
  }
}

DyadicInterval DyadicGrid::Locate(double x, int level) const {
  // m = floor((3 x 2^j - (-1)^j k) / 3), computed without rounding.
  Wide num = Scaled(x, level) - static_cast<Wide>(Parity(level) * shift_);
  Wide q = std::floor(num / 3.0L);
  while (3.0L * q > num) q -= 1.0L;
  while (3.0L * (q + 1.0L) <= num) q += 1.0L;
  return DyadicInterval{shift_, level, static_cast<std::int64_t>(q)};
}

GridCover three_grids_cover(Interval I) {
  double len = I.length();
  if (!(len > 0.0) || !std::isfinite(len)) {
    throw Error(ErrorCode::kInvalidInterval, "cover needs 0 < |I| < inf");
  }
  // Finest level with 2^-j >= 3|I|.
  int j = static_cast<int>(std::floor(-std::log2(3.0 * len)));
  while (std::ldexp(1.0, -j) < 3.0 * len) --j;
  while (std::ldexp(1.0, -(j + 1)) >= 3.0 * len) ++j;
  for (; std::ldexp(1.0, -j) <= 6.0 * len; --j) {
    for (int k = 0; k < 3; ++k) {
      DyadicInterval J = DyadicGrid(k).Locate(I.lo, j);
      if (J.ContainsClosed(I.lo, I.hi)) return GridCover{k, J};
    }
  }
  throw Error(ErrorCode::kInvalidArgument,
              "internal: no three-grid cover found");
}

double SampledFunction::operator()(double x) const {
  if (x < x0 || x >= end()) return 0.0;
  auto j = static_cast<std::size_t>((x - x0) / h);
  return j < values.size() ? values[j] : 0.0;
}

DyadicMaximal::DyadicMaximal(const SampledFunction& g, double p,
                             const Weight& w, int depth)
    : g_(g), p_(p), w_(w) {
  if (depth < 1) throw Error(ErrorCode::kInvalidArgument, "depth >= 1");
  if (!(p >= 1.0)) throw Error(ErrorCode::kInvalidExponent, "need p >= 1");
  int jc = CoarseLevel(std::max(g.end() - g.x0, g.h));
  j_lo_ = jc - depth;
  j_hi_ = jc + depth;
  prefix_.assign(g.values.size() + 1, 0.0);
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    double a = g.x0 + g.h * static_cast<double>(i);
    double v = std::pow(std::abs(g.values[i]), p);
    prefix_[i + 1] = prefix_[i] + (v == 0.0 ? 0.0 : v * w.Integral(a, a + g.h));
  }
}

double DyadicMaximal::Mass(double lo, double hi) const {
  lo = std::max(lo, g_.x0);
  hi = std::min(hi, g_.end());
  if (!(lo < hi)) return 0.0;
  double n = static_cast<double>(g_.values.size());
  double u0 = (lo - g_.x0) / g_.h, u1 = (hi - g_.x0) / g_.h;
  auto i0 = static_cast<std::size_t>(std::min(std::floor(u0), n - 1));
  auto i1 = static_cast<std::size_t>(std::min(std::floor(u1), n - 1));
  auto cell = [&](std::size_t i, double a, double b) {
    if (!(a < b)) return 0.0;
    double v = std::pow(std::abs(g_.values[i]), p_);
    return v == 0.0 ? 0.0 : v * w_.Integral(a, b);
  };
  auto cell_lo = [&](std::size_t i) {
    return g_.x0 + g_.h * static_cast<double>(i);
  };
  if (i0 == i1) return cell(i0, lo, hi);
  double total = cell(i0, lo, cell_lo(i0 + 1));
  total += prefix_[i1] - prefix_[i0 + 1];
  total += cell(i1, cell_lo(i1), hi);
  return total;
}

double DyadicMaximal::operator()(double x) const {
  double best = 0.0;
  DyadicGrid grid(0);
  for (int j = j_lo_; j <= j_hi_; ++j) {
    DyadicInterval Q = grid.Locate(x, j);
    double avg = Mass(Q.lo(), Q.hi()) / Q.length();
    best = std::max(best, std::pow(avg, 1.0 / p_));
  }
  return best;
}

double dyadic_maximal(const SampledFunction& g, double p, const Weight& w,
                      double x, int depth) {
  return DyadicMaximal(g, p, w, depth)(x);
}

double sharp_maximal(const SampledFunction& g, double x, int depth) {
  if (depth < 1) throw Error(ErrorCode::kInvalidArgument, "depth >= 1");
  int jc = CoarseLevel(std::max(g.end() - g.x0, g.h));
  DyadicGrid grid(0);
  double best = 0.0;
  std::vector<std::pair<double, double>> parts;  // (value, length)
  for (int j = jc - depth; j <= jc + depth; ++j) {
    DyadicInterval Q = grid.Locate(x, j);
    double qlo = Q.lo(), qhi = Q.hi();
    parts.clear();
    double covered = 0.0;
    double lo = std::max(qlo, g.x0), hi = std::min(qhi, g.end());
    if (lo < hi) {
      double n = static_cast<double>(g.values.size());
      auto i0 = static_cast<std::size_t>(
          std::min(std::floor((lo - g.x0) / g.h), n - 1));
      auto i1 = static_cast<std::size_t>(
          std::min(std::floor((hi - g.x0) / g.h), n - 1));
      for (std::size_t i = i0; i <= i1; ++i) {
        double a = std::max(lo, g.x0 + g.h * static_cast<double>(i));
        double b = std::min(hi, g.x0 + g.h * static_cast<double>(i + 1));
        if (a < b) {
          parts.emplace_back(std::abs(g.values[i]), b - a);
          covered += b - a;
        }
      }
    }
    double outside = Q.length() - covered;
    if (outside > 0.0) parts.emplace_back(0.0, outside);
    std::sort(parts.begin(), parts.end());
    double half = 0.5 * Q.length(), acc = 0.0, median = 0.0;
    for (const auto& [v, l] : parts) {
      acc += l;
      if (acc >= half) {
        median = v;
        break;
      }
    }
    double dev = 0.0;
    for (const auto& [v, l] : parts) dev += std::abs(v - median) * l;
    best = std::max(best, dev / Q.length());
  }
  return best;
}

CountingFunction::CountingFunction(std::vector<Interval> intervals)
    : intervals_(std::move(intervals)) {}

int CountingFunction::operator()(double x) const {
  int c = 0;
  for (const Interval& J : intervals_) c += (J.lo <= x && x < J.hi);
  return c;
}

int CountingFunction::Restricted(Interval I, double x) const {
  int c = 0;
  for (const Interval& J : intervals_) {
    c += (J.lo >= I.lo && J.hi <= I.hi && J.lo <= x && x < J.hi);
  }
  return c;
}

CountingFunction CountingFunction::RestrictedTo(Interval I) const {
  std::vector<Interval> kept;
  for (const Interval& J : intervals_) {
    if (J.lo >= I.lo && J.hi <= I.hi) kept.push_back(J);
  }
  return CountingFunction(std::move(kept));
}

std::vector<CountingFunction::Piece> CountingFunction::Pieces() const {
  std::vector<std::pair<double, int>> events;
  for (const Interval& J : intervals_) {
    if (J.lo < J.hi) {
      events.emplace_back(J.lo, +1);
      events.emplace_back(J.hi, -1);
    }
  }
  std::sort(events.begin(), events.end());
  std::vector<Piece> out;
  int level = 0;
  for (std::size_t i = 0; i < events.size();) {
    double x = events[i].first;
    while (i < events.size() && events[i].first == x) {
      level += events[i].second;
      ++i;
    }
    if (i < events.size() && level > 0) {
      out.push_back({x, events[i].first, level});
    }
  }
  return out;
}

double CountingFunction::LevelMass(const Weight& w, double level) const {
  double total = 0.0;
  for (const Piece& p : Pieces()) {
    if (p.value > level) total += w.Integral(p.lo, p.hi);
  }
  return total;
}

double CountingFunction::Integral(const Weight& w) const {
  double total = 0.0;
  for (const Piece& p : Pieces()) total += p.value * w.Integral(p.lo, p.hi);
  return total;
}

int counting_function(const CountingFunction& N, double x) { return N(x); }

GoodLambdaReport good_lambda_report(const CountingFunction& N,
                                    const SampledFunction& f,
                                    const Weight& w, double q, double r,
                                    double lam,
                                    const std::vector<double>& t_grid,
                                    const std::vector<double>& c_grid,
                                    int depth) {
  if (!(q > 2.0) || !(r > 0.0 && r < 1.0)) {
    throw Error(ErrorCode::kInvalidExponent, "need q > 2 and 0 < r < 1");
  }
  if (!(lam > 0.0)) throw Error(ErrorCode::kInvalidArgument, "need lam > 0");
  GoodLambdaReport rep;
  rep.q = q;
  rep.r = r;
  rep.lam = lam;
  rep.c_grid = c_grid;
  std::sort(rep.c_grid.begin(), rep.c_grid.end());
  rep.trivially_holds = N.Pieces().empty();

  // M_{q,w} f on the cells of f's grid, widened by the support of N.
  double lo = f.x0, hi = f.end();
  for (const Interval& J : N.intervals()) {
    lo = std::min(lo, J.lo);
    hi = std::max(hi, J.hi);
  }
  DyadicMaximal M(f, q, w, depth);
  auto cells = static_cast<std::size_t>(std::ceil((hi - lo) / f.h));
  std::vector<double> mvals(cells), masses(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    double a = lo + f.h * static_cast<double>(i);
    double b = std::min(hi, a + f.h);
    mvals[i] = M(0.5 * (a + b));
    masses[i] = w.Integral(a, b);
  }

  std::vector<bool> holds(rep.c_grid.size(), true);
  for (double t : t_grid) {
    GoodLambdaRow row;
    row.t = t;
    row.mass_N_t = N.LevelMass(w, t);
    row.mass_N_quarter = N.LevelMass(w, t / 4.0);
    for (std::size_t ci = 0; ci < rep.c_grid.size(); ++ci) {
      double thr = rep.c_grid[ci] * lam * std::pow(t, r / q);
      double m = 0.0;
      for (std::size_t i = 0; i < cells; ++i) {
        if (mvals[i] > thr) m += masses[i];
      }
      row.mass_M.push_back(m);
      if (row.mass_N_t > row.mass_N_quarter / rep.L + m) holds[ci] = false;
    }
    rep.rows.push_back(std::move(row));
  }
  for (std::size_t ci = 0; ci < rep.c_grid.size(); ++ci) {
    if (holds[ci]) rep.c_max = rep.c_grid[ci];
  }
  if (rep.trivially_holds && !rep.c_grid.empty()) {
    rep.c_max = std::numeric_limits<double>::infinity();
  }
  return rep;
}

}  // namespace wpe
