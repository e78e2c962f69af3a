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

#include "wpe/tents.h"

#include <cmath>
#include <sstream>

namespace wpe {

void TentParams::Validate() const {
  if (!(b > 0.0) || !(C1 > b) || !(C2 > b) || !std::isfinite(C1) ||
      !std::isfinite(C2)) {
    throw Error(ErrorCode::kInvalidArgument,
                "tent parameters need min(C1, C2) > b > 0");
  }
}

const char* RegionName(Region r) {
  switch (r) {
    case Region::kWhole: return "whole";
    case Region::kCore: return "core";
    case Region::kLacunary: return "lacunary";
    case Region::kLacunaryUpper: return "lacunary_upper";
    case Region::kLacunaryLower: return "lacunary_lower";
  }
  return "?";
}

bool tent_contains(const Tent& T, const Point3& p, Region region) {
  if (!(p.t < T.s) || !(std::abs(p.y - T.x) < T.s - p.t)) return false;
  double d = p.eta - T.xi;
  if (!(d > -T.params.C1 / p.t) || !(d < T.params.C2 / p.t)) return false;
  bool core = std::abs(d) <= T.params.b / p.t;
  switch (region) {
    case Region::kWhole: return true;
    case Region::kCore: return core;
    case Region::kLacunary: return !core;
    case Region::kLacunaryUpper: return !core && d >= 0.0;
    case Region::kLacunaryLower: return !core && d < 0.0;
  }
  return false;
}

double LatticePoint::x() const {
  return std::ldexp(static_cast<double>(n), k - 4);
}

double LatticePoint::s() const { return std::ldexp(1.0, k); }

double LatticePoint::xi(double b, const LatticeSpec& spec) const {
  return std::ldexp(static_cast<double>(m), spec.xi_log2_step - k) * b;
}

Tent LatticePoint::tent(const TentParams& params,
                        const LatticeSpec& spec) const {
  return Tent{x(), xi(params.b, spec), s(), params};
}

namespace {

int Sign128(__int128 a, __int128 b) { return a < b ? -1 : (a > b ? 1 : 0); }

}  // namespace

int CompareX(const LatticePoint& a, const LatticePoint& b) {
  int kmin = std::min(a.k, b.k);
  __int128 va = static_cast<__int128>(a.n) << (a.k - kmin);
  __int128 vb = static_cast<__int128>(b.n) << (b.k - kmin);
  return Sign128(va, vb);
}

int CompareXi(const LatticePoint& a, const LatticePoint& b) {
  int kmax = std::max(a.k, b.k);
  __int128 va = static_cast<__int128>(a.m) << (kmax - a.k);
  __int128 vb = static_cast<__int128>(b.m) << (kmax - b.k);
  return Sign128(va, vb);
}

bool LatticeOrderLess(const LatticePoint& a, const LatticePoint& b) {
  if (a.k != b.k) return a.k > b.k;
  if (a.n != b.n) return a.n < b.n;
  return a.m > b.m;
}

void Window3::Validate() const {
  if (!(y.lo <= y.hi) || !(eta.lo <= eta.hi) || !(t_min > 0.0) ||
      !(t_min < t_max)) {
    throw Error(ErrorCode::kInvalidArgument,
                "window needs nonempty ranges and 0 < t_min < t_max");
  }
}

std::vector<LatticePoint> lattice_tents(const Window3& window,
                                        const TentParams& params,
                                        const LatticeOptions& options) {
  window.Validate();
  params.Validate();
  int k_lo = static_cast<int>(std::ceil(std::log2(window.t_min)));
  // A tent of scale s only holds t < s, so s = t_min misses the window.
  while (std::ldexp(1.0, k_lo) <= window.t_min) ++k_lo;
  while (std::ldexp(1.0, k_lo - 1) > window.t_min) --k_lo;
  int k_hi = static_cast<int>(std::floor(std::log2(2.0 * window.t_max)));
  while (std::ldexp(1.0, k_hi) > 2.0 * window.t_max) --k_hi;
  while (std::ldexp(1.0, k_hi + 1) <= 2.0 * window.t_max) ++k_hi;

  struct Range {
    int k;
    std::int64_t n0, n1, m0, m1;
  };
  std::vector<Range> ranges;
  std::size_t total = 0;
  for (int k = k_hi; k >= k_lo; --k) {
    double s = std::ldexp(1.0, k);
    double dx = std::ldexp(1.0, k - 4);
    double reach = options.x_reach * s;
    // Open condition x in (y.lo - reach, y.hi + reach).
    auto n0 = static_cast<std::int64_t>(
        std::floor((window.y.lo - reach) / dx) + 1.0);
    auto n1 = static_cast<std::int64_t>(
        std::ceil((window.y.hi + reach) / dx) - 1.0);
    if (options.x_reach == 0.0) {
      n0 = static_cast<std::int64_t>(std::ceil(window.y.lo / dx));
      n1 = static_cast<std::int64_t>(std::floor(window.y.hi / dx));
    }
    double dxi = std::ldexp(1.0, options.spec.xi_log2_step - k) * params.b;
    double pad = options.xi_pad * params.c_max() / s;
    auto m0 = static_cast<std::int64_t>(std::ceil((window.eta.lo - pad) / dxi));
    auto m1 =
        static_cast<std::int64_t>(std::floor((window.eta.hi + pad) / dxi));
    if (n1 < n0 || m1 < m0) continue;
    std::size_t count = static_cast<std::size_t>(n1 - n0 + 1) *
                        static_cast<std::size_t>(m1 - m0 + 1);
    total += count;
    if (total > options.cap) {
      throw Error(ErrorCode::kTooManyTents,
                  "window produces more than " + std::to_string(options.cap) +
                      " lattice tents");
    }
    ranges.push_back({k, n0, n1, m0, m1});
  }
  std::vector<LatticePoint> out;
  out.reserve(total);
  for (const Range& r : ranges) {
    for (std::int64_t n = r.n0; n <= r.n1; ++n) {
      for (std::int64_t m = r.m1; m >= r.m0; --m) {
        out.push_back({r.k, n, m});
      }
    }
  }
  return out;
}

bool centrally_contains(const LatticePoint& lp, const TentParams& params,
                        const Point3& p, const LatticeSpec& spec) {
  double s = lp.s();
  if (!(std::ldexp(s, -3) <= p.t && p.t <= std::ldexp(s, -2))) return false;
  if (!(std::abs(p.y - lp.x()) <= std::ldexp(s, -4))) return false;
  return std::abs(p.eta - lp.xi(params.b, spec)) <= std::ldexp(params.b / s, -8);
}

CentralParents central_lattice_parents(const Point3& p,
                                       const TentParams& params,
                                       const LatticeSpec& spec) {
  if (!(p.t > 0.0) || !std::isfinite(p.t) || !std::isfinite(p.y) ||
      !std::isfinite(p.eta)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid point");
  }
  // Smallest power of two s with 4t <= s; then s <= 8t automatically.
  int k = static_cast<int>(std::ceil(std::log2(4.0 * p.t)));
  while (std::ldexp(1.0, k) < 4.0 * p.t) ++k;
  while (std::ldexp(1.0, k - 1) >= 4.0 * p.t) --k;

  // Nearest x on the 2^(k-4) grid, ties to the smaller one.
  double u = std::ldexp(p.y, 4 - k);
  auto n = static_cast<std::int64_t>(std::ceil(u - 0.5));
  if (static_cast<double>(n) - u > 0.5) --n;
  if (u - static_cast<double>(n) > 0.5) ++n;

  double dxi = std::ldexp(1.0, spec.xi_log2_step - k) * params.b;
  auto m_lo = static_cast<std::int64_t>(std::floor(p.eta / dxi));
  LatticePoint lo{k, n, m_lo};
  while (lo.xi(params.b, spec) > p.eta) --lo.m;
  while (LatticePoint{k, n, lo.m + 1}.xi(params.b, spec) <= p.eta) ++lo.m;
  LatticePoint hi = lo;
  if (hi.xi(params.b, spec) < p.eta) ++hi.m;

  CentralParents out{lo, hi};
  if (spec.xi_log2_step == LatticeSpec{}.xi_log2_step &&
      (!centrally_contains(lo, params, p) ||
       !centrally_contains(hi, params, p))) {
    throw Error(ErrorCode::kInvalidArgument,
                "internal: central parent inequalities failed");
  }
  return out;
}

bool in_strip(double x_s, double s_s, const Point3& p) {
  return p.t > 0.0 && p.t < s_s && std::abs(p.y - x_s) < s_s - p.t;
}

std::optional<Tent> strip_intersect(const Tent& T, double x_s, double s_s) {
  if (!(s_s > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "strip needs s > 0");
  }
  double lo = std::max(T.x - T.s, x_s - s_s);
  double hi = std::min(T.x + T.s, x_s + s_s);
  if (!(lo < hi)) return std::nullopt;
  return Tent{0.5 * (lo + hi), T.xi, 0.5 * (hi - lo), T.params};
}

std::string ToString(const LatticePoint& lp) {
  std::ostringstream os;
  os << "(k=" << lp.k << ",n=" << lp.n << ",m=" << lp.m << ")";
  return os.str();
}

}  // namespace wpe
