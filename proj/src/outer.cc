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

#include "wpe/outer.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace wpe {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Window3 Intersect(const Window3& a, const Window3& b) {
  Window3 w;
  w.y = {std::max(a.y.lo, b.y.lo), std::min(a.y.hi, b.y.hi)};
  w.eta = {std::max(a.eta.lo, b.eta.lo), std::min(a.eta.hi, b.eta.hi)};
  w.t_min = std::max(a.t_min, b.t_min);
  w.t_max = std::min(a.t_max, b.t_max);
  return w;
}

// Whole-tent membership split into the row part and the y part.
bool RowInTent(const Tent& E, double eta, double t) {
  if (!(t < E.s)) return false;
  double d = eta - E.xi;
  return -E.params.C1 / t < d && d < E.params.C2 / t;
}

bool YInTent(const Tent& E, double y, double t) {
  return std::abs(y - E.x) < E.s - t;
}

}  // namespace

Window3 EverywhereWindow() {
  Window3 w;
  w.y = {-kInf, kInf};
  w.eta = {-kInf, kInf};
  w.t_min = std::numeric_limits<double>::min();
  w.t_max = kInf;
  return w;
}

void Field::Row(double eta, double t, const double* ys, std::size_t n,
                Complex* out) const {
  std::fill(out, out + n, Complex(0.0));
  if (!(eta >= window_.eta.lo && eta <= window_.eta.hi && t >= window_.t_min &&
        t <= window_.t_max)) {
    return;
  }
  if (RowVanishes(eta, t)) return;
  std::size_t lo = 0;
  while (lo < n && !(ys[lo] >= window_.y.lo && ys[lo] <= window_.y.hi)) ++lo;
  if (lo == n) return;
  // Rows are evaluated in contiguous runs inside the y-window.
  std::size_t i = lo;
  while (i < n) {
    if (!(ys[i] >= window_.y.lo && ys[i] <= window_.y.hi)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && ys[j] >= window_.y.lo && ys[j] <= window_.y.hi) ++j;
    EvalRow(eta, t, ys + i, j - i, out + i);
    i = j;
  }
}

void Field::EvalRow(double eta, double t, const double* ys, std::size_t n,
                    Complex* out) const {
  for (std::size_t i = 0; i < n; ++i) out[i] = Eval({ys[i], eta, t});
}

CombinationField::CombinationField(
    std::vector<std::pair<Complex, FieldPtr>> terms)
    : Field([&] {
        Window3 w = EverywhereWindow();
        for (const auto& term : terms) w = Intersect(w, term.second->window());
        return w;
      }()),
      terms_(std::move(terms)) {}

Complex CombinationField::Eval(const Point3& p) const {
  Complex sum = 0.0;
  for (const auto& [c, F] : terms_) sum += c * (*F)(p);
  return sum;
}

void CombinationField::EvalRow(double eta, double t, const double* ys,
                               std::size_t n, Complex* out) const {
  std::vector<Complex> tmp(n);
  std::fill(out, out + n, Complex(0.0));
  for (const auto& [c, F] : terms_) {
    F->Row(eta, t, ys, n, tmp.data());
    for (std::size_t i = 0; i < n; ++i) out[i] += c * tmp[i];
  }
}

FieldPtr Sum(FieldPtr F, FieldPtr G) {
  return std::make_shared<CombinationField>(
      std::vector<std::pair<Complex, FieldPtr>>{{1.0, std::move(F)},
                                                {1.0, std::move(G)}});
}

FieldPtr Scale(Complex c, FieldPtr F) {
  return std::make_shared<CombinationField>(
      std::vector<std::pair<Complex, FieldPtr>>{{c, std::move(F)}});
}

ExcludedField::ExcludedField(FieldPtr base, std::vector<Tent> excluded)
    : Field(base->window()),
      base_(std::move(base)),
      excluded_(std::move(excluded)) {}

bool ExcludedField::Excluded(const Point3& p) const {
  for (const Tent& E : excluded_) {
    if (RowInTent(E, p.eta, p.t) && YInTent(E, p.y, p.t)) return true;
  }
  return false;
}

Complex ExcludedField::Eval(const Point3& p) const {
  return Excluded(p) ? Complex(0.0) : (*base_)(p);
}

void ExcludedField::EvalRow(double eta, double t, const double* ys,
                            std::size_t n, Complex* out) const {
  std::vector<const Tent*> row;
  for (const Tent& E : excluded_) {
    if (RowInTent(E, eta, t)) row.push_back(&E);
  }
  std::vector<char> masked(n, 0);
  bool any_open = false;
  for (std::size_t i = 0; i < n; ++i) {
    for (const Tent* E : row) {
      if (YInTent(*E, ys[i], t)) {
        masked[i] = 1;
        break;
      }
    }
    any_open = any_open || !masked[i];
  }
  std::fill(out, out + n, Complex(0.0));
  if (!any_open) return;
  base_->Row(eta, t, ys, n, out);
  for (std::size_t i = 0; i < n; ++i) {
    if (masked[i]) out[i] = 0.0;
  }
}

SampledField::SampledField(std::vector<double> y, std::vector<double> eta,
                           std::vector<double> t, std::vector<Complex> values)
    : Field([&] {
        if (y.size() < 2 || eta.size() < 2 || t.size() < 2) {
          throw Error(ErrorCode::kInvalidArgument,
                      "sampled field needs >= 2 nodes per axis");
        }
        Window3 w;
        w.y = {y.front(), y.back()};
        w.eta = {eta.front(), eta.back()};
        w.t_min = t.front();
        w.t_max = t.back();
        return w;
      }()),
      y_(std::move(y)),
      eta_(std::move(eta)),
      values_(std::move(values)) {
  for (double v : t) logt_.push_back(std::log(v));
  if (values_.size() != y_.size() * eta_.size() * logt_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "sampled field size mismatch");
  }
}

SampledField SampledField::FromField(const Field& F, std::vector<double> y,
                                     std::vector<double> eta,
                                     std::vector<double> t) {
  std::vector<Complex> v(y.size() * eta.size() * t.size());
  std::size_t at = 0;
  for (double tt : t) {
    for (double e : eta) {
      F.Row(e, tt, y.data(), y.size(), v.data() + at);
      at += y.size();
    }
  }
  return SampledField(std::move(y), std::move(eta), std::move(t), std::move(v));
}

Complex SampledField::Eval(const Point3& p) const {
  auto locate = [](const std::vector<double>& g, double v, std::size_t* i,
                   double* f) {
    auto it = std::upper_bound(g.begin(), g.end(), v);
    std::size_t j = static_cast<std::size_t>(it - g.begin());
    j = std::clamp<std::size_t>(j, 1, g.size() - 1) - 1;
    *i = j;
    *f = std::clamp((v - g[j]) / (g[j + 1] - g[j]), 0.0, 1.0);
  };
  std::size_t iy, ie, it;
  double fy, fe, ft;
  locate(y_, p.y, &iy, &fy);
  locate(eta_, p.eta, &ie, &fe);
  locate(logt_, std::log(p.t), &it, &ft);
  std::size_t ny = y_.size(), ne = eta_.size();
  Complex sum = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (int c = 0; c < 2; ++c) {
        double wgt = (a ? ft : 1.0 - ft) * (b ? fe : 1.0 - fe) *
                     (c ? fy : 1.0 - fy);
        if (wgt == 0.0) continue;
        sum += wgt * values_[((it + a) * ne + ie + b) * ny + iy + c];
      }
    }
  }
  return sum;
}

void TentQuadrature::Validate() const {
  if (n_y < 4 || n_gamma < 4 || n_logt < 4) {
    throw Error(ErrorCode::kInvalidArgument, "quadrature counts must be >= 4");
  }
  if (!(t_min >= 0.0) || depth < 1) {
    throw Error(ErrorCode::kInvalidArgument, "quadrature needs t_min >= 0");
  }
}

double TentQuadrature::TLow(double s) const {
  return std::max(std::ldexp(s, -depth), t_min);
}

void ForEachTentRow(const Tent& T, const TentQuadrature& q,
                    const std::function<void(const TentRow&)>& visit,
                    const double* u_strip) {
  const TentParams& th = T.params;
  double t_lo = q.TLow(T.s);
  if (!(t_lo < T.s)) return;
  double dtau = std::log(T.s / t_lo) / q.n_logt;
  double dg_lo = (th.C1 - th.b) / q.n_gamma;
  double dg_hi = (th.C2 - th.b) / q.n_gamma;
  TentRow row;
  row.ys.resize(static_cast<std::size_t>(q.n_y));
  for (int i = 0; i < q.n_logt; ++i) {
    double t = T.s * std::exp(-(i + 0.5) * dtau);
    double half = T.s - t;
    double lo = T.x - half, hi = T.x + half;
    if (u_strip != nullptr) {
      lo = std::max(lo, *u_strip - t);
      hi = std::min(hi, *u_strip + t);
    }
    if (!(lo < hi)) continue;
    double dy = (hi - lo) / q.n_y;
    for (int j = 0; j < q.n_y; ++j) row.ys[j] = lo + (j + 0.5) * dy;
    row.t = t;
    row.kind = NodeKind::kLacunaryLower;
    row.cell = dy * dg_lo * dtau;
    for (int k = 0; k < q.n_gamma; ++k) {
      row.eta = T.xi + (-th.C1 + (k + 0.5) * dg_lo) / t;
      visit(row);
    }
    row.kind = NodeKind::kLacunaryUpper;
    row.cell = dy * dg_hi * dtau;
    for (int k = 0; k < q.n_gamma; ++k) {
      row.eta = T.xi + (th.b + (k + 0.5) * dg_hi) / t;
      visit(row);
    }
    if (u_strip != nullptr) continue;
    row.kind = NodeKind::kCore;
    row.cell = 0.0;
    for (int k = 0; k < q.n_gamma; ++k) {
      double g = -th.b + 2.0 * th.b * k / (q.n_gamma - 1);
      row.eta = T.xi + g / t;
      visit(row);
    }
  }
}

double premeasure(const Weight& w, const Tent& T) {
  return w.Integral(T.x - T.s, T.x + T.s);
}

double square_function_ST(const Field& F, const Tent& T, double u,
                          const TentQuadrature& q) {
  q.Validate();
  double sum = 0.0;
  std::vector<Complex> vals(static_cast<std::size_t>(q.n_y));
  ForEachTentRow(
      T, q,
      [&](const TentRow& row) {
        F.Row(row.eta, row.t, row.ys.data(), row.ys.size(), vals.data());
        for (const Complex& v : vals) sum += std::norm(v) * row.cell / row.t;
      },
      &u);
  return std::sqrt(sum);
}

SizeParts size_parts(const Field& F, const Tent& T, const Weight& w,
                     const TentQuadrature& q, SizeVariant variant) {
  q.Validate();
  SizeParts parts;
  double lac = 0.0;
  std::vector<Complex> vals(static_cast<std::size_t>(q.n_y));
  ForEachTentRow(T, q, [&](const TentRow& row) {
    F.Row(row.eta, row.t, row.ys.data(), row.ys.size(), vals.data());
    if (row.kind == NodeKind::kCore) {
      for (const Complex& v : vals) parts.core = std::max(parts.core, std::abs(v));
      return;
    }
    for (std::size_t j = 0; j < vals.size(); ++j) {
      double a = std::norm(vals[j]);
      if (a == 0.0) continue;
      double y = row.ys[j];
      lac += a * w.Integral(y - row.t, y + row.t) * row.cell / row.t;
    }
  });
  double wI = premeasure(w, T);
  if (variant == SizeVariant::kUnnormalized) {
    parts.lacunary = std::sqrt(lac);
  } else if (wI > 0.0) {
    parts.lacunary = std::sqrt(lac / wI);
  } else {
    parts.degenerate = true;
  }
  parts.value = parts.lacunary + parts.core;
  return parts;
}

double size(const Field& F, const Tent& T, const Weight& w,
            const TentQuadrature& q, SizeVariant variant) {
  return size_parts(F, T, w, q, variant).value;
}

bool AxiomReport::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const AxiomCheck& c) { return c.passed; });
}

AxiomReport size_axioms_check(const Field& F, const Field& G, const Tent& T,
                              const Weight& w, const TentQuadrature& q,
                              SizeVariant variant) {
  AxiomReport rep;
  auto Fp = std::shared_ptr<const Field>(&F, [](const Field*) {});
  auto Gp = std::shared_ptr<const Field>(&G, [](const Field*) {});
  double sF = size(F, T, w, q, variant);
  double sG = size(G, T, w, q, variant);

  // Monotonicity applies when |F| <= |G| on every sampled node.
  bool dominated = true;
  std::vector<Complex> a(static_cast<std::size_t>(q.n_y)), b(a.size());
  ForEachTentRow(T, q, [&](const TentRow& row) {
    F.Row(row.eta, row.t, row.ys.data(), row.ys.size(), a.data());
    G.Row(row.eta, row.t, row.ys.data(), row.ys.size(), b.data());
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (std::abs(a[j]) > std::abs(b[j])) dominated = false;
    }
  });
  if (dominated) {
    rep.checks.push_back({"monotonicity", sF <= sG + 1e-9, sF, sG, ""});
  }

  const Complex c(-1.75, 0.5);
  double sc = size(*Scale(c, Fp), T, w, q, variant);
  double expect = std::abs(c) * sF;
  rep.checks.push_back({"homogeneity",
                        std::abs(sc - expect) <= 1e-10 * std::max(expect, 1e-300) ||
                            sc == expect,
                        sc, expect, "c = -1.75 + 0.5i"});

  double sFG = size(*Sum(Fp, Gp), T, w, q, variant);
  rep.checks.push_back(
      {"quasi-triangle", sFG <= sF + sG + 1e-9, sFG, sF + sG, "constant 1"});
  return rep;
}

ExclusionSet::ExclusionSet(const std::vector<Tent>& tents) {
  for (const Tent& T : tents) Add(T);
}

void ExclusionSet::Add(const Tent& T) {
  all_.push_back(T);
  auto it = std::find_if(by_scale_.begin(), by_scale_.end(),
                         [&](const auto& e) { return e.first <= T.s; });
  if (it == by_scale_.end() || it->first != T.s) {
    it = by_scale_.insert(it, {T.s, {}});
  }
  std::vector<Tent>& v = it->second;
  auto pos = std::upper_bound(
      v.begin(), v.end(), T.x,
      [](double x, const Tent& e) { return x < e.x; });
  v.insert(pos, T);
}

bool ExclusionSet::Contains(const Point3& p) const {
  for (const Tent& E : all_) {
    if (tent_contains(E, p, Region::kWhole)) return true;
  }
  return false;
}

void ExclusionSet::Relevant(const Tent& T, double t_lo,
                            std::vector<const Tent*>* out) const {
  out->clear();
  for (const auto& [s, v] : by_scale_) {
    if (!(s > t_lo)) break;
    double reach = s + T.s;
    auto it = std::upper_bound(
        v.begin(), v.end(), T.x - reach,
        [](double x, const Tent& e) { return x < e.x; });
    for (; it != v.end() && it->x < T.x + reach; ++it) {
      const TentParams& a = it->params;
      const TentParams& b = T.params;
      double d = it->xi - T.xi;
      if (!(d < (a.C1 + b.C2) / t_lo && -d < (b.C1 + a.C2) / t_lo)) continue;
      out->push_back(&*it);
    }
  }
}

namespace {

// Index spans of the cells [k - 1/2, k + 1/2] h + z0, k in [0, n), meeting
// (lo, hi), with the overlap length of each cell.
struct Span {
  std::int64_t a;
  std::int64_t b;
  double w;
};

int CellSpans(double z0, double h, std::int64_t n, double lo, double hi,
              Span* out) {
  if (!(hi > lo)) return 0;
  double u = std::clamp((lo - z0) / h, -1.0, static_cast<double>(n));
  double v = std::clamp((hi - z0) / h, -1.0, static_cast<double>(n));
  auto kl = static_cast<std::int64_t>(std::floor(u + 0.5));
  auto kr = static_cast<std::int64_t>(std::floor(v + 0.5));
  int c = 0;
  auto push = [&](std::int64_t a, std::int64_t b, double w) {
    a = std::max<std::int64_t>(a, 0);
    b = std::min<std::int64_t>(b, n - 1);
    if (a <= b && w > 0.0) out[c++] = {a, b, w};
  };
  if (kl == kr) {
    push(kl, kl, (v - u) * h);
  } else {
    push(kl, kl, (kl + 0.5 - u) * h);
    push(kl + 1, kr - 1, h);
    push(kr, kr, (v - (kr - 0.5)) * h);
  }
  return c;
}

// Integers j with lo < j h < hi.
std::pair<std::int64_t, std::int64_t> OpenIndexRange(double lo, double hi,
                                                     double h) {
  return {static_cast<std::int64_t>(std::floor(lo / h)) + 1,
          static_cast<std::int64_t>(std::ceil(hi / h)) - 1};
}

// Subtracts the sorted union of `cuts` from [lo, hi] (open cuts, so the
// remainder is what the caller integrates; boundaries have measure zero).
void Subtract(double lo, double hi, std::vector<Interval>& cuts,
              std::vector<Interval>* out) {
  out->clear();
  std::sort(cuts.begin(), cuts.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  double cur = lo;
  for (const Interval& c : cuts) {
    if (c.hi <= cur) continue;
    if (c.lo >= hi) break;
    if (c.lo > cur) out->push_back({cur, c.lo});
    cur = std::max(cur, c.hi);
    if (cur >= hi) break;
  }
  if (cur < hi) out->push_back({cur, hi});
}

}  // namespace

TentTable::TentTable(const Field& F, std::vector<LatticePoint> tents,
                     const TentParams& params, const Weight& w,
                     const TentQuadrature& q, const LatticeSpec& spec,
                     SizeVariant variant, const TableOptions& options)
    : lattice_(std::move(tents)),
      params_(params),
      w_(w),
      q_(q),
      spec_(spec),
      variant_(variant),
      options_(options) {
  q.Validate();
  params.Validate();
  if (options.y_refine < 1 || options.core_rows < 1) {
    throw Error(ErrorCode::kInvalidArgument, "table resolution must be >= 1");
  }
  std::size_t n = lattice_.size();
  tents_.reserve(n);
  sigma_.resize(n);
  norm_.resize(n);
  size_.assign(n, 0.0);
  scale_of_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    tents_.push_back(lattice_[i].tent(params, spec));
    sigma_[i] = premeasure(w, tents_[i]);
    if (variant == SizeVariant::kUnnormalized) {
      norm_[i] = 1.0;
    } else {
      norm_[i] = sigma_[i] > 0.0 ? 1.0 / sigma_[i] : 0.0;
    }
    int k = lattice_[i].k;
    auto it = std::find_if(scales_.begin(), scales_.end(),
                           [&](const Scale& sc) { return sc.k == k; });
    if (it == scales_.end()) {
      Scale sc;
      sc.k = k;
      sc.s = std::ldexp(1.0, k);
      sc.dxi = std::ldexp(params.b, spec.xi_log2_step - k);
      sc.hy = std::ldexp(1.0, k - 4) / options.y_refine;
      scales_.push_back(sc);
      it = scales_.end() - 1;
    }
    scale_of_[i] = static_cast<std::size_t>(it - scales_.begin());
  }

  const Window3& win = F.window();
  constexpr std::size_t kMaxCells = 100000000;
  std::size_t cells = 0;
  std::vector<Complex> vals;
  std::vector<double> ys, wy;
  for (std::size_t si = 0; si < scales_.size(); ++si) {
    Scale& sc = scales_[si];
    std::int64_t mlo = std::numeric_limits<std::int64_t>::max(), mhi = -mlo;
    double xlo = kInf, xhi = -kInf;
    std::int64_t nlo = std::numeric_limits<std::int64_t>::max(), nhi = -nlo;
    for (std::size_t i = 0; i < n; ++i) {
      if (scale_of_[i] != si) continue;
      nlo = std::min(nlo, lattice_[i].n);
      nhi = std::max(nhi, lattice_[i].n);
      mlo = std::min(mlo, lattice_[i].m);
      mhi = std::max(mhi, lattice_[i].m);
      xlo = std::min(xlo, tents_[i].x);
      xhi = std::max(xhi, tents_[i].x);
    }
    sc.n_lo = nlo;
    sc.nx = static_cast<std::size_t>(nhi - nlo + 1);
    double t_lo = q.TLow(sc.s);
    if (!(t_lo < sc.s)) continue;
    double dtau = std::log(sc.s / t_lo) / q.n_logt;
    for (int ti = 0; ti < q.n_logt; ++ti) {
      Slice sl;
      sl.t = sc.s * std::exp(-(ti + 0.5) * dtau);
      sl.dtau = dtau;
      double t = sl.t;
      bool t_in = t >= win.t_min && t <= win.t_max;
      double e_lo = mlo * sc.dxi - params.C1 / t - sc.dxi;
      double e_hi = mhi * sc.dxi + params.C2 / t + sc.dxi;
      e_lo = std::max(e_lo, win.eta.lo);
      e_hi = std::min(e_hi, win.eta.hi);
      double y_lo = std::max(xlo - (sc.s - t) - sc.hy, win.y.lo);
      double y_hi = std::min(xhi + (sc.s - t) + sc.hy, win.y.hi);
      if (t_in && e_lo <= e_hi && y_lo <= y_hi) {
        sl.m0 = static_cast<std::int64_t>(std::ceil(e_lo / sc.dxi));
        auto m1 = static_cast<std::int64_t>(std::floor(e_hi / sc.dxi));
        sl.j0 = static_cast<std::int64_t>(std::ceil(y_lo / sc.hy));
        auto j1 = static_cast<std::int64_t>(std::floor(y_hi / sc.hy));
        if (m1 >= sl.m0 && j1 >= sl.j0) {
          sl.nm = static_cast<std::size_t>(m1 - sl.m0 + 1);
          sl.nj = static_cast<std::size_t>(j1 - sl.j0 + 1);
        }
      }
      cells += sl.nm * sl.nj;
      if (cells > kMaxCells) {
        throw Error(ErrorCode::kTooManyTents,
                    "table grid exceeds " + std::to_string(kMaxCells) +
                        " samples");
      }
      if (sl.nm > 0) {
        std::size_t nm = sl.nm, nj = sl.nj;
        std::size_t nb = (nj + kBlock - 1) / kBlock;
        ys.resize(nj);
        wy.resize(nj);
        vals.resize(nj);
        for (std::size_t j = 0; j < nj; ++j) {
          ys[j] = static_cast<double>(sl.j0 + static_cast<std::int64_t>(j)) *
                  sc.hy;
          wy[j] = w.Integral(ys[j] - t, ys[j] + t);
        }
        sl.abs.assign(nm * nj, 0.0);
        sl.block.assign(nm * nb, 0.0);
        sl.prefix.assign((nm + 1) * (nj + 1), 0.0);
        bool any = false;
        for (std::size_t r = 0; r < nm; ++r) {
          double eta = static_cast<double>(sl.m0 + static_cast<std::int64_t>(r)) *
                       sc.dxi;
          F.Row(eta, t, ys.data(), nj, vals.data());
          double* a = &sl.abs[r * nj];
          double* bm = &sl.block[r * nb];
          const double* prev = &sl.prefix[r * (nj + 1)];
          double* cur = &sl.prefix[(r + 1) * (nj + 1)];
          double run = 0.0;
          for (std::size_t j = 0; j < nj; ++j) {
            a[j] = std::abs(vals[j]);
            any = any || a[j] != 0.0;
            bm[j / kBlock] = std::max(bm[j / kBlock], a[j]);
            run += std::norm(vals[j]) * wy[j];
            cur[j + 1] = prev[j + 1] + run;
          }
        }
        sl.zero = !any;
        if (sl.zero) {
          sl = EmptySlice(sl.t, sl.dtau);
        } else {
          sl.span.resize(nm * sc.nx);
          for (std::size_t r = 0; r < nm; ++r) {
            for (std::size_t u = 0; u < sc.nx; ++u) {
              double x = std::ldexp(static_cast<double>(sc.n_lo) +
                                        static_cast<double>(u),
                                    sc.k - 4);
              auto [j1, j2] = OpenIndexRange(x - (sc.s - t), x + (sc.s - t), sc.hy);
              sl.span[r * sc.nx + u] = RowMax(sl, r, j1, j2);
            }
          }
        }
      }
      sc.slices.push_back(std::move(sl));
    }
  }

  order_.resize(n);
  std::iota(order_.begin(), order_.end(), 0);
  std::stable_sort(order_.begin(), order_.end(),
                   [&](std::size_t a, std::size_t b) {
                     return LatticeOrderLess(lattice_[a], lattice_[b]);
                   });
  std::vector<const Tent*> none;
  for (std::size_t i = 0; i < n; ++i) {
    double lac = Lacunary(i, none, 3);
    size_[i] = std::sqrt(std::max(0.0, lac)) + Core(i, none);
  }
}

TentTable::Slice TentTable::EmptySlice(double t, double dtau) {
  Slice sl;
  sl.t = t;
  sl.dtau = dtau;
  return sl;
}

double TentTable::RectIntegral(const Scale& sc, const Slice& sl, double e1,
                               double e2, double y1, double y2) const {
  Span a[3], b[3];
  auto nm = static_cast<std::int64_t>(sl.nm);
  auto nj = static_cast<std::int64_t>(sl.nj);
  int na = CellSpans(sl.m0 * sc.dxi, sc.dxi, nm, e1, e2, a);
  int nb = CellSpans(sl.j0 * sc.hy, sc.hy, nj, y1, y2, b);
  std::size_t stride = sl.nj + 1;
  const double* P = sl.prefix.data();
  double sum = 0.0;
  for (int u = 0; u < na; ++u) {
    for (int v = 0; v < nb; ++v) {
      std::size_t r0 = a[u].a, r1 = a[u].b + 1, c0 = b[v].a, c1 = b[v].b + 1;
      double block = P[r1 * stride + c1] - P[r0 * stride + c1] -
                     P[r1 * stride + c0] + P[r0 * stride + c0];
      sum += a[u].w * b[v].w * block;
    }
  }
  return sum;
}

double TentTable::RowMax(const Slice& sl, std::size_t row, std::int64_t j1,
                         std::int64_t j2) const {
  j1 = std::max<std::int64_t>(j1 - sl.j0, 0);
  j2 = std::min<std::int64_t>(j2 - sl.j0, static_cast<std::int64_t>(sl.nj) - 1);
  if (j1 > j2) return 0.0;
  const double* a = &sl.abs[row * sl.nj];
  const double* bm = &sl.block[row * ((sl.nj + kBlock - 1) / kBlock)];
  auto lo = static_cast<std::size_t>(j1), hi = static_cast<std::size_t>(j2);
  double m = 0.0;
  while (lo <= hi && lo % kBlock != 0) m = std::max(m, a[lo++]);
  while (lo + kBlock - 1 <= hi) {
    m = std::max(m, bm[lo / kBlock]);
    lo += kBlock;
  }
  while (lo <= hi) m = std::max(m, a[lo++]);
  return m;
}

double TentTable::Lacunary(std::size_t i, const std::vector<const Tent*>& rel,
                           int halves) const {
  if (norm_[i] == 0.0) return 0.0;
  const Tent& T = tents_[i];
  const Scale& sc = scales_[scale_of_[i]];
  const TentParams& th = T.params;
  double total = 0.0;
  std::vector<Interval> targets, cuts, pieces;
  std::vector<double> breaks;
  std::vector<const Tent*> active;
  for (const Slice& sl : sc.slices) {
    if (sl.zero) continue;
    double t = sl.t;
    double ylo = T.x - (T.s - t), yhi = T.x + (T.s - t);
    targets.clear();
    if (halves & 1) targets.push_back({T.xi - th.C1 / t, T.xi - th.b / t});
    if (halves & 2) targets.push_back({T.xi + th.b / t, T.xi + th.C2 / t});
    active.clear();
    for (const Tent* E : rel) {
      if (!(E->s > t)) continue;
      double h = E->s - t;
      if (!(E->x - h < yhi && E->x + h > ylo)) continue;
      double elo = E->xi - E->params.C1 / t, ehi = E->xi + E->params.C2 / t;
      bool hit = false;
      for (const Interval& g : targets) hit = hit || (elo < g.hi && ehi > g.lo);
      if (hit) active.push_back(E);
    }
    double sum = 0.0;
    if (active.empty()) {
      for (const Interval& g : targets) {
        sum += RectIntegral(sc, sl, g.lo, g.hi, ylo, yhi);
      }
      total += sl.dtau * sum;
      continue;
    }
    breaks.assign({ylo, yhi});
    for (const Tent* E : active) {
      double h = E->s - t;
      if (E->x - h > ylo) breaks.push_back(E->x - h);
      if (E->x + h < yhi) breaks.push_back(E->x + h);
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
      double a = breaks[k], b = breaks[k + 1];
      double mid = 0.5 * (a + b);
      cuts.clear();
      for (const Tent* E : active) {
        if (std::abs(mid - E->x) < E->s - t) {
          cuts.push_back({E->xi - E->params.C1 / t, E->xi + E->params.C2 / t});
        }
      }
      for (const Interval& g : targets) {
        Subtract(g.lo, g.hi, cuts, &pieces);
        for (const Interval& pc : pieces) {
          sum += RectIntegral(sc, sl, pc.lo, pc.hi, a, b);
        }
      }
    }
    total += sl.dtau * sum;
  }
  return total * norm_[i];
}

double TentTable::Core(std::size_t i, const std::vector<const Tent*>& rel) const {
  const Tent& T = tents_[i];
  const Scale& sc = scales_[scale_of_[i]];
  std::int64_t mx = lattice_[i].m;
  auto ux = static_cast<std::size_t>(lattice_[i].n - sc.n_lo);
  double best = 0.0;
  struct Mask {
    double elo, ehi;
    std::int64_t j1, j2;
  };
  std::vector<Mask> active;
  std::vector<Interval> full;
  std::vector<std::pair<std::int64_t, std::int64_t>> masks;
  for (const Slice& sl : sc.slices) {
    if (sl.zero) continue;
    double t = sl.t;
    auto reach = static_cast<std::int64_t>(
        std::floor(T.params.b / (t * sc.dxi)));
    std::int64_t stride = std::max<std::int64_t>(
        1, (reach + options_.core_rows - 1) / options_.core_rows);
    std::int64_t steps = reach / stride;
    auto [j1, j2] = OpenIndexRange(T.x - (T.s - t), T.x + (T.s - t), sc.hy);
    active.clear();
    full.clear();
    for (const Tent* E : rel) {
      if (!(E->s > t)) continue;
      double elo = E->xi - E->params.C1 / t, ehi = E->xi + E->params.C2 / t;
      if (!(elo < T.xi + T.params.b / t && ehi > T.xi - T.params.b / t)) continue;
      auto [a, b] = OpenIndexRange(E->x - (E->s - t), E->x + (E->s - t), sc.hy);
      if (b < j1 || a > j2) continue;
      if (a <= j1 && b >= j2) {
        full.push_back({elo, ehi});
      } else {
        active.push_back({elo, ehi, a, b});
      }
    }
    // Rows inside a mask that spans the whole y-range are skipped outright.
    std::sort(full.begin(), full.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::size_t fi = 0;
    double reach_hi = -kInf;
    for (std::int64_t r = -steps; r <= steps; ++r) {
      std::int64_t m = mx + r * stride;
      std::int64_t row = m - sl.m0;
      if (row < 0 || row >= static_cast<std::int64_t>(sl.nm)) continue;
      auto urow = static_cast<std::size_t>(row);
      double eta = static_cast<double>(m) * sc.dxi;
      while (fi < full.size() && full[fi].lo < eta) {
        reach_hi = std::max(reach_hi, full[fi].hi);
        ++fi;
      }
      if (eta < reach_hi) continue;
      masks.clear();
      for (const Mask& k : active) {
        if (k.elo < eta && eta < k.ehi) masks.push_back({k.j1, k.j2});
      }
      if (masks.empty()) {
        best = std::max(best, sl.span[urow * sc.nx + ux]);
        continue;
      }
      std::sort(masks.begin(), masks.end());
      std::int64_t cur = j1;
      for (const auto& [a, b] : masks) {
        if (b < cur) continue;
        if (a > j2) break;
        if (a > cur) best = std::max(best, RowMax(sl, urow, cur, a - 1));
        cur = std::max(cur, b + 1);
        if (cur > j2) break;
      }
      if (cur <= j2) best = std::max(best, RowMax(sl, urow, cur, j2));
    }
  }
  return best;
}

double TentTable::MaxSize() const {
  double m = 0.0;
  for (double s : size_) m = std::max(m, s);
  return m;
}

double TentTable::ResidualSize(std::size_t i, const ExclusionSet& E) const {
  if (size_[i] == 0.0) return 0.0;
  std::vector<const Tent*> rel;
  E.Relevant(tents_[i], q_.TLow(tents_[i].s), &rel);
  if (rel.empty()) return size_[i];
  // Prefix-sum differences can round slightly below zero.
  return std::sqrt(std::max(0.0, Lacunary(i, rel, 3))) + Core(i, rel);
}

double TentTable::HalfLacunary(std::size_t i, NodeKind half,
                               const ExclusionSet& E) const {
  if (half == NodeKind::kCore) {
    throw Error(ErrorCode::kInvalidArgument, "half must be a lacunary half");
  }
  if (size_[i] == 0.0) return 0.0;
  std::vector<const Tent*> rel;
  E.Relevant(tents_[i], q_.TLow(tents_[i].s), &rel);
  return std::max(0.0, Lacunary(i, rel, half == NodeKind::kLacunaryLower ? 1 : 2));
}

TentTable TentTable::Scaled(double c) const {
  TentTable out = *this;
  double a = std::abs(c);
  for (Scale& sc : out.scales_) {
    for (Slice& sl : sc.slices) {
      for (double& v : sl.prefix) v *= a * a;
      for (double& v : sl.abs) v *= a;
      for (double& v : sl.block) v *= a;
      for (double& v : sl.span) v *= a;
      if (a == 0.0) sl = EmptySlice(sl.t, sl.dtau);
    }
  }
  for (double& v : out.size_) v *= a;
  return out;
}

void TentTable::ForEachSample(
    const std::function<void(const Point3&, double)>& visit) const {
  for (const Scale& sc : scales_) {
    for (const Slice& sl : sc.slices) {
      if (sl.zero) continue;
      for (std::size_t r = 0; r < sl.nm; ++r) {
        double eta = static_cast<double>(sl.m0 + static_cast<std::int64_t>(r)) *
                     sc.dxi;
        for (std::size_t j = 0; j < sl.nj; ++j) {
          double y = static_cast<double>(sl.j0 + static_cast<std::int64_t>(j)) *
                     sc.hy;
          visit({y, eta, sl.t}, sl.abs[r * sl.nj + j]);
        }
      }
    }
  }
}

std::size_t TentTable::SampleCount() const {
  std::size_t c = 0;
  for (const Scale& sc : scales_) {
    for (const Slice& sl : sc.slices) c += sl.zero ? 0 : sl.nm * sl.nj;
  }
  return c;
}

std::vector<Point3> TentTargetPoints(const Tent& T, const TentQuadrature& q) {
  std::vector<Point3> pts;
  ForEachTentRow(T, q, [&](const TentRow& row) {
    for (double y : row.ys) pts.push_back({y, row.eta, row.t});
  });
  pts.push_back({T.x, T.xi, T.s * (1.0 - std::ldexp(1.0, -6))});
  return pts;
}

namespace {

struct CoverProblem {
  std::vector<double> cost;
  std::vector<std::vector<std::size_t>> covers;  // candidate -> points
  std::vector<std::vector<std::size_t>> coverers;  // point -> candidates
  std::size_t n_points = 0;
};

double PointBound(const CoverProblem& P, const std::vector<char>& covered) {
  double bound = 0.0;
  for (std::size_t p = 0; p < P.n_points; ++p) {
    if (covered[p]) continue;
    double m = kInf;
    for (std::size_t c : P.coverers[p]) m = std::min(m, P.cost[c]);
    bound = std::max(bound, m);
  }
  return bound;
}

struct CoverSearch {
  explicit CoverSearch(const CoverProblem& problem) : P(problem) {}
  const CoverProblem& P;
  double best = kInf;
  std::vector<std::size_t> best_set;
  std::vector<std::size_t> current;
  std::vector<int> cover_count;

  void Run(double cost) {
    std::vector<char> covered(P.n_points);
    std::size_t pick = P.n_points;
    std::size_t fewest = std::numeric_limits<std::size_t>::max();
    for (std::size_t p = 0; p < P.n_points; ++p) {
      covered[p] = cover_count[p] > 0;
      if (!covered[p] && P.coverers[p].size() < fewest) {
        fewest = P.coverers[p].size();
        pick = p;
      }
    }
    if (pick == P.n_points) {
      if (cost < best) {
        best = cost;
        best_set = current;
      }
      return;
    }
    if (cost + PointBound(P, covered) >= best) return;
    std::vector<std::size_t> options = P.coverers[pick];
    std::sort(options.begin(), options.end(), [&](std::size_t a, std::size_t b) {
      return P.cost[a] < P.cost[b] || (P.cost[a] == P.cost[b] && a < b);
    });
    for (std::size_t c : options) {
      if (cost + P.cost[c] >= best) continue;
      for (std::size_t p : P.covers[c]) ++cover_count[p];
      current.push_back(c);
      Run(cost + P.cost[c]);
      current.pop_back();
      for (std::size_t p : P.covers[c]) --cover_count[p];
    }
  }
};

}  // namespace

CoverResult outer_measure(const Weight& w, const std::vector<Point3>& target,
                          const std::vector<LatticePoint>& candidates,
                          const TentParams& params, CoverMode mode,
                          std::size_t cap, const LatticeSpec& spec) {
  CoverResult res;
  res.mode = mode == CoverMode::kGreedy ? "greedy" : "exhaustive";
  CoverProblem P;
  P.n_points = target.size();
  P.coverers.resize(target.size());
  std::vector<std::size_t> index;  // problem candidate -> input index
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    Tent T = candidates[c].tent(params, spec);
    std::vector<std::size_t> pts;
    for (std::size_t p = 0; p < target.size(); ++p) {
      if (tent_contains(T, target[p], Region::kWhole)) pts.push_back(p);
    }
    if (pts.empty()) continue;
    P.cost.push_back(premeasure(w, T));
    P.covers.push_back(std::move(pts));
    index.push_back(c);
  }
  for (std::size_t c = 0; c < P.covers.size(); ++c) {
    for (std::size_t p : P.covers[c]) P.coverers[p].push_back(c);
  }
  std::vector<char> none(target.size(), 0);
  res.lower_bound = PointBound(P, none);
  if (target.empty()) {
    res.exact = true;
    return res;
  }
  if (!std::isfinite(res.lower_bound)) {
    res.cost = kInf;
    return res;
  }

  // Greedy weighted set cover.
  std::vector<char> covered(target.size(), 0);
  std::size_t left = target.size();
  std::vector<std::size_t> greedy;
  double greedy_cost = 0.0;
  while (left > 0) {
    std::size_t best = P.cost.size();
    double best_ratio = -1.0;
    for (std::size_t c = 0; c < P.cost.size(); ++c) {
      std::size_t fresh = 0;
      for (std::size_t p : P.covers[c]) fresh += !covered[p];
      if (fresh == 0) continue;
      double ratio = P.cost[c] > 0.0 ? static_cast<double>(fresh) / P.cost[c]
                                     : kInf;
      if (ratio > best_ratio) {
        best_ratio = ratio;
        best = c;
      }
    }
    greedy.push_back(best);
    greedy_cost += P.cost[best];
    for (std::size_t p : P.covers[best]) {
      if (!covered[p]) {
        covered[p] = 1;
        --left;
      }
    }
  }

  std::vector<std::size_t> chosen = greedy;
  if (mode == CoverMode::kExhaustive) {
    // Drop candidates dominated by a no-more-expensive superset.
    std::vector<char> keep(P.cost.size(), 1);
    for (std::size_t a = 0; a < P.cost.size(); ++a) {
      for (std::size_t b = 0; b < P.cost.size() && keep[a]; ++b) {
        if (a == b || !keep[b] || P.cost[b] > P.cost[a]) continue;
        if (P.covers[b].size() < P.covers[a].size()) continue;
        if (P.cost[b] == P.cost[a] && P.covers[b].size() == P.covers[a].size() &&
            b > a) {
          continue;
        }
        if (std::includes(P.covers[b].begin(), P.covers[b].end(),
                          P.covers[a].begin(), P.covers[a].end())) {
          keep[a] = 0;
        }
      }
    }
    std::size_t kept = static_cast<std::size_t>(
        std::count(keep.begin(), keep.end(), 1));
    if (kept > cap) {
      throw Error(ErrorCode::kTooManyCandidates,
                  std::to_string(kept) + " relevant candidates exceed cap " +
                      std::to_string(cap));
    }
    CoverProblem Q;
    Q.n_points = P.n_points;
    Q.coverers.resize(P.n_points);
    std::vector<std::size_t> qmap;
    for (std::size_t c = 0; c < P.cost.size(); ++c) {
      if (!keep[c]) continue;
      Q.cost.push_back(P.cost[c]);
      Q.covers.push_back(P.covers[c]);
      qmap.push_back(c);
    }
    for (std::size_t c = 0; c < Q.covers.size(); ++c) {
      for (std::size_t p : Q.covers[c]) Q.coverers[p].push_back(c);
    }
    CoverSearch search(Q);
    search.best = greedy_cost * (1.0 + 1e-12) + 1e-300;
    search.cover_count.assign(P.n_points, 0);
    search.Run(0.0);
    if (!search.best_set.empty() && search.best < greedy_cost) {
      chosen.clear();
      for (std::size_t c : search.best_set) chosen.push_back(qmap[c]);
    }
    res.exact = true;
  }
  std::sort(chosen.begin(), chosen.end());
  res.cost = 0.0;
  for (std::size_t c : chosen) {
    res.tents.push_back(candidates[index[c]]);
    res.cost += P.cost[c];
  }
  if (res.exact) res.lower_bound = res.cost;
  return res;
}

namespace {

const std::vector<std::size_t>& LatticeOrder(const TentTable& table) {
  return table.order();
}

double CertifiedResidual(const TentTable& table, const ExclusionSet& E) {
  double worst = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table.Size(i) == 0.0) continue;
    worst = std::max(worst, table.ResidualSize(i, E));
  }
  return worst;
}

}  // namespace

CoverResult superlevel_upper(const TentTable& table, double lam,
                             std::size_t iteration_cap) {
  return superlevel_upper_from(table, lam, ExclusionSet(), iteration_cap);
}

CoverResult superlevel_upper_from(const TentTable& table, double lam,
                                  const ExclusionSet& E0,
                                  std::size_t iteration_cap) {
  if (!(lam > 0.0)) throw Error(ErrorCode::kInvalidArgument, "need lam > 0");
  CoverResult res;
  res.mode = "greedy";
  ExclusionSet E = E0;
  for (std::size_t i : LatticeOrder(table)) {
    if (table.Size(i) <= lam) continue;
    if (table.ResidualSize(i, E) <= lam) continue;
    if (res.tents.size() >= iteration_cap) {
      res.cap_exceeded = true;
      break;
    }
    E.Add(table.tent(i));
    res.tents.push_back(table.lattice(i));
    res.cost += table.sigma(i);
  }
  // Recomputed from the table, not from the loop state.
  res.residual_sup_size = CertifiedResidual(table, E);
  return res;
}

CoverResult superlevel_exhaustive(const TentTable& table, double lam,
                                  std::size_t cap) {
  if (!(lam > 0.0)) throw Error(ErrorCode::kInvalidArgument, "need lam > 0");
  CoverResult res;
  res.mode = "exhaustive";
  res.exact = true;
  std::vector<std::size_t> cand;
  for (std::size_t i : LatticeOrder(table)) {
    if (table.Size(i) > 0.0) cand.push_back(i);
  }
  bool any = false;
  for (std::size_t i : cand) any = any || table.Size(i) > lam;
  if (!any) return res;
  if (cand.size() > cap) {
    throw Error(ErrorCode::kTooManyCandidates,
                std::to_string(cand.size()) + " tents exceed cap " +
                    std::to_string(cap));
  }
  CoverResult greedy = superlevel_upper(table, lam);
  double best = greedy.cost;
  std::vector<std::size_t> best_set;
  for (const LatticePoint& lp : greedy.tents) {
    for (std::size_t i : cand) {
      if (table.lattice(i) == lp) best_set.push_back(i);
    }
  }

  std::vector<std::size_t> chosen;
  auto feasible = [&](const std::vector<std::size_t>& idx) {
    ExclusionSet set;
    for (std::size_t i : idx) set.Add(table.tent(i));
    for (std::size_t i : cand) {
      if (table.Size(i) > lam && table.ResidualSize(i, set) > lam) return false;
    }
    return true;
  };
  std::function<void(std::size_t, double)> dfs = [&](std::size_t d,
                                                      double cost) {
    if (cost >= best) return;
    if (feasible(chosen)) {
      best = cost;
      best_set = chosen;
      return;
    }
    if (d == cand.size()) return;
    // Even taking every remaining tent cannot fix a violation: prune.
    std::vector<std::size_t> all = chosen;
    all.insert(all.end(), cand.begin() + static_cast<std::ptrdiff_t>(d),
               cand.end());
    if (!feasible(all)) return;
    std::size_t i = cand[d];
    chosen.push_back(i);
    dfs(d + 1, cost + table.sigma(i));
    chosen.pop_back();
    dfs(d + 1, cost);
  };
  dfs(0, 0.0);
  ExclusionSet final_set;
  for (std::size_t i : best_set) {
    res.tents.push_back(table.lattice(i));
    res.cost += table.sigma(i);
    final_set.Add(table.tent(i));
  }
  res.lower_bound = res.cost;
  res.residual_sup_size = CertifiedResidual(table, final_set);
  return res;
}

std::vector<double> make_lambda_grid(double lam_max, const LambdaGrid& spec) {
  if (spec.points < 2 || !(spec.span_log2 > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "lambda grid needs >= 2 points");
  }
  std::vector<double> g;
  for (int i = 0; i < spec.points; ++i) {
    double e = -spec.span_log2 * (1.0 - static_cast<double>(i) / (spec.points - 1));
    g.push_back(lam_max * std::exp2(e));
  }
  g.back() = lam_max;
  return g;
}

SuperlevelCurve superlevel_curve(const TentTable& table,
                                 const NormOptions& options) {
  SuperlevelCurve c;
  double lam_max = table.MaxSize();
  c.lambda_grid = options.lambda_grid;
  if (c.lambda_grid.empty()) {
    if (lam_max == 0.0) return c;
    c.lambda_grid = make_lambda_grid(lam_max, options.grid);
  }
  const std::vector<double>& grid = c.lambda_grid;
  std::size_t n = grid.size();
  c.mu_upper.assign(n, 0.0);
  c.mu_lower.assign(n, 0.0);
  c.lower_exact = options.exhaustive_lower;
  for (std::size_t i = 0; i < n; ++i) {
    if (grid[i] >= lam_max) continue;
    c.mu_upper[i] = superlevel_upper(table, grid[i]).cost;
    if (!c.lower_exact) continue;
    try {
      c.mu_lower[i] =
          superlevel_exhaustive(table, grid[i], options.exhaustive_cap).cost;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kTooManyCandidates) throw;
      c.lower_exact = false;
      std::fill(c.mu_lower.begin(), c.mu_lower.end(), 0.0);
    }
  }
  for (std::size_t i = 1; i < n; ++i) {
    c.mu_upper[i] = std::min(c.mu_upper[i], c.mu_upper[i - 1]);
  }
  for (std::size_t i = n - 1; n > 0 && i-- > 0;) {
    c.mu_lower[i] = std::max(c.mu_lower[i], c.mu_lower[i + 1]);
  }
  return c;
}

NormPair norms_from_curve(const SuperlevelCurve& c, double p) {
  if (!(p > 0.0) || !std::isfinite(p)) {
    throw Error(ErrorCode::kInvalidExponent, "need 0 < p < inf");
  }
  NormPair out;
  const std::vector<double>& grid = c.lambda_grid;
  std::size_t n = grid.size();
  if (n == 0) return out;
  const std::vector<double>& mu_u = c.mu_upper;
  const std::vector<double>& mu_l = c.mu_lower;
  std::vector<double> lp(n);
  for (std::size_t i = 0; i < n; ++i) lp[i] = std::pow(grid[i], p);
  double su = lp[0] * mu_u[0], sl = lp[0] * mu_l[0];
  double wu = lp[0] * mu_u[0], wl = lp[0] * mu_l[0];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    su += (lp[i + 1] - lp[i]) * mu_u[i];
    sl += (lp[i + 1] - lp[i]) * mu_l[i + 1];
    wu = std::max(wu, lp[i + 1] * mu_u[i]);
    wl = std::max(wl, lp[i + 1] * mu_l[i + 1]);
  }
  for (NormBracket* b : {&out.strong, &out.weak}) {
    b->lambda_grid = grid;
    b->mu_upper = mu_u;
    b->mu_lower = mu_l;
    b->lower_exact = c.lower_exact;
  }
  out.strong.upper = std::pow(su, 1.0 / p);
  out.strong.lower = std::pow(sl, 1.0 / p);
  out.weak.upper = std::pow(wu, 1.0 / p);
  out.weak.lower = std::pow(wl, 1.0 / p);
  return out;
}

NormPair outer_norms(const TentTable& table, double p,
                     const NormOptions& options) {
  if (!(p > 0.0) || !std::isfinite(p)) {
    throw Error(ErrorCode::kInvalidExponent, "need 0 < p < inf");
  }
  return norms_from_curve(superlevel_curve(table, options), p);
}

NormBracket outer_lp_norm(const TentTable& table, double p,
                          const NormOptions& options) {
  return outer_norms(table, p, options).strong;
}

NormBracket outer_weak_norm(const TentTable& table, double p,
                            const NormOptions& options) {
  return outer_norms(table, p, options).weak;
}

}  // namespace wpe
