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


#include "wpe/selection.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <tuple>

namespace wpe {

const char* PhaseName(SelectionPhase phase) {
  switch (phase) {
    case SelectionPhase::kQ0:
      return "Q0";
    case SelectionPhase::kQplus:
      return "Qplus";
    case SelectionPhase::kQminus:
      return "Qminus";
  }
  return "?";
}

std::vector<Tent> SelectionResult::Tents() const {
  std::vector<Tent> out;
  out.reserve(steps.size());
  for (const SelectionStep& st : steps) out.push_back(st.tent.tent(params, spec));
  return out;
}

bool PartialTent::Contains(const Point3& p) const {
  if (!tent_contains(parent, p, region)) return false;
  for (const Tent& E : excluded) {
    if (tent_contains(E, p, Region::kWhole)) return false;
  }
  return true;
}

namespace {

struct Candidate {
  Point3 p;
  double v;
  LatticePoint parent;
};

bool CandidateLess(const Candidate& a, const Candidate& b) {
  if (!(a.parent == b.parent)) return LatticeOrderLess(a.parent, b.parent);
  if (a.v != b.v) return a.v > b.v;
  return std::tie(a.p.y, a.p.eta, a.p.t) < std::tie(b.p.y, b.p.eta, b.p.t);
}

void AddStep(SelectionResult* res, const Weight& w, const LatticePoint& lp,
             double quantity, const Point3* witness) {
  SelectionStep st;
  st.tent = lp;
  st.quantity = quantity;
  if (witness != nullptr) {
    st.has_witness = true;
    st.witness = *witness;
  }
  Tent T = lp.tent(res->params, res->spec);
  res->total_cost += w.Integral(T.x - T.s, T.x + T.s);
  st.running_cost = res->total_cost;
  res->steps.push_back(st);
  res->top_intervals.push_back(T.top());
}

}  // namespace

SelectionResult select_linfty(const TentTable& table, double lam,
                              std::size_t cap) {
  if (!(lam > 0.0)) throw Error(ErrorCode::kInvalidArgument, "need lam > 0");
  SelectionResult res;
  res.phase = SelectionPhase::kQ0;
  res.params = table.params();
  res.spec = table.spec();
  res.threshold = lam;
  const TentParams& th = table.params();
  std::vector<Candidate> cands;
  table.ForEachSample([&](const Point3& p, double v) {
    if (!(v > lam)) return;
    CentralParents cp = central_lattice_parents(p, th, table.spec());
    double dl = p.eta - cp.lower.xi(th.b, table.spec());
    double du = cp.upper.xi(th.b, table.spec()) - p.eta;
    cands.push_back({p, v, dl < du ? cp.lower : cp.upper});
  });
  std::sort(cands.begin(), cands.end(), CandidateLess);

  ExclusionSet E;
  for (const Candidate& c : cands) {
    if (E.Contains(c.p)) continue;
    if (res.steps.size() >= cap) {
      res.cap_exceeded = true;
      break;
    }
    E.Add(c.parent.tent(th, table.spec()));
    AddStep(&res, table.weight(), c.parent, c.v, &c.p);
  }

  // Certificate: every sample outside the final union, rechecked directly.
  std::vector<Tent> tents = res.Tents();
  double worst = 0.0;
  table.ForEachSample([&](const Point3& p, double v) {
    if (!(v > worst)) return;
    for (const Tent& T : tents) {
      if (tent_contains(T, p, Region::kWhole)) return;
    }
    worst = v;
  });
  res.residual_certificate = worst;
  return res;
}

SelectionResult select_l2(const TentTable& table, double lam, NodeKind half,
                          double c_sel, const std::vector<Tent>& E0,
                          std::size_t cap) {
  if (!(lam > 0.0)) throw Error(ErrorCode::kInvalidArgument, "need lam > 0");
  if (!(c_sel > 0.0)) throw Error(ErrorCode::kInvalidArgument, "need C_sel > 0");
  if (half == NodeKind::kCore) {
    throw Error(ErrorCode::kInvalidArgument, "half must be a lacunary half");
  }
  bool upper = half == NodeKind::kLacunaryUpper;
  SelectionResult res;
  res.phase = upper ? SelectionPhase::kQplus : SelectionPhase::kQminus;
  res.params = table.params();
  res.spec = table.spec();
  res.threshold = lam * lam / c_sel;
  double thr = res.threshold;

  std::vector<std::size_t> order(table.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const LatticePoint& la = table.lattice(a);
    const LatticePoint& lb = table.lattice(b);
    int cx = CompareXi(la, lb);
    if (cx != 0) return upper ? cx > 0 : cx < 0;
    if (la.k != lb.k) return la.k > lb.k;
    return CompareX(la, lb) < 0;
  });

  // The half-lacunary quantity never exceeds Size^2, so smaller tents are
  // skipped without evaluation.
  ExclusionSet E(E0);
  for (std::size_t i : order) {
    double sz = table.Size(i);
    if (sz * sz < thr) continue;
    double qv = table.HalfLacunary(i, half, E);
    if (!(qv >= thr)) continue;
    if (res.steps.size() >= cap) {
      res.cap_exceeded = true;
      break;
    }
    E.Add(table.tent(i));
    AddStep(&res, table.weight(), table.lattice(i), qv, nullptr);
  }

  ExclusionSet final_set(E0);
  for (const Tent& T : res.Tents()) final_set.Add(T);
  double worst = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    double sz = table.Size(i);
    if (sz * sz <= worst || sz * sz < thr * 1e-3) continue;
    worst = std::max(worst, table.HalfLacunary(i, half, final_set));
  }
  res.residual_certificate = worst;
  return res;
}

std::vector<PartialTent> residual_partial_tents(const SelectionResult& l2,
                                                const std::vector<Tent>& E0) {
  Region region = l2.phase == SelectionPhase::kQminus ? Region::kLacunaryLower
                                                      : Region::kLacunaryUpper;
  std::vector<PartialTent> out;
  std::vector<Tent> excluded = E0;
  for (const SelectionStep& st : l2.steps) {
    Tent T = st.tent.tent(l2.params, l2.spec);
    out.push_back({T, region, excluded});
    excluded.push_back(T);
  }
  return out;
}

SeparationReport check_point_separation(const std::vector<Point3>& points,
                                        double alpha, double beta) {
  SeparationReport rep;
  rep.points = points.size();
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const Point3& a = points[i];
      const Point3& b = points[j];
      ++rep.pairs_checked;
      if (std::abs(a.y - b.y) > alpha * std::max(a.t, b.t)) continue;
      if (std::abs(a.eta - b.eta) > beta * std::max(1.0 / a.t, 1.0 / b.t)) {
        continue;
      }
      rep.violations.emplace_back(i, j);
    }
  }
  return rep;
}

namespace {

bool RowMatches(Region region, NodeKind kind) {
  switch (region) {
    case Region::kWhole:
      return true;
    case Region::kCore:
      return kind == NodeKind::kCore;
    case Region::kLacunary:
      return kind != NodeKind::kCore;
    case Region::kLacunaryUpper:
      return kind == NodeKind::kLacunaryUpper;
    case Region::kLacunaryLower:
      return kind == NodeKind::kLacunaryLower;
  }
  return false;
}

// Visits the quadrature rows of each partial tent that lie in its region,
// with a keep-mask for the excluded union.
void ForEachPartialRow(
    const PartialTent& pt, const TentQuadrature& q,
    const std::function<void(const TentRow&, const std::vector<char>&)>& visit) {
  std::vector<char> keep;
  ForEachTentRow(pt.parent, q, [&](const TentRow& row) {
    if (!RowMatches(pt.region, row.kind)) return;
    keep.assign(row.ys.size(), 1);
    bool any = false;
    for (std::size_t j = 0; j < row.ys.size(); ++j) {
      Point3 p{row.ys[j], row.eta, row.t};
      for (const Tent& E : pt.excluded) {
        if (tent_contains(E, p, Region::kWhole)) {
          keep[j] = 0;
          break;
        }
      }
      any = any || keep[j];
    }
    if (any) visit(row, keep);
  });
}

}  // namespace

std::vector<PartialTentSample> sample_partial_tents(
    const std::vector<PartialTent>& pts, const TentQuadrature& q) {
  q.Validate();
  std::vector<PartialTentSample> out;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    ForEachPartialRow(pts[k], q, [&](const TentRow& row,
                                     const std::vector<char>& keep) {
      for (std::size_t j = 0; j < row.ys.size(); ++j) {
        if (!keep[j]) continue;
        out.push_back({k, {row.ys[j], row.eta, row.t}, row.cell * row.t});
      }
    });
  }
  return out;
}

SeparationReport check_partial_tent_separation(
    const std::vector<PartialTent>& pts, double alpha, double beta, double B,
    const TentQuadrature& q) {
  SeparationReport rep;
  std::vector<PartialTentSample> samples = sample_partial_tents(pts, q);
  rep.points = samples.size();
  std::vector<std::size_t> by_t(samples.size());
  std::iota(by_t.begin(), by_t.end(), 0);
  std::sort(by_t.begin(), by_t.end(), [&](std::size_t a, std::size_t b) {
    return samples[a].p.t < samples[b].p.t;
  });
  for (std::size_t a = 0; a < samples.size(); ++a) {
    const PartialTentSample& s = samples[a];
    const Tent& Tk = pts[s.owner].parent;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (j != s.owner && pts[j].Contains(s.p)) ++rep.overlaps;
    }
    for (std::size_t b : by_t) {
      const Point3& r = samples[b].p;
      if (!(B * r.t < s.p.t)) break;
      ++rep.pairs_checked;
      if (std::abs(s.p.eta - r.eta) > beta / r.t) continue;
      if (std::abs(Tk.x - r.y) > alpha * (Tk.s - r.t)) continue;
      rep.violations.emplace_back(a, b);
    }
  }
  return rep;
}

RestrictionReport verify_restriction_discrete(const TransformEngine& engine,
                                              const std::vector<Point3>& points,
                                              double s_exp, double alpha,
                                              double beta) {
  if (!(s_exp > 0.0 && s_exp < 1.0)) {
    throw Error(ErrorCode::kInvalidExponent, "need 0 < s < 1");
  }
  if (!(beta >= 4.0 * engine.phi().delta())) {
    throw Error(ErrorCode::kPreconditionViolated, "need beta >= 4 delta");
  }
  if (!check_point_separation(points, alpha, beta).passed()) {
    throw Error(ErrorCode::kPreconditionViolated, "points are not separated");
  }
  RestrictionReport rep;
  rep.s_exp = s_exp;
  rep.count = points.size();
  rep.norm_f = engine.signal().L2Norm();
  double sum = 0.0;
  for (const Point3& p : points) {
    double v = std::abs(engine(p));
    sum += p.t * v * v;
    rep.sup = std::max(rep.sup, v);
    rep.mass += p.t;
  }
  rep.lhs = std::sqrt(sum);
  rep.rhs = rep.norm_f + std::pow(rep.sup * std::sqrt(rep.mass), s_exp) *
                             std::pow(rep.norm_f, 1.0 - s_exp);
  rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
  return rep;
}

namespace {

void CheckPartialPrecondition(const TransformEngine& engine,
                              const std::vector<PartialTent>& pts,
                              const ContinuousCheck& check) {
  if (pts.empty()) return;
  const TentParams& th = pts.front().parent.params;
  double beta = check.beta > 0.0 ? check.beta : std::ldexp(th.b, -6);
  double B = check.B > 0.0 ? check.B : std::ldexp(th.c_max() / th.b, 8);
  if (!(beta >= 4.0 * engine.phi().delta())) {
    throw Error(ErrorCode::kPreconditionViolated, "need beta >= 4 delta");
  }
  if (!check.check_separation) return;
  TentQuadrature coarse = check.q;
  coarse.n_y = 4;
  coarse.n_gamma = 4;
  coarse.n_logt = 8;
  if (!check_partial_tent_separation(pts, check.alpha, beta, B, coarse).passed()) {
    throw Error(ErrorCode::kPreconditionViolated,
                "partial tents are not separated");
  }
}

RestrictionReport Continuous(const TransformEngine& engine,
                             const std::vector<PartialTent>& pts, double s_exp,
                             const ContinuousCheck& check,
                             const std::function<bool(const Point3&)>* in_Y) {
  if (!(s_exp > 0.0 && s_exp < 1.0)) {
    throw Error(ErrorCode::kInvalidExponent, "need 0 < s < 1");
  }
  // Scales below the sampling floor of f are not integrated.
  TentQuadrature q = check.q;
  q.t_min = std::max(q.t_min, engine.t_floor());
  q.Validate();
  CheckPartialPrecondition(engine, pts, check);
  RestrictionReport rep;
  rep.s_exp = s_exp;
  rep.count = pts.size();
  rep.norm_f = engine.signal().L2Norm();
  double sum = 0.0;
  std::vector<Complex> vals;
  for (const PartialTent& pt : pts) {
    if (in_Y == nullptr) rep.mass += pt.parent.s;
    ForEachPartialRow(pt, q, [&](const TentRow& row,
                                 const std::vector<char>& keep) {
      double measure = row.cell * row.t;
      bool zero = engine.Vanishes(row.eta, row.t);
      if (!zero) {
        vals.resize(row.ys.size());
        engine.Row(row.eta, row.t, row.ys.data(), row.ys.size(), vals.data());
      }
      for (std::size_t j = 0; j < row.ys.size(); ++j) {
        if (!keep[j]) continue;
        if (in_Y != nullptr) {
          if (!(*in_Y)({row.ys[j], row.eta, row.t})) continue;
          rep.mass += measure;
        }
        if (zero) continue;
        double v = std::abs(vals[j]);
        sum += v * v * measure;
        rep.sup = std::max(rep.sup, v);
      }
    });
  }
  rep.lhs = std::sqrt(sum);
  rep.rhs = rep.norm_f + std::pow(rep.sup * std::sqrt(rep.mass), s_exp) *
                             std::pow(rep.norm_f, 1.0 - s_exp);
  rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
  return rep;
}

}  // namespace

RestrictionReport verify_restriction_continuous(
    const TransformEngine& engine, const std::vector<PartialTent>& pts,
    double s_exp, const ContinuousCheck& check) {
  return Continuous(engine, pts, s_exp, check, nullptr);
}

RestrictionReport verify_restriction_subset(
    const TransformEngine& engine, const std::vector<PartialTent>& pts,
    const std::function<bool(const Point3&)>& in_Y,
    const ContinuousCheck& check) {
  return Continuous(engine, pts, 1.0 / 3.0, check, &in_Y);
}

std::vector<Point3> random_separated_points(std::uint64_t seed,
                                            std::size_t count,
                                            const Window3& box, double alpha,
                                            double beta,
                                            std::size_t max_tries) {
  box.Validate();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uy(box.y.lo, box.y.hi);
  std::uniform_real_distribution<double> ue(box.eta.lo, box.eta.hi);
  std::uniform_real_distribution<double> ut(std::log(box.t_min),
                                            std::log(box.t_max));
  std::vector<Point3> out;
  for (std::size_t tries = 0; tries < max_tries && out.size() < count; ++tries) {
    Point3 p;
    p.y = uy(rng);
    p.eta = ue(rng);
    p.t = std::exp(ut(rng));
    bool ok = true;
    for (const Point3& o : out) {
      if (std::abs(p.y - o.y) > alpha * std::max(p.t, o.t)) continue;
      if (std::abs(p.eta - o.eta) > beta * std::max(1.0 / p.t, 1.0 / o.t)) {
        continue;
      }
      ok = false;
      break;
    }
    if (ok) out.push_back(p);
  }
  return out;
}

}  // namespace wpe
