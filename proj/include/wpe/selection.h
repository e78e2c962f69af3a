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

#ifndef WPE_SELECTION_H_
#define WPE_SELECTION_H_

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "wpe/outer.h"
#include "wpe/tents.h"
#include "wpe/wavepacket.h"

namespace wpe {

enum class SelectionPhase { kQ0, kQplus, kQminus };

const char* PhaseName(SelectionPhase phase);

struct SelectionStep {
  LatticePoint tent;
  bool has_witness = false;
  Point3 witness;
  // |P f| at the witness (sup selection) or the half-lacunary quantity.
  double quantity = 0.0;
  double running_cost = 0.0;
};

struct SelectionResult {
  SelectionPhase phase = SelectionPhase::kQ0;
  TentParams params;
  LatticeSpec spec;
  std::vector<SelectionStep> steps;
  std::vector<Interval> top_intervals;
  double total_cost = 0.0;
  // Threshold of the run: lam for the sup selection, lam^2 / C_sel for the
  // L^2 selection.
  double threshold = 0.0;
  // Recomputed after the run from the final union of tents.
  double residual_certificate = 0.0;
  bool cap_exceeded = false;

  bool certified() const { return residual_certificate <= threshold; }
  std::vector<Tent> Tents() const;
};

// The region of `parent` selected by `region` minus a union of whole tents.
struct PartialTent {
  Tent parent;
  Region region = Region::kLacunaryUpper;
  std::vector<Tent> excluded;

  bool Contains(const Point3& p) const;
};

// Sup selection over the grid samples of `table`: each sample with
// |F| > lam is paired with the nearer of its two central lattice parents
// (ties to the upper one); samples are visited by parent s desc, x asc,
// xi desc, then |F| desc, then (y, eta, t), and a sample outside the union
// of the tents chosen so far adds its parent.
SelectionResult select_linfty(const TentTable& table, double lam,
                              std::size_t cap = 100000);

// L^2 selection on the tents of `table` for one lacunary half, starting
// from the excluded union E0 (normally the sup selection at the same lam).
// Violators have half-lacunary quantity >= lam^2 / c_sel and are taken by
// xi desc (upper half) or asc (lower half), then s desc, then x asc.
SelectionResult select_l2(const TentTable& table, double lam, NodeKind half,
                          double c_sel, const std::vector<Tent>& E0,
                          std::size_t cap = 100000);

// T*_k = (half of T_k) minus (E0 and T_1..T_{k-1}) for an L^2 selection.
std::vector<PartialTent> residual_partial_tents(const SelectionResult& l2,
                                                const std::vector<Tent>& E0);

struct SeparationReport {
  std::size_t points = 0;
  std::size_t pairs_checked = 0;
  // Indices into the point list (or into the partial tent samples).
  std::vector<std::pair<std::size_t, std::size_t>> violations;
  // Sampled points lying in two partial tents; zero for a disjoint family.
  std::size_t overlaps = 0;

  bool passed() const { return violations.empty(); }
};

SeparationReport check_point_separation(const std::vector<Point3>& points,
                                        double alpha, double beta);

struct PartialTentSample {
  std::size_t owner = 0;
  Point3 p;
  double measure = 0.0;  // dy deta dt weight of the node
};

// Quadrature nodes of the partial tents (the rows of ForEachTentRow that
// fall in the region and outside the excluded union).
std::vector<PartialTentSample> sample_partial_tents(
    const std::vector<PartialTent>& pts, const TentQuadrature& q);

SeparationReport check_partial_tent_separation(
    const std::vector<PartialTent>& pts, double alpha, double beta, double B,
    const TentQuadrature& q);

struct RestrictionReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double sup = 0.0;   // sup of |P f| over the points or regions
  double mass = 0.0;  // sum t_k, sum s_k, or |Y|
  double norm_f = 0.0;
  double s_exp = 0.0;
  std::size_t count = 0;
};

// (sum_k t_k |P f(p_k)|^2)^(1/2) against
// ||f||_2 + [sup_k |P f(p_k)| (sum_k t_k)^(1/2)]^s ||f||_2^(1-s).
// Errors with precondition-violated unless the points are separated with
// (alpha, beta) and beta >= 4 delta.
RestrictionReport verify_restriction_discrete(const TransformEngine& engine,
                                              const std::vector<Point3>& points,
                                              double s_exp, double alpha,
                                              double beta);

struct ContinuousCheck {
  TentQuadrature q{16, 16, 16, 0.0, 10};
  double alpha = 1.0;
  double beta = 0.0;  // 0 means 2^-6 b
  double B = 0.0;     // 0 means 2^8 max(C1, C2) / b
  bool check_separation = true;
};

// (sum_k int_{T*_k} |P f|^2 dy deta dt)^(1/2) against
// ||f||_2 + [sup |P f| (sum_k s_k)^(1/2)]^s ||f||_2^(1-s).
RestrictionReport verify_restriction_continuous(
    const TransformEngine& engine, const std::vector<PartialTent>& pts,
    double s_exp, const ContinuousCheck& check = {});

// The same over a subset Y of the union, with |Y| in place of sum_k s_k and
// the exponent fixed at 1/3.
RestrictionReport verify_restriction_subset(
    const TransformEngine& engine, const std::vector<PartialTent>& pts,
    const std::function<bool(const Point3&)>& in_Y,
    const ContinuousCheck& check = {});

// Up to `count` random points in the box, kept only if separated with
// (alpha, beta) from the ones already kept.
std::vector<Point3> random_separated_points(std::uint64_t seed,
                                            std::size_t count,
                                            const Window3& box, double alpha,
                                            double beta,
                                            std::size_t max_tries = 100000);

}  // namespace wpe

#endif  // WPE_SELECTION_H_
