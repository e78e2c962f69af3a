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


#ifndef WPE_OUTER_H_
#define WPE_OUTER_H_

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "wpe/error.h"
#include "wpe/tents.h"
#include "wpe/wavepacket.h"
#include "wpe/weights.h"

namespace wpe {

// A complex function on upper 3-space, zero outside its window.
class Field {
 public:
  explicit Field(Window3 window) : window_(window) {}
  virtual ~Field() = default;

  const Window3& window() const { return window_; }
  Complex operator()(const Point3& p) const {
    return window_.Contains(p) ? Eval(p) : Complex(0.0);
  }
  // out[i] = F(ys[i], eta, t).
  void Row(double eta, double t, const double* ys, std::size_t n,
           Complex* out) const;

 protected:
  virtual Complex Eval(const Point3& p) const = 0;
  virtual void EvalRow(double eta, double t, const double* ys, std::size_t n,
                       Complex* out) const;
  // True when F is known to vanish on the whole row (eta, t).
  virtual bool RowVanishes(double /*eta*/, double /*t*/) const {
    return false;
  }

 private:
  Window3 window_;
};

using FieldPtr = std::shared_ptr<const Field>;

// A window covering all of upper 3-space.
Window3 EverywhereWindow();

class FunctionField : public Field {
 public:
  using Fn = std::function<Complex(const Point3&)>;
  FunctionField(Fn fn, Window3 window = EverywhereWindow())
      : Field(window), fn_(std::move(fn)) {}

 protected:
  Complex Eval(const Point3& p) const override { return fn_(p); }

 private:
  Fn fn_;
};

// P f restricted to a window.
class TransformField : public Field {
 public:
  TransformField(std::shared_ptr<const TransformEngine> engine, Window3 window)
      : Field(window), engine_(std::move(engine)) {}
  const TransformEngine& engine() const { return *engine_; }

 protected:
  Complex Eval(const Point3& p) const override { return (*engine_)(p); }
  void EvalRow(double eta, double t, const double* ys, std::size_t n,
               Complex* out) const override {
    engine_->Row(eta, t, ys, n, out);
  }
  bool RowVanishes(double eta, double t) const override {
    return engine_->Vanishes(eta, t);
  }

 private:
  std::shared_ptr<const TransformEngine> engine_;
};

// sum_i c_i F_i on the intersection of the windows.
class CombinationField : public Field {
 public:
  CombinationField(std::vector<std::pair<Complex, FieldPtr>> terms);

 protected:
  Complex Eval(const Point3& p) const override;
  void EvalRow(double eta, double t, const double* ys, std::size_t n,
               Complex* out) const override;

 private:
  std::vector<std::pair<Complex, FieldPtr>> terms_;
};

FieldPtr Sum(FieldPtr F, FieldPtr G);
FieldPtr Scale(Complex c, FieldPtr F);

// F 1_{X \ E} with E a union of whole tents.
class ExcludedField : public Field {
 public:
  ExcludedField(FieldPtr base, std::vector<Tent> excluded);

 protected:
  Complex Eval(const Point3& p) const override;
  void EvalRow(double eta, double t, const double* ys, std::size_t n,
               Complex* out) const override;

 private:
  FieldPtr base_;
  std::vector<Tent> excluded_;
  bool Excluded(const Point3& p) const;
};

// Samples on a (y, eta, log t) grid with trilinear interpolation.
class SampledField : public Field {
 public:
  // values indexed [it][ieta][iy]; the window is the grid's bounding box.
  SampledField(std::vector<double> y, std::vector<double> eta,
               std::vector<double> t, std::vector<Complex> values);
  static SampledField FromField(const Field& F, std::vector<double> y,
                                std::vector<double> eta, std::vector<double> t);

 protected:
  Complex Eval(const Point3& p) const override;

 private:
  std::vector<double> y_, eta_, logt_;
  std::vector<Complex> values_;
};

// Discretisation of the tent integrals: midpoints in log t on
// (t_lo, s) with t_lo = max(s 2^-depth, t_min), midpoints in y over
// |y - x| < s - t, midpoints in gamma = (eta - xi) t over each lacunary
// piece (-C1, -b) and (b, C2), and n_gamma equispaced gamma in [-b, b] for
// the core supremum.
struct TentQuadrature {
  int n_y = 8;
  int n_gamma = 4;
  int n_logt = 8;
  double t_min = 0.0;
  int depth = 6;

  void Validate() const;
  double TLow(double s) const;
};

enum class NodeKind { kLacunaryLower, kLacunaryUpper, kCore };

struct TentRow {
  NodeKind kind;
  double t;
  double eta;
  // Delta y Delta gamma Delta(log t): the dy deta dt measure of a node is
  // cell * t, the dy deta dt/t measure is cell / t.
  double cell;
  std::vector<double> ys;
};

// Visits the quadrature rows of T in a fixed order. With `u_strip`, y is
// restricted to |y - u| < t as well (the square function at u).
void ForEachTentRow(const Tent& T, const TentQuadrature& q,
                    const std::function<void(const TentRow&)>& visit,
                    const double* u_strip = nullptr);

double premeasure(const Weight& w, const Tent& T);

// S_T(F)(u) = (int_{T^l} |F|^2 1_{|y-u|<t} dy deta dt/t)^(1/2).
double square_function_ST(const Field& F, const Tent& T, double u,
                          const TentQuadrature& q);

enum class SizeVariant {
  kStandard,
  // Negative control: the lacunary part is not divided by w(I).
  kUnnormalized,
};

struct SizeParts {
  double lacunary = 0.0;  // the L^2(w) average, already square-rooted
  double core = 0.0;      // sup of |F| over the core sample
  double value = 0.0;
  bool degenerate = false;  // w(I) = 0: only the core part is used
};

SizeParts size_parts(const Field& F, const Tent& T, const Weight& w,
                     const TentQuadrature& q,
                     SizeVariant variant = SizeVariant::kStandard);
double size(const Field& F, const Tent& T, const Weight& w,
            const TentQuadrature& q,
            SizeVariant variant = SizeVariant::kStandard);

struct AxiomCheck {
  std::string name;
  bool passed = true;
  double lhs = 0.0;
  double rhs = 0.0;
  std::string detail;
};

struct AxiomReport {
  std::vector<AxiomCheck> checks;
  bool passed() const;
};

// Monotonicity (when |F| <= |G| on the tent sample), homogeneity and the
// quasi-triangle inequality with constant 1.
AxiomReport size_axioms_check(const Field& F, const Field& G, const Tent& T,
                              const Weight& w, const TentQuadrature& q,
                              SizeVariant variant = SizeVariant::kStandard);

// A union of whole tents with a spatial index for the tents that can meet
// a given tent.
class ExclusionSet {
 public:
  ExclusionSet() = default;
  explicit ExclusionSet(const std::vector<Tent>& tents);

  void Add(const Tent& T);
  const std::vector<Tent>& tents() const { return all_; }
  bool empty() const { return all_.empty(); }
  bool Contains(const Point3& p) const;
  // Tents that can meet the part of T with t > t_lo.
  void Relevant(const Tent& T, double t_lo, std::vector<const Tent*>* out) const;

 private:
  std::vector<Tent> all_;
  std::vector<std::pair<double, std::vector<Tent>>> by_scale_;  // sorted by x
};

// Resolution of the shared grids of a TentTable.
struct TableOptions {
  int y_refine = 2;    // y spacing is s/16/y_refine at scale s
  int core_rows = 16;  // sampled core frequencies per side of xi, per t
};

// Sizes of a field on many lattice tents at once. For every scale s and
// every log-t node of the tent quadrature, |F| is sampled on the product of
// the lattice frequencies m 2^-8 b/s and the positions j s/(16 y_refine).
// The lacunary integral of a tent is the exact integral of the piecewise
// constant extension of |F|^2 w(y-t,y+t) over its (y, eta) rectangle at each
// t node (prefix sums), so residual sizes of F 1_{X \ E} only need the
// rectangle decomposition of E. The core supremum runs over grid positions
// and over `core_rows` equispaced lattice rows on each side of xi.
class TentTable {
 public:
  TentTable(const Field& F, std::vector<LatticePoint> tents,
            const TentParams& params, const Weight& w,
            const TentQuadrature& q, const LatticeSpec& spec = {},
            SizeVariant variant = SizeVariant::kStandard,
            const TableOptions& options = {});

  std::size_t size() const { return lattice_.size(); }
  const LatticePoint& lattice(std::size_t i) const { return lattice_[i]; }
  const Tent& tent(std::size_t i) const { return tents_[i]; }
  const TentParams& params() const { return params_; }
  const LatticeSpec& spec() const { return spec_; }
  const TentQuadrature& quadrature() const { return q_; }
  const Weight& weight() const { return w_; }
  double sigma(std::size_t i) const { return sigma_[i]; }
  // Indices in lattice order (s desc, x asc, xi desc).
  const std::vector<std::size_t>& order() const { return order_; }

  double Size(std::size_t i) const { return size_[i]; }
  double MaxSize() const;
  // Size of F 1_{X \ E} on tent i.
  double ResidualSize(std::size_t i, const ExclusionSet& E) const;
  // (1/w(I)) int over the lacunary half of tent i minus E of
  // |F|^2 w(y-t, y+t) dy deta dt/t.
  double HalfLacunary(std::size_t i, NodeKind half, const ExclusionSet& E) const;
  // Copy with the field multiplied by a constant of modulus |c|.
  TentTable Scaled(double c) const;

  // Every grid sample (y, eta, t) with its |F|, scale by scale.
  void ForEachSample(
      const std::function<void(const Point3&, double)>& visit) const;
  std::size_t SampleCount() const;

 private:
  struct Slice {
    double t = 0.0;
    double dtau = 0.0;
    bool zero = true;
    std::int64_t m0 = 0;  // first lattice row
    std::int64_t j0 = 0;  // first position index
    std::size_t nm = 0;
    std::size_t nj = 0;
    std::vector<double> prefix;  // (nm+1) x (nj+1) sums of |F|^2 w
    std::vector<double> abs;     // nm x nj values of |F|
    std::vector<double> block;   // nm x ceil(nj/kBlock) maxima of |F|
    std::vector<double> span;    // nm x nx maxima over whole tent y-ranges
  };
  struct Scale {
    int k = 0;
    double s = 0.0;
    double dxi = 0.0;
    double hy = 0.0;
    std::int64_t n_lo = 0;  // lattice x indices of the tents at this scale
    std::size_t nx = 0;
    std::vector<Slice> slices;
  };
  static constexpr std::size_t kBlock = 8;

  std::vector<LatticePoint> lattice_;
  std::vector<Tent> tents_;
  std::vector<std::size_t> scale_of_;
  TentParams params_;
  Weight w_;
  TentQuadrature q_;
  LatticeSpec spec_;
  SizeVariant variant_;
  TableOptions options_;
  std::vector<double> sigma_;
  std::vector<double> norm_;  // 1/w(I); 1 for the unnormalized variant
  std::vector<double> size_;
  std::vector<std::size_t> order_;
  std::vector<Scale> scales_;

  static Slice EmptySlice(double t, double dtau);
  double RectIntegral(const Scale& sc, const Slice& sl, double e1, double e2,
                      double y1, double y2) const;
  double RowMax(const Slice& sl, std::size_t row, std::int64_t j1,
                std::int64_t j2) const;
  double Lacunary(std::size_t i, const std::vector<const Tent*>& rel,
                  int halves) const;
  double Core(std::size_t i, const std::vector<const Tent*>& rel) const;
};

struct CoverResult {
  std::vector<LatticePoint> tents;
  double cost = 0.0;
  // A lower bound for the cost of any cover from the candidate family.
  double lower_bound = 0.0;
  double residual_sup_size = 0.0;
  std::string mode;
  bool exact = false;
  bool cap_exceeded = false;
};

enum class CoverMode { kGreedy, kExhaustive };

// Points sampling a tent: its quadrature nodes and a point on the axis just
// below the apex (x, xi, s (1 - 2^-6)), which only lattice tents with top
// interval containing the whole top interval of T can contain.
std::vector<Point3> TentTargetPoints(const Tent& T, const TentQuadrature& q);

// Cheapest cover of the target points by candidate lattice tents. Greedy
// mode is weighted set cover; exhaustive mode is branch and bound over the
// candidates that contain at least one target point and are not dominated,
// and errors with too-many-candidates beyond `cap`. Both report the bound
// max over points of the cheapest candidate containing it.
CoverResult outer_measure(const Weight& w, const std::vector<Point3>& target,
                          const std::vector<LatticePoint>& candidates,
                          const TentParams& params, CoverMode mode,
                          std::size_t cap = 20, const LatticeSpec& spec = {});

// Greedy super-level cover: tents in lattice order (s desc, x asc, xi
// desc), each added when the residual size on it exceeds lam. The
// certificate is recomputed from scratch with the final cover.
CoverResult superlevel_upper(const TentTable& table, double lam,
                             std::size_t iteration_cap = 10000);
// The same loop started from an existing exclusion set E0; the tents of E0
// are not counted in the cost.
CoverResult superlevel_upper_from(const TentTable& table, double lam,
                                  const ExclusionSet& E0,
                                  std::size_t iteration_cap = 10000);

// Cheapest subset E of the table's tents such that every residual size is
// at most lam. Exact within the table; errors beyond `cap` tents with
// nonzero size.
CoverResult superlevel_exhaustive(const TentTable& table, double lam,
                                  std::size_t cap = 20);

struct LambdaGrid {
  int points = 24;
  double span_log2 = 12.0;  // lambda_min = lambda_max 2^-span_log2
};

// Log-spaced grid from lam_max 2^-span_log2 to lam_max.
std::vector<double> make_lambda_grid(double lam_max, const LambdaGrid& spec);

struct NormBracket {
  double lower = 0.0;
  double upper = 0.0;
  std::vector<double> lambda_grid;
  std::vector<double> mu_upper;  // after monotone post-processing
  std::vector<double> mu_lower;
  bool lower_exact = false;  // lower bracket came from exhaustive search
};

struct NormOptions {
  LambdaGrid grid;
  // When set, this grid is used as is instead of one relative to the sup.
  std::vector<double> lambda_grid;
  bool exhaustive_lower = true;
  std::size_t exhaustive_cap = 20;
};

// Layer-cake brackets: Darboux sums of p lam^{p-1} mu over the lambda grid
// using greedy (upper) and exhaustive (lower) super-level measures.
NormBracket outer_lp_norm(const TentTable& table, double p,
                          const NormOptions& options = {});
NormBracket outer_weak_norm(const TentTable& table, double p,
                            const NormOptions& options = {});

// Both brackets from one set of super-level computations.
struct NormPair {
  NormBracket strong;
  NormBracket weak;
};
NormPair outer_norms(const TentTable& table, double p,
                     const NormOptions& options = {});

// The super-level measures behind the brackets, monotone post-processed.
// They do not depend on p, so one curve serves several exponents.
struct SuperlevelCurve {
  std::vector<double> lambda_grid;
  std::vector<double> mu_upper;
  std::vector<double> mu_lower;
  bool lower_exact = false;
};
SuperlevelCurve superlevel_curve(const TentTable& table,
                                 const NormOptions& options = {});
NormPair norms_from_curve(const SuperlevelCurve& curve, double p);

}  // namespace wpe

#endif  // WPE_OUTER_H_
