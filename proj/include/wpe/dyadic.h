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

#ifndef WPE_DYADIC_H_
#define WPE_DYADIC_H_

#include <cstdint>
#include <vector>

#include "wpe/error.h"
#include "wpe/weights.h"

namespace wpe {

// Interval number m at level j of the grid with shift k:
// [2^-j (m + (-1)^j k/3), 2^-j (m + 1 + (-1)^j k/3)).
// Endpoints are (3m + (-1)^j k) / (3 * 2^j); membership tests are exact.
struct DyadicInterval {
  int shift = 0;
  int level = 0;
  std::int64_t m = 0;

  double lo() const;
  double hi() const;
  double length() const;
  bool Contains(double x) const;              // lo <= x < hi
  bool ContainsClosed(double a, double b) const;  // [a, b] inside
};

class DyadicGrid {
 public:
  explicit DyadicGrid(int shift_index);
  int shift() const { return shift_; }
  DyadicInterval Locate(double x, int level) const;

 private:
  int shift_;
};

struct GridCover {
  int shift_index = 0;
  DyadicInterval J;
};

// Tries lengths |J| = 2^-j in [3|I|, 6|I|] from the shortest up, shifts
// 0, 1, 2 in order; the first grid interval holding I wins.
GridCover three_grids_cover(Interval I);

// A nonnegative function, constant on the cells [x0 + j h, x0 + (j+1) h)
// and zero outside them.
struct SampledFunction {
  double x0 = 0.0;
  double h = 1.0;
  std::vector<double> values;

  double end() const { return x0 + h * static_cast<double>(values.size()); }
  double operator()(double x) const;
};

// sup over standard dyadic Q containing x of ((1/|Q|) int_Q |g|^p w)^(1/p).
// Levels 2^-j for j within `depth` of the level matching the support of g.
double dyadic_maximal(const SampledFunction& g, double p, const Weight& w,
                      double x, int depth = 40);

// Same operator with the cell masses precomputed, for many evaluations.
class DyadicMaximal {
 public:
  DyadicMaximal(const SampledFunction& g, double p, const Weight& w,
                int depth = 40);
  double operator()(double x) const;

 private:
  SampledFunction g_;
  double p_;
  Weight w_;
  int j_lo_, j_hi_;
  std::vector<double> prefix_;  // prefix sums of |g|^p w(cell)

  double Mass(double lo, double hi) const;
};

// sup over standard dyadic Q containing x of inf_c (1/|Q|) int_Q |g - c|.
// The infimum is exact: it is attained at a weighted median of g on Q.
double sharp_maximal(const SampledFunction& g, double x, int depth = 40);

// Half-open intervals [lo, hi) with multiplicity.
class CountingFunction {
 public:
  CountingFunction() = default;
  explicit CountingFunction(std::vector<Interval> intervals);

  const std::vector<Interval>& intervals() const { return intervals_; }
  int operator()(double x) const;
  // Counts only the intervals contained in I.
  int Restricted(Interval I, double x) const;
  CountingFunction RestrictedTo(Interval I) const;

  struct Piece {
    double lo, hi;
    int value;
  };
  // Piecewise-constant representation between consecutive breakpoints.
  std::vector<Piece> Pieces() const;
  // w({N > level}).
  double LevelMass(const Weight& w, double level) const;
  // int N dw.
  double Integral(const Weight& w) const;

 private:
  std::vector<Interval> intervals_;
};

int counting_function(const CountingFunction& N, double x);

struct GoodLambdaRow {
  double t = 0.0;
  double mass_N_t = 0.0;        // w(N > t)
  double mass_N_quarter = 0.0;  // w(N > t/4)
  std::vector<double> mass_M;   // w(M_{q,w} f > c lam t^{r/q}) per c
};

struct GoodLambdaReport {
  double q = 4.0, r = 0.5, lam = 1.0;
  double L = 2.0;
  std::vector<double> c_grid;
  std::vector<GoodLambdaRow> rows;
  // Largest c of the sweep for which every row satisfies the inequality;
  // 0 when none does.
  double c_max = 0.0;
  bool trivially_holds = false;  // N vanishes identically
};

GoodLambdaReport good_lambda_report(const CountingFunction& N,
                                    const SampledFunction& f,
                                    const Weight& w, double q, double r,
                                    double lam,
                                    const std::vector<double>& t_grid,
                                    const std::vector<double>& c_grid,
                                    int depth = 40);

}  // namespace wpe

#endif  // WPE_DYADIC_H_
