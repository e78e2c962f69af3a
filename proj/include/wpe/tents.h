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

#ifndef WPE_TENTS_H_
#define WPE_TENTS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wpe/error.h"

namespace wpe {

// A point (y, eta, t) of upper 3-space: position, frequency, scale.
struct Point3 {
  double y = 0.0;
  double eta = 0.0;
  double t = 1.0;
};

struct TentParams {
  double C1 = 1.0;
  double C2 = 1.0;
  double b = 0.5;

  void Validate() const;
  double c_max() const { return C1 > C2 ? C1 : C2; }
};

enum class Region { kWhole, kCore, kLacunary, kLacunaryUpper, kLacunaryLower };

const char* RegionName(Region r);

struct Tent {
  double x = 0.0;
  double xi = 0.0;
  double s = 1.0;
  TentParams params;

  Interval top() const { return {x - s, x + s}; }
};

bool tent_contains(const Tent& T, const Point3& p, Region region);

// The frequency step of the lattice at scale 2^k is 2^(xi_log2_step - k) b.
// The default is the standard lattice; other values exist only so that
// negative controls can perturb the geometry.
struct LatticeSpec {
  int xi_log2_step = -8;
};

struct LatticePoint {
  int k = 0;
  std::int64_t n = 0;
  std::int64_t m = 0;

  double x() const;
  double s() const;
  double xi(double b, const LatticeSpec& spec = {}) const;
  Tent tent(const TentParams& params, const LatticeSpec& spec = {}) const;

  bool operator==(const LatticePoint& o) const {
    return k == o.k && n == o.n && m == o.m;
  }
};

// Exact three-way comparisons of lattice coordinates (-1, 0, 1).
int CompareX(const LatticePoint& a, const LatticePoint& b);
int CompareXi(const LatticePoint& a, const LatticePoint& b);

// Order used by all greedy loops over tents: s desc, x asc, xi desc.
bool LatticeOrderLess(const LatticePoint& a, const LatticePoint& b);

struct Window3 {
  Interval y;
  Interval eta;
  double t_min = 0.25;
  double t_max = 1.0;

  void Validate() const;
  bool Contains(const Point3& p) const {
    return p.y >= y.lo && p.y <= y.hi && p.eta >= eta.lo &&
           p.eta <= eta.hi && p.t >= t_min && p.t <= t_max;
  }
};

// Enumeration knobs. x_reach scales the s-neighbourhood of the y-range in
// which centres are admitted (1 means: top interval meets the y-range);
// xi_pad scales the C_max/s padding of the eta-range.
struct LatticeOptions {
  double x_reach = 1.0;
  double xi_pad = 1.0;
  std::size_t cap = 1000000;
  LatticeSpec spec;
};

std::vector<LatticePoint> lattice_tents(const Window3& window,
                                        const TentParams& params,
                                        const LatticeOptions& options = {});

struct CentralParents {
  LatticePoint lower;  // xi- <= eta
  LatticePoint upper;  // eta <= xi+
};

CentralParents central_lattice_parents(const Point3& p,
                                       const TentParams& params,
                                       const LatticeSpec& spec = {});

// The three inequalities 2^-3 s <= t <= 2^-2 s, |y - x| <= 2^-4 s,
// |eta - xi| <= 2^-8 b / s, always with the standard constants.
bool centrally_contains(const LatticePoint& lp, const TentParams& params,
                        const Point3& p, const LatticeSpec& spec = {});

bool in_strip(double x_s, double s_s, const Point3& p);

std::optional<Tent> strip_intersect(const Tent& T, double x_s, double s_s);

std::string ToString(const LatticePoint& lp);

}  // namespace wpe

#endif  // WPE_TENTS_H_
