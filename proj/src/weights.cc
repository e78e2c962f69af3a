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

#include "wpe/weights.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace wpe {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Integral of u^c over [u1, u2] with 0 <= u1 <= u2.
double PowInt(double u1, double u2, double c) {
  if (u2 <= u1) return 0.0;
  if (c == 0.0) return u2 - u1;
  if (c <= -1.0 && u1 == 0.0) return kInf;
  if (c == -1.0) return std::log(u2 / u1);
  return (std::pow(u2, c + 1.0) - std::pow(u1, c + 1.0)) / (c + 1.0);
}

// Integral over [a, b] of g(|x|) where G integrates g over [u1, u2] >= 0.
template <typename G>
double SignSplit(double a, double b, G&& g) {
  if (b <= 0.0) return g(-b, -a);
  if (a >= 0.0) return g(a, b);
  return g(0.0, -a) + g(0.0, b);
}

// Exact integral of l^r over a cell where l is linear from v0 to v1.
double LinearPowInt(double v0, double v1, double len, double r) {
  if (len <= 0.0) return 0.0;
  if (r == 1.0) return 0.5 * (v0 + v1) * len;
  if (r == 0.0) return len;
  double lo = std::min(v0, v1), hi = std::max(v0, v1);
  if (lo < 0.0) return std::numeric_limits<double>::quiet_NaN();
  if (hi == 0.0) return r > 0.0 ? 0.0 : kInf;
  if (lo == 0.0 && r <= -1.0) return kInf;
  if (hi - lo <= 1e-14 * hi) return std::pow(0.5 * (v0 + v1), r) * len;
  if (r == -1.0) return len * std::log(hi / lo) / (hi - lo);
  return len * (std::pow(hi, r + 1.0) - std::pow(lo, r + 1.0)) /
         ((r + 1.0) * (hi - lo));
}

}  // namespace

Weight Weight::Lebesgue() { return Weight(); }

Weight Weight::Power(double a) {
  if (!(a > -1.0) || !std::isfinite(a)) {
    throw Error(ErrorCode::kInvalidExponent,
                "power weight |x|^a needs a > -1");
  }
  Weight w;
  w.kind_ = Kind::kPower;
  w.a_ = a;
  return w;
}

Weight Weight::ShiftedPower(double a) {
  if (!std::isfinite(a)) {
    throw Error(ErrorCode::kInvalidExponent, "non-finite exponent");
  }
  Weight w;
  w.kind_ = Kind::kShiftedPower;
  w.a_ = a;
  return w;
}

Weight Weight::Sampled(double x0, double h, std::vector<double> values) {
  if (!(h > 0.0) || values.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "sampled weight needs h > 0 and at least two samples");
  }
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "sampled weight values must be finite and nonnegative");
    }
  }
  auto data = std::make_shared<SampledData>();
  data->x0 = x0;
  data->h = h;
  data->values = std::move(values);
  data->prefix.assign(data->values.size(), 0.0);
  for (size_t j = 1; j < data->values.size(); ++j) {
    data->prefix[j] = data->prefix[j - 1] +
                      0.5 * h * (data->values[j - 1] + data->values[j]);
  }
  Weight w;
  w.kind_ = Kind::kSampled;
  w.sampled_ = std::move(data);
  return w;
}

Weight Weight::FromCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfig, "cannot open weight csv " + path);
  std::vector<double> xs, ws;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double x, v;
    if (!(ss >> x >> v)) continue;  // header line
    xs.push_back(x);
    ws.push_back(v);
  }
  if (xs.size() < 2) throw Error(ErrorCode::kConfig, "weight csv too short");
  double h = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
  for (size_t j = 1; j < xs.size(); ++j) {
    if (!(xs[j] > xs[j - 1]) ||
        std::abs(xs[j] - xs[0] - h * static_cast<double>(j)) > 1e-9 * h *
                                                                   xs.size()) {
      throw Error(ErrorCode::kConfig,
                  "weight csv x column must be uniform and increasing");
    }
  }
  return Sampled(xs.front(), h, std::move(ws));
}

std::string Weight::descriptor() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::kLebesgue: os << "lebesgue"; break;
    case Kind::kPower: os << "power(" << a_ << ")"; break;
    case Kind::kShiftedPower: os << "shifted-power(" << a_ << ")"; break;
    case Kind::kSampled:
      os << "sampled(x0=" << sampled_->x0 << ",h=" << sampled_->h
         << ",n=" << sampled_->values.size() << ")";
      break;
  }
  return os.str();
}

Interval Weight::domain() const {
  if (kind_ != Kind::kSampled) return {-kInf, kInf};
  return {sampled_->x0,
          sampled_->x0 +
              sampled_->h * static_cast<double>(sampled_->values.size() - 1)};
}

double Weight::operator()(double x) const {
  switch (kind_) {
    case Kind::kLebesgue: return 1.0;
    case Kind::kPower: return std::pow(std::abs(x), a_);
    case Kind::kShiftedPower: return std::pow(1.0 + std::abs(x), a_);
    case Kind::kSampled: {
      const SampledData& d = *sampled_;
      double u = (x - d.x0) / d.h;
      if (u < 0.0 || u > static_cast<double>(d.values.size() - 1)) {
        throw Error(ErrorCode::kOutOfDomain, "outside sampled weight grid");
      }
      size_t j = std::min(static_cast<size_t>(u), d.values.size() - 2);
      double f = u - static_cast<double>(j);
      return (1.0 - f) * d.values[j] + f * d.values[j + 1];
    }
  }
  return 0.0;
}

double Weight::SampledIntegralTo(double x) const {
  const SampledData& d = *sampled_;
  double u = (x - d.x0) / d.h;
  size_t last = d.values.size() - 1;
  if (u <= 0.0) return 0.0;
  if (u >= static_cast<double>(last)) return d.prefix[last];
  size_t j = static_cast<size_t>(u);
  double f = u - static_cast<double>(j);
  double vx = (1.0 - f) * d.values[j] + f * d.values[j + 1];
  return d.prefix[j] + 0.5 * f * d.h * (d.values[j] + vx);
}

double Weight::Integral(double a, double b) const {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw Error(ErrorCode::kInvalidInterval, "need finite a < b");
  }
  switch (kind_) {
    case Kind::kLebesgue: return b - a;
    case Kind::kPower:
      return SignSplit(a, b, [&](double u1, double u2) {
        return PowInt(u1, u2, a_);
      });
    case Kind::kShiftedPower:
      return SignSplit(a, b, [&](double u1, double u2) {
        return PowInt(1.0 + u1, 1.0 + u2, a_);
      });
    case Kind::kSampled: {
      Interval dom = domain();
      double tol = 1e-12 * sampled_->h;
      if (a < dom.lo - tol || b > dom.hi + tol) {
        throw Error(ErrorCode::kOutOfDomain,
                    "interval outside sampled weight grid");
      }
      return SampledIntegralTo(b) - SampledIntegralTo(a);
    }
  }
  return 0.0;
}

double Weight::PowerIntegral(double a, double b, double r) const {
  if (!(a < b)) throw Error(ErrorCode::kInvalidInterval, "need a < b");
  switch (kind_) {
    case Kind::kLebesgue: return b - a;
    case Kind::kPower:
      return SignSplit(a, b, [&](double u1, double u2) {
        return PowInt(u1, u2, a_ * r);
      });
    case Kind::kShiftedPower:
      return SignSplit(a, b, [&](double u1, double u2) {
        return PowInt(1.0 + u1, 1.0 + u2, a_ * r);
      });
    case Kind::kSampled: {
      Interval dom = domain();
      if (a < dom.lo - 1e-12 * sampled_->h ||
          b > dom.hi + 1e-12 * sampled_->h) {
        throw Error(ErrorCode::kOutOfDomain,
                    "interval outside sampled weight grid");
      }
      const SampledData& d = *sampled_;
      a = std::max(a, dom.lo);
      b = std::min(b, dom.hi);
      double total = 0.0;
      double x = a;
      while (x < b) {
        size_t j = std::min(static_cast<size_t>((x - d.x0) / d.h),
                            d.values.size() - 2);
        double cell_end = d.x0 + d.h * static_cast<double>(j + 1);
        double xe = std::min(b, cell_end);
        if (xe <= x) {  // rounding at a cell boundary
          x = std::nextafter(cell_end, kInf);
          continue;
        }
        total += LinearPowInt((*this)(x), (*this)(xe), xe - x, r);
        x = xe;
      }
      return total;
    }
  }
  return 0.0;
}

double weight_integral(const Weight& w, double a, double b) {
  return w.Integral(a, b);
}

namespace {

// Calls fn(lo, hi) for every dyadic subinterval of `window` at levels
// 0..resolution and for the union of every adjacent pair on a level.
template <typename Fn>
void ForEachTestInterval(Interval window, int resolution, Fn&& fn) {
  for (int j = 0; j <= resolution; ++j) {
    long parts = 1L << j;
    double len = window.length() / static_cast<double>(parts);
    for (long i = 0; i < parts; ++i) {
      double lo = window.lo + len * static_cast<double>(i);
      double hi = (i + 1 == parts) ? window.hi : lo + len;
      fn(lo, hi);
      if (i + 2 <= parts) {
        double hi2 = (i + 2 == parts) ? window.hi : lo + 2.0 * len;
        fn(lo, hi2);
      }
    }
  }
}

}  // namespace

ApEstimate ap_constant(const Weight& w, double p, Interval window,
                       int resolution) {
  if (!(p > 1.0)) throw Error(ErrorCode::kInvalidExponent, "A_p needs p > 1");
  if (resolution < 1) {
    throw Error(ErrorCode::kInvalidArgument, "resolution must be >= 1");
  }
  if (!(window.lo < window.hi)) {
    throw Error(ErrorCode::kInvalidInterval, "empty window");
  }
  ApEstimate est{p, 0.0, window, resolution};
  double r = -1.0 / (p - 1.0);
  ForEachTestInterval(window, resolution, [&](double lo, double hi) {
    double len = hi - lo;
    double avg_w = w.Integral(lo, hi) / len;
    double avg_d = w.PowerIntegral(lo, hi, r) / len;
    double v = (avg_w == 0.0 || !std::isfinite(avg_d))
                   ? kInf
                   : avg_w * std::pow(avg_d, p - 1.0);
    est.value = std::max(est.value, v);
  });
  return est;
}

double doubling_constant(const Weight& w, Interval window, int resolution) {
  if (resolution < 1) {
    throw Error(ErrorCode::kInvalidArgument, "resolution must be >= 1");
  }
  if (!(window.lo < window.hi)) {
    throw Error(ErrorCode::kInvalidInterval, "empty window");
  }
  if (w.Integral(window.lo, window.hi) == 0.0) {
    throw Error(ErrorCode::kDegenerateWeight, "weight vanishes on window");
  }
  Interval dom = w.domain();
  double best = 0.0;
  ForEachTestInterval(window, resolution, [&](double lo, double hi) {
    double half = 0.5 * (hi - lo);
    double c = 0.5 * (lo + hi);
    double lo2 = c - 2.0 * half, hi2 = c + 2.0 * half;
    if (lo2 < dom.lo || hi2 > dom.hi) return;
    double wi = w.Integral(lo, hi);
    double v = wi == 0.0 ? kInf : w.Integral(lo2, hi2) / wi;
    best = std::max(best, v);
  });
  return best;
}

double chi_localizer(Interval I, double x) {
  double len = I.length();
  if (!(len > 0.0)) {
    throw Error(ErrorCode::kInvalidInterval, "chi_localizer needs |I| > 0");
  }
  double u = (x - I.center()) / len;
  return 1.0 / (1.0 + u * u);
}

}  // namespace wpe
