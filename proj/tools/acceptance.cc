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


// Runs the acceptance criteria and prints one pass/fail line per criterion.
// Exit status 0 when all pass, 1 otherwise.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wpe/harness.h"

using namespace wpe;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string Format(const char* fmt, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, a, b, c);
  return buf;
}

std::string FailedChecks(const SuiteReport& r) {
  std::string s;
  for (const AxiomCheck& c : r.checks) {
    if (!c.passed) s += (s.empty() ? "" : "; ") + c.name + " (" + c.detail + ")";
  }
  return s;
}

Outcome SuiteOutcome(const SuiteReport& r) {
  if (r.passed()) return {true, std::to_string(r.checks.size()) + " checks, 0 failures"};
  return {false, FailedChecks(r)};
}

ExperimentConfig Defaults() { return ExperimentConfig::FromJson(Json::object()); }

Outcome Geometry() { return SuiteOutcome(run_geometry_suite(1)); }

Outcome Axioms() { return SuiteOutcome(run_axiom_suite(Defaults(), 100)); }

Outcome Wavepackets() { return SuiteOutcome(run_wavepacket_suite(1)); }

Outcome Selection(const std::string& config) {
  return SuiteOutcome(run_selection_suite(ExperimentConfig::Load(config)));
}

Outcome Restriction(const std::string& config) {
  RestrictionSweep s = run_restriction_check(ExperimentConfig::Load(config));
  bool finite = true;
  for (const RestrictionRow& r : s.rows) {
    finite = finite && std::isfinite(r.coarse.ratio) && std::isfinite(r.fine.ratio);
  }
  Outcome o;
  o.passed = finite && !s.rows.empty() && s.max_ratio < s.ceiling && s.max_drift <= 0.15 &&
             s.separation_violations == 0;
  o.detail = std::to_string(s.rows.size()) + " rows" +
             Format(", max ratio %.4g (ceiling %g), max drift %.4f", s.max_ratio, s.ceiling,
                    s.max_drift) +
             ", " + std::to_string(s.separation_violations) + " separation violations" +
             (finite ? "" : ", non-finite ratio");
  return o;
}

// Moves the signal and the window together.
ExperimentConfig Transformed(double translate, double dilate) {
  ExperimentConfig cfg = Defaults();
  cfg.modes.selection = false;
  cfg.signal.translate = translate;
  cfg.signal.dilate = dilate;
  cfg.window.y = {cfg.window.y.lo * dilate + translate, cfg.window.y.hi * dilate + translate};
  cfg.window.eta = {cfg.window.eta.lo / dilate, cfg.window.eta.hi / dilate};
  cfg.window.t_min *= dilate;
  cfg.window.t_max *= dilate;
  return cfg;
}

Outcome EmbeddingCovariance() {
  double base = run_embed_check(Transformed(0.0, 1.0)).max_ratio;
  double moved = run_embed_check(Transformed(0.25, 1.0)).max_ratio;
  double dilated = run_embed_check(Transformed(0.0, 2.0)).max_ratio;
  double dt = std::abs(moved / base - 1.0), dd = std::abs(dilated / base - 1.0);
  Outcome o;
  o.passed = base > 0.0 && std::isfinite(base) && dt <= 0.05 && dd <= 0.05;
  o.detail = Format("ratio %.6g, translated %+.3g%%, dilated %+.3g%%", base, 100 * dt, 100 * dd);
  return o;
}

Outcome WeightedWeak() {
  Outcome o{true, ""};
  for (double a : {-0.5, 0.5, 1.0}) {
    double ratio[2] = {0.0, 0.0};
    bool finite = true;
    for (int k = 0; k < 2; ++k) {
      ExperimentConfig cfg = Defaults();
      cfg.modes.outer_norm = false;
      cfg.weight.kind = "shifted_power";
      cfg.weight.a = a;
      double f = k == 0 ? 1.0 : 2.0;
      cfg.window.y = {cfg.window.y.lo * f, cfg.window.y.hi * f};
      EmbedReport r = run_embed_check(cfg);
      for (const EmbedRow& row : r.rows) {
        for (const WeakRow& w : row.selection) finite = finite && std::isfinite(w.weak_ratio);
      }
      ratio[k] = r.max_weak_ratio;
    }
    double change = ratio[0] > 0.0 ? ratio[1] / ratio[0] - 1.0 : INFINITY;
    bool ok = finite && ratio[0] > 0.0 && change <= 0.10;
    o.passed = o.passed && ok;
    o.detail += (o.detail.empty() ? "" : "; ") +
                Format("a=%g: weak ratio %.4g, doubled window %+.3g%%", a, ratio[0], 100 * change) +
                (finite ? "" : " (non-finite)");
  }
  return o;
}

Outcome NegativeControls() {
  SuiteReport spacing = run_geometry_suite(1, LatticeSpec{-7});
  SuiteReport size = run_axiom_suite(Defaults(), 100, SizeVariant::kUnnormalized);
  Outcome o;
  o.passed = !spacing.passed() && !size.passed();
  o.detail = std::string("doubled frequency spacing ") +
             (spacing.passed() ? "NOT detected" : "detected") + ", size without 1/w " +
             (size.passed() ? "NOT detected" : "detected");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::string config_dir = WPE_CONFIG_DIR;
  std::vector<int> only;
  app.add_option("--config-dir", config_dir, "Directory with restriction.json");
  app.add_option("--only", only, "Run only these criteria");
  CLI11_PARSE(app, argc, argv);
  std::setvbuf(stdout, nullptr, _IOLBF, 0);

  std::string restriction = config_dir + "/restriction.json";
  struct Criterion {
    const char* id;
    const char* name;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> criteria = {
      {"1", "geometry exactness", Geometry},
      {"2", "outer measure axioms", Axioms},
      {"3", "wave packet analytics", Wavepackets},
      {"4", "selection separation", [&] { return Selection(restriction); }},
      {"5", "restriction estimates", [&] { return Restriction(restriction); }},
      {"6a", "embedding covariance", EmbeddingCovariance},
      {"6b", "weighted weak embedding", WeightedWeak},
      {"7", "negative controls", NegativeControls},
  };
  bool all = true;
  for (const Criterion& c : criteria) {
    int major = std::atoi(c.id);
    if (!only.empty() && std::find(only.begin(), only.end(), major) == only.end()) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    all = all && o.passed;
    std::printf("criterion %-2s %-26s %s  [%.1fs] %s\n", c.id, c.name, o.passed ? "PASS" : "FAIL",
                secs, o.detail.c_str());
  }
  return all ? 0 : 1;
}
