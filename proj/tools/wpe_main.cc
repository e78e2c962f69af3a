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


// Command line front end. Exit status: 0 pass, 1 assertion failure,
// 2 usage or configuration error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wpe/harness.h"

namespace {

using namespace wpe;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct Common {
  std::string config;
  std::string out;
};

ExperimentConfig LoadConfig(const Common& c) {
  ExperimentConfig cfg = c.config.empty()
                             ? ExperimentConfig::FromJson(Json::object())
                             : ExperimentConfig::Load(c.config);
  if (!c.out.empty()) cfg.out_dir = c.out;
  cfg.Validate();
  return cfg;
}

void Emit(const ExperimentConfig& cfg, const Json& report) {
  std::string text = dump_report(report);
  if (cfg.out_dir.empty()) {
    std::cout << text;
    return;
  }
  std::filesystem::create_directories(cfg.out_dir);
  write_text(cfg.out_dir + "/report.json", text);
}

std::string OutPath(const ExperimentConfig& cfg, const std::string& name) {
  return cfg.out_dir + "/" + name;
}

void PrintSuite(const SuiteReport& r) {
  for (const AxiomCheck& c : r.checks) {
    std::fprintf(stderr, "%-55s %s  %s\n", c.name.c_str(),
                 c.passed ? "ok  " : "FAIL", c.detail.c_str());
  }
}

Point3 ParsePoint(const std::vector<double>& v) {
  if (v.size() != 3) throw Error(ErrorCode::kConfig, "expected y eta t");
  return {v[0], v[1], v[2]};
}

int Transform(const Common& common, const std::vector<double>& point) {
  ExperimentConfig cfg = LoadConfig(common);
  Point3 p = ParsePoint(point);
  WaveletPtr phi = make_wavelet(cfg);
  Json rows = Json::array();
  for (std::uint64_t seed : cfg.signal.seeds) {
    SampledSignal f = cfg.signal.Sample(seed);
    TransformEngine engine(phi, f);
    Complex direct = transform(f, *phi, p);
    Complex spectral = engine(p);
    rows.push_back({{"signal", cfg.signal.Id(seed)},
                    {"re", direct.real()},
                    {"im", direct.imag()},
                    {"abs", std::abs(direct)},
                    {"spectral_re", spectral.real()},
                    {"spectral_im", spectral.imag()}});
  }
  Json body{{"point", {p.y, p.eta, p.t}}, {"values", rows}};
  Emit(cfg, make_report("transform", cfg, Json::object(), body));
  return kPass;
}

int Size(const Common& common, const std::vector<double>& tent) {
  ExperimentConfig cfg = LoadConfig(common);
  if (tent.size() != 3) throw Error(ErrorCode::kConfig, "expected x xi s");
  Tent T{tent[0], tent[1], tent[2], cfg.theta};
  Weight w = cfg.weight.Build();
  WaveletPtr phi = make_wavelet(cfg);
  Json rows = Json::array();
  for (std::uint64_t seed : cfg.signal.seeds) {
    auto engine = std::make_shared<TransformEngine>(phi, cfg.signal.Sample(seed));
    TransformField F(engine, EverywhereWindow());
    TentQuadrature q = cfg.quadrature;
    q.t_min = std::max(q.t_min, engine->t_floor());
    SizeParts parts = size_parts(F, T, w, q);
    rows.push_back({{"signal", cfg.signal.Id(seed)},
                    {"size", parts.value},
                    {"lacunary", parts.lacunary},
                    {"core", parts.core},
                    {"degenerate", parts.degenerate},
                    {"premeasure", premeasure(w, T)}});
  }
  Json body{{"tent", {T.x, T.xi, T.s}}, {"sizes", rows}};
  Emit(cfg, make_report("size", cfg, Json::object(), body));
  return kPass;
}

int OuterNorm(const Common& common, double p) {
  ExperimentConfig cfg = LoadConfig(common);
  Weight w = cfg.weight.Build();
  NormOptions no;
  no.grid = cfg.lambda;
  no.exhaustive_lower = cfg.modes.exhaustive_lower;
  no.exhaustive_cap = cfg.modes.exhaustive_cap;
  Json rows = Json::array();
  bool ok = true;
  for (std::uint64_t seed : cfg.signal.seeds) {
    FieldSetup fs = build_field(cfg, seed, w);
    SuperlevelCurve curve = superlevel_curve(*fs.table, no);
    NormPair n = norms_from_curve(curve, p);
    ok = ok && n.strong.lower <= n.strong.upper && n.weak.lower <= n.weak.upper;
    rows.push_back({{"signal", cfg.signal.Id(seed)},
                    {"tents", fs.table->size()},
                    {"strong", {n.strong.lower, n.strong.upper}},
                    {"weak", {n.weak.lower, n.weak.upper}},
                    {"lower_exact", curve.lower_exact}});
    if (!cfg.out_dir.empty()) {
      std::vector<std::vector<double>> csv;
      for (std::size_t i = 0; i < curve.lambda_grid.size(); ++i) {
        csv.push_back({curve.lambda_grid[i], curve.mu_upper[i], curve.mu_lower[i]});
      }
      std::filesystem::create_directories(cfg.out_dir);
      write_csv(OutPath(cfg, "curve_" + cfg.signal.Id(seed) + ".csv"),
                {"lambda", "mu_upper", "mu_lower"}, csv);
    }
  }
  Emit(cfg, make_report("outer-norm", cfg, Json::object(),
                        {{"p", p}, {"norms", rows}}));
  return ok ? kPass : kFail;
}

Json StepsJson(const SelectionResult& r, const Weight& w,
               std::vector<std::vector<double>>* csv) {
  Json steps = Json::array();
  for (std::size_t i = 0; i < r.steps.size(); ++i) {
    const SelectionStep& st = r.steps[i];
    Tent T = st.tent.tent(r.params, r.spec);
    double wI = w.Integral(T.x - T.s, T.x + T.s);
    csv->push_back({static_cast<double>(i), T.s, T.xi, wI});
    Json s{{"tent", ToString(st.tent)}, {"quantity", st.quantity}, {"wI", wI}};
    if (st.has_witness) s["witness"] = {st.witness.y, st.witness.eta, st.witness.t};
    steps.push_back(s);
  }
  return {{"phase", PhaseName(r.phase)},
          {"threshold", r.threshold},
          {"cost", r.total_cost},
          {"certificate", r.residual_certificate},
          {"certified", r.certified()},
          {"cap_exceeded", r.cap_exceeded},
          {"steps", steps}};
}

int Select(const Common& common, double fraction) {
  ExperimentConfig cfg = LoadConfig(common);
  Weight w = cfg.weight.Build();
  double c_sel = cfg.c_sel > 0.0
                     ? cfg.c_sel
                     : 2.0 * doubling_constant(w, cfg.window.y, cfg.weight_resolution);
  Json rows = Json::array();
  bool ok = true;
  for (std::uint64_t seed : cfg.signal.seeds) {
    FieldSetup fs = build_field(cfg, seed, w);
    double peak = 0.0;
    fs.table->ForEachSample([&](const Point3&, double v) { peak = std::max(peak, v); });
    double lam = fraction * peak;
    SelectionResult q0 = select_linfty(*fs.table, lam, cfg.modes.selection_cap);
    std::vector<Tent> E0 = q0.Tents();
    SelectionResult qp = select_l2(*fs.table, lam, NodeKind::kLacunaryUpper, c_sel, E0,
                                   cfg.modes.selection_cap);
    SelectionResult qm = select_l2(*fs.table, lam, NodeKind::kLacunaryLower, c_sel, E0,
                                   cfg.modes.selection_cap);
    Json phases = Json::array();
    for (const SelectionResult* r : {&q0, &qp, &qm}) {
      std::vector<std::vector<double>> csv;
      phases.push_back(StepsJson(*r, w, &csv));
      ok = ok && r->certified() && !r->cap_exceeded;
      if (!cfg.out_dir.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        write_csv(OutPath(cfg, std::string("select_") + PhaseName(r->phase) + "_" +
                                   cfg.signal.Id(seed) + ".csv"),
                  {"step", "s", "xi", "wI"}, csv);
      }
    }
    rows.push_back({{"signal", cfg.signal.Id(seed)},
                    {"lambda", lam},
                    {"c_sel", c_sel},
                    {"phases", phases}});
  }
  Emit(cfg, make_report("select", cfg, {{"certificate", "residual <= threshold"}},
                        {{"lambda_fraction", fraction}, {"runs", rows}}));
  return ok ? kPass : kFail;
}

int EmbedCheck(const Common& common) {
  ExperimentConfig cfg = LoadConfig(common);
  EmbedReport r = run_embed_check(cfg);
  bool ok = std::isfinite(r.max_ratio) && std::isfinite(r.max_weak_ratio);
  std::vector<std::vector<double>> csv, weak;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const EmbedRow& row = r.rows[i];
    double id = static_cast<double>(cfg.signal.seeds[i]);
    csv.push_back({id, row.norm_f, row.strong.upper, row.ratio_upper});
    for (const WeakRow& wr : row.selection) {
      ok = ok && wr.certified && !wr.cap_exceeded && std::isfinite(wr.weak_ratio);
      weak.push_back({id, wr.lambda, wr.cost, wr.weak_ratio});
    }
  }
  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    write_csv(OutPath(cfg, "embed.csv"), {"signal", "norm_f", "norm_Pf_upper", "ratio"}, csv);
    write_csv(OutPath(cfg, "weak.csv"), {"signal", "lambda", "cost", "weak_ratio"}, weak);
  }
  Emit(cfg, make_report("embed-check", cfg,
                        {{"certificate", "residual <= threshold"},
                         {"ratios", "finite"}},
                        r.ToJson()));
  return ok ? kPass : kFail;
}

int SquareFnCheck(const Common& common, int n_u) {
  ExperimentConfig cfg = LoadConfig(common);
  SquareFnReport r = run_squarefn_check(cfg, {}, n_u);
  Emit(cfg, make_report("squarefn-check", cfg, {{"ratio", "finite"}}, r.ToJson()));
  return std::isfinite(r.max_ratio) ? kPass : kFail;
}

int Axioms(const Common& common, const std::string& suite, int seeds,
           bool unnormalized, int xi_step) {
  ExperimentConfig cfg = LoadConfig(common);
  std::uint64_t seed = cfg.signal.seeds.empty() ? 1 : cfg.signal.seeds.front();
  SuiteReport r;
  if (suite == "outer") {
    r = run_axiom_suite(cfg, seeds,
                        unnormalized ? SizeVariant::kUnnormalized : SizeVariant::kStandard);
  } else if (suite == "geometry") {
    LatticeSpec spec;
    spec.xi_log2_step = xi_step;
    r = run_geometry_suite(seed, spec);
  } else if (suite == "wavepacket") {
    r = run_wavepacket_suite(seed);
  } else if (suite == "selection") {
    r = run_selection_suite(cfg);
  } else {
    throw Error(ErrorCode::kConfig, "unknown suite " + suite);
  }
  PrintSuite(r);
  Emit(cfg, make_report("axioms", cfg, Json::object(), r.ToJson()));
  return r.passed() ? kPass : kFail;
}

int Interp(const Common& common, double p1, double p2, double p) {
  ExperimentConfig cfg = LoadConfig(common);
  InterpolationReport r = run_interpolation_demo(cfg, p1, p2, p);
  Emit(cfg, make_report("interp", cfg, Json::object(), r.ToJson()));
  return std::isfinite(r.constant) ? kPass : kFail;
}

int RestrictionCheck(const Common& common, const RestrictionOptions& options,
                     double max_drift) {
  ExperimentConfig cfg = LoadConfig(common);
  RestrictionSweep r = run_restriction_check(cfg, options);
  bool ok = r.max_ratio <= r.ceiling && r.max_drift <= max_drift &&
            r.separation_violations == 0;
  if (!cfg.out_dir.empty()) {
    std::vector<std::vector<double>> csv;
    for (const RestrictionRow& row : r.rows) {
      csv.push_back({row.s_exp, row.coarse.ratio, row.fine.ratio, row.drift});
    }
    std::filesystem::create_directories(cfg.out_dir);
    write_csv(OutPath(cfg, "restriction.csv"), {"s_exp", "coarse", "fine", "drift"}, csv);
  }
  Emit(cfg, make_report("restriction-check", cfg,
                        {{"ceiling", r.ceiling}, {"drift", max_drift}},
                        r.ToJson()));
  return ok ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wave packet embeddings into weighted outer L^p spaces"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", common.config, "JSON config file")
        ->check(CLI::ExistingFile);
    sub->add_option("-o,--out", common.out, "output directory");
  };

  std::vector<double> point, tent;
  double p = 4.0, p1 = 3.0, p2 = 6.0, fraction = 0.1, max_drift = 0.15;
  int n_u = 32, seeds = 100, xi_step = -8;
  bool unnormalized = false;
  std::string suite = "outer";
  RestrictionOptions ro;

  auto* s_transform = app.add_subcommand("transform", "P f at one point");
  add_common(s_transform);
  s_transform->add_option("--point", point, "y eta t")->expected(3)->required();

  auto* s_size = app.add_subcommand("size", "size of P f on one tent");
  add_common(s_size);
  s_size->add_option("--tent", tent, "x xi s")->expected(3)->required();

  auto* s_outer = app.add_subcommand("outer-norm", "outer L^p brackets");
  add_common(s_outer);
  s_outer->add_option("-p", p, "exponent");

  auto* s_select = app.add_subcommand("select", "sup and L^2 tent selection");
  add_common(s_select);
  s_select->add_option("--lambda-fraction", fraction, "threshold / max |P f|");

  auto* s_embed = app.add_subcommand("embed-check", "embedding ratios");
  add_common(s_embed);

  auto* s_sq = app.add_subcommand("squarefn-check", "square function ratios");
  add_common(s_sq);
  s_sq->add_option("--n-u", n_u, "points of the top interval");

  auto* s_ax = app.add_subcommand("axioms", "property suites");
  add_common(s_ax);
  s_ax->add_option("--suite", suite, "outer | geometry | wavepacket | selection");
  s_ax->add_option("--seeds", seeds, "random instances of the outer suite");
  s_ax->add_flag("--unnormalized", unnormalized, "size without 1/w(I)");
  s_ax->add_option("--xi-log2-step", xi_step, "lattice frequency step exponent");

  auto* s_interp = app.add_subcommand("interp", "interpolation constant");
  add_common(s_interp);
  s_interp->add_option("--p1", p1);
  s_interp->add_option("--p2", p2, "a large value or inf");
  s_interp->add_option("-p", p);

  auto* s_res = app.add_subcommand("restriction-check", "restriction estimates");
  add_common(s_res);
  s_res->add_option("--points", ro.points);
  s_res->add_option("--lambda-fraction", ro.lambda_fraction);
  s_res->add_option("--ceiling", ro.ceiling);
  s_res->add_option("--max-drift", max_drift);
  s_res->add_flag("--exclude-sup", ro.exclude_sup_selection,
                  "start the L^2 selection from the sup selection");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (*s_transform) return Transform(common, point);
    if (*s_size) return Size(common, tent);
    if (*s_outer) return OuterNorm(common, p);
    if (*s_select) return Select(common, fraction);
    if (*s_embed) return EmbedCheck(common);
    if (*s_sq) return SquareFnCheck(common, n_u);
    if (*s_ax) return Axioms(common, suite, seeds, unnormalized, xi_step);
    if (*s_interp) return Interp(common, p1, p2, p);
    if (*s_res) return RestrictionCheck(common, ro, max_drift);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
