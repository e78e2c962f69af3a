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


#ifndef WPE_HARNESS_H_
#define WPE_HARNESS_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "wpe/dyadic.h"
#include "wpe/outer.h"
#include "wpe/report.h"
#include "wpe/selection.h"
#include "wpe/signal.h"
#include "wpe/tents.h"
#include "wpe/wavepacket.h"
#include "wpe/weights.h"

namespace wpe {

struct WeightSpec {
  std::string kind = "lebesgue";  // lebesgue | power | shifted_power | csv
  double a = 0.0;
  std::string path;

  Weight Build() const;
};

// Signal families: zero, gaussian, modulated_gaussian, chirp, noise
// (seeded band-limited), bumps (modulated gaussians at `centers`).
struct SignalSpec {
  std::string family = "modulated_gaussian";
  double sigma = 8.0;
  double center = 0.0;
  double eta0 = 0.7;
  double rate = 0.0;
  int atoms = 8;
  double spread = 4.0;
  Interval band{0.5, 0.9};
  std::vector<double> centers;
  std::vector<std::uint64_t> seeds{1};
  // Samples on [-half_length, half_length] with spacing h.
  double half_length = 512.0;
  double h = 0.0625;
  // Covariance knobs: the signal becomes f(x / dilate - translate / dilate),
  // i.e. dilated first, then moved by `translate`. The sampling grid is
  // dilated with it.
  double translate = 0.0;
  double dilate = 1.0;

  // The analytic signal for one seed: built at the origin, then dilated,
  // then translated.
  AnalyticSignal Build(std::uint64_t seed) const;
  SampledSignal Sample(std::uint64_t seed) const;
  std::string Id(std::uint64_t seed) const;
};

struct ModeFlags {
  bool outer_norm = true;
  bool selection = true;
  bool exhaustive_lower = true;
  std::size_t exhaustive_cap = 20;
  std::size_t selection_cap = 100000;
};

struct ExperimentConfig {
  TentParams theta;
  double delta = 0.0;  // 0 means the standard 2^-8 b
  Window3 window;
  TentQuadrature quadrature;
  LatticeOptions lattice;
  TableOptions table;
  WeightSpec weight;
  SignalSpec signal;
  double q = 4.0;
  LambdaGrid lambda;
  // Grid of the selection pipeline; empty points means `lambda`.
  LambdaGrid selection_lambda{0, 0.0};
  ModeFlags modes;
  double c_sel = 0.0;  // 0 means 2 doubling_constant(w, window y-range)
  int weight_resolution = 6;
  double ap_ceiling = 1e3;
  std::string out_dir;  // not part of the snapshot or its hash

  void Validate() const;
  static ExperimentConfig FromJson(const Json& j);
  static ExperimentConfig Load(const std::string& path);
  Json ToJson() const;
};

WaveletPtr make_wavelet(const ExperimentConfig& cfg);

// Tent quadrature with t_min raised to the window's t_min.
TentQuadrature effective_quadrature(const ExperimentConfig& cfg);

// P f on the window, its lattice tents, and their size table.
struct FieldSetup {
  std::shared_ptr<const TransformEngine> engine;
  std::shared_ptr<const TransformField> field;
  std::unique_ptr<TentTable> table;
};
FieldSetup build_field(const ExperimentConfig& cfg, std::uint64_t seed,
                       const Weight& w);

struct WeakRow {
  double lambda = 0.0;
  double cost = 0.0;  // sum of w(I_k) over Q0, Q+ and Q-
  std::size_t tents = 0;
  double weak_ratio = 0.0;  // cost lambda^q / ||f||^q
  double cert_q0 = 0.0, cert_plus = 0.0, cert_minus = 0.0;
  bool certified = true;
  bool cap_exceeded = false;
};

struct EmbedRow {
  std::string signal;
  double norm_f = 0.0;
  std::size_t lattice_tents = 0;
  bool has_norm = false;
  NormBracket strong, weak;
  double ratio_upper = 0.0;
  std::vector<WeakRow> selection;
  double max_weak_ratio = 0.0;
};

struct EmbedReport {
  ExperimentConfig config;
  double ap = 0.0;
  double doubling = 0.0;
  double c_sel = 0.0;
  std::vector<EmbedRow> rows;
  double max_ratio = 0.0;
  double max_weak_ratio = 0.0;

  Json ToJson() const;
};

EmbedReport run_embed_check(const ExperimentConfig& cfg);

struct SquareFnRow {
  std::string signal;
  Tent tent;
  double norm_S = 0.0;
  double norm_h = 0.0;
  double ratio = 0.0;
};

struct SquareFnReport {
  ExperimentConfig config;
  std::vector<SquareFnRow> rows;
  double max_ratio = 0.0;

  Json ToJson() const;
};

// ||S_T(P h)||_{L^q(w)} by midpoint quadrature over n_u points of the top
// interval.
double square_function_norm(const Field& F, const Tent& T, const Weight& w,
                            double q, const TentQuadrature& quad, int n_u);

// Default tent sweep: for each scale of the window, the tents centred on the
// window with xi at eta0 and at eta0 -/+ 3 b/(2 s).
std::vector<Tent> default_squarefn_tents(const ExperimentConfig& cfg);

SquareFnReport run_squarefn_check(const ExperimentConfig& cfg,
                                  std::vector<Tent> tents = {}, int n_u = 32);

struct SuiteReport {
  std::string name;
  std::vector<AxiomCheck> checks;

  bool passed() const;
  std::size_t failures() const;
  Json ToJson() const;
};

struct GeometryCounts {
  int points = 10000;
  int strip_cases = 100;
  int strip_grid = 20;
  int intervals = 10000;
};

// Central containment of constructed parents, the strip intersection
// identity and the three-grids bounds, on seeded random inputs. A
// non-standard lattice spec is a negative control and should fail.
SuiteReport run_geometry_suite(std::uint64_t seed, const LatticeSpec& spec = {},
                               const GeometryCounts& counts = {});

struct WavepacketCounts {
  int signals = 50;
  int pairs = 200;
};

// Transform against a frequency-side oracle and the spectral path,
// covariances, the a priori bound, frequency support, orthogonality of
// disjoint packets and refinement stability of the decay constant.
SuiteReport run_wavepacket_suite(std::uint64_t seed,
                                 const WavepacketCounts& counts = {});

// Size axioms on seeded random field pairs, closed-form and dilation checks
// of the size, mu = sigma on lattice tents in both cover modes, outer
// quasi-triangle with constant 2 on small exhaustive instances, weak <=
// strong, scaling and monotone super-level measures. The unnormalized size
// variant is a negative control and should fail.
SuiteReport run_axiom_suite(const ExperimentConfig& cfg, int seeds = 100,
                            SizeVariant variant = SizeVariant::kStandard);

struct InterpolationReport {
  double p1 = 0.0, p2 = 0.0, p = 0.0;
  double theta1 = 0.0, theta2 = 0.0;
  double A1 = 0.0, A2 = 0.0;
  double strong_ratio = 0.0;
  double constant = 0.0;
  std::size_t skipped = 0;  // zero signals
  std::vector<std::string> signals;

  Json ToJson() const;
};

// Weak ratios at p1, p2 and the strong ratio at p, maximised over the
// signal seeds; constant = strong / (A1^theta1 A2^theta2).
InterpolationReport run_interpolation_demo(const ExperimentConfig& cfg,
                                           double p1, double p2, double p);

struct RestrictionRow {
  std::string configuration;  // points | partial_tents | subset
  std::string signal;
  double s_exp = 0.0;
  RestrictionReport coarse;
  RestrictionReport fine;
  double drift = 0.0;  // |fine.ratio / coarse.ratio - 1|
};

struct RestrictionSweep {
  std::vector<RestrictionRow> rows;
  double max_ratio = 0.0;
  double max_drift = 0.0;
  double ceiling = 50.0;
  std::size_t separation_violations = 0;

  Json ToJson() const;
};

struct RestrictionOptions {
  std::size_t points = 50;
  // L^2 selection threshold relative to the largest sample of |P f|.
  double lambda_fraction = 0.1;
  // Start the L^2 selection from the sup selection; without it the
  // selection starts from nothing, which keeps small windows non-trivial.
  bool exclude_sup_selection = false;
  std::vector<double> exponents{1.0 / 3.0, 2.0 / 3.0};
  double ceiling = 50.0;
  double subset_t_fraction = 0.5;  // Y = {t >= fraction * s} per tent
};

// Three configurations per seed: random separated points, the residual
// partial tents of an L^2 selection, and a subset of them. Each is
// evaluated at a coarse and a refined discretisation.
RestrictionSweep run_restriction_check(const ExperimentConfig& cfg,
                                       const RestrictionOptions& options = {});

struct SelectionSuiteOptions {
  // Thresholds relative to the largest sample of |P f|.
  std::vector<double> lambda_fractions{0.3, 0.1, 0.03};
  double alpha_points = 0.25;
};

// Per seed and threshold: the sup selection's witnesses must be separated
// points, and the residual partial tents of both L^2 phases (started from
// the sup selection and from nothing) must be separated partial tents.
// Every certificate is recomputed from the final union.
SuiteReport run_selection_suite(const ExperimentConfig& cfg,
                                const SelectionSuiteOptions& options = {});

// Report envelope: kind, config snapshot, input hash, tolerances, body.
Json make_report(const std::string& kind, const ExperimentConfig& cfg,
                 const Json& tolerances, const Json& body);

}  // namespace wpe

#endif  // WPE_HARNESS_H_
