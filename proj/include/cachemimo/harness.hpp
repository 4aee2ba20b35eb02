// Copyright 2026 The cachemimo Authors
//
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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "cachemimo/cache_placement.hpp"
#include "cachemimo/precoding.hpp"
#include "cachemimo/rate_analysis.hpp"
#include "cachemimo/system_model.hpp"

namespace cachemimo::sim {

enum class SweepParam { kRho0, kSnrDb, kEta, kLu };

std::string_view to_string(SweepParam p);
SweepParam parse_sweep_param(std::string_view name);

enum class PlacementKind { kUniform, kDeterministic, kExplicit };

struct PlacementSpec {
  PlacementKind kind = PlacementKind::kUniform;
  cache::PlacementTable table;  ///< kExplicit only
};

struct ExperimentPlan {
  std::string preset = "custom";
  model::SystemConfig system;
  cache::CacheMode mode = cache::CacheMode::kUncoded;
  PlacementSpec placement;
  SweepParam sweep_param = SweepParam::kRho0;
  std::vector<double> sweep_values;
  std::vector<rates::Scheme> schemes;
  std::vector<precoding::PrecoderKind> precoders;
  int trials_topology = 20;
  int trials_fading_per_topology = 100;
  std::uint64_t seed = 1;
  bool optimize_alpha = true;
  double alpha = 1.0;  ///< used when optimize_alpha is false
  int closed_form_topologies = 1000;
  int workers = 1;

  /// Throws ConfigError on inconsistent settings.
  void validate() const;
  /// Sets the trial counts from a total per sweep point.
  void set_total_trials(long long total);
};

/// Schemes matching a cache mode when none are listed.
std::vector<rates::Scheme> default_schemes(cache::CacheMode mode);

/// Desk-scale reproductions of the published figure setups: fig1, fig2,
/// fig4, fig6. Keeps seed, trial counts, workers and alpha policy.
void apply_preset(ExperimentPlan& plan, std::string_view name);

/// System configuration at one sweep value.
model::SystemConfig point_config(const ExperimentPlan& plan, double sweep_value);

/// Placement probabilities implied by the plan at one sweep point.
cache::PlacementTable placement_table(const ExperimentPlan& plan,
                                      const model::SystemConfig& config,
                                      const model::PopularityProfile& popularity);

struct ResultRow {
  double sweep_value = 0.0;
  std::string scheme;
  std::string precoder;
  std::string formula;
  double ecdr_mean = 0.0;
  double ecdr_stderr = 0.0;
  long long trials = 0;
  std::uint64_t seed = 0;
  long long infeasible_count = 0;
};

/// Per-(scheme, precoder) measurements of one trial.
struct TrialCell {
  bool feasible = true;
  bool tagged_active = false;
  double tagged_sinr = 0.0;
  double tagged_bound_sinr = 0.0;  ///< per-realization bound or asymptotic value
  bool bound_valid = false;
  int cell_active = 0;
  double cell_mean_rate = 0.0;  ///< mean log2(1+sinr) over active users of cell 0
};

struct TrialOutcome {
  std::vector<TrialCell> cells;  ///< [scheme * precoders + precoder]
};

/// Alpha per scheme used by the RZF pipeline at one point.
struct PointContext {
  model::SystemConfig config;
  model::PopularityProfile popularity;
  cache::PlacementTable table;
  cache::CachingProbabilities probabilities;
  std::vector<double> alpha;  ///< [scheme]
};

PointContext make_point_context(const ExperimentPlan& plan, double sweep_value);

/// One pipeline pass for every scheme and precoder; a deterministic function
/// of (seed, topology_index, fading_index).
TrialOutcome run_trial(const ExperimentPlan& plan, const PointContext& point, int topology_index,
                       int fading_index);

/// Closed-form rows for one sweep point; fills `point.alpha` when the plan
/// optimizes alpha.
std::vector<ResultRow> closed_form_rows(const ExperimentPlan& plan, PointContext& point,
                                        double sweep_value);

/// Closed forms only.
std::vector<ResultRow> run_analysis(const ExperimentPlan& plan);

/// Monte Carlo plus closed-form rows for every sweep point.
std::vector<ResultRow> run_experiment(const ExperimentPlan& plan);

enum class OutputFormat { kCsv, kJson };
OutputFormat parse_format(std::string_view name);

std::string format_number(double v);
void emit(const std::vector<ResultRow>& rows, OutputFormat format, std::ostream& out);
/// Throws IoError with the path when the file cannot be written.
void emit(const std::vector<ResultRow>& rows, OutputFormat format, const std::string& path);
std::string emit_string(const std::vector<ResultRow>& rows, OutputFormat format);

/// Parses CSV or JSON produced by `emit`.
std::vector<ResultRow> parse_rows(const std::string& text, OutputFormat format);

}  // namespace cachemimo::sim
