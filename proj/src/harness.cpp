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


#include "cachemimo/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "cachemimo/channel_estimation.hpp"
#include "cachemimo/errors.hpp"
#include "json.hpp"

namespace cachemimo::sim {

using precoding::PrecoderKind;
using rates::Scheme;

std::string_view to_string(SweepParam p) {
  switch (p) {
    case SweepParam::kRho0:
      return "rho0";
    case SweepParam::kSnrDb:
      return "snr_db";
    case SweepParam::kEta:
      return "eta";
    case SweepParam::kLu:
      return "L_u";
  }
  return "?";
}

SweepParam parse_sweep_param(std::string_view name) {
  if (name == "rho0") return SweepParam::kRho0;
  if (name == "snr_db") return SweepParam::kSnrDb;
  if (name == "eta") return SweepParam::kEta;
  if (name == "L_u") return SweepParam::kLu;
  throw ConfigError("sweep param must be one of rho0, snr_db, eta, L_u");
}

std::vector<Scheme> default_schemes(cache::CacheMode mode) {
  switch (mode) {
    case cache::CacheMode::kUncoded:
      return {Scheme::kP1, Scheme::kB1};
    case cache::CacheMode::kCoded:
      return {Scheme::kP2, Scheme::kB2};
    case cache::CacheMode::kNone:
      return {Scheme::kB1};
  }
  return {};
}

void ExperimentPlan::set_total_trials(long long total) {
  if (total < 1) throw ConfigError("trials must be >= 1");
  if (total < trials_topology) {
    trials_topology = static_cast<int>(total);
    trials_fading_per_topology = 1;
  } else {
    trials_fading_per_topology = static_cast<int>(std::max<long long>(1, total / trials_topology));
  }
}

void ExperimentPlan::validate() const {
  system.validate();
  if (sweep_values.empty()) throw ConfigError("sweep needs at least one value");
  if (trials_topology < 1 || trials_fading_per_topology < 1) {
    throw ConfigError("trial counts must be >= 1");
  }
  if (closed_form_topologies < 1) throw ConfigError("closed_form_topologies must be >= 1");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (!optimize_alpha && !(alpha > 0.0)) throw ConfigError("alpha must be positive");
  for (Scheme s : schemes) {
    if (s == Scheme::kP1 && mode == cache::CacheMode::kCoded) {
      throw ConfigError("scheme P1 needs mode \"uncoded\" or \"none\"");
    }
    if (rates::is_coded(s) && mode != cache::CacheMode::kCoded) {
      throw ConfigError("schemes P2 and B2 need mode \"coded\"");
    }
  }
  if (placement.kind == PlacementKind::kExplicit) {
    if (static_cast<int>(placement.table.size()) != system.B) {
      throw ConfigError("placement table needs B rows");
    }
    for (const auto& row : placement.table) {
      if (static_cast<int>(row.size()) != system.L_s) {
        throw ConfigError("placement table rows need L_s entries");
      }
    }
  }
  for (double v : sweep_values) {
    if (!std::isfinite(v)) throw ConfigError("sweep values must be finite");
    const auto cfg = point_config(*this, v);
    cfg.validate();
    if (mode == cache::CacheMode::kCoded) {
      (void)cache::place_coded(cfg);
    } else if (mode == cache::CacheMode::kUncoded) {
      const auto pop = model::zipf_popularity(cfg);
      cache::check_placement(placement_table(*this, cfg, pop), cfg.L_u);
    }
  }
}

model::SystemConfig point_config(const ExperimentPlan& plan, double v) {
  model::SystemConfig c = plan.system;
  switch (plan.sweep_param) {
    case SweepParam::kRho0:
      if (!(v > 0.0)) throw ConfigError("rho0 must be positive");
      c.M = static_cast<int>(std::lround(v * c.K));
      break;
    case SweepParam::kSnrDb:
      c.E0 = std::pow(10.0, v / 10.0);
      break;
    case SweepParam::kEta:
      c.eta.assign(static_cast<std::size_t>(c.B), v);
      break;
    case SweepParam::kLu:
      if (v != std::round(v)) throw ConfigError("L_u sweep values must be integers");
      c.L_u = static_cast<int>(v);
      break;
  }
  return c;
}

cache::PlacementTable placement_table(const ExperimentPlan& plan,
                                      const model::SystemConfig& config,
                                      const model::PopularityProfile& popularity) {
  if (plan.mode != cache::CacheMode::kUncoded) return cache::empty_placement(config.B, config.L_s);
  switch (plan.placement.kind) {
    case PlacementKind::kUniform:
      return cache::uniform_placement(config.B, config.L_s, config.L_u);
    case PlacementKind::kDeterministic:
      return cache::deterministic_placement(popularity, config.L_u);
    case PlacementKind::kExplicit:
      return plan.placement.table;
  }
  return {};
}

void apply_preset(ExperimentPlan& plan, std::string_view name) {
  auto& s = plan.system;
  s.L_s = 100;
  s.F_mbytes = 1.0;
  s.pilot_power = 1.0;
  s.gamma = 3.8;
  plan.precoders = {PrecoderKind::kMRT, PrecoderKind::kZF, PrecoderKind::kRZF};
  const std::vector<double> rho_grid = {1.1, 1.2, 1.3, 1.4, 1.5, 1.6,
                                        1.7, 1.8, 1.9, 2.0, 2.1, 2.2};
  if (name == "fig1" || name == "fig2" || name == "fig4") {
    s.B = 3;
    s.K = 40;
    s.L_u = 6;
    s.tau = s.K;
    s.eta = {0.6, 0.5, 0.4};
    s.E0 = 100.0;
    s.M = 60;
    plan.mode = cache::CacheMode::kUncoded;
    plan.placement = {PlacementKind::kDeterministic, {}};
    plan.schemes = {Scheme::kP1, Scheme::kB1};
    if (name == "fig1") {
      plan.sweep_param = SweepParam::kRho0;
      plan.sweep_values = rho_grid;
    } else if (name == "fig2") {
      plan.sweep_param = SweepParam::kSnrDb;
      plan.sweep_values = {0, 5, 10, 15, 20, 25, 30};
    } else {
      plan.sweep_param = SweepParam::kEta;
      plan.sweep_values = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    }
  } else if (name == "fig6") {
    s.B = 4;
    s.K = 32;
    // t = L_u K / L_s must be an integer; 25 * 32 / 100 = 8.
    s.L_u = 25;
    s.tau = s.K;
    s.eta = {0.6, 0.5, 0.4, 0.3};
    s.E0 = 10.0;
    s.M = 48;
    plan.mode = cache::CacheMode::kCoded;
    plan.placement = {PlacementKind::kUniform, {}};
    plan.schemes = {Scheme::kP2, Scheme::kB2};
    plan.sweep_param = SweepParam::kRho0;
    plan.sweep_values = rho_grid;
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "'");
  }
  plan.preset = std::string(name);
}

PointContext make_point_context(const ExperimentPlan& plan, double sweep_value) {
  PointContext p;
  p.config = point_config(plan, sweep_value);
  p.popularity = model::zipf_popularity(p.config);
  p.table = placement_table(plan, p.config, p.popularity);
  if (plan.mode == cache::CacheMode::kCoded) {
    const auto contents = cache::place_coded(p.config);
    p.probabilities = cache::coded_probabilities(p.config.K, contents.coded_t);
  } else {
    p.probabilities = cache::uncoded_probabilities(p.popularity, p.table);
  }
  p.alpha.assign(4, plan.alpha);
  return p;
}

namespace {

enum class IncidenceClass { kUncoded, kCoded, kBaseline };

IncidenceClass class_of(Scheme s) {
  switch (s) {
    case Scheme::kP1:
      return IncidenceClass::kUncoded;
    case Scheme::kP2:
      return IncidenceClass::kCoded;
    default:
      return IncidenceClass::kBaseline;
  }
}

std::size_t scheme_slot(Scheme s) { return static_cast<std::size_t>(s); }

double ecdr_scale(Scheme s, const PointContext& p) {
  switch (s) {
    case Scheme::kP1:
      return p.probabilities.q_a[0] > 0.0 ? 1.0 / p.probabilities.q_a[0]
                                          : std::numeric_limits<double>::quiet_NaN();
    case Scheme::kB1:
      return 1.0;
    case Scheme::kP2:
    case Scheme::kB2:
      return static_cast<double>(p.config.L_s) / (p.config.L_s - p.config.L_u);
  }
  return 1.0;
}

std::string formula_label(Scheme s, PrecoderKind k) {
  std::string label = std::string(rates::to_string(s)) + "-" + std::string(precoding::to_string(k));
  return label + (k == PrecoderKind::kRZF ? "-asym" : "-lb");
}

std::string bound_label(PrecoderKind k) {
  switch (k) {
    case PrecoderKind::kMRT:
      return "mrt-lb";
    case PrecoderKind::kZF:
      return "zf-lb";
    case PrecoderKind::kRZF:
      return "rzf-asym";
  }
  return "?";
}

// Runs estimation, precoding and SINR evaluation for one incidence and fills
// the cells of every precoder.
void evaluate_class(const ExperimentPlan& plan, const model::SystemConfig& cfg,
                    const model::LargeScaleState& ls, const channel::ChannelRealization& ch,
                    const cache::CacheIncidence& c, std::uint64_t noise_seed, double alpha,
                    std::vector<TrialCell>& out) {
  RandomStream noise(noise_seed);
  const auto est = channel::mmse_estimate(ch, ls, c, cfg.pilot_power, cfg.tau, noise);
  const auto power = rates::uniform_power(c, cfg.E0);
  const UserId tagged{0, 0};
  const auto sets = cache::interference_sets(c, tagged);
  out.assign(plan.precoders.size(), TrialCell{});
  for (std::size_t pi = 0; pi < plan.precoders.size(); ++pi) {
    const PrecoderKind kind = plan.precoders[pi];
    TrialCell& cell = out[pi];
    std::vector<precoding::CellPrecoders> precs;
    precs.reserve(static_cast<std::size_t>(cfg.B));
    for (int j = 0; j < cfg.B; ++j) {
      precs.push_back(precoding::build_cell_precoders(est, c, j, kind, alpha));
      if (!precs.back().all_feasible()) cell.feasible = false;
    }
    if (!cell.feasible) continue;
    const auto sinr = rates::cell_sinrs(est, precs, c, power, 0);
    double sum = 0.0;
    for (int k = 0; k < cfg.K; ++k) {
      if (!c.active({0, k})) continue;
      ++cell.cell_active;
      sum += std::log2(1.0 + sinr[k]);
    }
    if (cell.cell_active > 0) cell.cell_mean_rate = sum / cell.cell_active;
    cell.tagged_active = sets.target_active;
    if (!sets.target_active) continue;
    cell.tagged_sinr = sinr[0];
    try {
      switch (kind) {
        case PrecoderKind::kMRT:
          if (cfg.M > 2) {
            cell.tagged_bound_sinr = rates::mrt_sinr_bound(sets, est.variances, power, cfg.M);
            cell.bound_valid = true;
          }
          break;
        case PrecoderKind::kZF:
          cell.tagged_bound_sinr = rates::zf_sinr_bound(sets, est.variances, power, c, cfg.M);
          cell.bound_valid = true;
          break;
        case PrecoderKind::kRZF:
          cell.tagged_bound_sinr =
              rates::rzf_sinr_asymptotic(sets, est.variances, power, c, cfg.M, alpha);
          cell.bound_valid = true;
          break;
      }
    } catch (const InfeasibleError&) {
      cell.bound_valid = false;
    }
  }
}

}  // namespace

TrialOutcome run_trial(const ExperimentPlan& plan, const PointContext& point, int t, int f) {
  const auto& cfg = point.config;
  const auto seed = plan.seed;
  RandomStream topo(derive_seed(seed, t, 0, StreamPurpose::kTopology));
  const auto ls = model::place_users(cfg, topo);
  RandomStream fading(derive_seed(seed, t, f, StreamPurpose::kFading));
  const auto ch = channel::draw_fading(cfg, ls, fading);
  const auto noise_seed = derive_seed(seed, t, f, StreamPurpose::kPilotNoise);

  TrialOutcome out;
  const std::size_t np = plan.precoders.size();
  out.cells.assign(plan.schemes.size() * np, TrialCell{});

  // Schemes sharing an incidence (and alpha) share the pipeline pass.
  struct Done {
    IncidenceClass cls;
    double alpha;
    std::vector<TrialCell> cells;
  };
  std::vector<Done> done;
  for (std::size_t si = 0; si < plan.schemes.size(); ++si) {
    const Scheme s = plan.schemes[si];
    const IncidenceClass cls = class_of(s);
    const double alpha = point.alpha[scheme_slot(s)];
    auto it = std::find_if(done.begin(), done.end(),
                           [&](const Done& d) { return d.cls == cls && d.alpha == alpha; });
    if (it == done.end()) {
      cache::CacheIncidence c;
      if (cls == IncidenceClass::kBaseline) {
        c = cache::CacheIncidence(cfg.B, cfg.K, 1);
      } else if (cls == IncidenceClass::kUncoded) {
        RandomStream placement(derive_seed(seed, t, f, StreamPurpose::kPlacement));
        const auto contents = plan.mode == cache::CacheMode::kNone
                                  ? cache::place_nothing(cfg)
                                  : cache::place_uncoded(cfg, point.table, placement);
        RandomStream req(derive_seed(seed, t, f, StreamPurpose::kRequests));
        const auto requests = cache::draw_requests(point.popularity, contents, cfg.F_mbytes, req);
        c = cache::incidence(contents, requests);
      } else {
        const auto contents = cache::place_coded(cfg);
        RandomStream req(derive_seed(seed, t, f, StreamPurpose::kRequests));
        const auto requests = cache::draw_requests(point.popularity, contents, cfg.F_mbytes, req);
        RandomStream delivery(derive_seed(seed, t, f, StreamPurpose::kDelivery));
        const auto slot = cache::draw_coded_slot(contents, delivery);
        c = cache::incidence(contents, requests, &slot);
      }
      Done d{cls, alpha, {}};
      evaluate_class(plan, cfg, ls, ch, c, noise_seed, alpha, d.cells);
      done.push_back(std::move(d));
      it = std::prev(done.end());
    }
    for (std::size_t pi = 0; pi < np; ++pi) out.cells[si * np + pi] = it->cells[pi];
  }
  return out;
}

std::vector<ResultRow> closed_form_rows(const ExperimentPlan& plan, PointContext& point,
                                        double sweep_value) {
  const auto& cfg = point.config;
  const int n = plan.closed_form_topologies;
  const UserId tagged{0, 0};
  const double rho0 = static_cast<double>(cfg.M) / cfg.K;
  std::vector<rates::TaggedVariances> base(n);
  std::vector<rates::TaggedVariances> uncoded(n);
  bool need_uncoded = std::find(plan.schemes.begin(), plan.schemes.end(), Scheme::kP1) !=
                      plan.schemes.end();
  for (int i = 0; i < n; ++i) {
    RandomStream rng(derive_seed(plan.seed, i, 0, StreamPurpose::kClosedFormTopology));
    const auto ls = model::place_users(cfg, rng);
    base[i] = rates::baseline_variances(ls, tagged, cfg.pilot_power, cfg.tau);
    if (need_uncoded) {
      uncoded[i] = rates::expected_uncoded_variances(ls, tagged, point.probabilities.q_a,
                                                     cfg.pilot_power, cfg.tau);
    }
  }

  auto evaluate = [&](Scheme s, PrecoderKind k, double alpha, rates::Accumulator& acc) {
    for (int i = 0; i < n; ++i) {
      rates::ClosedFormInputs in;
      in.b = 0;
      in.var = (s == Scheme::kP1) ? uncoded[i] : base[i];
      in.rho0 = rho0;
      in.E0 = cfg.E0;
      in.alpha = alpha;
      const auto e = rates::is_coded(s)
                         ? rates::coded_closed_form(s, k, point.probabilities, in, cfg.L_s, cfg.L_u)
                         : rates::uncoded_closed_form(s, k, point.probabilities, in);
      acc.add(e.infinite ? std::numeric_limits<double>::infinity() : e.value);
    }
  };

  std::vector<ResultRow> rows;
  for (Scheme s : plan.schemes) {
    for (PrecoderKind k : plan.precoders) {
      ResultRow row;
      row.sweep_value = sweep_value;
      row.scheme = std::string(rates::to_string(s));
      row.precoder = std::string(precoding::to_string(k));
      row.formula = formula_label(s, k);
      row.seed = plan.seed;
      double alpha = plan.alpha;
      try {
        if (k == PrecoderKind::kRZF && plan.optimize_alpha) {
          const auto best = rates::optimize_alpha([&](double a) {
            rates::Accumulator acc;
            evaluate(s, k, a, acc);
            return acc.mean;
          });
          alpha = best.alpha;
        }
        if (k == PrecoderKind::kRZF) point.alpha[scheme_slot(s)] = alpha;
        rates::Accumulator acc;
        evaluate(s, k, alpha, acc);
        row.ecdr_mean = acc.mean;
        row.ecdr_stderr = acc.stderr_of_mean();
        row.trials = acc.n;
      } catch (const InfeasibleError&) {
        row.ecdr_mean = std::numeric_limits<double>::quiet_NaN();
        row.ecdr_stderr = std::numeric_limits<double>::quiet_NaN();
        row.trials = 0;
        row.infeasible_count = n;
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<ResultRow> run_analysis(const ExperimentPlan& plan) {
  plan.validate();
  std::vector<ResultRow> rows;
  for (double v : plan.sweep_values) {
    auto point = make_point_context(plan, v);
    auto r = closed_form_rows(plan, point, v);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  return rows;
}

std::vector<ResultRow> run_experiment(const ExperimentPlan& plan) {
  plan.validate();
  if (plan.schemes.empty() || plan.precoders.empty()) return {};
  const std::size_t npoints = plan.sweep_values.size();
  std::vector<PointContext> points;
  std::vector<std::vector<ResultRow>> closed(npoints);
  for (std::size_t i = 0; i < npoints; ++i) {
    points.push_back(make_point_context(plan, plan.sweep_values[i]));
    closed[i] = closed_form_rows(plan, points.back(), plan.sweep_values[i]);
  }

  const long long T = plan.trials_topology;
  const long long F = plan.trials_fading_per_topology;
  const long long per_point = T * F;
  const long long total = per_point * static_cast<long long>(npoints);
  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(total));
  std::atomic<long long> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&]() {
    while (true) {
      const long long i = next.fetch_add(1);
      if (i >= total) return;
      const auto p = static_cast<std::size_t>(i / per_point);
      const long long r = i % per_point;
      try {
        outcomes[static_cast<std::size_t>(i)] =
            run_trial(plan, points[p], static_cast<int>(r / F), static_cast<int>(r % F));
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(total);
        return;
      }
    }
  };
  const int nworkers = static_cast<int>(std::min<long long>(plan.workers, std::max(1LL, total)));
  if (nworkers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < nworkers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  // Sequential reduction in trial-index order keeps the output independent of
  // the schedule.
  std::vector<ResultRow> rows;
  const std::size_t np = plan.precoders.size();
  for (std::size_t p = 0; p < npoints; ++p) {
    const double v = plan.sweep_values[p];
    for (std::size_t si = 0; si < plan.schemes.size(); ++si) {
      const Scheme s = plan.schemes[si];
      const double scale = ecdr_scale(s, points[p]);
      for (std::size_t pi = 0; pi < np; ++pi) {
        rates::Accumulator tagged;
        rates::Accumulator cellavg;
        rates::Accumulator bound;
        long long infeasible = 0;
        for (long long r = 0; r < per_point; ++r) {
          const auto& cell = outcomes[static_cast<std::size_t>(p * per_point + r)].cells[si * np + pi];
          if (!cell.feasible) {
            ++infeasible;
            continue;
          }
          if (cell.cell_active > 0) cellavg.add(scale * cell.cell_mean_rate);
          if (!cell.tagged_active) continue;
          tagged.add(scale * std::log2(1.0 + cell.tagged_sinr));
          if (cell.bound_valid) bound.add(scale * std::log2(1.0 + cell.tagged_bound_sinr));
        }
        rows.push_back(closed[p][si * np + pi]);
        auto make = [&](const std::string& formula, const rates::Accumulator& acc) {
          ResultRow row;
          row.sweep_value = v;
          row.scheme = std::string(rates::to_string(s));
          row.precoder = std::string(precoding::to_string(plan.precoders[pi]));
          row.formula = formula;
          row.ecdr_mean = acc.n > 0 ? acc.mean : std::numeric_limits<double>::quiet_NaN();
          row.ecdr_stderr = acc.stderr_of_mean();
          row.trials = acc.n;
          row.seed = plan.seed;
          row.infeasible_count = infeasible;
          return row;
        };
        rows.push_back(make("montecarlo", tagged));
        rows.push_back(make("montecarlo-cellavg", cellavg));
        rows.push_back(make(bound_label(plan.precoders[pi]), bound));
      }
    }
  }
  return rows;
}

OutputFormat parse_format(std::string_view name) {
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "json") return OutputFormat::kJson;
  throw ConfigError("format must be csv or json");
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

namespace {

const char* kHeader = "sweep_value,scheme,precoder,formula,ecdr_mean,ecdr_stderr,trials,seed,infeasible_count";

nlohmann::json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::stod(format_number(v));
}

double number_from_json(const nlohmann::json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.get<double>();
}

}  // namespace

void emit(const std::vector<ResultRow>& rows, OutputFormat format, std::ostream& out) {
  if (format == OutputFormat::kCsv) {
    out << kHeader << '\n';
    for (const auto& r : rows) {
      out << format_number(r.sweep_value) << ',' << r.scheme << ',' << r.precoder << ','
          << r.formula << ',' << format_number(r.ecdr_mean) << ','
          << format_number(r.ecdr_stderr) << ',' << r.trials << ',' << r.seed << ','
          << r.infeasible_count << '\n';
    }
    return;
  }
  nlohmann::ordered_json ordered = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json o;
    o["sweep_value"] = json_number(r.sweep_value);
    o["scheme"] = r.scheme;
    o["precoder"] = r.precoder;
    o["formula"] = r.formula;
    o["ecdr_mean"] = json_number(r.ecdr_mean);
    o["ecdr_stderr"] = json_number(r.ecdr_stderr);
    o["trials"] = r.trials;
    o["seed"] = r.seed;
    o["infeasible_count"] = r.infeasible_count;
    ordered.push_back(std::move(o));
  }
  out << ordered.dump(2) << '\n';
}

void emit(const std::vector<ResultRow>& rows, OutputFormat format, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file '" + path + "'");
  emit(rows, format, out);
  out.flush();
  if (!out) throw IoError("failed writing output file '" + path + "'");
}

std::string emit_string(const std::vector<ResultRow>& rows, OutputFormat format) {
  std::ostringstream os;
  emit(rows, format, os);
  return os.str();
}

std::vector<ResultRow> parse_rows(const std::string& text, OutputFormat format) {
  std::vector<ResultRow> rows;
  if (format == OutputFormat::kJson) {
    nlohmann::json arr;
    try {
      arr = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("result JSON is malformed: ") + e.what());
    }
    for (const auto& o : arr) {
      ResultRow r;
      r.sweep_value = number_from_json(o.at("sweep_value"));
      r.scheme = o.at("scheme").get<std::string>();
      r.precoder = o.at("precoder").get<std::string>();
      r.formula = o.at("formula").get<std::string>();
      r.ecdr_mean = number_from_json(o.at("ecdr_mean"));
      r.ecdr_stderr = number_from_json(o.at("ecdr_stderr"));
      r.trials = o.at("trials").get<long long>();
      r.seed = o.at("seed").get<std::uint64_t>();
      r.infeasible_count = o.at("infeasible_count").get<long long>();
      rows.push_back(std::move(r));
    }
    return rows;
  }
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kHeader) throw ConfigError("CSV header mismatch");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) f.push_back(field);
    if (f.size() != 9) throw ConfigError("CSV row needs 9 fields");
    ResultRow r;
    r.sweep_value = std::stod(f[0]);
    r.scheme = f[1];
    r.precoder = f[2];
    r.formula = f[3];
    r.ecdr_mean = std::stod(f[4]);
    r.ecdr_stderr = std::stod(f[5]);
    r.trials = std::stoll(f[6]);
    r.seed = std::stoull(f[7]);
    r.infeasible_count = std::stoll(f[8]);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace cachemimo::sim
