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

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cachemimo/cache_placement.hpp"
#include "cachemimo/channel_estimation.hpp"
#include "cachemimo/precoding.hpp"
#include "cachemimo/system_model.hpp"

namespace cachemimo::rates {

enum class Scheme { kP1, kB1, kP2, kB2 };

std::string_view to_string(Scheme scheme);
/// Accepts "P1", "B1", "P2", "B2" (case-insensitive). Throws ConfigError.
Scheme parse_scheme(std::string_view name);
bool is_coded(Scheme scheme);
bool is_baseline(Scheme scheme);

/// SINR terms for one target user. Interferer maps are keyed by (cell, user).
struct PowerBreakdown {
  double p_signal = 0.0;
  std::map<UserId, double> p_intra_inter;  ///< members of U
  std::map<UserId, double> p_csi_error;    ///< members of V
  double noise = 1.0;

  double sinr() const;
};

/// E_{j,l} = E0 / K-bar_j for active users, 0 otherwise. Indexed by flat user.
std::vector<double> uniform_power(const cache::CacheIncidence& incidence, double E0);

/// Instantaneous power decomposition of the effective SINR. `precoders` holds
/// one entry per cell. Throws LogicError when an active member of V has no
/// precoder.
PowerBreakdown power_breakdown(const channel::EstimateSet& estimates,
                               const std::vector<precoding::CellPrecoders>& precoders,
                               const cache::InterferenceSets& sets,
                               const std::vector<double>& power);

/// Effective SINR of every user of `cell` (0 for inactive users). Same
/// quantities as power_breakdown, batched through cell-level products.
std::vector<double> cell_sinrs(const channel::EstimateSet& estimates,
                               const std::vector<precoding::CellPrecoders>& precoders,
                               const cache::CacheIncidence& incidence,
                               const std::vector<double>& power, int cell);

/// Streaming mean/variance with a deterministic pairwise merge.
struct Accumulator {
  long long n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x);
  void merge(const Accumulator& other);
  double variance() const;
  double stderr_of_mean() const;
};

struct RateEstimate {
  double rate = 0.0;
  double stderr_ = 0.0;
  long long samples = 0;
};

/// Sample mean of log2(1 + sinr) and its standard error.
RateEstimate ergodic_rate(const std::vector<double>& sinr_samples);

/// ECDR value or the explicit infinite marker (self hit, full offloading).
struct Ecdr {
  double value = 0.0;
  bool infinite = false;

  static Ecdr finite(double v) { return {v, false}; }
  static Ecdr unbounded() { return {0.0, true}; }
};

/// (F / L_d) rate; L_d = 0 gives the infinite marker.
Ecdr ecdr_realization(double rate, double F, double L_d);
/// rate / q_a; q_a = 0 gives the infinite marker.
Ecdr ecdr_uncoded_average(double rate, double q_a);
/// rate L_s / (L_s - L_u); L_u >= L_s gives the infinite marker.
Ecdr ecdr_coded(double rate, int L_s, int L_u);

/// Lower bound on the MRT SINR for a given cache state. Throws DomainError
/// for M <= 2.
double mrt_sinr_bound(const cache::InterferenceSets& sets, const channel::Variances& v,
                      const std::vector<double>& power, int M);

/// Lower bound on the ZF SINR. Throws InfeasibleError when the target or a
/// pilot-sharing interferer has M <= N_n + 1.
double zf_sinr_bound(const cache::InterferenceSets& sets, const channel::Variances& v,
                     const std::vector<double>& power, const cache::CacheIncidence& incidence,
                     int M);

/// Large-system RZF SINR with a shared regularization alpha.
double rzf_sinr_asymptotic(const cache::InterferenceSets& sets, const channel::Variances& v,
                           const std::vector<double>& power,
                           const cache::CacheIncidence& incidence, int M, double alpha);

/// Estimate/error variances of one tagged user at every BS.
struct TaggedVariances {
  std::vector<double> hat;    ///< [bs]
  std::vector<double> tilde;  ///< [bs]
};

/// All pilot-sharing users contaminate.
TaggedVariances baseline_variances(const model::LargeScaleState& ls, UserId u, double p,
                                   int tau);

/// Expectation over which pilot-sharing users are active, each user of cell
/// j being active independently with probability q_a[j].
TaggedVariances expected_uncoded_variances(const model::LargeScaleState& ls, UserId u,
                                           const std::vector<double>& q_a, double p, int tau);

/// Inputs shared by all large-system closed forms.
struct ClosedFormInputs {
  int b = 0;             ///< tagged cell
  TaggedVariances var;   ///< tagged user's variances (baseline ones for B1, P2, B2)
  double rho0 = 1.0;     ///< M / K
  double E0 = 1.0;
  double alpha = 1.0;    ///< RZF only
};

/// Uncoded schemes (P1 or B1). Returns the ECDR with the 1/q_a pre-log for
/// P1. Throws InfeasibleError for ZF when rho0 <= q_n (P1) or rho0 <= 1 (B1).
Ecdr uncoded_closed_form(Scheme scheme, precoding::PrecoderKind precoder,
                         const cache::CachingProbabilities& q, const ClosedFormInputs& in);

/// Coded schemes (P2 or B2), scaled by L_s / (L_s - L_u). Throws
/// InfeasibleError for ZF when rho0 <= p_n.
Ecdr coded_closed_form(Scheme scheme, precoding::PrecoderKind precoder,
                       const cache::CachingProbabilities& p, const ClosedFormInputs& in,
                       int L_s, int L_u);

struct AlphaOptimum {
  double alpha = 1.0;
  double value = 0.0;
};

/// Maximizes `evaluator` over alpha in [lo, hi] by golden-section search on
/// log(alpha), cross-checked against a 64-point log grid. Throws NumericError
/// when an evaluation is not finite.
AlphaOptimum optimize_alpha(const std::function<double(double)>& evaluator, double lo = 1e-4,
                            double hi = 1e4, double rel_tol = 1e-3);

/// Everything computed for one tagged user in one realization.
struct RateReport {
  double sinr = 0.0;
  double rate = 0.0;  ///< log2(1 + sinr)
  Ecdr ecdr;
  std::map<std::string, double> bound_values;  ///< formula id -> value
  double stderr_ = 0.0;
};

}  // namespace cachemimo::rates
