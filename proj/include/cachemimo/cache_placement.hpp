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
#include <span>
#include <vector>

#include "cachemimo/rng.hpp"
#include "cachemimo/system_model.hpp"
#include "cachemimo/types.hpp"

namespace cachemimo::cache {

enum class CacheMode { kNone, kUncoded, kCoded };

/// Per-cell, per-file caching probabilities q_c[j][file].
using PlacementTable = std::vector<std::vector<double>>;

/// What every user holds.
///
/// Uncoded mode stores an explicit file bitmap per user. Coded mode is
/// implicit: each file is split into C(K, t) subfiles indexed by the t-subsets
/// of {0..K-1}, and user l (in any cell) holds subfile T iff l is in T. The
/// explicit families can be listed with `cached_subfile_sets` for small K.
struct CacheContents {
  CacheMode mode = CacheMode::kNone;
  int B = 0;
  int K = 0;
  int L_s = 0;
  std::vector<std::vector<std::uint8_t>> uncoded_files;  ///< [flat user][file]
  int coded_t = 0;

  /// Whether user `u` holds the whole file (uncoded mode only).
  bool holds_file(UserId u, int file) const;
  /// Whether user index `l` holds the subfile indexed by `subset` (coded mode).
  bool holds_subfile(int l, std::span<const int> subset) const;
  /// C(K, t).
  std::uint64_t subfiles_per_file() const;
  /// C(K-1, t-1).
  std::uint64_t cached_subfiles_per_file() const;
  /// Fraction of each file delivered over the air in coded mode, 1 - t/K.
  double coded_delivered_fraction() const;
};

/// Requested file per user and the length still to be delivered (MBytes).
struct RequestState {
  std::vector<int> requests;             ///< [flat user]
  std::vector<double> delivered_length;  ///< [flat user], L_d
};

/// Subfile being delivered to each user in one coded delivery slot, stored as
/// a membership mask over user indices {0..K-1}.
struct CodedSlot {
  std::vector<std::vector<std::uint8_t>> members;  ///< [flat user][user index]
};

/// Binary incidence c(j,l,j',l'): 0 iff the (sub)file delivered to (j,l) is
/// held by (j',l').
class CacheIncidence {
 public:
  CacheIncidence() = default;
  CacheIncidence(int B, int K, std::uint8_t fill = 1);

  int cells() const { return B_; }
  int users_per_cell() const { return K_; }

  std::uint8_t operator()(UserId requester, UserId holder) const {
    return c_[flat(requester, K_) * n_ + flat(holder, K_)];
  }
  void set(UserId requester, UserId holder, std::uint8_t value) {
    c_[flat(requester, K_) * n_ + flat(holder, K_)] = value;
  }

  bool active(UserId u) const { return (*this)(u, u) != 0; }
  /// Number of active users in `cell`, K-bar.
  int active_count(int cell) const;

 private:
  int B_ = 0;
  int K_ = 0;
  std::size_t n_ = 0;
  std::vector<std::uint8_t> c_;
};

/// Interference bookkeeping for one target user, members sorted by (cell, user).
struct InterferenceSets {
  UserId target;
  bool target_active = false;
  std::vector<UserId> U;   ///< active interferers not cancelable at the target
  std::vector<std::vector<UserId>> U_per_cell;
  std::vector<UserId> I;   ///< active users cancelable through the target's cache
  std::vector<UserId> V;   ///< U plus the target
  std::vector<UserId> N;   ///< same-cell active users the target's precoder must null
  std::vector<UserId> D1;  ///< inter-cell interferers on other pilots
  std::vector<UserId> D2;  ///< inter-cell interferers sharing the target's pilot
  std::vector<UserId> D3;  ///< D1 members whose precoder does not null the target's pilot
  std::vector<UserId> D4;  ///< D1 members whose precoder nulls the target's pilot

  int N_n() const { return static_cast<int>(N.size()); }
};

/// Probabilities of the random uncoded model (joint with the target being
/// active) and of the coded model.
struct CachingProbabilities {
  std::vector<double> q_a;               ///< [cell] user is active
  std::vector<std::vector<double>> q_i;  ///< [j][j'] interference from cell j' onto cell j
  std::vector<double> q_n;               ///< [cell] ZF-constraint probability
  double p_same = 1.0;                   ///< coded, l == k
  double p_other = 1.0;                  ///< coded, l != k

  /// Coded interference probability p^i_{k,l} (equal to p^n_{k,l}).
  double p_i(int k, int l) const { return k == l ? p_same : p_other; }
  double p_n(int k, int l) const { return p_i(k, l); }
};

/// q_c = L_u / L_s for every file.
PlacementTable uniform_placement(int B, int L_s, int L_u);

/// Caches the L_u most popular files of each cell with probability one.
PlacementTable deterministic_placement(const model::PopularityProfile& popularity, int L_u);

/// All-zero table (no caching).
PlacementTable empty_placement(int B, int L_s);

/// Throws ConfigError unless entries lie in [0,1] and each row sums to <= L_u.
void check_placement(const PlacementTable& table, int L_u);

/// Each user of cell j caches file f independently with probability q_c[j][f].
CacheContents place_uncoded(const model::SystemConfig& config, const PlacementTable& table,
                            RandomStream& rng);

/// Empty caches for every user.
CacheContents place_nothing(const model::SystemConfig& config);

/// Coded placement with t = L_u K / L_s. Throws ConfigError unless t is an
/// integer in [1, K-1].
CacheContents place_coded(const model::SystemConfig& config);

/// All t-subsets of {0..K-1} in lexicographic order. Throws ConfigError when
/// the family has more than `limit` members.
std::vector<std::vector<int>> enumerate_subsets(int K, int t, std::uint64_t limit = 10'000'000);

/// Lexicographically ordered subfile index sets held by user index `l`.
std::vector<std::vector<int>> cached_subfile_sets(const CacheContents& contents, int l);

/// Subfile index sets still to be delivered to user index `l`, in a uniformly
/// random order.
std::vector<std::vector<int>> delivery_schedule(const CacheContents& contents, int l,
                                                RandomStream& rng);

/// One file request per user, i.i.d. within a cell from its popularity row.
/// L_d is 0 for uncoded self hits, (1 - t/K) F in coded mode and F otherwise.
RequestState draw_requests(const model::PopularityProfile& popularity,
                           const CacheContents& contents, double file_size,
                           RandomStream& rng);

/// Draws the subfile delivered to every user in one slot. Each user's slot
/// entry is uniform over its uncached subfiles, independently across users,
/// which is the marginal of independent random delivery orders.
CodedSlot draw_coded_slot(const CacheContents& contents, RandomStream& rng);

/// Incidence for uncoded/none modes (slot ignored) or for a coded slot.
CacheIncidence incidence(const CacheContents& contents, const RequestState& requests,
                         const CodedSlot* slot = nullptr);

/// N_{j,l}: active users of cell j, other than u, lacking u's (sub)file.
std::vector<UserId> nulling_set(const CacheIncidence& c, UserId u);
int nulling_count(const CacheIncidence& c, UserId u);

/// All sets for `target`; empty when the target is inactive.
InterferenceSets interference_sets(const CacheIncidence& c, UserId target);

/// Random uncoded caching probabilities (joint with the target being active).
CachingProbabilities uncoded_probabilities(const model::PopularityProfile& popularity,
                                           const PlacementTable& table);

/// Coded caching: 1 for the same user index, (K-t-1)/(K-1) otherwise.
CachingProbabilities coded_probabilities(int K, int t);

/// Binomial coefficient as a double (exact up to 2^53).
double binomial(int n, int k);

}  // namespace cachemimo::cache
