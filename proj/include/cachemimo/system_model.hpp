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

#include <cstddef>
#include <string>
#include <vector>

#include "cachemimo/rng.hpp"
#include "cachemimo/types.hpp"

namespace cachemimo::model {

/// Scalar parameters of a cache-aided multi-cell downlink. Linear units unless
/// stated otherwise.
struct SystemConfig {
  int B = 1;                ///< cells
  int K = 1;                ///< users per cell
  int M = 1;                ///< BS antennas
  int L_s = 1;              ///< library size (files)
  int L_u = 0;              ///< cache size (files)
  double F_mbytes = 1.0;    ///< file size
  int tau = 1;              ///< pilot length (symbols)
  double pilot_power = 1.0; ///< p
  double E0 = 1.0;          ///< total BS transmit power
  double gamma = 3.8;       ///< pathloss exponent
  std::vector<double> eta;  ///< per-cell Zipf exponents, length B

  /// Throws ConfigError when an invariant is violated.
  void validate() const;

  double snr_db() const;
  double pilot_energy() const { return pilot_power * tau; }
  std::size_t user_count() const {
    return static_cast<std::size_t>(B) * static_cast<std::size_t>(K);
  }
};

/// Distances and pathloss for every (user cell j, user l, BS j') triple.
class LargeScaleState {
 public:
  LargeScaleState() = default;
  LargeScaleState(int B, int K);

  int cells() const { return B_; }
  int users_per_cell() const { return K_; }

  double d(int j, int l, int bs) const { return d_[index(j, l, bs)]; }
  double beta(int j, int l, int bs) const { return beta_[index(j, l, bs)]; }
  double beta(UserId u, int bs) const { return beta(u.cell, u.user, bs); }

  /// Sets the distance and the matching pathloss coefficient.
  void set(int j, int l, int bs, double distance, double gamma);

  const std::vector<double>& distances() const { return d_; }
  const std::vector<double>& betas() const { return beta_; }

 private:
  std::size_t index(int j, int l, int bs) const {
    return (static_cast<std::size_t>(j) * K_ + l) * B_ + bs;
  }
  int B_ = 0;
  int K_ = 0;
  std::vector<double> d_;
  std::vector<double> beta_;
};

/// Request probabilities q_r[j][file], one row per cell.
struct PopularityProfile {
  std::vector<std::vector<double>> q_r;
  /// Non-fatal notes, e.g. a Zipf exponent outside (0, 1).
  std::vector<std::string> warnings;

  int cells() const { return static_cast<int>(q_r.size()); }
  int files() const { return q_r.empty() ? 0 : static_cast<int>(q_r.front().size()); }
};

/// 1 / (1 + d^gamma). Throws DomainError for d < 0 or gamma <= 0.
double pathloss(double d, double gamma);

/// Same-cell distances uniform on [0, 1); cross-cell distances 1 + U with U
/// uniform on [0, 1], redrawn for every (user, foreign BS) pair.
LargeScaleState place_users(const SystemConfig& config, RandomStream& rng);

/// Zipf request profile per cell from config.eta.
PopularityProfile zipf_popularity(const SystemConfig& config);

/// Single Zipf row; exposed for sweeps that vary the exponent directly.
std::vector<double> zipf_row(int library_size, double exponent);

}  // namespace cachemimo::model
