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
#include <vector>

#include "cachemimo/cache_placement.hpp"
#include "cachemimo/rng.hpp"
#include "cachemimo/system_model.hpp"
#include "cachemimo/types.hpp"

namespace cachemimo::channel {

/// Small-scale fading. For each BS j, G[j] is M x (B*K) with column flat(u)
/// holding g(u, j); H[j] is the same with column u scaled by sqrt(beta(u, j)).
struct ChannelRealization {
  int B = 0;
  int K = 0;
  int M = 0;
  std::vector<CMatrix> G;
  std::vector<CMatrix> H;

  auto h(UserId u, int bs) const { return H[bs].col(static_cast<Eigen::Index>(flat(u, K))); }
};

/// Estimate and error variances, indexed like LargeScaleState: (j, l, bs).
struct Variances {
  int B = 0;
  int K = 0;
  std::vector<double> beta_hat;
  std::vector<double> beta_tilde;

  std::size_t index(UserId u, int bs) const {
    return (static_cast<std::size_t>(u.cell) * K + u.user) * B + bs;
  }
  double hat(UserId u, int bs) const { return beta_hat[index(u, bs)]; }
  double tilde(UserId u, int bs) const { return beta_tilde[index(u, bs)]; }
};

/// MMSE estimates at every BS. Columns of inactive users are zero.
struct EstimateSet {
  int B = 0;
  int K = 0;
  int M = 0;
  std::vector<CMatrix> H_hat;    ///< [bs], M x (B*K)
  std::vector<CMatrix> H_tilde;  ///< [bs], M x (B*K)
  Variances variances;
  std::vector<std::uint8_t> active;  ///< [flat user]

  bool is_active(UserId u) const { return active[flat(u, K)] != 0; }
  /// Throws LogicError for inactive users.
  CVector h_hat(UserId u, int bs) const;
  CVector h_tilde(UserId u, int bs) const;
};

/// i.i.d. CN(0,1) fading and H = sqrt(beta) G.
ChannelRealization draw_fading(const model::SystemConfig& config,
                               const model::LargeScaleState& large_scale, RandomStream& rng);

/// Variances with only active pilot-sharing users contaminating.
Variances estimation_variances(const model::LargeScaleState& large_scale,
                               const cache::CacheIncidence& incidence, double p, int tau);

/// Variances with every pilot-sharing user contaminating (no offloading).
Variances estimation_variances(const model::LargeScaleState& large_scale, double p, int tau);

/// Scalar form: beta_hat for a user with pathloss `beta` and the summed
/// pathloss of its active contaminators.
double beta_hat(double beta, double contamination, double p, int tau);

/// Pilot-projected MMSE estimation. User l reuses pilot l in every cell.
EstimateSet mmse_estimate(const ChannelRealization& channel,
                          const model::LargeScaleState& large_scale,
                          const cache::CacheIncidence& incidence, double p, int tau,
                          RandomStream& rng);

}  // namespace cachemimo::channel
