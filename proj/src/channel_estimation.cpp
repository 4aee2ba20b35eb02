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


#include "cachemimo/channel_estimation.hpp"

#include <cmath>

#include "cachemimo/errors.hpp"

namespace cachemimo::channel {

CVector EstimateSet::h_hat(UserId u, int bs) const {
  if (!is_active(u)) throw LogicError("no channel estimate for an inactive user");
  return H_hat[bs].col(static_cast<Eigen::Index>(flat(u, K)));
}

CVector EstimateSet::h_tilde(UserId u, int bs) const {
  if (!is_active(u)) throw LogicError("no channel estimate for an inactive user");
  return H_tilde[bs].col(static_cast<Eigen::Index>(flat(u, K)));
}

ChannelRealization draw_fading(const model::SystemConfig& config,
                               const model::LargeScaleState& large_scale, RandomStream& rng) {
  ChannelRealization ch;
  ch.B = config.B;
  ch.K = config.K;
  ch.M = config.M;
  const auto n = static_cast<Eigen::Index>(config.user_count());
  ch.G.reserve(config.B);
  ch.H.reserve(config.B);
  for (int bs = 0; bs < config.B; ++bs) {
    CMatrix g(config.M, n);
    for (Eigen::Index c = 0; c < n; ++c) {
      for (int m = 0; m < config.M; ++m) g(m, c) = rng.complex_normal();
    }
    CMatrix h = g;
    for (int j = 0; j < config.B; ++j) {
      for (int l = 0; l < config.K; ++l) {
        const auto c = static_cast<Eigen::Index>(flat({j, l}, config.K));
        h.col(c) *= std::sqrt(large_scale.beta(j, l, bs));
      }
    }
    ch.G.push_back(std::move(g));
    ch.H.push_back(std::move(h));
  }
  return ch;
}

double beta_hat(double beta, double contamination, double p, int tau) {
  const double pt = p * tau;
  return pt * beta * beta / (1.0 + pt * (beta + contamination));
}

namespace {

template <typename Gate>
Variances variances_impl(const model::LargeScaleState& ls, double p, int tau, Gate active) {
  Variances v;
  v.B = ls.cells();
  v.K = ls.users_per_cell();
  const std::size_t n = static_cast<std::size_t>(v.B) * v.K * v.B;
  v.beta_hat.resize(n);
  v.beta_tilde.resize(n);
  for (int b = 0; b < v.B; ++b) {
    for (int k = 0; k < v.K; ++k) {
      for (int j = 0; j < v.B; ++j) {
        double contamination = 0.0;
        for (int jp = 0; jp < v.B; ++jp) {
          if (jp != b && active(UserId{jp, k})) contamination += ls.beta(jp, k, j);
        }
        const double beta = ls.beta(b, k, j);
        const double hat = beta_hat(beta, contamination, p, tau);
        const auto i = v.index({b, k}, j);
        v.beta_hat[i] = hat;
        v.beta_tilde[i] = beta - hat;
      }
    }
  }
  return v;
}

}  // namespace

Variances estimation_variances(const model::LargeScaleState& large_scale,
                               const cache::CacheIncidence& incidence, double p, int tau) {
  return variances_impl(large_scale, p, tau, [&](UserId u) { return incidence.active(u); });
}

Variances estimation_variances(const model::LargeScaleState& large_scale, double p, int tau) {
  return variances_impl(large_scale, p, tau, [](UserId) { return true; });
}

EstimateSet mmse_estimate(const ChannelRealization& channel,
                          const model::LargeScaleState& large_scale,
                          const cache::CacheIncidence& incidence, double p, int tau,
                          RandomStream& rng) {
  const int B = channel.B;
  const int K = channel.K;
  const int M = channel.M;
  EstimateSet est;
  est.B = B;
  est.K = K;
  est.M = M;
  est.variances = estimation_variances(large_scale, incidence, p, tau);
  est.active.resize(static_cast<std::size_t>(B) * K);
  for (int j = 0; j < B; ++j) {
    for (int l = 0; l < K; ++l) est.active[flat({j, l}, K)] = incidence.active({j, l}) ? 1 : 0;
  }
  const double spt = std::sqrt(p * tau);
  const auto n = static_cast<Eigen::Index>(B) * K;
  for (int bs = 0; bs < B; ++bs) {
    CMatrix hat = CMatrix::Zero(M, n);
    CMatrix tilde = CMatrix::Zero(M, n);
    for (int k = 0; k < K; ++k) {
      // The noise is drawn for every pilot so that the stream layout does not
      // depend on which users are active.
      CVector r(M);
      for (int m = 0; m < M; ++m) r(m) = rng.complex_normal();
      double sum_beta = 0.0;
      bool any = false;
      for (int jp = 0; jp < B; ++jp) {
        if (!incidence.active({jp, k})) continue;
        any = true;
        r += spt * channel.h({jp, k}, bs);
        sum_beta += large_scale.beta(jp, k, bs);
      }
      if (!any) continue;
      const double denom = 1.0 + p * tau * sum_beta;
      for (int b = 0; b < B; ++b) {
        if (!incidence.active({b, k})) continue;
        const auto c = static_cast<Eigen::Index>(flat({b, k}, K));
        hat.col(c) = (spt * large_scale.beta(b, k, bs) / denom) * r;
        tilde.col(c) = channel.H[bs].col(c) - hat.col(c);
      }
    }
    est.H_hat.push_back(std::move(hat));
    est.H_tilde.push_back(std::move(tilde));
  }
  return est;
}

}  // namespace cachemimo::channel
