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

#include "cachemimo/system_model.hpp"

#include <cmath>
#include <sstream>

#include "cachemimo/errors.hpp"

namespace cachemimo::model {

void SystemConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (B < 1) fail("B must be >= 1");
  if (K < 1) fail("K must be >= 1");
  if (M < 1) fail("M must be >= 1");
  if (L_s < 1) fail("L_s must be >= 1");
  if (L_u < 0) fail("L_u must be >= 0");
  if (L_u >= L_s) fail("L_u must be smaller than L_s");
  if (!(F_mbytes > 0.0)) fail("F_mbytes must be positive");
  if (tau < K) fail("tau must be >= K so that every user gets an orthogonal pilot");
  if (!(pilot_power > 0.0)) fail("pilot_power must be positive");
  if (!(E0 > 0.0)) fail("E0 must be positive");
  if (!(gamma > 0.0)) fail("gamma must be positive");
  if (static_cast<int>(eta.size()) != B) {
    std::ostringstream os;
    os << "eta must have B=" << B << " entries, got " << eta.size();
    fail(os.str());
  }
  for (double e : eta) {
    if (!std::isfinite(e) || e < 0.0) fail("eta entries must be finite and non-negative");
  }
}

double SystemConfig::snr_db() const { return 10.0 * std::log10(E0); }

LargeScaleState::LargeScaleState(int B, int K)
    : B_(B),
      K_(K),
      d_(static_cast<std::size_t>(B) * K * B, 0.0),
      beta_(static_cast<std::size_t>(B) * K * B, 1.0) {}

void LargeScaleState::set(int j, int l, int bs, double distance, double gamma) {
  const auto i = index(j, l, bs);
  d_[i] = distance;
  beta_[i] = pathloss(distance, gamma);
}

double pathloss(double d, double gamma) {
  if (!(d >= 0.0)) throw DomainError("pathloss: distance must be non-negative");
  if (!(gamma > 0.0)) throw DomainError("pathloss: exponent must be positive");
  return 1.0 / (1.0 + std::pow(d, gamma));
}

LargeScaleState place_users(const SystemConfig& config, RandomStream& rng) {
  LargeScaleState state(config.B, config.K);
  for (int j = 0; j < config.B; ++j) {
    for (int l = 0; l < config.K; ++l) {
      for (int bs = 0; bs < config.B; ++bs) {
        const double d = (bs == j) ? rng.uniform() : 1.0 + rng.uniform_closed();
        state.set(j, l, bs, d, config.gamma);
      }
    }
  }
  return state;
}

std::vector<double> zipf_row(int library_size, double exponent) {
  if (library_size < 1) throw DomainError("zipf: library size must be >= 1");
  std::vector<double> row(static_cast<std::size_t>(library_size));
  double total = 0.0;
  for (int i = 0; i < library_size; ++i) {
    row[i] = std::pow(static_cast<double>(i + 1), -exponent);
    total += row[i];
  }
  for (double& v : row) v /= total;
  return row;
}

PopularityProfile zipf_popularity(const SystemConfig& config) {
  if (config.L_s < 1) throw DomainError("zipf: library size must be >= 1");
  PopularityProfile profile;
  for (int j = 0; j < static_cast<int>(config.eta.size()); ++j) {
    const double e = config.eta[j];
    if (!(e > 0.0 && e < 1.0)) {
      std::ostringstream os;
      os << "Zipf exponent of cell " << j << " is " << e << ", outside (0, 1)";
      profile.warnings.push_back(os.str());
    }
    profile.q_r.push_back(zipf_row(config.L_s, e));
  }
  return profile;
}

}  // namespace cachemimo::model
