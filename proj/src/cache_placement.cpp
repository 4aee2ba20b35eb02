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


#include "cachemimo/cache_placement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "cachemimo/errors.hpp"

namespace cachemimo::cache {

namespace {

std::vector<double> cumulative(const std::vector<double>& p) {
  std::vector<double> c(p.size());
  std::partial_sum(p.begin(), p.end(), c.begin());
  return c;
}

int sample_index(const std::vector<double>& cdf, RandomStream& rng) {
  const double u = rng.uniform() * cdf.back();
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.end()) --it;
  return static_cast<int>(it - cdf.begin());
}

// Uniform t-subset of {0..K-1} \ {excluded}, as a membership mask.
std::vector<std::uint8_t> random_subset_mask(int K, int t, int excluded, RandomStream& rng) {
  std::vector<int> pool;
  pool.reserve(static_cast<std::size_t>(K));
  for (int i = 0; i < K; ++i) {
    if (i != excluded) pool.push_back(i);
  }
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(K), 0);
  const int n = static_cast<int>(pool.size());
  for (int i = 0; i < t; ++i) {
    const int pick = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[i], pool[pick]);
    mask[pool[i]] = 1;
  }
  return mask;
}

}  // namespace

double binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

bool CacheContents::holds_file(UserId u, int file) const {
  if (mode != CacheMode::kUncoded) return false;
  return uncoded_files[flat(u, K)][static_cast<std::size_t>(file)] != 0;
}

bool CacheContents::holds_subfile(int l, std::span<const int> subset) const {
  if (mode != CacheMode::kCoded) return false;
  return std::find(subset.begin(), subset.end(), l) != subset.end();
}

std::uint64_t CacheContents::subfiles_per_file() const {
  return static_cast<std::uint64_t>(binomial(K, coded_t));
}

std::uint64_t CacheContents::cached_subfiles_per_file() const {
  return static_cast<std::uint64_t>(binomial(K - 1, coded_t - 1));
}

double CacheContents::coded_delivered_fraction() const {
  return 1.0 - static_cast<double>(coded_t) / static_cast<double>(K);
}

CacheIncidence::CacheIncidence(int B, int K, std::uint8_t fill)
    : B_(B), K_(K), n_(static_cast<std::size_t>(B) * K), c_(n_ * n_, fill) {}

int CacheIncidence::active_count(int cell) const {
  int n = 0;
  for (int l = 0; l < K_; ++l) n += active({cell, l}) ? 1 : 0;
  return n;
}

PlacementTable uniform_placement(int B, int L_s, int L_u) {
  if (L_s < 1 || L_u < 0 || L_u > L_s) throw ConfigError("uniform placement: need 0 <= L_u <= L_s");
  return PlacementTable(static_cast<std::size_t>(B),
                        std::vector<double>(static_cast<std::size_t>(L_s),
                                            static_cast<double>(L_u) / L_s));
}

PlacementTable empty_placement(int B, int L_s) {
  return PlacementTable(static_cast<std::size_t>(B),
                        std::vector<double>(static_cast<std::size_t>(L_s), 0.0));
}

PlacementTable deterministic_placement(const model::PopularityProfile& popularity, int L_u) {
  PlacementTable table;
  for (const auto& row : popularity.q_r) {
    if (L_u < 0 || L_u > static_cast<int>(row.size())) {
      throw ConfigError("deterministic placement: L_u exceeds the library");
    }
    std::vector<int> order(row.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return row[a] > row[b]; });
    std::vector<double> q(row.size(), 0.0);
    for (int i = 0; i < L_u; ++i) q[order[i]] = 1.0;
    table.push_back(std::move(q));
  }
  return table;
}

void check_placement(const PlacementTable& table, int L_u) {
  for (std::size_t j = 0; j < table.size(); ++j) {
    double total = 0.0;
    for (double q : table[j]) {
      if (!(q >= 0.0 && q <= 1.0)) throw ConfigError("placement probabilities must lie in [0, 1]");
      total += q;
    }
    if (total > L_u + 1e-9) {
      std::ostringstream os;
      os << "placement row " << j << " caches " << total << " files on average, above L_u=" << L_u;
      throw ConfigError(os.str());
    }
  }
}

CacheContents place_nothing(const model::SystemConfig& config) {
  CacheContents c;
  c.mode = CacheMode::kNone;
  c.B = config.B;
  c.K = config.K;
  c.L_s = config.L_s;
  return c;
}

CacheContents place_uncoded(const model::SystemConfig& config, const PlacementTable& table,
                            RandomStream& rng) {
  if (static_cast<int>(table.size()) != config.B) throw ConfigError("placement table needs B rows");
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != config.L_s) {
      throw ConfigError("placement table rows need L_s entries");
    }
  }
  check_placement(table, config.L_u);
  CacheContents c;
  c.mode = CacheMode::kUncoded;
  c.B = config.B;
  c.K = config.K;
  c.L_s = config.L_s;
  c.uncoded_files.resize(config.user_count());
  for (int j = 0; j < config.B; ++j) {
    for (int l = 0; l < config.K; ++l) {
      auto& files = c.uncoded_files[flat({j, l}, config.K)];
      files.assign(static_cast<std::size_t>(config.L_s), 0);
      for (int f = 0; f < config.L_s; ++f) {
        const double q = table[j][f];
        if (q >= 1.0) {
          files[f] = 1;
        } else if (q > 0.0) {
          files[f] = rng.bernoulli(q) ? 1 : 0;
        }
      }
    }
  }
  return c;
}

CacheContents place_coded(const model::SystemConfig& config) {
  const long long num = static_cast<long long>(config.L_u) * config.K;
  if (num % config.L_s != 0) {
    std::ostringstream os;
    os << "coded caching needs t = L_u*K/L_s to be an integer, got " << num << "/" << config.L_s;
    throw ConfigError(os.str());
  }
  const int t = static_cast<int>(num / config.L_s);
  if (t < 1 || t >= config.K) throw ConfigError("coded caching needs 1 <= t <= K-1");
  CacheContents c;
  c.mode = CacheMode::kCoded;
  c.B = config.B;
  c.K = config.K;
  c.L_s = config.L_s;
  c.coded_t = t;
  return c;
}

std::vector<std::vector<int>> enumerate_subsets(int K, int t, std::uint64_t limit) {
  if (t < 0 || t > K) throw DomainError("enumerate_subsets: need 0 <= t <= K");
  if (binomial(K, t) > static_cast<double>(limit)) {
    throw ConfigError("subset family too large to enumerate");
  }
  std::vector<std::vector<int>> out;
  std::vector<int> s(static_cast<std::size_t>(t));
  std::iota(s.begin(), s.end(), 0);
  while (true) {
    out.push_back(s);
    int i = t - 1;
    while (i >= 0 && s[i] == K - t + i) --i;
    if (i < 0) break;
    ++s[i];
    for (int m = i + 1; m < t; ++m) s[m] = s[m - 1] + 1;
  }
  return out;
}

std::vector<std::vector<int>> cached_subfile_sets(const CacheContents& contents, int l) {
  if (contents.mode != CacheMode::kCoded) return {};
  std::vector<std::vector<int>> out;
  for (auto& s : enumerate_subsets(contents.K, contents.coded_t)) {
    if (contents.holds_subfile(l, s)) out.push_back(std::move(s));
  }
  return out;
}

std::vector<std::vector<int>> delivery_schedule(const CacheContents& contents, int l,
                                                RandomStream& rng) {
  if (contents.mode != CacheMode::kCoded) return {};
  std::vector<std::vector<int>> out;
  for (auto& s : enumerate_subsets(contents.K, contents.coded_t)) {
    if (!contents.holds_subfile(l, s)) out.push_back(std::move(s));
  }
  std::shuffle(out.begin(), out.end(), rng.engine());
  return out;
}

RequestState draw_requests(const model::PopularityProfile& popularity,
                           const CacheContents& contents, double file_size,
                           RandomStream& rng) {
  if (popularity.cells() != contents.B) throw ConfigError("popularity needs one row per cell");
  RequestState r;
  const std::size_t n = static_cast<std::size_t>(contents.B) * contents.K;
  r.requests.resize(n);
  r.delivered_length.resize(n);
  for (int j = 0; j < contents.B; ++j) {
    const auto cdf = cumulative(popularity.q_r[j]);
    for (int l = 0; l < contents.K; ++l) {
      const UserId u{j, l};
      const int f = sample_index(cdf, rng);
      r.requests[flat(u, contents.K)] = f;
      double len = file_size;
      if (contents.mode == CacheMode::kUncoded && contents.holds_file(u, f)) {
        len = 0.0;
      } else if (contents.mode == CacheMode::kCoded) {
        len = contents.coded_delivered_fraction() * file_size;
      }
      r.delivered_length[flat(u, contents.K)] = len;
    }
  }
  return r;
}

CodedSlot draw_coded_slot(const CacheContents& contents, RandomStream& rng) {
  if (contents.mode != CacheMode::kCoded) throw LogicError("coded slot drawn without coded caching");
  CodedSlot slot;
  slot.members.reserve(static_cast<std::size_t>(contents.B) * contents.K);
  for (int j = 0; j < contents.B; ++j) {
    for (int l = 0; l < contents.K; ++l) {
      slot.members.push_back(random_subset_mask(contents.K, contents.coded_t, l, rng));
    }
  }
  return slot;
}

CacheIncidence incidence(const CacheContents& contents, const RequestState& requests,
                         const CodedSlot* slot) {
  const int B = contents.B;
  const int K = contents.K;
  CacheIncidence c(B, K, 1);
  if (contents.mode == CacheMode::kNone) return c;
  if (contents.mode == CacheMode::kCoded && slot == nullptr) {
    throw LogicError("coded incidence needs a delivery slot");
  }
  for (int j = 0; j < B; ++j) {
    for (int l = 0; l < K; ++l) {
      const UserId req{j, l};
      const std::size_t fr = flat(req, K);
      for (int jp = 0; jp < B; ++jp) {
        for (int lp = 0; lp < K; ++lp) {
          const UserId hold{jp, lp};
          bool held = false;
          if (contents.mode == CacheMode::kUncoded) {
            held = contents.holds_file(hold, requests.requests[fr]);
          } else {
            held = slot->members[fr][static_cast<std::size_t>(lp)] != 0;
          }
          c.set(req, hold, held ? 0 : 1);
        }
      }
    }
  }
  return c;
}

std::vector<UserId> nulling_set(const CacheIncidence& c, UserId u) {
  std::vector<UserId> out;
  for (int m = 0; m < c.users_per_cell(); ++m) {
    const UserId v{u.cell, m};
    if (m != u.user && c.active(v) && c(u, v)) out.push_back(v);
  }
  return out;
}

int nulling_count(const CacheIncidence& c, UserId u) {
  int n = 0;
  for (int m = 0; m < c.users_per_cell(); ++m) {
    const UserId v{u.cell, m};
    if (m != u.user && c.active(v) && c(u, v)) ++n;
  }
  return n;
}

InterferenceSets interference_sets(const CacheIncidence& c, UserId target) {
  InterferenceSets s;
  s.target = target;
  s.U_per_cell.resize(static_cast<std::size_t>(c.cells()));
  s.target_active = c.active(target);
  if (!s.target_active) return s;
  const int b = target.cell;
  const int k = target.user;
  for (int j = 0; j < c.cells(); ++j) {
    for (int l = 0; l < c.users_per_cell(); ++l) {
      const UserId v{j, l};
      if (v == target) {
        s.V.push_back(v);
        continue;
      }
      if (!c.active(v)) continue;
      if (c(v, target)) {
        s.U.push_back(v);
        s.U_per_cell[j].push_back(v);
        s.V.push_back(v);
        if (j != b) {
          if (l == k) {
            s.D2.push_back(v);
          } else {
            s.D1.push_back(v);
            // (j,k) is in N_{j,l} iff it is active and lacks (j,l)'s file.
            const UserId pilot_mate{j, k};
            if (c.active(pilot_mate) && c(v, pilot_mate)) {
              s.D4.push_back(v);
            } else {
              s.D3.push_back(v);
            }
          }
        }
      } else {
        s.I.push_back(v);
      }
    }
  }
  s.N = nulling_set(c, target);
  return s;
}

CachingProbabilities uncoded_probabilities(const model::PopularityProfile& popularity,
                                           const PlacementTable& table) {
  const int B = popularity.cells();
  if (static_cast<int>(table.size()) != B) throw ConfigError("placement table needs B rows");
  CachingProbabilities p;
  p.q_a.assign(static_cast<std::size_t>(B), 0.0);
  p.q_n.assign(static_cast<std::size_t>(B), 0.0);
  p.q_i.assign(static_cast<std::size_t>(B), std::vector<double>(static_cast<std::size_t>(B), 0.0));
  for (int j = 0; j < B; ++j) {
    const auto& qr = popularity.q_r[j];
    const auto& qc = table[j];
    const int L = static_cast<int>(qr.size());
    double qa = 0.0;
    for (int f = 0; f < L; ++f) qa += qr[f] * (1.0 - qc[f]);
    p.q_a[j] = qa;
    double qn = 0.0;
    for (int ls = 0; ls < L; ++ls) {
      const double others = qa - qr[ls] * (1.0 - qc[ls]);
      const double a = 1.0 - qc[ls];
      qn += qr[ls] * a * a * (others + qr[ls]);
    }
    p.q_n[j] = qn;
  }
  for (int j = 0; j < B; ++j) {
    const auto& qr = popularity.q_r[j];
    const auto& qc = table[j];
    const int L = static_cast<int>(qr.size());
    for (int jp = 0; jp < B; ++jp) {
      const auto& qr2 = popularity.q_r[jp];
      const auto& qc2 = table[jp];
      double qi = 0.0;
      for (int ls = 0; ls < L; ++ls) {
        const double target_other = p.q_a[j] - qr[ls] * (1.0 - qc[ls]);
        qi += qr2[ls] * (1.0 - qc2[ls]) *
              (target_other * (1.0 - qc[ls]) + qr[ls] * (1.0 - qc[ls]));
      }
      p.q_i[j][jp] = qi;
    }
  }
  return p;
}

CachingProbabilities coded_probabilities(int K, int t) {
  if (K < 2 || t < 1 || t >= K) throw ConfigError("coded probabilities need K >= 2 and 1 <= t < K");
  CachingProbabilities p;
  p.p_same = 1.0;
  p.p_other = static_cast<double>(K - t - 1) / static_cast<double>(K - 1);
  return p;
}

}  // namespace cachemimo::cache
