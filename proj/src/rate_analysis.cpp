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


#include "cachemimo/rate_analysis.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "cachemimo/errors.hpp"

namespace cachemimo::rates {

using precoding::PrecoderKind;

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::kP1:
      return "P1";
    case Scheme::kB1:
      return "B1";
    case Scheme::kP2:
      return "P2";
    case Scheme::kB2:
      return "B2";
  }
  return "?";
}

Scheme parse_scheme(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  if (s == "P1") return Scheme::kP1;
  if (s == "B1") return Scheme::kB1;
  if (s == "P2") return Scheme::kP2;
  if (s == "B2") return Scheme::kB2;
  throw ConfigError("unknown scheme '" + std::string(name) + "'");
}

bool is_coded(Scheme scheme) { return scheme == Scheme::kP2 || scheme == Scheme::kB2; }
bool is_baseline(Scheme scheme) { return scheme == Scheme::kB1 || scheme == Scheme::kB2; }

double PowerBreakdown::sinr() const {
  double den = noise;
  for (const auto& [u, p] : p_intra_inter) den += p;
  for (const auto& [u, p] : p_csi_error) den += p;
  return p_signal / den;
}

std::vector<double> uniform_power(const cache::CacheIncidence& incidence, double E0) {
  const int B = incidence.cells();
  const int K = incidence.users_per_cell();
  std::vector<double> e(static_cast<std::size_t>(B) * K, 0.0);
  for (int j = 0; j < B; ++j) {
    const int active = incidence.active_count(j);
    if (active == 0) continue;
    for (int l = 0; l < K; ++l) {
      if (incidence.active({j, l})) e[flat({j, l}, K)] = E0 / active;
    }
  }
  return e;
}

PowerBreakdown power_breakdown(const channel::EstimateSet& estimates,
                               const std::vector<precoding::CellPrecoders>& precoders,
                               const cache::InterferenceSets& sets,
                               const std::vector<double>& power) {
  if (!sets.target_active) throw LogicError("power breakdown requested for an inactive user");
  const int K = estimates.K;
  const int B = estimates.B;
  if (static_cast<int>(precoders.size()) != B) throw LogicError("need one precoder set per cell");
  for (const auto& v : sets.V) {
    if (!(precoders[v.cell].lambda[v.user] > 0.0)) {
      throw LogicError("missing precoder for an active user");
    }
  }
  const UserId t = sets.target;
  const auto col = static_cast<Eigen::Index>(flat(t, K));
  PowerBreakdown pb;
  std::vector<Eigen::RowVectorXcd> hat_rows(B);
  std::vector<Eigen::RowVectorXcd> err_rows(B);
  for (int j = 0; j < B; ++j) {
    hat_rows[j] = estimates.H_hat[j].col(col).adjoint() * precoders[j].W;
    err_rows[j] = estimates.H_tilde[j].col(col).adjoint() * precoders[j].W;
  }
  pb.p_signal = power[flat(t, K)] * std::norm(hat_rows[t.cell](t.user));
  for (const auto& u : sets.U) {
    pb.p_intra_inter[u] = power[flat(u, K)] * std::norm(hat_rows[u.cell](u.user));
  }
  for (const auto& u : sets.V) {
    pb.p_csi_error[u] = power[flat(u, K)] * std::norm(err_rows[u.cell](u.user));
  }
  return pb;
}

std::vector<double> cell_sinrs(const channel::EstimateSet& estimates,
                               const std::vector<precoding::CellPrecoders>& precoders,
                               const cache::CacheIncidence& incidence,
                               const std::vector<double>& power, int cell) {
  const int K = estimates.K;
  const int B = estimates.B;
  const auto first = static_cast<Eigen::Index>(cell) * K;
  std::vector<Eigen::MatrixXd> hat_pow(B);
  std::vector<Eigen::MatrixXd> err_pow(B);
  for (int j = 0; j < B; ++j) {
    // Row k, column l: |h_hat(cell,k,j)^H w(j,l)|^2.
    hat_pow[j] = (estimates.H_hat[j].middleCols(first, K).adjoint() * precoders[j].W)
                     .cwiseAbs2();
    err_pow[j] = (estimates.H_tilde[j].middleCols(first, K).adjoint() * precoders[j].W)
                     .cwiseAbs2();
  }
  std::vector<double> out(static_cast<std::size_t>(K), 0.0);
  for (int k = 0; k < K; ++k) {
    const UserId t{cell, k};
    if (!incidence.active(t)) continue;
    double den = 1.0 + power[flat(t, K)] * err_pow[cell](k, k);
    for (int j = 0; j < B; ++j) {
      for (int l = 0; l < K; ++l) {
        const UserId v{j, l};
        if (v == t || !incidence.active(v) || !incidence(v, t)) continue;
        if (!(precoders[j].lambda[l] > 0.0)) throw LogicError("missing precoder for an active user");
        const double e = power[flat(v, K)];
        den += e * (hat_pow[j](k, l) + err_pow[j](k, l));
      }
    }
    out[k] = power[flat(t, K)] * hat_pow[cell](k, k) / den;
  }
  return out;
}

void Accumulator::add(double x) {
  ++n;
  const double d = x - mean;
  mean += d / static_cast<double>(n);
  m2 += d * (x - mean);
}

void Accumulator::merge(const Accumulator& o) {
  if (o.n == 0) return;
  if (n == 0) {
    *this = o;
    return;
  }
  const double total = static_cast<double>(n + o.n);
  const double d = o.mean - mean;
  mean += d * static_cast<double>(o.n) / total;
  m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) / total;
  n += o.n;
}

double Accumulator::variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }

double Accumulator::stderr_of_mean() const {
  return n > 1 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0;
}

RateEstimate ergodic_rate(const std::vector<double>& sinr_samples) {
  Accumulator acc;
  for (double g : sinr_samples) acc.add(std::log2(1.0 + g));
  return {acc.mean, acc.stderr_of_mean(), acc.n};
}

Ecdr ecdr_realization(double rate, double F, double L_d) {
  if (L_d <= 0.0) return Ecdr::unbounded();
  return Ecdr::finite(F / L_d * rate);
}

Ecdr ecdr_uncoded_average(double rate, double q_a) {
  if (q_a <= 0.0) return Ecdr::unbounded();
  return Ecdr::finite(rate / q_a);
}

Ecdr ecdr_coded(double rate, int L_s, int L_u) {
  if (L_u >= L_s) return Ecdr::unbounded();
  return Ecdr::finite(rate * static_cast<double>(L_s) / static_cast<double>(L_s - L_u));
}

double mrt_sinr_bound(const cache::InterferenceSets& s, const channel::Variances& v,
                      const std::vector<double>& power, int M) {
  if (M <= 2) throw DomainError("MRT bound needs M > 2");
  if (!s.target_active) throw LogicError("bound requested for an inactive user");
  const int K = v.K;
  const UserId t = s.target;
  const int b = t.cell;
  const double m = M;
  auto E = [&](UserId u) { return power[flat(u, K)]; };
  const double num = (m - 1.0) * (m - 2.0) / m * E(t) * v.hat(t, b);
  double den = 1.0;
  for (const auto& u : s.U_per_cell[b]) den += (m - 2.0) / m * E(u) * v.hat(t, b);
  for (const auto& u : s.D1) den += E(u) * v.hat(t, u.cell);
  for (const auto& u : s.D2) den += (m + 1.0) * E(u) * v.hat(t, u.cell);
  for (const auto& u : s.U) den += E(u) * v.tilde(t, u.cell);
  den += (m - 2.0) / m * E(t) * v.tilde(t, b);
  return num / den;
}

double zf_sinr_bound(const cache::InterferenceSets& s, const channel::Variances& v,
                     const std::vector<double>& power, const cache::CacheIncidence& incidence,
                     int M) {
  if (!s.target_active) throw LogicError("bound requested for an inactive user");
  const int K = v.K;
  const UserId t = s.target;
  const int b = t.cell;
  auto E = [&](UserId u) { return power[flat(u, K)]; };
  const int dof = M - s.N_n() - 1;
  if (dof <= 0) throw InfeasibleError("ZF bound: M <= N_n + 1 for the target");
  const double num = dof * E(t) * v.hat(t, b);
  double den = 1.0;
  for (const auto& u : s.D3) den += E(u) * v.hat(t, u.cell);
  for (const auto& u : s.D2) {
    const int d = M - cache::nulling_count(incidence, u) - 1;
    if (d <= 0) throw InfeasibleError("ZF bound: M <= N_n + 1 for a pilot-sharing interferer");
    den += d * E(u) * v.hat(t, u.cell);
  }
  for (const auto& u : s.V) den += E(u) * v.tilde(t, u.cell);
  return num / den;
}

double rzf_sinr_asymptotic(const cache::InterferenceSets& s, const channel::Variances& v,
                           const std::vector<double>& power,
                           const cache::CacheIncidence& incidence, int M, double alpha) {
  if (!(alpha > 0.0)) throw DomainError("RZF: alpha must be positive");
  if (!s.target_active) throw LogicError("asymptotic value requested for an inactive user");
  const int K = v.K;
  const UserId t = s.target;
  const int b = t.cell;
  const double m = M;
  auto E = [&](UserId u) { return power[flat(u, K)]; };
  auto G = [&](UserId u) {
    return precoding::g_function(cache::nulling_count(incidence, u) / m, alpha);
  };
  const auto gt = G(t);
  const double num = E(t) * v.hat(t, b) * gt.G * gt.G / gt.G_bar;
  double den = 1.0 / m;
  for (const auto& u : s.U_per_cell[b]) {
    const auto g = G(u);
    den += E(u) * v.hat(t, b) / (m * (1.0 + g.G) * (1.0 + g.G));
  }
  for (const auto& u : s.D3) den += E(u) * v.hat(t, u.cell) / m;
  for (const auto& u : s.D4) {
    const auto g = G(u);
    den += E(u) * v.hat(t, u.cell) / (m * (1.0 + g.G) * (1.0 + g.G));
  }
  for (const auto& u : s.D2) {
    const auto g = G(u);
    den += E(u) * v.hat(t, u.cell) * g.G * g.G / g.G_bar;
  }
  for (const auto& u : s.V) den += E(u) * v.tilde(t, u.cell) / m;
  return num / den;
}

TaggedVariances baseline_variances(const model::LargeScaleState& ls, UserId u, double p,
                                   int tau) {
  const int B = ls.cells();
  TaggedVariances tv;
  tv.hat.resize(B);
  tv.tilde.resize(B);
  for (int j = 0; j < B; ++j) {
    double contamination = 0.0;
    for (int jp = 0; jp < B; ++jp) {
      if (jp != u.cell) contamination += ls.beta(jp, u.user, j);
    }
    const double beta = ls.beta(u, j);
    tv.hat[j] = channel::beta_hat(beta, contamination, p, tau);
    tv.tilde[j] = beta - tv.hat[j];
  }
  return tv;
}

TaggedVariances expected_uncoded_variances(const model::LargeScaleState& ls, UserId u,
                                           const std::vector<double>& q_a, double p, int tau) {
  const int B = ls.cells();
  if (B > 20) throw DomainError("too many cells for exact activity averaging");
  std::vector<int> others;
  for (int j = 0; j < B; ++j) {
    if (j != u.cell) others.push_back(j);
  }
  TaggedVariances tv;
  tv.hat.assign(B, 0.0);
  tv.tilde.assign(B, 0.0);
  const unsigned patterns = 1u << others.size();
  for (unsigned mask = 0; mask < patterns; ++mask) {
    double weight = 1.0;
    for (std::size_t i = 0; i < others.size(); ++i) {
      const double qa = q_a[others[i]];
      weight *= (mask >> i & 1u) ? qa : 1.0 - qa;
    }
    if (weight == 0.0) continue;
    for (int j = 0; j < B; ++j) {
      double contamination = 0.0;
      for (std::size_t i = 0; i < others.size(); ++i) {
        if (mask >> i & 1u) contamination += ls.beta(others[i], u.user, j);
      }
      const double beta = ls.beta(u, j);
      const double hat = channel::beta_hat(beta, contamination, p, tau);
      tv.hat[j] += weight * hat;
      tv.tilde[j] += weight * (beta - hat);
    }
  }
  return tv;
}

namespace {

double ratio_or_zero(double num, double den) { return den > 0.0 ? num / den : 0.0; }

// Shared evaluator for the uncoded large-system forms; B1 calls it with unit
// probabilities so the reduction is exact.
Ecdr uncoded_eval(PrecoderKind precoder, const std::vector<double>& qa,
                  const std::vector<std::vector<double>>& qi, const std::vector<double>& qn,
                  const ClosedFormInputs& in) {
  const int B = static_cast<int>(in.var.hat.size());
  const int b = in.b;
  const double qa_b = qa[b];
  if (qa_b <= 0.0) return Ecdr::unbounded();
  const auto& h = in.var.hat;
  const auto& e = in.var.tilde;
  const double rho0 = in.rho0;
  double csi = 0.0;
  for (int j = 0; j < B; ++j) csi += ratio_or_zero(qi[b][j] * e[j], qa[j]);
  double num = 0.0;
  double den = csi + 1.0 / in.E0;
  switch (precoder) {
    case PrecoderKind::kMRT: {
      num = rho0 * h[b] / qa_b;
      den += qi[b][b] * h[b] / qa_b;
      for (int j = 0; j < B; ++j) {
        if (j != b) den += ratio_or_zero(qi[b][j] * (rho0 + 1.0) * h[j], qa[j]);
      }
      break;
    }
    case PrecoderKind::kZF: {
      if (rho0 <= qn[b]) throw InfeasibleError("ZF closed form needs rho0 > q_n");
      num = (rho0 - qn[b]) * h[b] / qa_b;
      for (int j = 0; j < B; ++j) {
        if (j != b) den += ratio_or_zero(qi[b][j] * (1.0 - 2.0 * qn[j] + rho0) * h[j], qa[j]);
      }
      break;
    }
    case PrecoderKind::kRZF: {
      const auto gb = precoding::g_function(qn[b] / rho0, in.alpha);
      num = rho0 * h[b] * gb.G * gb.G / (qa_b * gb.G_bar);
      den += qi[b][b] * h[b] / (qa_b * (1.0 + gb.G) * (1.0 + gb.G));
      for (int j = 0; j < B; ++j) {
        if (j == b) continue;
        const auto gj = precoding::g_function(qn[j] / rho0, in.alpha);
        const double shape = rho0 * gj.G * gj.G / gj.G_bar +
                             qn[j] / ((1.0 + gj.G) * (1.0 + gj.G)) + 1.0 - qn[j];
        den += ratio_or_zero(qi[b][j] * h[j], qa[j]) * shape;
      }
      break;
    }
  }
  return Ecdr::finite(std::log2(1.0 + num / den) / qa_b);
}

Ecdr coded_eval(PrecoderKind precoder, double po, const ClosedFormInputs& in, int L_s,
                int L_u) {
  if (L_u >= L_s) return Ecdr::unbounded();
  const int B = static_cast<int>(in.var.hat.size());
  const int b = in.b;
  const auto& h = in.var.hat;
  const auto& e = in.var.tilde;
  const double rho0 = in.rho0;
  double den = 1.0 / in.E0;
  for (int j = 0; j < B; ++j) den += po * e[j];
  double num = 0.0;
  switch (precoder) {
    case PrecoderKind::kMRT: {
      num = rho0 * h[b];
      den += po * h[b];
      for (int j = 0; j < B; ++j) {
        if (j != b) den += (rho0 + po) * h[j];
      }
      break;
    }
    case PrecoderKind::kZF: {
      if (rho0 <= po) throw InfeasibleError("ZF closed form needs rho0 > p_n");
      num = (rho0 - po) * h[b];
      for (int j = 0; j < B; ++j) {
        if (j != b) den += ((rho0 - po) + (1.0 - po)) * h[j];
      }
      break;
    }
    case PrecoderKind::kRZF: {
      const auto g = precoding::g_function(po / rho0, in.alpha);
      const double inv = 1.0 / ((1.0 + g.G) * (1.0 + g.G));
      num = rho0 * h[b] * g.G * g.G / g.G_bar;
      den += po * h[b] * inv;
      for (int j = 0; j < B; ++j) {
        if (j != b) den += h[j] * (rho0 * g.G * g.G / g.G_bar + po * po * inv + (1.0 - po) * po);
      }
      break;
    }
  }
  return ecdr_coded(std::log2(1.0 + num / den), L_s, L_u);
}

}  // namespace

Ecdr uncoded_closed_form(Scheme scheme, PrecoderKind precoder,
                         const cache::CachingProbabilities& q, const ClosedFormInputs& in) {
  const std::size_t B = in.var.hat.size();
  if (in.b < 0 || static_cast<std::size_t>(in.b) >= B) throw DomainError("tagged cell out of range");
  if (scheme == Scheme::kP1) {
    if (q.q_a.size() != B || q.q_n.size() != B || q.q_i.size() != B) {
      throw DomainError("caching probabilities do not match the cell count");
    }
    return uncoded_eval(precoder, q.q_a, q.q_i, q.q_n, in);
  }
  if (scheme == Scheme::kB1) {
    const std::vector<double> ones(B, 1.0);
    const std::vector<std::vector<double>> ones2(B, ones);
    return uncoded_eval(precoder, ones, ones2, ones, in);
  }
  throw LogicError("uncoded closed form requested for a coded scheme");
}

Ecdr coded_closed_form(Scheme scheme, PrecoderKind precoder,
                       const cache::CachingProbabilities& p, const ClosedFormInputs& in,
                       int L_s, int L_u) {
  if (in.b < 0 || static_cast<std::size_t>(in.b) >= in.var.hat.size()) {
    throw DomainError("tagged cell out of range");
  }
  if (scheme == Scheme::kP2) return coded_eval(precoder, p.p_other, in, L_s, L_u);
  if (scheme == Scheme::kB2) return coded_eval(precoder, 1.0, in, L_s, L_u);
  throw LogicError("coded closed form requested for an uncoded scheme");
}

AlphaOptimum optimize_alpha(const std::function<double(double)>& evaluator, double lo, double hi,
                            double rel_tol) {
  if (!(lo > 0.0 && hi > lo)) throw DomainError("optimize_alpha: need 0 < lo < hi");
  auto f = [&](double x) {
    const double v = evaluator(std::exp(x));
    if (!std::isfinite(v)) throw NumericError("optimize_alpha: evaluator returned a non-finite value");
    return v;
  };
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  auto golden = [&](double a, double b) {
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > rel_tol) {
      if (fc >= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - invphi * (b - a);
        fc = f(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + invphi * (b - a);
        fd = f(d);
      }
    }
    const double x = 0.5 * (a + b);
    return AlphaOptimum{std::exp(x), f(x)};
  };
  const double xlo = std::log(lo);
  const double xhi = std::log(hi);
  AlphaOptimum best = golden(xlo, xhi);

  // Grid cross-check in case the evaluator is not unimodal.
  constexpr int kGrid = 64;
  const double step = (xhi - xlo) / (kGrid - 1);
  int arg = 0;
  double fbest = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kGrid; ++i) {
    const double v = f(xlo + i * step);
    if (v > fbest) {
      fbest = v;
      arg = i;
    }
  }
  if (fbest > best.value + 0.01 * std::abs(best.value)) {
    const double a = xlo + std::max(arg - 1, 0) * step;
    const double b = xlo + std::min(arg + 1, kGrid - 1) * step;
    AlphaOptimum refined = golden(a, b);
    if (refined.value < fbest) refined = {std::exp(xlo + arg * step), fbest};
    best = refined;
  }
  const double flo = f(xlo);
  if (flo > best.value) best = {lo, flo};
  const double fhi = f(xhi);
  if (fhi > best.value) best = {hi, fhi};
  return best;
}

}  // namespace cachemimo::rates
