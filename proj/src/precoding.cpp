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


#include "cachemimo/precoding.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <string>

#include "cachemimo/errors.hpp"

namespace cachemimo::precoding {

std::string_view to_string(PrecoderKind kind) {
  switch (kind) {
    case PrecoderKind::kMRT:
      return "MRT";
    case PrecoderKind::kZF:
      return "ZF";
    case PrecoderKind::kRZF:
      return "RZF";
  }
  return "?";
}

PrecoderKind parse_precoder(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  if (s == "MRT") return PrecoderKind::kMRT;
  if (s == "ZF") return PrecoderKind::kZF;
  if (s == "RZF") return PrecoderKind::kRZF;
  throw ConfigError("unknown precoder '" + std::string(name) + "'");
}

Precoder mrt(const CVector& h_hat, double beta_hat, int M) {
  if (!(beta_hat > 0.0)) throw DomainError("mrt: beta_hat must be positive");
  Precoder p;
  p.kind = PrecoderKind::kMRT;
  p.lambda = 1.0 / (M * beta_hat);
  p.w = std::sqrt(p.lambda) * h_hat;
  return p;
}

Precoder zf(const CMatrix& Q, double beta_hat_target) {
  const auto M = Q.rows();
  const auto n = Q.cols();
  if (M <= n) throw InfeasibleError("zf: need more antennas than constrained users plus one");
  Eigen::LLT<CMatrix> llt(Q.adjoint() * Q);
  if (llt.info() != Eigen::Success) throw NumericError("zf: singular Gram matrix");
  CVector e = CVector::Zero(n);
  e(0) = 1.0;
  Precoder p;
  p.kind = PrecoderKind::kZF;
  p.lambda = static_cast<double>(M - n) * beta_hat_target;
  p.w = std::sqrt(p.lambda) * (Q * llt.solve(e));
  return p;
}

Precoder rzf(const CMatrix& A, double alpha) {
  if (!(alpha > 0.0)) throw DomainError("rzf: alpha must be positive");
  const auto M = A.rows();
  const auto n = A.cols();
  CMatrix S = A.adjoint() * A;
  S.diagonal().array() += alpha;
  Eigen::LLT<CMatrix> llt(S);
  if (llt.info() != Eigen::Success) throw NumericError("rzf: factorization failed");
  CVector e = CVector::Zero(n);
  e(0) = 1.0;
  const auto g = g_function(static_cast<double>(n - 1) / static_cast<double>(M), alpha);
  Precoder p;
  p.kind = PrecoderKind::kRZF;
  p.alpha = alpha;
  p.lambda = (1.0 + g.G) * (1.0 + g.G) / g.G_bar;
  p.w = std::sqrt(p.lambda) * (A * llt.solve(e));
  return p;
}

GFunctionValue g_function(double rho_inv, double alpha) {
  if (!(alpha > 0.0)) throw DomainError("g_function: alpha must be positive");
  if (!(rho_inv >= 0.0)) throw DomainError("g_function: load must be non-negative");
  GFunctionValue v;
  v.rho_inv = rho_inv;
  v.alpha = alpha;
  if (rho_inv == 0.0) {
    v.G = 1.0 / alpha;
    v.G_bar = 1.0 / (alpha * alpha);
    return v;
  }
  const double a = (1.0 - rho_inv) / alpha;
  const double c = 2.0 * (1.0 + rho_inv) / alpha;
  const double S = std::sqrt(a * a + c + 1.0);
  // T = S + a, rewritten to avoid cancellation when a < 0.
  const double T = (a >= 0.0) ? S + a : (c + 1.0) / (S - a);
  // G = (T - 1)/2. For a >= 0 use T^2 - 1 = c + 2aT, which has no
  // cancellation when T is close to one (large alpha).
  v.G = (a >= 0.0) ? (c + 2.0 * a * T) / (2.0 * (T + 1.0)) : 0.5 * (T - 1.0);
  v.G_bar = v.G * (T + 1.0) / (2.0 * alpha * S);
  return v;
}

double empirical_resolvent_trace(int M, double rho_inv, double alpha, RandomStream& rng) {
  if (M < 1) throw DomainError("resolvent trace: M must be positive");
  const int N = static_cast<int>(std::lround(M * rho_inv));
  if (N == 0) return 1.0 / alpha;
  CMatrix F(N, M);
  const double scale = 1.0 / std::sqrt(static_cast<double>(M));
  for (int c = 0; c < M; ++c) {
    for (int r = 0; r < N; ++r) F(r, c) = scale * rng.complex_normal();
  }
  // Nonzero eigenvalues of F^H F equal those of the smaller Gram.
  const CMatrix gram = (N <= M) ? CMatrix(F * F.adjoint()) : CMatrix(F.adjoint() * F);
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram, Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) sum += 1.0 / (std::max(ev(i), 0.0) + alpha);
  const int zeros = M - static_cast<int>(ev.size());
  return (sum + zeros / alpha) / M;
}

bool CellPrecoders::all_feasible() const {
  return std::all_of(feasible.begin(), feasible.end(), [](std::uint8_t f) { return f != 0; });
}

CellPrecoders build_cell_precoders(const channel::EstimateSet& estimates,
                                   const cache::CacheIncidence& incidence, int cell,
                                   PrecoderKind kind, double alpha) {
  const int K = estimates.K;
  const int M = estimates.M;
  CellPrecoders out;
  out.W = CMatrix::Zero(M, K);
  out.lambda.assign(static_cast<std::size_t>(K), 0.0);
  out.n_null.assign(static_cast<std::size_t>(K), 0);
  out.feasible.assign(static_cast<std::size_t>(K), 1);
  if (kind == PrecoderKind::kRZF && !(alpha > 0.0)) throw DomainError("rzf: alpha must be positive");

  // Own-cell estimates at the cell's BS.
  const CMatrix Hc = estimates.H_hat[cell].middleCols(static_cast<Eigen::Index>(cell) * K, K);
  std::vector<double> bh(static_cast<std::size_t>(K), 0.0);
  for (int l = 0; l < K; ++l) bh[l] = estimates.variances.hat({cell, l}, cell);

  if (kind == PrecoderKind::kMRT) {
    for (int l = 0; l < K; ++l) {
      if (!estimates.is_active({cell, l})) continue;
      const auto p = mrt(Hc.col(l), bh[l], M);
      out.W.col(l) = p.w;
      out.lambda[l] = p.lambda;
      out.n_null[l] = cache::nulling_count(incidence, {cell, l});
    }
    return out;
  }

  const CMatrix gram = Hc.adjoint() * Hc;
  // Users whose precoder spans the same index set share one factorization.
  struct Factor {
    std::vector<int> idx;  ///< sorted
    Eigen::VectorXd d;     ///< RZF column scaling
    Eigen::LLT<CMatrix> llt;
    bool ok = false;
  };
  std::map<std::vector<int>, Factor> factors;
  auto factor_for = [&](std::vector<int> idx) -> const Factor& {
    auto it = factors.find(idx);
    if (it != factors.end()) return it->second;
    Factor f;
    f.idx = idx;
    const int n = static_cast<int>(idx.size());
    CMatrix S(n, n);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) S(r, c) = gram(idx[r], idx[c]);
    }
    if (kind == PrecoderKind::kZF) {
      f.llt.compute(S);
      f.ok = f.llt.info() == Eigen::Success;
    } else {
      // Columns scaled to g = h_hat / sqrt(M beta_hat).
      f.d.resize(n);
      for (int r = 0; r < n; ++r) f.d(r) = 1.0 / std::sqrt(M * bh[idx[r]]);
      CMatrix Sg = f.d.asDiagonal() * S * f.d.asDiagonal();
      Sg.diagonal().array() += alpha;
      f.llt.compute(Sg);
      if (f.llt.info() != Eigen::Success) throw NumericError("rzf: factorization failed");
      f.ok = true;
    }
    return factors.emplace(std::move(idx), std::move(f)).first->second;
  };

  for (int l = 0; l < K; ++l) {
    const UserId u{cell, l};
    if (!estimates.is_active(u)) continue;
    std::vector<int> idx{l};
    for (const auto& v : cache::nulling_set(incidence, u)) idx.push_back(v.user);
    std::sort(idx.begin(), idx.end());
    const int n = static_cast<int>(idx.size());
    out.n_null[l] = n - 1;
    if (kind == PrecoderKind::kZF && M <= n) {
      out.feasible[l] = 0;
      continue;
    }
    const Factor& f = factor_for(idx);
    if (!f.ok) {
      out.feasible[l] = 0;
      continue;
    }
    const auto pos = std::lower_bound(f.idx.begin(), f.idx.end(), l) - f.idx.begin();
    CVector e = CVector::Zero(n);
    e(pos) = 1.0;
    double lambda = 0.0;
    CVector coef;
    if (kind == PrecoderKind::kZF) {
      coef = f.llt.solve(e);
      lambda = static_cast<double>(M - n) * bh[l];
    } else {
      coef = f.d.asDiagonal() * f.llt.solve(e);
      const auto g = g_function(static_cast<double>(n - 1) / M, alpha);
      lambda = (1.0 + g.G) * (1.0 + g.G) / g.G_bar;
    }
    CVector w = CVector::Zero(M);
    for (int r = 0; r < n; ++r) w += coef(r) * Hc.col(f.idx[r]);
    out.W.col(l) = std::sqrt(lambda) * w;
    out.lambda[l] = lambda;
  }
  return out;
}

}  // namespace cachemimo::precoding
