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
#include <string_view>
#include <vector>

#include "cachemimo/cache_placement.hpp"
#include "cachemimo/channel_estimation.hpp"
#include "cachemimo/rng.hpp"
#include "cachemimo/types.hpp"

namespace cachemimo::precoding {

enum class PrecoderKind { kMRT, kZF, kRZF };

std::string_view to_string(PrecoderKind kind);
/// Accepts "MRT", "ZF", "RZF" (case-insensitive). Throws ConfigError.
PrecoderKind parse_precoder(std::string_view name);

struct Precoder {
  CVector w;
  double lambda = 0.0;
  PrecoderKind kind = PrecoderKind::kMRT;
  double alpha = 0.0;
};

struct GFunctionValue {
  double rho_inv = 0.0;
  double alpha = 0.0;
  double G = 0.0;
  double G_bar = 0.0;  ///< -dG/dalpha
};

/// w = h_hat / sqrt(M beta_hat).
Precoder mrt(const CVector& h_hat, double beta_hat, int M);

/// Q is M x (N_n+1): column 0 is the target's estimate, the others are the
/// estimates to be nulled. Throws InfeasibleError when M <= N_n + 1.
Precoder zf(const CMatrix& Q, double beta_hat_target);

/// A is M x (N_n+1) with columns g = h_hat / sqrt(M beta_hat), column 0 the
/// target. Returns sqrt(lambda) (A A^H + alpha I)^-1 a_0, computed as
/// sqrt(lambda) A (A^H A + alpha I)^-1 e_0.
Precoder rzf(const CMatrix& A, double alpha);

/// Large-system resolvent trace of a Gram with load rho_inv and its
/// negative derivative in alpha. Throws DomainError unless alpha > 0 and
/// rho_inv >= 0.
GFunctionValue g_function(double rho_inv, double alpha);

/// (1/M) tr((F^H F + alpha I)^-1) for F with round(M rho_inv) rows of
/// i.i.d. CN(0, 1/M) entries.
double empirical_resolvent_trace(int M, double rho_inv, double alpha, RandomStream& rng);

/// Precoders for all active users of one cell, built from the cell's own
/// estimates at its BS. Users whose ZF precoder does not exist are flagged.
struct CellPrecoders {
  CMatrix W;                           ///< M x K, zero columns for inactive users
  std::vector<double> lambda;          ///< [user]
  std::vector<int> n_null;             ///< [user], N_n
  std::vector<std::uint8_t> feasible;  ///< [user]

  bool all_feasible() const;
};

CellPrecoders build_cell_precoders(const channel::EstimateSet& estimates,
                                   const cache::CacheIncidence& incidence, int cell,
                                   PrecoderKind kind, double alpha);

}  // namespace cachemimo::precoding
