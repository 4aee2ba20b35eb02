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

#include <complex>
#include <compare>
#include <cstddef>

#include <Eigen/Dense>

namespace cachemimo {

using cdouble = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// A user is addressed by (cell, index within cell), both zero-based.
struct UserId {
  int cell = 0;
  int user = 0;

  auto operator<=>(const UserId&) const = default;
};

/// Flat index of user (cell, user) in a B x K grid.
inline std::size_t flat(UserId u, int K) {
  return static_cast<std::size_t>(u.cell) * static_cast<std::size_t>(K) +
         static_cast<std::size_t>(u.user);
}

}  // namespace cachemimo
