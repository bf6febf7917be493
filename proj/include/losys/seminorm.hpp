// Copyright 2026 The losys Authors.
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

#include "losys/cone_oracle.hpp"

namespace losys {

/// Order-unit seminorm ||x||_alpha = inf{ r >= 0 : [[r e, x],[x*, r e]] lies in
/// the level-2n cone at alpha }, computed by bisection with oracle calls so
/// that one implementation serves every cone family.
///
/// Throws NoBracket when the block is outside the cone up to
/// r_hi = ||x|| _F + 1, and OracleUnresolved when the oracle cannot decide a
/// probe.
inline double order_unit_seminorm(const LevelElement& x, std::size_t stage,
                                  const ConeOracle& oracle,
                                  double abs_tol = 1e-9) {
  auto probe = [&](double r) -> Membership {
    return oracle.contains(x.order_block(r), stage);
  };

  const Membership at_zero = probe(0.0);
  if (at_zero == Membership::unresolved)
    throw OracleUnresolved("seminorm probe undecided at r = 0");
  if (at_zero == Membership::member) return 0.0;

  double hi = x.realization().frobenius_norm() + 1.0;
  const Membership at_hi = probe(hi);
  if (at_hi == Membership::unresolved)
    throw OracleUnresolved("seminorm probe undecided at r_hi");
  if (at_hi == Membership::not_member)
    throw NoBracket("order block not in the cone up to r_hi");

  double lo = 0.0;
  while (hi - lo > abs_tol) {
    const double mid = 0.5 * (lo + hi);
    switch (probe(mid)) {
      case Membership::member: hi = mid; break;
      case Membership::not_member: lo = mid; break;
      default: throw OracleUnresolved("seminorm probe undecided");
    }
  }
  return hi;
}

/// Direct cross-check for concrete corner cones: the seminorm equals the
/// largest singular value of the stage compression.  Kept independent of the
/// bisection path.
inline double corner_operator_norm(const LevelElement& x, std::size_t stage) {
  const ComplexMatrix corner = x.corner(stage);
  if (corner.rows() == 0) return 0.0;
  // singular values via the hermitian doubling [[0, C],[C†, 0]]
  const std::size_t m = corner.rows();
  ComplexMatrix dbl(2 * m, 2 * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      dbl(i, m + j) = corner(i, j);
      dbl(m + i, j) = std::conj(corner(j, i));
    }
  const EigResult e = eig_hermitian(dbl, x.system()->tolerances());
  return e.values.empty() ? 0.0 : e.values.front();
}

}  // namespace losys
