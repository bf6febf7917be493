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

#include "losys/verdict.hpp"

namespace losys {

/// Is the stage compression of x hermitian?
inline bool local_hermitian(const LevelElement& x, std::size_t stage,
                            const Tolerances& tol = Tolerances{}) {
  if (stage >= x.system()->stage_count())
    throw StageOutOfRange("stage index out of range");
  return x.corner(stage).is_hermitian(tol.eps_herm);
}

/// Membership in the concrete corner cone C_alpha^n: positivity of the
/// (I_n ⊗ P_alpha)-compression of the realization.  Exactly decidable;
/// NotMember carries the bottom eigenvector of the corner as witness.
inline ConeVerdict cone_member_concrete(const LevelElement& x, std::size_t stage,
                                        const Tolerances& tol = Tolerances{}) {
  if (stage >= x.system()->stage_count())
    throw StageOutOfRange("stage index out of range");
  if (!x.hermitian(tol.eps_herm))
    throw NonHermitianElement("element is not hermitian at its level");
  const ComplexMatrix corner = x.corner(stage);
  const PsdResult psd = psd_verdict(corner, tol);
  Diagnostics diag;
  diag.add("corner_dim", static_cast<double>(corner.rows()));
  diag.add("min_eigenvalue", psd.min_eigenvalue);
  if (psd.yes) return ConeVerdict::yes(std::move(diag));
  WitnessVector w;
  w.vector = psd.witness;
  w.violation = psd.min_eigenvalue;
  w.threshold = tol.eps_psd;
  w.context = "corner";
  return ConeVerdict::no(std::move(w), std::move(diag));
}

/// Status-only probe used inside bisection loops: corner + eps is tested by
/// attempted Cholesky instead of a full eigendecomposition.
inline bool cone_contains_concrete_fast(const LevelElement& x, std::size_t stage,
                                        const Tolerances& tol = Tolerances{}) {
  return psd_probe(x.corner(stage), tol.eps_psd);
}

/// Re-checks a corner witness vector: the quadratic form must reproduce a
/// violation below -threshold.
inline bool verify_corner_witness(const LevelElement& x, std::size_t stage,
                                  const WitnessVector& w) {
  const ComplexMatrix corner = x.corner(stage);
  if (w.vector.size() != corner.rows()) return false;
  const double value = dot(w.vector, matvec(corner, w.vector)).real();
  const double unit = std::abs(vec_norm(w.vector) - 1.0);
  return unit <= 1e-8 && value < -w.threshold;
}

}  // namespace losys
