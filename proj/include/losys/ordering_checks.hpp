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

#include "losys/report.hpp"
#include "losys/sampling.hpp"

namespace losys {

/// Randomized audit of the local matrix ordering axioms for a cone oracle:
/// cones sit inside the hermitians, are closed under addition and positive
/// scaling, are compatible under scalar conjugation, the stage poset is
/// directed, and only (near) zero is a two-sided member at every stage.
/// Counterexamples are listed; the report never throws.
inline Report validate_local_matrix_ordering(const ConeOracle& oracle,
                                             std::size_t samples,
                                             RandomStream& rng,
                                             std::size_t max_level = 2) {
  Report rep;
  rep.title = "local-matrix-ordering(" + oracle.name() + ")";
  const SystemPtr& system = oracle.space();
  const Tolerances& tol = system->tolerances();

  rep.check(system->filtration().poset().directed(), "poset.directed");

  std::size_t used = 0, skipped = 0;
  std::size_t add_bad = 0, scale_bad = 0, compat_bad = 0, herm_bad = 0;
  std::string first_bad;

  for (std::size_t s = 0; s < samples; ++s) {
    const std::size_t stage = rng.index(oracle.stage_count());
    const std::size_t level = 1 + rng.index(max_level);
    auto x = sample_member(oracle, stage, level, rng);
    auto y = sample_member(oracle, stage, level, rng);
    if (!x || !y) {
      ++skipped;
      continue;
    }
    ++used;
    if (!x->hermitian(1e2 * tol.eps_herm)) ++herm_bad;

    if (oracle.contains(*x + *y, stage) == Membership::not_member) {
      ++add_bad;
      if (first_bad.empty())
        first_bad = "addition at stage " + std::to_string(stage);
    }
    const double c = rng.uniform(0.1, 5.0);
    if (oracle.contains(*x * Complex(c, 0.0), stage) == Membership::not_member) {
      ++scale_bad;
      if (first_bad.empty())
        first_bad = "scaling at stage " + std::to_string(stage);
    }
    const std::size_t m = 1 + rng.index(max_level);
    const ComplexMatrix scalar = rng.matrix_gaussian(level, m);
    if (oracle.contains(x->scalar_conjugate(scalar), stage) ==
        Membership::not_member) {
      ++compat_bad;
      if (first_bad.empty())
        first_bad = "compatibility at stage " + std::to_string(stage) +
                    " level " + std::to_string(level) + "->" + std::to_string(m);
    }
  }

  rep.check(herm_bad == 0, "cones.hermitian",
            "violations=" + std::to_string(herm_bad));
  rep.check(add_bad == 0, "cones.addition",
            "violations=" + std::to_string(add_bad));
  rep.check(scale_bad == 0, "cones.scaling",
            "violations=" + std::to_string(scale_bad));
  rep.check(compat_bad == 0, "cones.compatibility",
            "violations=" + std::to_string(compat_bad) +
                (first_bad.empty() ? "" : " first=" + first_bad));
  rep.info("samples", "used=" + std::to_string(used) +
                          " skipped=" + std::to_string(skipped));

  // separation: elements that, with their negatives, pass every stage must
  // vanish
  std::size_t sep_bad = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    const LevelElement x = sample_hermitian(system, 1, rng);
    bool both_all = true;
    for (std::size_t stage = 0; stage < oracle.stage_count() && both_all; ++stage)
      both_all = oracle.contains(x, stage) == Membership::member &&
                 oracle.contains(x * Complex(-1.0, 0.0), stage) ==
                     Membership::member;
    if (both_all && x.realization().frobenius_norm() > 1e-7) ++sep_bad;
  }
  rep.check(sep_bad == 0, "cones.separation",
            "violations=" + std::to_string(sep_bad));
  return rep;
}

}  // namespace losys
