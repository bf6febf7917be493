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

#include "losys/lomin.hpp"
#include "losys/maps.hpp"

namespace losys {

/// Universal property probe: a map that is positive at level 1 into a LOMIN
/// structure must be completely local positive.  Samples cone members of the
/// source at levels up to n_max and tests the images; a NotMember image
/// falsifies the implementation, not the universal property, and is reported.
inline Report check_universal_lomin(const LinearMapData& phi,
                                    const LominOracle& target, std::size_t n_max,
                                    std::size_t samples, RandomStream& rng) {
  phi.validate();
  if (phi.target.get() != target.space().get())
    throw DimensionMismatch("map target differs from the LOMIN carrier");
  Report rep;
  rep.title = "universal-lomin";

  for (std::size_t beta = 0; beta < target.stage_count(); ++beta) {
    const std::size_t alpha = phi.stage_correspondence[beta];

    // precondition: positivity at level 1
    std::size_t level1_bad = 0;
    for (std::size_t s = 0; s < samples; ++s) {
      const LevelElement x = sample_corner_member(phi.source, alpha, 1, rng);
      if (target.membership(phi.apply(x), beta).not_member()) ++level1_bad;
    }
    rep.check(level1_bad == 0, "level1.beta=" + std::to_string(beta),
              "violations=" + std::to_string(level1_bad));

    std::size_t bad = 0, unresolved = 0, checked = 0;
    for (std::size_t n = 2; n <= n_max; ++n) {
      for (std::size_t s = 0; s < samples; ++s) {
        const LevelElement x = sample_corner_member(phi.source, alpha, n, rng);
        const ConeVerdict v = target.membership(phi.apply(x), beta);
        ++checked;
        if (v.not_member()) ++bad;
        if (v.unresolved()) ++unresolved;
      }
    }
    rep.check(bad == 0, "complete.beta=" + std::to_string(beta),
              "violations=" + std::to_string(bad) + " unresolved=" +
                  std::to_string(unresolved) + "/" + std::to_string(checked));
  }
  return rep;
}

}  // namespace losys
