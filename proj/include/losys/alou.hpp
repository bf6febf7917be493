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

#include "losys/sampling.hpp"

namespace losys {

/// Archimedean local ordered unit space: basis data of a *-vector space, a
/// level-1 cone family and the distinguished unit.  The matrix-level cones are
/// NOT part of the data; LOMIN/LOMAX build them.
class AlouSpace {
 public:
  AlouSpace(SystemPtr space, OraclePtr level1, bool corner_backed)
      : space_(std::move(space)),
        level1_(std::move(level1)),
        corner_backed_(corner_backed) {
    if (level1_->space().get() != space_.get())
      throw InvalidSystem("level-1 oracle lives on a different space");
  }

  /// The A.L.O.U. space underlying a concrete system: level-1 corner cones.
  static AlouSpace from_concrete(SystemPtr system) {
    OraclePtr oracle = corner_cones(system);
    return AlouSpace(std::move(system), std::move(oracle), true);
  }

  const SystemPtr& space() const { return space_; }
  const OraclePtr& level1() const { return level1_; }
  bool corner_backed() const { return corner_backed_; }
  std::size_t stage_count() const { return space_->stage_count(); }

  LevelElement unit() const { return LevelElement::unit(space_, 1); }

  /// Smallest power-of-two r with r·e - v in the stage cone; doubling search
  /// capped at r_max (order-unit axiom made finite).
  double order_unit_radius(const LevelElement& v, std::size_t stage,
                           double r_max = 1e6) const {
    if (v.level() != 1) throw DimensionMismatch("order_unit_radius wants level 1");
    const LevelElement e = unit();
    for (double r = 1.0; r <= r_max; r *= 2.0) {
      const LevelElement cand = e * Complex(r, 0.0) - v;
      if (level1_->contains(cand, stage) == Membership::member) return r;
    }
    throw NotAnOrderUnit("no radius below the cap dominates the element");
  }

  /// Spot-checks the order-unit axiom on the basis directions and a few
  /// random hermitians at every stage.
  void validate(RandomStream& rng, std::size_t samples = 8) const {
    for (std::size_t stage = 0; stage < stage_count(); ++stage) {
      for (std::size_t s = 0; s < samples; ++s) {
        const LevelElement v = sample_hermitian(space_, 1, rng);
        order_unit_radius(v, stage);
      }
    }
  }

 private:
  SystemPtr space_;
  OraclePtr level1_;
  bool corner_backed_;
};

}  // namespace losys
