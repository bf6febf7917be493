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

#include <optional>

#include "losys/cone_oracle.hpp"
#include "losys/rng.hpp"

namespace losys {

/// Random hermitian element of M_n(V) with gaussian coordinates.
inline LevelElement sample_hermitian(const SystemPtr& system, std::size_t level,
                                     RandomStream& rng, double scale = 1.0) {
  const std::size_t k = system->basis_size();
  std::vector<std::vector<Complex>> coords(level * level,
                                           std::vector<Complex>(k));
  for (auto& c : coords)
    for (auto& z : c) z = rng.complex_gaussian() * Complex(scale, 0.0);
  LevelElement raw(system, level, std::move(coords));
  const LevelElement sym = (raw + raw.adjoint()) * Complex(0.5, 0.0);
  return sym;
}

/// Random member of the concrete corner cone at a stage: a random hermitian
/// shifted by enough unit to push the corner above zero.
inline LevelElement sample_corner_member(const SystemPtr& system,
                                         std::size_t stage, std::size_t level,
                                         RandomStream& rng, double scale = 1.0) {
  const LevelElement y = sample_hermitian(system, level, rng, scale);
  const auto eig = eig_hermitian(y.corner(stage), system->tolerances());
  const double lam_min = eig.values.empty() ? 0.0 : eig.values.back();
  const double shift = std::max(0.0, -lam_min) + rng.uniform(0.05, 0.5) * scale;
  return y + LevelElement::unit(system, level) * Complex(shift, 0.0);
}

/// Random member of an arbitrary cone: shift by unit multiples until the
/// oracle accepts (order-unit doubling); nullopt when the search fails.
inline std::optional<LevelElement> sample_member(const ConeOracle& oracle,
                                                 std::size_t stage,
                                                 std::size_t level,
                                                 RandomStream& rng,
                                                 double r_max = 1e6) {
  const SystemPtr& system = oracle.space();
  const LevelElement y = sample_hermitian(system, level, rng);
  const LevelElement e = LevelElement::unit(system, level);
  if (oracle.contains(y, stage) == Membership::member) return y;
  for (double r = 1.0; r <= r_max; r *= 2.0) {
    const LevelElement cand = y + e * Complex(r, 0.0);
    if (oracle.contains(cand, stage) == Membership::member) return cand;
  }
  return std::nullopt;
}

/// Basis directions with vanishing corner at the stage (the "junk" the cone
/// cannot see); empty when the corner map is injective on the span.
inline std::vector<std::size_t> null_basis_indices(const LocalSystem& system,
                                                   std::size_t stage) {
  std::vector<std::size_t> out;
  const Projection& p = system.filtration().stage(stage);
  for (std::size_t m = 0; m < system.basis_size(); ++m)
    if (p.compress(system.basis_element(m)).max_abs() < 1e-14) out.push_back(m);
  return out;
}

}  // namespace losys
