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

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "losys/local_system.hpp"

namespace losys {

enum class Membership { member, not_member, unresolved };

inline const char* to_string(Membership m) {
  switch (m) {
    case Membership::member: return "Member";
    case Membership::not_member: return "NotMember";
    default: return "Unresolved";
  }
}

/// Unit vector v with <v, C v> = violation < -threshold, where C is the
/// relevant compression of the queried element (or of the contraction the
/// certificate names through `context`).
struct WitnessVector {
  std::vector<Complex> vector;
  double violation{0.0};
  double threshold{0.0};
  std::string context;     // how to re-apply the witness, e.g. "corner" or "lambda"
  double unit_shift{0.0};  // certificate refutes x + unit_shift * e
};

/// Hermitian dual matrix W with pairing(W, x) = value < -threshold while
/// pairing(W, g) >= -generator_floor on the searched generators.
struct WitnessFunctional {
  ComplexMatrix matrix;
  double value{0.0};
  double threshold{0.0};
  double generator_floor{0.0};
  double unit_shift{0.0};  // certificate refutes x + unit_shift * e
};

/// Explicit membership certificate: x ~ sum_i scalar_i (x) prod(factors_i)
/// within `residual` in Frobenius norm on realizations.  Plain cones carry one
/// factor per term; tensor cones carry the two level-1 legs of v (x) w.
struct DecompositionTerm {
  ComplexMatrix scalar;               // PSD matrix in M_n
  std::vector<LevelElement> factors;  // level-1 cone members
};

struct Decomposition {
  std::vector<DecompositionTerm> terms;
  double residual{0.0};
};

using Certificate =
    std::variant<std::monostate, WitnessVector, WitnessFunctional, Decomposition>;

/// Search statistics attached to a verdict; rendered deterministically.
struct Diagnostics {
  std::vector<std::pair<std::string, double>> stats;
  std::string note;

  void add(std::string key, double value) {
    stats.emplace_back(std::move(key), value);
  }
};

struct ConeVerdict {
  Membership status{Membership::unresolved};
  Certificate certificate{};
  Diagnostics diagnostics{};

  bool member() const { return status == Membership::member; }
  bool not_member() const { return status == Membership::not_member; }
  bool unresolved() const { return status == Membership::unresolved; }

  static ConeVerdict yes(Diagnostics d = {}) {
    return ConeVerdict{Membership::member, std::monostate{}, std::move(d)};
  }
  static ConeVerdict yes_with(Decomposition dec, Diagnostics d = {}) {
    return ConeVerdict{Membership::member, std::move(dec), std::move(d)};
  }
  static ConeVerdict no(WitnessVector w, Diagnostics d = {}) {
    return ConeVerdict{Membership::not_member, std::move(w), std::move(d)};
  }
  static ConeVerdict no(WitnessFunctional w, Diagnostics d = {}) {
    return ConeVerdict{Membership::not_member, std::move(w), std::move(d)};
  }
  static ConeVerdict undecided(Diagnostics d = {}) {
    return ConeVerdict{Membership::unresolved, std::monostate{}, std::move(d)};
  }
};

}  // namespace losys
