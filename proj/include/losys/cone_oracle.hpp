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

#include <functional>
#include <memory>
#include <string>
#include <utility>

#include "losys/concrete.hpp"

namespace losys {

/// A family of matrix cones indexed by stage and level, answered through a
/// membership oracle.  Implementations must be reentrant; verdicts carry
/// re-verifiable certificates for NotMember.
class ConeOracle {
 public:
  virtual ~ConeOracle() = default;

  virtual ConeVerdict membership(const LevelElement& x,
                                 std::size_t stage) const = 0;

  /// Status-only probe; searches that only branch on the status use this.
  virtual Membership contains(const LevelElement& x, std::size_t stage) const {
    return membership(x, stage).status;
  }

  /// Ambient space the cones live on.
  virtual const SystemPtr& space() const = 0;

  virtual std::size_t stage_count() const { return space()->stage_count(); }

  /// Present for finitely generated cones; every generator must be a member.
  virtual std::vector<LevelElement> generators(std::size_t /*stage*/,
                                               std::size_t /*level*/) const {
    return {};
  }

  virtual std::string name() const = 0;
};

using OraclePtr = std::shared_ptr<const ConeOracle>;

/// The concrete corner cones of a LocalSystem at every level.
class CornerConeOracle final : public ConeOracle {
 public:
  explicit CornerConeOracle(SystemPtr system) : system_(std::move(system)) {}

  ConeVerdict membership(const LevelElement& x, std::size_t stage) const override {
    return cone_member_concrete(x, stage, system_->tolerances());
  }

  Membership contains(const LevelElement& x, std::size_t stage) const override {
    return cone_contains_concrete_fast(x, stage, system_->tolerances())
               ? Membership::member
               : Membership::not_member;
  }

  const SystemPtr& space() const override { return system_; }

  std::string name() const override { return "concrete"; }

 private:
  SystemPtr system_;
};

inline OraclePtr corner_cones(SystemPtr system) {
  return std::make_shared<CornerConeOracle>(std::move(system));
}

/// Cone oracle defined by a user-supplied callback (used for custom tensor
/// structures and adversarial test oracles).
class CallbackConeOracle final : public ConeOracle {
 public:
  using Fn = std::function<ConeVerdict(const LevelElement&, std::size_t)>;

  CallbackConeOracle(SystemPtr system, Fn fn, std::string name)
      : system_(std::move(system)), fn_(std::move(fn)), name_(std::move(name)) {}

  ConeVerdict membership(const LevelElement& x, std::size_t stage) const override {
    return fn_(x, stage);
  }

  const SystemPtr& space() const override { return system_; }

  std::string name() const override { return name_; }

 private:
  SystemPtr system_;
  Fn fn_;
  std::string name_;
};

}  // namespace losys
