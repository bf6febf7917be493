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

/// Archimedeanization of a cone oracle.  Membership of x becomes membership of
/// r0·e + x for the element-scaled radius r0 = eps_psd·(1 + ||x||_F) together
/// with the decreasing probe schedule r0·2^{-j}, j = 0..20, all of which must
/// be members.  This probe schedule is the desk-scale definition of the
/// enlarged cone (the numeric limit is not computable).
///
/// When `assume_monotone` is set (valid for every cone containing positive
/// unit multiples) the smallest probe decides and the others are skipped.
class ArchimedeanizedOracle final : public ConeOracle {
 public:
  ArchimedeanizedOracle(OraclePtr base, bool assume_monotone = false,
                        std::size_t probes = 21)
      : base_(std::move(base)),
        assume_monotone_(assume_monotone),
        probes_(probes) {}

  ConeVerdict membership(const LevelElement& x, std::size_t stage) const override {
    const double r0 = radius(x);
    Diagnostics diag;
    diag.add("arch_r0", r0);

    if (assume_monotone_) {
      const double r = r0 * std::pow(0.5, static_cast<double>(probes_ - 1));
      ConeVerdict v = base_->membership(shifted(x, r), stage);
      if (!v.unresolved()) return annotate(std::move(v), r, std::move(diag));
      // walk up the schedule until some probe decides NotMember
      for (std::size_t j = probes_ - 1; j-- > 0;) {
        const double rj = r0 * std::pow(0.5, static_cast<double>(j));
        ConeVerdict vj = base_->membership(shifted(x, rj), stage);
        if (vj.not_member()) return annotate(std::move(vj), rj, std::move(diag));
      }
      diag.note = "smallest probe undecided";
      return ConeVerdict::undecided(std::move(diag));
    }

    for (std::size_t j = 0; j < probes_; ++j) {
      const double rj = r0 * std::pow(0.5, static_cast<double>(j));
      ConeVerdict vj = base_->membership(shifted(x, rj), stage);
      if (vj.not_member() || vj.unresolved())
        return annotate(std::move(vj), rj, std::move(diag));
    }
    diag.add("arch_probes", static_cast<double>(probes_));
    return ConeVerdict::yes(std::move(diag));
  }

  Membership contains(const LevelElement& x, std::size_t stage) const override {
    const double r0 = radius(x);
    if (assume_monotone_) {
      const double r = r0 * std::pow(0.5, static_cast<double>(probes_ - 1));
      return base_->contains(shifted(x, r), stage);
    }
    for (std::size_t j = 0; j < probes_; ++j) {
      const double rj = r0 * std::pow(0.5, static_cast<double>(j));
      const Membership st = base_->contains(shifted(x, rj), stage);
      if (st != Membership::member) return st;
    }
    return Membership::member;
  }

  const SystemPtr& space() const override { return base_->space(); }

  std::vector<LevelElement> generators(std::size_t stage,
                                       std::size_t level) const override {
    return base_->generators(stage, level);
  }

  std::string name() const override { return base_->name() + "+arch"; }

 private:
  double radius(const LevelElement& x) const {
    const Tolerances& tol = base_->space()->tolerances();
    return tol.eps_psd * (1.0 + x.realization().frobenius_norm());
  }

  static LevelElement shifted(const LevelElement& x, double r) {
    return x + LevelElement::unit(x.system(), x.level()) * Complex(r, 0.0);
  }

  static ConeVerdict annotate(ConeVerdict v, double r, Diagnostics diag) {
    for (auto& kv : v.diagnostics.stats) diag.stats.push_back(kv);
    diag.add("arch_probe_r", r);
    v.diagnostics = std::move(diag);
    if (auto* w = std::get_if<WitnessVector>(&v.certificate)) w->unit_shift += r;
    if (auto* w = std::get_if<WitnessFunctional>(&v.certificate))
      w->unit_shift += r;
    return v;
  }

  OraclePtr base_;
  bool assume_monotone_;
  std::size_t probes_;
};

inline OraclePtr archimedeanize(OraclePtr base, bool assume_monotone = false) {
  return std::make_shared<ArchimedeanizedOracle>(std::move(base), assume_monotone);
}

}  // namespace losys
