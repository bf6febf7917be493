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

#include <catch2/catch_amalgamated.hpp>

#include "losys/alou.hpp"
#include "losys/archimedean.hpp"
#include "losys/catalog.hpp"
#include "losys/ordering_checks.hpp"
#include "losys/seminorm.hpp"

using namespace losys;

namespace {

/// Open-cone test oracle: strict corner positivity (plus zero).  Its
/// archimedeanization must pick up the boundary.
class OpenConeOracle final : public ConeOracle {
 public:
  explicit OpenConeOracle(SystemPtr system) : system_(std::move(system)) {}

  ConeVerdict membership(const LevelElement& x, std::size_t stage) const override {
    if (x.realization().frobenius_norm() < 1e-14) return ConeVerdict::yes();
    const ComplexMatrix corner = x.corner(stage);
    const EigResult e = eig_hermitian(corner.hermitized());
    const double lam_min = e.values.empty() ? 1.0 : e.values.back();
    if (lam_min > 0.0) return ConeVerdict::yes();
    WitnessVector w;
    w.vector.resize(corner.rows());
    for (std::size_t i = 0; i < corner.rows(); ++i)
      w.vector[i] = e.vectors(i, corner.rows() - 1);
    w.violation = lam_min;
    w.threshold = 0.0;
    w.context = "corner";
    return ConeVerdict::no(std::move(w));
  }

  const SystemPtr& space() const override { return system_; }
  std::string name() const override { return "open-corner"; }

 private:
  SystemPtr system_;
};

}  // namespace

TEST_CASE("seminorm of zero and of the unit", "[order]") {
  const auto sys = catalog::full_matrix_system(3);
  const CornerConeOracle oracle(sys);
  CHECK(order_unit_seminorm(LevelElement::zero(sys, 1), 2, oracle) == 0.0);
  // block (r e, e; e, r e) is PSD iff r >= 1
  for (std::size_t stage = 0; stage < 3; ++stage) {
    const double s =
        order_unit_seminorm(LevelElement::unit(sys, 1), stage, oracle);
    CHECK(s == Catch::Approx(1.0).margin(2e-9));
  }
}

TEST_CASE("seminorm equals corner operator norm on concrete systems", "[order]") {
  RandomStream rng(424242);
  for (const auto& sys :
       {catalog::full_matrix_system(4), catalog::tridiagonal_system(5)}) {
    const CornerConeOracle oracle(sys);
    for (int trial = 0; trial < 25; ++trial) {
      const std::size_t level = 1 + rng.index(2);
      const std::size_t stage = rng.index(sys->stage_count());
      const LevelElement x = sample_hermitian(sys, level, rng);
      const double byod = order_unit_seminorm(x, stage, oracle);
      const double direct = corner_operator_norm(x, stage);
      CHECK(std::abs(byod - direct) <= 1e-7 * (1.0 + direct));
    }
  }
}

TEST_CASE("seminorm is a *-seminorm empirically", "[order]") {
  RandomStream rng(808);
  const auto sys = catalog::tridiagonal_system(4);
  const CornerConeOracle oracle(sys);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t stage = rng.index(sys->stage_count());
    const LevelElement x = sample_hermitian(sys, 1, rng);
    const LevelElement y = sample_hermitian(sys, 1, rng);
    const double nx = order_unit_seminorm(x, stage, oracle);
    const double ny = order_unit_seminorm(y, stage, oracle);
    const double nxy = order_unit_seminorm(x + y, stage, oracle);
    CHECK(nxy <= nx + ny + 1e-7);
    const double c = rng.uniform(0.0, 3.0);
    CHECK(order_unit_seminorm(x * Complex(c, 0.0), stage, oracle) ==
          Catch::Approx(c * nx).margin(1e-6 * (1.0 + c)));
    CHECK(order_unit_seminorm(x.adjoint(), stage, oracle) ==
          Catch::Approx(nx).margin(1e-7));
  }
}

TEST_CASE("seminorm separates and is monotone in stages", "[order]") {
  RandomStream rng(909);
  const auto sys = catalog::full_matrix_system(4);
  const CornerConeOracle oracle(sys);
  for (int trial = 0; trial < 15; ++trial) {
    const LevelElement x = sample_hermitian(sys, 1, rng);
    double at_top = 0.0;
    double prev = 0.0;
    for (std::size_t stage = 0; stage < sys->stage_count(); ++stage) {
      const double s = order_unit_seminorm(x, stage, oracle);
      CHECK(s >= prev - 1e-7);  // chain order: smaller corner, smaller norm
      prev = s;
      at_top = s;
    }
    if (x.realization().frobenius_norm() > 1e-7) CHECK(at_top > 1e-7);
  }
}

TEST_CASE("archimedeanize leaves closed corner cones unchanged", "[order]") {
  RandomStream rng(11011);
  const auto sys = catalog::full_matrix_system(3);
  const auto base = corner_cones(sys);
  const auto arch = archimedeanize(base);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t level = 1 + rng.index(2);
    const std::size_t stage = rng.index(sys->stage_count());
    const LevelElement x = sample_hermitian(sys, level, rng);
    CHECK(arch->membership(x, stage).status == base->membership(x, stage).status);
  }
}

TEST_CASE("archimedeanize closes an open cone at the boundary", "[order]") {
  const auto sys = catalog::full_matrix_system(2);
  const auto open = std::make_shared<OpenConeOracle>(sys);
  const auto arch = archimedeanize(open);

  // rank-deficient PSD corner: on the boundary of the open cone
  const auto x =
      LevelElement::from_matrix(sys, 1, ComplexMatrix::diag({1.0, 0.0}));
  CHECK(open->membership(x, 1).not_member());
  CHECK(arch->membership(x, 1).member());

  // -e stays outside before and after
  const auto minus_e = LevelElement::unit(sys, 1) * Complex(-1.0, 0.0);
  CHECK(open->membership(minus_e, 1).not_member());
  CHECK(arch->membership(minus_e, 1).not_member());
}

TEST_CASE("archimedeanize is idempotent", "[order]") {
  RandomStream rng(121212);
  const auto sys = catalog::tridiagonal_system(3);
  const auto open = std::make_shared<OpenConeOracle>(sys);
  const auto once = archimedeanize(open);
  const auto twice = archimedeanize(once);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t stage = rng.index(sys->stage_count());
    const LevelElement x = sample_hermitian(sys, 1, rng);
    CHECK(once->membership(x, stage).status ==
          twice->membership(x, stage).status);
  }
}

TEST_CASE("archimedeanization only enlarges", "[order]") {
  RandomStream rng(131313);
  const auto sys = catalog::full_matrix_system(3);
  const auto open = std::make_shared<OpenConeOracle>(sys);
  const auto arch = archimedeanize(open);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t stage = rng.index(sys->stage_count());
    const LevelElement x = sample_hermitian(sys, 1, rng);
    if (open->membership(x, stage).member())
      CHECK(arch->membership(x, stage).member());
  }
}

TEST_CASE("order unit radius by doubling search", "[order]") {
  const auto sys = catalog::full_matrix_system(2);
  const AlouSpace alou = AlouSpace::from_concrete(sys);
  const auto v =
      LevelElement::from_matrix(sys, 1, ComplexMatrix::diag({3.0, -1.0}));
  CHECK(alou.order_unit_radius(v, 1) == 4.0);  // smallest power of two >= 3

  RandomStream rng(5150);
  alou.validate(rng, 4);  // must not throw
}

TEST_CASE("validate_local_matrix_ordering passes on corner cones", "[order]") {
  RandomStream rng(616161);
  for (const auto& sys :
       {catalog::full_matrix_system(3), catalog::tridiagonal_system(4)}) {
    const CornerConeOracle oracle(sys);
    const Report rep = validate_local_matrix_ordering(oracle, 60, rng);
    INFO(rep.render());
    CHECK(rep.passed());
  }
}

TEST_CASE("validate_local_matrix_ordering flags a broken oracle", "[order]") {
  RandomStream rng(717171);
  const auto sys = catalog::full_matrix_system(3);
  // drops compatibility: level >= 2 cones are arbitrarily truncated to
  // elements with small off-diagonal block mass
  auto broken = CallbackConeOracle(
      sys,
      [sys](const LevelElement& x, std::size_t stage) -> ConeVerdict {
        const ConeVerdict inner = cone_member_concrete(x, stage);
        if (x.level() == 1 || !inner.member()) return inner;
        double off = 0.0;
        const std::size_t d = sys->ambient_dim();
        for (std::size_t i = 0; i < x.level(); ++i)
          for (std::size_t j = 0; j < x.level(); ++j)
            if (i != j)
              off += x.realization()
                         .block(i * d, j * d, d, d)
                         .frobenius_norm();
        if (off > 0.05) {
          WitnessVector w;
          w.context = "constructed-break";
          w.violation = -off;
          w.threshold = 0.0;
          return ConeVerdict::no(std::move(w));
        }
        return inner;
      },
      "broken");
  const Report rep = validate_local_matrix_ordering(broken, 60, rng);
  INFO(rep.render());
  CHECK_FALSE(rep.passed());
}

TEST_CASE("seminorm raises on undecidable oracles", "[order]") {
  const auto sys = catalog::full_matrix_system(2);
  auto vague = CallbackConeOracle(
      sys,
      [](const LevelElement&, std::size_t) { return ConeVerdict::undecided(); },
      "vague");
  CHECK_THROWS_AS(
      order_unit_seminorm(LevelElement::unit(sys, 1), 0, vague),
      OracleUnresolved);
}

TEST_CASE("seminorm raises NoBracket when the cone is empty", "[order]") {
  const auto sys = catalog::full_matrix_system(2);
  auto empty = CallbackConeOracle(
      sys,
      [](const LevelElement&, std::size_t) {
        return ConeVerdict::no(WitnessVector{});
      },
      "empty");
  CHECK_THROWS_AS(order_unit_seminorm(LevelElement::unit(sys, 1), 0, empty),
                  NoBracket);
}

TEST_CASE("order unit search rejects cones without an order unit", "[order]") {
  const auto sys = catalog::full_matrix_system(2);
  auto empty = std::make_shared<CallbackConeOracle>(
      sys,
      [](const LevelElement&, std::size_t) {
        return ConeVerdict::no(WitnessVector{});
      },
      "empty");
  const AlouSpace alou(sys, empty, false);
  CHECK_THROWS_AS(alou.order_unit_radius(LevelElement::unit(sys, 1), 0),
                  NotAnOrderUnit);
}
