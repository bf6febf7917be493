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

#include "losys/catalog.hpp"
#include "losys/lomax.hpp"
#include "losys/sampling.hpp"

using namespace losys;

TEST_CASE("catalog dimensions", "[domain]") {
  CHECK(catalog::full_matrix_system(3)->basis_size() == 9);
  CHECK(catalog::tridiagonal_system(3)->basis_size() == 7);  // 3*3 - 2
  CHECK(catalog::diagonal_system(4)->basis_size() == 4);

  // los_of(T) with T = E_12 spans {I, E_12, E_21}
  const auto t = ComplexMatrix::unit(2, 0, 1);
  CHECK(catalog::generated_by(t)->basis_size() == 3);
  // hermitian generator collapses T* into span{I, T}
  const auto x = ComplexMatrix::of(2, 2, {0.0, 1.0, 1.0, 0.0});
  CHECK(catalog::generated_by(x)->basis_size() == 2);
}

TEST_CASE("make_example dispatches over the catalog", "[domain]") {
  using catalog::ExampleSpec;
  CHECK(catalog::make_example(ExampleSpec::truncated(3))->basis_size() == 9);
  CHECK(catalog::make_example(ExampleSpec::tri(3))->basis_size() == 7);
  std::set<std::pair<std::size_t, std::size_t>> g{{0, 0}, {1, 1}};
  CHECK(catalog::make_example(ExampleSpec::of_graph(g, 2))->basis_size() == 2);
  CHECK(catalog::make_example(
            ExampleSpec::of_operator(ComplexMatrix::unit(2, 0, 1)))
            ->basis_size() == 3);
  CHECK(catalog::make_example(ExampleSpec::sampled({{0.0}, {0.0, 1.0}}))
            ->stage_count() == 2);
}

TEST_CASE("graph system validation", "[domain]") {
  std::set<std::pair<std::size_t, std::size_t>> g{{0, 0}, {1, 1}, {0, 1}};
  CHECK_THROWS_AS(catalog::graph_system(g, 2), InvalidGraph);  // not symmetric
  g.insert({1, 0});
  CHECK(catalog::graph_system(g, 2)->basis_size() == 4);
  std::set<std::pair<std::size_t, std::size_t>> missing_diag{{0, 0}};
  CHECK_THROWS_AS(catalog::graph_system(missing_diag, 2), InvalidGraph);
}

TEST_CASE("sampled function system", "[domain]") {
  const auto sys =
      catalog::sampled_function_system({{0.0}, {0.0, 1.0}, {0.0, 1.0, 2.0}});
  CHECK(sys->ambient_dim() == 3);
  CHECK(sys->stage_count() == 3);
  CHECK(sys->diagonal_span());
  CHECK_THROWS_AS(catalog::sampled_function_system({{0.0, 5.0}, {0.0, 1.0}}),
                  EmptyGrid);
  CHECK_THROWS_AS(catalog::sampled_function_system({{}}), EmptyGrid);
}

TEST_CASE("unit is a member at every stage and level", "[domain]") {
  for (const auto& sys :
       {catalog::full_matrix_system(3), catalog::tridiagonal_system(4)}) {
    for (std::size_t level : {std::size_t{1}, std::size_t{2}}) {
      const auto e = LevelElement::unit(sys, level);
      for (std::size_t stage = 0; stage < sys->stage_count(); ++stage)
        CHECK(cone_member_concrete(e, stage).member());
    }
  }
}

TEST_CASE("corner cone on truncated M_inf distinguishes stages", "[domain]") {
  const auto sys = catalog::full_matrix_system(2);
  // diag(1, -1)
  const auto x =
      LevelElement::from_matrix(sys, 1, ComplexMatrix::diag({1.0, -1.0}));
  CHECK(cone_member_concrete(x, 0).member());  // corner = [1]
  const auto v = cone_member_concrete(x, 1);
  REQUIRE(v.not_member());
  const auto* w = std::get_if<WitnessVector>(&v.certificate);
  REQUIRE(w != nullptr);
  CHECK(w->violation == Catch::Approx(-1.0));
  CHECK(std::abs(w->vector[1]) == Catch::Approx(1.0));
  CHECK(verify_corner_witness(x, 1, *w));
}

TEST_CASE("globally PSD realization is a member at every stage", "[domain]") {
  RandomStream rng(101);
  const auto sys = catalog::full_matrix_system(4);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t level = 1 + rng.index(2);
    const ComplexMatrix psd = rng.psd(level * 4);
    const auto x = LevelElement::from_matrix(sys, level, psd);
    for (std::size_t stage = 0; stage < sys->stage_count(); ++stage)
      CHECK(cone_member_concrete(x, stage).member());
  }
}

TEST_CASE("local_hermitian sees only the corner", "[domain]") {
  const auto sys = catalog::full_matrix_system(2);
  // nilpotent [[0,1],[0,0]]: corner at stage 1 is [0], full corner is not
  // hermitian
  const auto x =
      LevelElement::from_matrix(sys, 1, ComplexMatrix::of(2, 2, {0, 1, 0, 0}));
  CHECK(local_hermitian(x, 0));
  CHECK_FALSE(local_hermitian(x, 1));
  CHECK_THROWS_AS(local_hermitian(x, 7), StageOutOfRange);
  CHECK_THROWS_AS(cone_member_concrete(x, 1), NonHermitianElement);
}

TEST_CASE("diagonal graph cones are entrywise nonnegativity", "[domain]") {
  const auto sys = catalog::diagonal_system(3);
  const auto x =
      LevelElement::from_matrix(sys, 1, ComplexMatrix::diag({0.5, -0.2, 3.0}));
  CHECK(cone_member_concrete(x, 0).member());      // corner sees 0.5
  CHECK(cone_member_concrete(x, 1).not_member());  // sees -0.2
  CHECK(cone_member_concrete(x, 2).not_member());
  const auto y =
      LevelElement::from_matrix(sys, 1, ComplexMatrix::diag({0.5, 0.0, 3.0}));
  for (std::size_t stage = 0; stage < 3; ++stage)
    CHECK(cone_member_concrete(y, stage).member());
}

TEST_CASE("membership is monotone down the filtration", "[domain]") {
  RandomStream rng(555);
  for (const auto& sys :
       {catalog::full_matrix_system(4), catalog::tridiagonal_system(4),
        catalog::diagonal_system(4)}) {
    const auto& poset = sys->filtration().poset();
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t level = 1 + rng.index(2);
      const LevelElement x = sample_hermitian(sys, level, rng);
      std::vector<bool> member(sys->stage_count());
      for (std::size_t s = 0; s < sys->stage_count(); ++s)
        member[s] = cone_member_concrete(x, s).member();
      for (std::size_t a = 0; a < sys->stage_count(); ++a)
        for (std::size_t b = 0; b < sys->stage_count(); ++b)
          if (a != b && poset.leq(a, b) && member[b]) CHECK(member[a]);
    }
  }
}

TEST_CASE("compatibility under scalar conjugation", "[domain]") {
  RandomStream rng(777);
  const auto sys = catalog::tridiagonal_system(4);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t stage = rng.index(sys->stage_count());
    const std::size_t m = 1 + rng.index(2);
    const std::size_t n = 1 + rng.index(2);
    const LevelElement x = sample_corner_member(sys, stage, m, rng);
    const ComplexMatrix scalar = rng.matrix_gaussian(m, n);
    CHECK_FALSE(
        cone_member_concrete(x.scalar_conjugate(scalar), stage).not_member());
  }
}

TEST_CASE("separation: two-sided members at all stages vanish", "[domain]") {
  RandomStream rng(999);
  const auto sys = catalog::full_matrix_system(3);
  for (int trial = 0; trial < 100; ++trial) {
    const LevelElement x = sample_hermitian(sys, 1, rng);
    bool both = true;
    for (std::size_t s = 0; s < sys->stage_count() && both; ++s)
      both = cone_member_concrete(x, s).member() &&
             cone_member_concrete(x * Complex(-1.0, 0.0), s).member();
    if (both) CHECK(x.realization().frobenius_norm() <= 1e-7);
  }
}

TEST_CASE("level element round trips and algebra", "[domain]") {
  RandomStream rng(31);
  const auto sys = catalog::tridiagonal_system(3);
  const LevelElement x = sample_hermitian(sys, 2, rng);
  const LevelElement y = sample_hermitian(sys, 2, rng);
  CHECK((x + y).realization().approx_equal(x.realization() + y.realization(),
                                           1e-12));
  CHECK((x * Complex(2.0, 0.0))
            .realization()
            .approx_equal(x.realization() * Complex(2.0, 0.0), 1e-12));
  CHECK(
      x.adjoint().realization().approx_equal(x.realization().adjoint(), 1e-12));

  const LevelElement back = LevelElement::from_matrix(sys, 2, x.realization());
  CHECK(back.realization().approx_equal(x.realization(), 1e-9));

  // scalar conjugation matches realization-level conjugation by X (x) I_d
  const ComplexMatrix scalar = rng.matrix_gaussian(2, 2);
  const ComplexMatrix lift = kron(scalar, ComplexMatrix::identity(3));
  CHECK(x.scalar_conjugate(scalar).realization().approx_equal(
      (lift.adjoint() * x.realization()) * lift, 1e-10));

  // off-span matrices are rejected
  CHECK_THROWS_AS(LevelElement::from_matrix(sys, 1, ComplexMatrix::unit(3, 0, 2)),
                  InvalidSystem);
}

TEST_CASE("explicit non-coordinate projections work end to end", "[domain]") {
  RandomStream rng(41);
  // filtration by rotated projectors: P1 onto span{(e1+e2)/sqrt2},
  // P2 onto span{(e1+e2)/sqrt2, e3}, P3 = I
  const Complex s2(1.0 / std::sqrt(2.0), 0.0);
  ComplexMatrix u(3, 1);
  u(0, 0) = s2;
  u(1, 0) = s2;
  ComplexMatrix p1 = u * u.adjoint();
  ComplexMatrix p2 = p1;
  p2(2, 2) = 1.0;
  std::vector<Projection> stages{Projection::from_matrix(p1),
                                 Projection::from_matrix(p2),
                                 Projection::onto_first(3, 3)};
  CHECK_FALSE(stages[0].coordinate());

  // full M_3 span: I, E00, E11 and the off-diagonal units
  std::vector<ComplexMatrix> basis{ComplexMatrix::identity(3),
                                   ComplexMatrix::unit(3, 0, 0),
                                   ComplexMatrix::unit(3, 1, 1)};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      if (i != j) basis.push_back(ComplexMatrix::unit(3, i, j));
  const auto sys = std::make_shared<LocalSystem>(
      std::move(basis), Filtration(3, std::move(stages), StagePoset::chain(3)));

  // x = u u† - e3 e3†: positive on the P1 range, indefinite at stage 2
  ComplexMatrix xm = p1;
  xm(2, 2) = -1.0;
  const auto x = LevelElement::from_matrix(sys, 1, xm);
  CHECK(cone_member_concrete(x, 0).member());
  const auto v = cone_member_concrete(x, 1);
  REQUIRE(v.not_member());
  const auto* w = std::get_if<WitnessVector>(&v.certificate);
  REQUIRE(w != nullptr);
  CHECK(verify_corner_witness(x, 1, *w));

  // monotonicity still holds along the rotated chain
  for (int trial = 0; trial < 20; ++trial) {
    const LevelElement y = sample_corner_member(sys, 2, 1 + rng.index(2), rng);
    CHECK(cone_member_concrete(y, 0).member());
    CHECK(cone_member_concrete(y, 1).member());
  }

  // lomax witness embedding through the range isometry
  const AlouSpace alou = AlouSpace::from_concrete(sys);
  const auto lomax = lomax_cones(alou, 99);
  const auto bad = lomax->membership(x, 1);
  CHECK(bad.not_member());
}

TEST_CASE("order block realization matches definition", "[domain]") {
  RandomStream rng(37);
  const auto sys = catalog::full_matrix_system(3);
  const LevelElement x = sample_hermitian(sys, 2, rng);
  const LevelElement blk = x.order_block(1.7);
  REQUIRE(blk.level() == 4);
  const auto& r = blk.realization();
  const auto& xr = x.realization();
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(r(i, i) == Complex(1.7, 0.0));
    CHECK(r(6 + i, 6 + i) == Complex(1.7, 0.0));
    for (std::size_t j = 0; j < 6; ++j) {
      CHECK(r(i, 6 + j) == xr(i, j));
      CHECK(r(6 + i, j) == std::conj(xr(j, i)));
    }
  }
  // coords and realization stay consistent
  const LevelElement rebuilt(sys, 4, blk.coords());
  CHECK(rebuilt.realization().approx_equal(blk.realization(), 1e-10));
}
