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
#include "losys/universal.hpp"

using namespace losys;

namespace {

constexpr std::uint64_t kSeed = 0xfeedface;

/// SWAP = sum_ij E_ij (x) E_ji at level 2 over M_2.
LevelElement swap_element(const SystemPtr& m2) {
  std::vector<std::vector<Complex>> coords(4);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      coords[i * 2 + j] = m2->coords_of(ComplexMatrix::unit(2, j, i));
  return LevelElement(m2, 2, std::move(coords));
}

/// Maximally entangled projector P+ = (1/2) sum_ij E_ij (x) E_ij at level 2.
LevelElement bell_projector(const SystemPtr& m2) {
  std::vector<std::vector<Complex>> coords(4);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      auto c = m2->coords_of(ComplexMatrix::unit(2, i, j));
      for (auto& z : c) z *= 0.5;
      coords[i * 2 + j] = std::move(c);
    }
  return LevelElement(m2, 2, std::move(coords));
}

}  // namespace

TEST_CASE("lomin and lomax collapse to the base cone at level 1", "[minmax]") {
  RandomStream rng(314);
  const auto sys = catalog::full_matrix_system(3);
  const AlouSpace alou = AlouSpace::from_concrete(sys);
  const LominOracle lomin(alou, kSeed);
  const auto lomax = lomax_cones(alou, kSeed);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t stage = rng.index(sys->stage_count());
    const LevelElement x = sample_hermitian(sys, 1, rng);
    const Membership base = cone_member_concrete(x, stage).status;
    CHECK(lomin.membership(x, stage).status == base);
    CHECK(lomax->membership(x, stage).status == base);
  }
}

TEST_CASE("corner-positive elements are lomin members", "[minmax]") {
  RandomStream rng(315);
  const auto sys = catalog::tridiagonal_system(3);
  const LominOracle lomin(AlouSpace::from_concrete(sys), kSeed);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t stage = rng.index(sys->stage_count());
    const LevelElement x = sample_corner_member(sys, stage, 2, rng);
    CHECK(lomin.membership(x, stage).member());
  }
}

TEST_CASE("SWAP is block-positive but not PSD", "[minmax]") {
  const auto m2 = catalog::matrix_system(2);
  const LevelElement swap = swap_element(m2);

  // realization has eigenvalue -1
  const PsdResult psd = psd_verdict(swap.realization());
  CHECK_FALSE(psd.yes);
  CHECK(psd.min_eigenvalue == Catch::Approx(-1.0).margin(1e-8));

  LominOptions opts;
  opts.rigorous = true;
  const LominOracle lomin(AlouSpace::from_concrete(m2), kSeed, opts);
  const ConeVerdict v = lomin.membership(swap, 0);
  REQUIRE(v.member());
  // the rigorous grid certifies a nonnegative product minimum
  double grid_min = 1.0;
  for (const auto& [key, val] : v.diagnostics.stats)
    if (key == "grid_min") grid_min = val;
  CHECK(grid_min >= -1e-9);
}

TEST_CASE("rigorous grid separates barely-positive from barely-negative",
          "[minmax]") {
  const auto m2 = catalog::matrix_system(2);
  LominOptions opts;
  opts.rigorous = true;
  const LominOracle lomin(AlouSpace::from_concrete(m2), kSeed, opts);
  const LevelElement swap = swap_element(m2);
  const LevelElement shift = LevelElement::unit(m2, 2) * Complex(1e-3, 0.0);
  // SWAP + delta e: every product value >= delta
  CHECK(lomin.membership(swap + shift, 0).member());
  // SWAP - delta e: every contraction has an eigenvalue at -delta
  const ConeVerdict below = lomin.membership(swap - shift, 0);
  REQUIRE(below.not_member());
  const auto& w = std::get<WitnessVector>(below.certificate);
  CHECK(cone_member_concrete(lambda_contraction(swap - shift, w.vector), 0)
            .not_member());
}

TEST_CASE("lomin rejects elements with a negative contraction", "[minmax]") {
  const auto m2 = catalog::matrix_system(2);
  // -e in the (1,1) slot pattern: contraction at lambda = e_1 is -I
  std::vector<std::vector<Complex>> coords(4, std::vector<Complex>(4, 0.0));
  coords[0] = m2->coords_of(ComplexMatrix::identity(2) * Complex(-1.0, 0.0));
  coords[3] = m2->coords_of(ComplexMatrix::identity(2));
  const LevelElement x(m2, 2, std::move(coords));

  const LominOracle lomin(AlouSpace::from_concrete(m2), kSeed);
  const ConeVerdict v = lomin.membership(x, 0);
  REQUIRE(v.not_member());
  const auto* w = std::get_if<WitnessVector>(&v.certificate);
  REQUIRE(w != nullptr);
  CHECK(w->context == "lambda");
  // witness lambda contracts to a non-member of the base cone
  const LevelElement contr = lambda_contraction(x, w->vector);
  CHECK(cone_member_concrete(contr, 0).not_member());
  CHECK(std::abs(w->vector[0]) == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("lomax accepts generators with one-term certificates", "[minmax]") {
  RandomStream rng(316);
  const auto sys = catalog::full_matrix_system(3);
  const AlouSpace alou = AlouSpace::from_concrete(sys);
  const auto lomax = lomax_cones(alou, kSeed);
  const auto level1 = alou.level1();

  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t stage = rng.index(sys->stage_count());
    const ComplexMatrix a = rng.psd(2);
    const LevelElement v = sample_corner_member(sys, stage, 1, rng);
    std::vector<std::vector<Complex>> coords(4);
    for (std::size_t p = 0; p < 2; ++p)
      for (std::size_t q = 0; q < 2; ++q) {
        auto c = v.coord(0, 0);
        for (auto& z : c) z *= a(p, q);
        coords[p * 2 + q] = std::move(c);
      }
    const LevelElement x(sys, 2, std::move(coords));
    const ConeVerdict verdict = lomax->membership(x, stage);
    REQUIRE(verdict.member());
    const auto* dec = std::get_if<Decomposition>(&verdict.certificate);
    REQUIRE(dec != nullptr);
    CHECK(dec->terms.size() == 1);
    CHECK(verify_decomposition(x, stage, *dec, *level1));
  }
}

TEST_CASE("lomax accepts the unit with a decomposition", "[minmax]") {
  const auto sys = catalog::tridiagonal_system(3);
  const AlouSpace alou = AlouSpace::from_concrete(sys);
  const auto lomax = lomax_cones(alou, kSeed);
  for (std::size_t stage = 0; stage < sys->stage_count(); ++stage) {
    const ConeVerdict v = lomax->membership(LevelElement::unit(sys, 2), stage);
    REQUIRE(v.member());
    CHECK(std::holds_alternative<Decomposition>(v.certificate));
  }
}

TEST_CASE("lomax rejects the entangled projector with the reduction witness",
          "[minmax]") {
  RandomStream rng(317);
  const auto m2 = catalog::matrix_system(2);
  const AlouSpace alou = AlouSpace::from_concrete(m2);
  const auto lomax = lomax_cones(alou, kSeed);
  const LevelElement bell = bell_projector(m2);

  CHECK(psd_verdict(bell.realization()).yes);  // PSD...
  const ConeVerdict v = lomax->membership(bell, 0);
  REQUIRE(v.not_member());  // ...but not separable
  const auto* w = std::get_if<WitnessFunctional>(&v.certificate);
  REQUIRE(w != nullptr);
  // witness is I/2 - P+ : pairing with P+ equals -1/2
  CHECK(w->value == Catch::Approx(-0.5).margin(1e-6));
  CHECK(verify_witness_functional(bell, 0, *w, *alou.level1(), rng, 512));

  const ComplexMatrix expected =
      ComplexMatrix::identity(4) * Complex(0.5, 0.0) - bell.realization();
  CHECK(w->matrix.approx_equal(expected, 1e-6));
}

TEST_CASE("lomax diagonal route decides classical systems exactly", "[minmax]") {
  RandomStream rng(318);
  const auto sys = catalog::diagonal_system(3);
  const AlouSpace alou = AlouSpace::from_concrete(sys);
  const auto lomax = lomax_cones(alou, kSeed);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t stage = rng.index(sys->stage_count());
    const LevelElement x = sample_hermitian(sys, 2, rng);
    const ConeVerdict v = lomax->membership(x, stage);
    // classical lomax equals the concrete corner cone; compare exactly
    const Membership expected = cone_member_concrete(x, stage).status;
    CHECK_FALSE(v.unresolved());
    CHECK(v.status == expected);
    if (v.member())
      CHECK(verify_decomposition(
          x, stage, std::get<Decomposition>(v.certificate), *alou.level1()));
  }
}

TEST_CASE("sandwich: lomax inside concrete inside lomin", "[minmax]") {
  RandomStream rng(319);
  for (const auto& sys :
       {catalog::full_matrix_system(3), catalog::tridiagonal_system(4)}) {
    const AlouSpace alou = AlouSpace::from_concrete(sys);
    const LominOracle lomin(alou, kSeed);
    const auto lomax = lomax_cones(alou, kSeed);
    for (int trial = 0; trial < 25; ++trial) {
      const std::size_t stage = rng.index(sys->stage_count());
      const std::size_t level = 1 + rng.index(2);
      const LevelElement x = sample_hermitian(sys, level, rng);
      const ConeVerdict vmax = lomax->membership(x, stage);
      const ConeVerdict vcon = cone_member_concrete(x, stage);
      const ConeVerdict vmin = lomin.membership(x, stage);
      if (vmax.member()) {
        CHECK(vcon.member());
        CHECK_FALSE(vmin.not_member());
      }
      if (vcon.member()) CHECK_FALSE(vmin.not_member());
    }
  }
}

TEST_CASE("lomax decomposition transports under scalar conjugation",
          "[minmax]") {
  RandomStream rng(320);
  const auto sys = catalog::full_matrix_system(2);
  const AlouSpace alou = AlouSpace::from_concrete(sys);
  const auto level1 = alou.level1();
  const std::size_t stage = 1;

  // build a 2-term generator sum, conjugate by a random scalar matrix and
  // transport the decomposition exactly
  const ComplexMatrix a1 = rng.psd(2), a2 = rng.psd(2);
  const LevelElement v1 = sample_corner_member(sys, stage, 1, rng);
  const LevelElement v2 = sample_corner_member(sys, stage, 1, rng);
  const LevelElement x = LevelElement::from_matrix(
      sys, 2, kron(a1, v1.realization()) + kron(a2, v2.realization()));
  const ComplexMatrix scalar = rng.matrix_gaussian(2, 3);
  const LevelElement y = x.scalar_conjugate(scalar);

  Decomposition transported;
  transported.terms.push_back({(scalar.adjoint() * a1) * scalar, {v1}});
  transported.terms.push_back({(scalar.adjoint() * a2) * scalar, {v2}});
  CHECK(verify_decomposition(y, stage, transported, *level1));
}

TEST_CASE("universal property of LOMIN on positive maps", "[minmax]") {
  RandomStream rng(321);
  const auto m2 = catalog::matrix_system(2);
  const AlouSpace alou = AlouSpace::from_concrete(m2);
  LominOptions opts;
  opts.rigorous = true;
  const LominOracle lomin(alou, kSeed, opts);

  // transpose is positive but not CP; into LOMIN it must pass every level
  const auto transpose = LinearMapData::from_action(
      m2, m2, {0}, [](const ComplexMatrix& m) { return m.transpose(); });
  const Report rep = check_universal_lomin(transpose, lomin, 2, 10, rng);
  INFO(rep.render());
  CHECK(rep.passed());

  // identity into LOMIN: corner cones sit inside the lomin cones
  const auto id = LinearMapData::identity(m2);
  const Report rep2 = check_universal_lomin(id, lomin, 2, 10, rng);
  INFO(rep2.render());
  CHECK(rep2.passed());
}

TEST_CASE("positive functionals into LOMIN(C) are completely positive",
          "[minmax]") {
  RandomStream rng(322);
  const auto m2 = catalog::matrix_system(2);
  const auto c = catalog::matrix_system(1);
  const AlouSpace alou_c = AlouSpace::from_concrete(c);
  LominOptions opts;
  opts.rigorous = true;
  const LominOracle lomin_c(alou_c, kSeed, opts);

  const ComplexMatrix rho = rng.density(2);
  const auto f = LinearMapData::from_action(
      m2, c, {0}, [&](const ComplexMatrix& m) {
        ComplexMatrix v(1, 1);
        v(0, 0) = hs_inner(rho, m);
        return v;
      });
  const Report rep = check_universal_lomin(f, lomin_c, 2, 16, rng);
  INFO(rep.render());
  CHECK(rep.passed());
}

TEST_CASE("lomax witness floor holds over sampled product pairs", "[minmax]") {
  RandomStream rng(323);
  const auto m2 = catalog::matrix_system(2);
  const AlouSpace alou = AlouSpace::from_concrete(m2);
  const auto lomax = lomax_cones(alou, kSeed);
  const LevelElement bell = bell_projector(m2);
  const ConeVerdict v = lomax->membership(bell, 0);
  REQUIRE(v.not_member());
  const auto& w = std::get<WitnessFunctional>(v.certificate);
  double floor = 0.0;
  for (int trial = 0; trial < 2000; ++trial) {
    const ComplexMatrix g = kron(rng.psd(2), rng.psd(2));
    floor = std::min(floor, pairing(w.matrix, g) / (1.0 + g.frobenius_norm()));
  }
  CHECK(floor >= -1e-9);
}
