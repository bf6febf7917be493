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
#include "losys/choi.hpp"
#include "losys/embed.hpp"
#include "losys/extend.hpp"

using namespace losys;

namespace {

LinearMapData transpose_map(const SystemPtr& sys) {
  std::vector<std::size_t> corr(sys->stage_count());
  for (std::size_t b = 0; b < corr.size(); ++b) corr[b] = b;
  return LinearMapData::from_action(
      sys, sys, corr, [](const ComplexMatrix& m) { return m.transpose(); });
}

LinearMapData compression_map(const SystemPtr& src, const SystemPtr& dst,
                              const ComplexMatrix& iso) {
  std::vector<std::size_t> corr(dst->stage_count(), src->stage_count() - 1);
  return LinearMapData::from_action(src, dst, corr,
                                    [&](const ComplexMatrix& m) {
                                      return (iso.adjoint() * m) * iso;
                                    });
}

LinearMapData kraus_map(const SystemPtr& src, const SystemPtr& dst,
                        const std::vector<ComplexMatrix>& kraus) {
  std::vector<std::size_t> corr(dst->stage_count(), src->stage_count() - 1);
  return LinearMapData::from_action(src, dst, corr,
                                    [&](const ComplexMatrix& m) {
                                      ComplexMatrix out(kraus[0].cols(),
                                                        kraus[0].cols());
                                      for (const auto& a : kraus)
                                        out += (a.adjoint() * m) * a;
                                      return out;
                                    });
}

}  // namespace

TEST_CASE("identity map passes verify_local_cp", "[maps]") {
  RandomStream rng(42);
  const auto sys = catalog::full_matrix_system(3);
  const auto id = LinearMapData::identity(sys);
  CHECK(id.unital());
  const Report rep = verify_local_cp(id, 2, 12, rng);
  INFO(rep.render());
  CHECK(rep.passed());
}

TEST_CASE("compressions are completely positive", "[maps]") {
  RandomStream rng(43);
  const auto src = catalog::full_matrix_system(4);
  const auto dst = catalog::matrix_system(2);
  ComplexMatrix iso(4, 2);
  iso(0, 0) = 1.0;
  iso(1, 1) = 1.0;
  const auto phi = compression_map(src, dst, iso);
  CHECK(phi.unital());
  const Report rep = verify_local_cp(phi, 3, 16, rng);
  INFO(rep.render());
  CHECK(rep.passed());
}

TEST_CASE("transpose fails at level 2 with a SWAP-based counterexample",
          "[maps]") {
  const auto sys = catalog::matrix_system(2);
  const auto t = transpose_map(sys);

  // the level-2 element sum_ij E_ij (x) E_ij is PSD (2 P+); its image under
  // transpose^{(2)} is SWAP with lambda_min = -1
  std::vector<std::vector<Complex>> coords(4);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      coords[i * 2 + j] = sys->coords_of(ComplexMatrix::unit(2, i, j));
  const LevelElement x(sys, 2, std::move(coords));
  CHECK(psd_verdict(x.realization()).yes);
  const LevelElement y = t.apply(x);
  const PsdResult bad = psd_verdict(y.realization());
  CHECK_FALSE(bad.yes);
  CHECK(bad.min_eigenvalue == Catch::Approx(-1.0).margin(1e-8));
}

TEST_CASE("choi_equivalence on canonical maps", "[maps]") {
  RandomStream rng(44);
  const auto m2 = catalog::matrix_system(2);

  const auto id = LinearMapData::identity(m2);
  const ChoiVerdict idv = choi_equivalence(id, rng);
  CHECK(idv.cp);
  CHECK(idv.agreement.passed());
  // Choi of identity = sum E_kl (x) E_kl = 2 P+, eigenvalues {2,0,0,0}
  const ChoiData idc = make_choi(id);
  const auto ide = eig_hermitian(idc.choi);
  CHECK(ide.values.front() == Catch::Approx(2.0).margin(1e-10));

  const auto t = transpose_map(m2);
  const ChoiVerdict tv = choi_equivalence(t, rng);
  CHECK_FALSE(tv.cp);
  CHECK(tv.min_eigenvalue == Catch::Approx(-1.0).margin(1e-8));
  CHECK(tv.agreement.passed());
  REQUIRE(tv.witness.size() == 4);
  // witness is the antisymmetric singlet (e_01 - e_10)/sqrt(2) up to phase
  CHECK(std::abs(tv.witness[1]) ==
        Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-8));
  CHECK(std::abs(tv.witness[2]) ==
        Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-8));

  // trace map x -> tr(x) I / 2
  const auto tr = LinearMapData::from_action(
      m2, m2, {0}, [](const ComplexMatrix& m) {
        ComplexMatrix out = ComplexMatrix::identity(2);
        return out * (m.trace() / 2.0);
      });
  const ChoiVerdict trv = choi_equivalence(tr, rng);
  CHECK(trv.cp);
  CHECK(trv.agreement.passed());
}

TEST_CASE("choi three-way agreement over random CP and non-CP maps", "[maps]") {
  RandomStream rng(4545);
  std::size_t done = 0;
  while (done < 40) {
    const std::size_t d = 2 + rng.index(2);
    const std::size_t n = 2 + rng.index(2);
    const auto src = catalog::matrix_system(d);
    const auto dst = catalog::matrix_system(n);
    std::vector<ComplexMatrix> kraus;
    const std::size_t terms = 1 + rng.index(3);
    for (std::size_t t = 0; t < terms; ++t)
      kraus.push_back(rng.matrix_gaussian(d, n) * Complex(0.6, 0.0));
    LinearMapData phi = kraus_map(src, dst, kraus);
    const bool make_bad = (done % 2) == 1;
    if (make_bad) {
      // subtract a transpose-conjugate piece until the Choi goes negative
      const ComplexMatrix b = rng.matrix_gaussian(d, n);
      const auto bad_piece = LinearMapData::from_action(
          src, dst, {0}, [&](const ComplexMatrix& m) {
            return (b.adjoint() * m.transpose()) * b;
          });
      phi.matrix = phi.matrix - bad_piece.matrix * Complex(1.2, 0.0);
    }
    const ChoiData data = make_choi(phi);
    const double margin = eig_hermitian(data.choi.hermitized()).values.back();
    // CP instances may sit exactly on the boundary (rank-deficient Choi);
    // perturbed instances must be clearly negative or we resample
    if (make_bad ? margin > -1e-3 : margin < -1e-9) continue;
    const ChoiVerdict v = choi_equivalence(phi, rng);
    INFO(v.agreement.render());
    CHECK(v.agreement.passed());
    CHECK(v.cp == !make_bad);
    ++done;
  }
}

TEST_CASE("lcb norm of unital LUCP maps equals the unit image norm", "[maps]") {
  RandomStream rng(46);
  const auto src = catalog::full_matrix_system(3);
  const auto dst = catalog::matrix_system(2);
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexMatrix iso = rng.isometry(3, 2);
    const auto phi = compression_map(src, dst, iso);
    REQUIRE(phi.unital());
    const LcbResult r = lcb_norm(phi, src->stage_count() - 1, 0, 3, 10, rng);
    CHECK(std::abs(r.value - 1.0) <= 1e-6);
  }
}

TEST_CASE("lcb norm scales homogeneously", "[maps]") {
  RandomStream rng(47);
  const auto sys = catalog::matrix_system(2);
  auto twice = LinearMapData::identity(sys);
  twice.matrix = twice.matrix * Complex(2.0, 0.0);
  const LcbResult r = lcb_norm(twice, 0, 0, 2, 10, rng);
  CHECK(r.value == Catch::Approx(2.0).margin(1e-6));
}

TEST_CASE("lcb norm of transpose reaches the dimension", "[maps]") {
  RandomStream rng(48);
  const auto sys = catalog::matrix_system(2);
  const auto t = transpose_map(sys);
  const LcbResult r = lcb_norm(t, 0, 0, 2, 10, rng);
  CHECK(r.value >= 2.0 - 1e-3);
  CHECK(r.value <= 2.0 + 1e-6);
}

TEST_CASE("lcb norm refuses stages where the seminorm vanishes", "[maps]") {
  RandomStream rng(485);
  // a rank-0 stage sees nothing: every seminorm is zero there
  std::vector<ComplexMatrix> basis{ComplexMatrix::identity(2),
                                   ComplexMatrix::unit(2, 0, 0),
                                   ComplexMatrix::unit(2, 0, 1),
                                   ComplexMatrix::unit(2, 1, 0)};
  std::vector<Projection> stages{Projection::onto_coords(2, {}),
                                 Projection::onto_first(2, 2)};
  const auto sys = std::make_shared<LocalSystem>(
      std::move(basis), Filtration(2, std::move(stages), StagePoset::chain(2)));
  const auto id = LinearMapData::identity(sys);
  CHECK_THROWS_AS(lcb_norm(id, 0, 0, 2, 10, rng), DegenerateSeminorm);
}

TEST_CASE("extend_positive from the diagonal subsystem", "[maps]") {
  RandomStream rng(49);
  const auto ambient = catalog::full_matrix_system(2);
  const auto sub = catalog::diagonal_system(2);
  // evaluation at the first diagonal entry
  const auto phi = LinearMapData::from_action(
      sub, catalog::matrix_system(1), {sub->stage_count() - 1},
      [](const ComplexMatrix& m) {
        ComplexMatrix v(1, 1);
        v(0, 0) = m(0, 0);
        return v;
      });
  const FunctionalExtension ext =
      extend_positive(phi, ambient->stage_count() - 1, ambient, rng);
  REQUIRE(ext.status == ExtendStatus::found);
  // agreement on the subsystem basis
  for (std::size_t i = 0; i < sub->basis_size(); ++i)
    CHECK(std::abs(hs_inner(ext.dual, sub->basis_element(i)) -
                   phi.matrix(0, i)) <= 1e-8);
  // positivity on random PSD matrices
  for (int trial = 0; trial < 200; ++trial) {
    const ComplexMatrix p = rng.psd(2);
    CHECK(hs_inner(ext.dual, p).real() >= -1e-8);
  }
}

TEST_CASE("extend_positive keeps a full-system functional unchanged", "[maps]") {
  RandomStream rng(50);
  const auto ambient = catalog::full_matrix_system(2);
  const ComplexMatrix rho = rng.density(2);
  const auto phi = LinearMapData::from_action(
      ambient, catalog::matrix_system(1), {ambient->stage_count() - 1},
      [&](const ComplexMatrix& m) {
        ComplexMatrix v(1, 1);
        v(0, 0) = hs_inner(rho, m);
        return v;
      });
  const FunctionalExtension ext =
      extend_positive(phi, ambient->stage_count() - 1, ambient, rng);
  REQUIRE(ext.status == ExtendStatus::found);
  CHECK(ext.dual.approx_equal(rho, 1e-7));
}

TEST_CASE("extend_positive state on span{I, E12, E21}", "[maps]") {
  RandomStream rng(51);
  const auto ambient = catalog::full_matrix_system(2);
  const auto sub = catalog::generated_by(ComplexMatrix::unit(2, 0, 1));
  REQUIRE(sub->basis_size() == 3);
  // phi(I) = 1, phi(E12) = phi(E21) = 1/2
  LinearMapData phi;
  phi.source = sub;
  phi.target = catalog::matrix_system(1);
  phi.matrix = ComplexMatrix(1, 3);
  phi.matrix(0, 0) = 1.0;
  phi.matrix(0, 1) = 0.5;
  phi.matrix(0, 2) = 0.5;
  phi.stage_correspondence = {sub->stage_count() - 1};
  const FunctionalExtension ext =
      extend_positive(phi, ambient->stage_count() - 1, ambient, rng);
  REQUIRE(ext.status == ExtendStatus::found);
  for (int trial = 0; trial < 200; ++trial) {
    const ComplexMatrix p = rng.psd(2);
    CHECK(hs_inner(ext.dual, p).real() >= -1e-8);
  }
}

TEST_CASE("extend_positive rejects a negative functional", "[maps]") {
  RandomStream rng(52);
  const auto ambient = catalog::full_matrix_system(2);
  const auto sub = catalog::diagonal_system(2);
  const auto bad = LinearMapData::from_action(
      sub, catalog::matrix_system(1), {sub->stage_count() - 1},
      [](const ComplexMatrix& m) {
        ComplexMatrix v(1, 1);
        v(0, 0) = -m(0, 0);
        return v;
      });
  CHECK_THROWS_AS(
      extend_positive(bad, ambient->stage_count() - 1, ambient, rng),
      NotPositiveOnSubsystem);
}

TEST_CASE("extend_lucp recovers an extension that passes the Choi test",
          "[maps]") {
  RandomStream rng(53);
  const auto ambient = catalog::full_matrix_system(2);
  const auto sub = catalog::generated_by(ComplexMatrix::unit(2, 0, 1));
  const auto target = catalog::matrix_system(2);

  // restrict a known CP map (unitary conjugation) to the subsystem
  const ComplexMatrix u = rng.unitary(2);
  const auto psi_full = LinearMapData::from_action(
      ambient, target, {ambient->stage_count() - 1},
      [&](const ComplexMatrix& m) { return (u.adjoint() * m) * u; });
  LinearMapData phi;
  phi.source = sub;
  phi.target = target;
  phi.matrix = ComplexMatrix(target->basis_size(), sub->basis_size());
  for (std::size_t j = 0; j < sub->basis_size(); ++j) {
    const auto c =
        target->coords_of(psi_full.apply_matrix(sub->basis_element(j)));
    for (std::size_t i = 0; i < c.size(); ++i) phi.matrix(i, j) = c[i];
  }
  phi.stage_correspondence = {sub->stage_count() - 1};

  const LucpExtension ext =
      extend_lucp(phi, ambient->stage_count() - 1, ambient, rng);
  REQUIRE(ext.status == ExtendStatus::found);
  // extension agrees on the subsystem
  for (std::size_t j = 0; j < sub->basis_size(); ++j)
    CHECK(ext.map.apply_matrix(sub->basis_element(j))
              .approx_equal(psi_full.apply_matrix(sub->basis_element(j)),
                            1e-6));
  // and is CP by the Choi test
  const ChoiVerdict v = choi_equivalence(ext.map, rng);
  CHECK(v.cp);
  CHECK(v.agreement.passed());
}

TEST_CASE("extend_lucp full subsystem returns the map itself", "[maps]") {
  RandomStream rng(54);
  const auto ambient = catalog::full_matrix_system(2);
  const auto target = catalog::matrix_system(2);
  std::vector<ComplexMatrix> kraus{rng.matrix_gaussian(2, 2) *
                                   Complex(0.5, 0.0)};
  LinearMapData phi = LinearMapData::from_action(
      ambient, target, {ambient->stage_count() - 1},
      [&](const ComplexMatrix& m) {
        return (kraus[0].adjoint() * m) * kraus[0];
      });
  const LucpExtension ext =
      extend_lucp(phi, ambient->stage_count() - 1, ambient, rng);
  REQUIRE(ext.status == ExtendStatus::found);
  for (std::size_t j = 0; j < ambient->basis_size(); ++j)
    CHECK(ext.map.apply_matrix(ambient->basis_element(j))
              .approx_equal(phi.apply_matrix(ambient->basis_element(j)), 1e-6));
}

TEST_CASE("extend_lucp rejects maps that are not CP on the subsystem",
          "[maps]") {
  RandomStream rng(55);
  const auto ambient = catalog::full_matrix_system(2);
  const auto sub = catalog::diagonal_system(2);
  const auto target = catalog::matrix_system(2);
  // sends the PSD diagonal E11 to a negative matrix
  const auto bad = LinearMapData::from_action(
      sub, target, {sub->stage_count() - 1}, [](const ComplexMatrix& m) {
        return ComplexMatrix::diag({-m(0, 0).real(), m(1, 1).real()});
      });
  CHECK_THROWS_AS(extend_lucp(bad, ambient->stage_count() - 1, ambient, rng),
                  NotCPOnSubsystem);
}

TEST_CASE("choi data requires full matrix systems", "[maps]") {
  const auto tri = catalog::tridiagonal_system(3);
  const auto id = LinearMapData::identity(tri);
  CHECK_THROWS_AS(make_choi(id), SourceNotFull);
}

TEST_CASE("full matrix sources upgrade verification to the exact Choi test",
          "[maps]") {
  RandomStream rng(60);
  const auto m2 = catalog::matrix_system(2);
  const Report good =
      verify_local_cp_with_choi(LinearMapData::identity(m2), 2, 8, rng);
  INFO(good.render());
  CHECK(good.title == "local-cp(exact)");
  CHECK(good.passed());

  const Report bad = verify_local_cp_with_choi(transpose_map(m2), 2, 8, rng);
  INFO(bad.render());
  CHECK(bad.title == "local-cp(exact)");
  CHECK_FALSE(bad.passed());

  // partial-stage sources keep the sampling route
  const auto tri = catalog::tridiagonal_system(3);
  const Report sampled =
      verify_local_cp_with_choi(LinearMapData::identity(tri), 2, 8, rng);
  CHECK(sampled.title == "local-cp");
  CHECK(sampled.passed());
}

TEST_CASE("round trip of the map/functional correspondence", "[maps]") {
  RandomStream rng(56);
  const auto src = catalog::matrix_system(3);
  const auto dst = catalog::matrix_system(2);
  std::vector<ComplexMatrix> kraus{rng.matrix_gaussian(3, 2),
                                   rng.matrix_gaussian(3, 2)};
  const auto phi = kraus_map(src, dst, kraus);
  const ChoiData data = make_choi(phi);
  // phi_s(a)_(i,j) = n·s_phi(a (x) E_ij) reconstructs phi exactly at the
  // coordinate level
  const std::size_t d = 3, n = 2;
  for (std::size_t bi = 0; bi < src->basis_size(); ++bi) {
    const ComplexMatrix& a = src->basis_element(bi);
    ComplexMatrix rec(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        ComplexMatrix lvl(n * d, n * d);  // a (x) E_ij at level n
        lvl.place(i * d, j * d, a);
        rec(i, j) = hs_inner(data.pairing, lvl);  // = n · s_phi(a (x) E_ij) / n
      }
    CHECK(rec.approx_equal(phi.apply_matrix(a), 1e-9));
  }
}

TEST_CASE("pairing matrix evaluates the associated functional", "[maps]") {
  RandomStream rng(565);
  const auto src = catalog::matrix_system(3);
  const auto dst = catalog::matrix_system(2);
  const auto phi = kraus_map(src, dst, {rng.matrix_gaussian(3, 2)});
  const ChoiData data = make_choi(phi);
  const std::size_t d = 3, n = 2;
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix a = rng.hermitian(n * d);
    // definition: s_phi([a_ij]) = (1/n) sum_ij <e_i, phi(a_ij) e_j>
    Complex direct = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const ComplexMatrix img = phi.apply_matrix(a.block(i * d, j * d, d, d));
        direct += img(i, j);
      }
    direct /= double(n);
    CHECK(std::abs(direct - Complex(s_phi_value(data, a), 0.0)) <= 1e-9);
  }
}

TEST_CASE("embed_operator_space of span{E12} under the identity", "[maps]") {
  RandomStream rng(57);
  const auto ambient = catalog::full_matrix_system(2);
  OperatorSubspace v{ambient, {ComplexMatrix::unit(2, 0, 1)}};
  const ComplexMatrix phi = ComplexMatrix::identity(1);
  const EmbedResult res = embed_operator_space(v, v, phi, 2, rng);
  INFO(res.cp_report.render());
  CHECK(res.cp_report.passed());
  CHECK(res.lcb_estimate <= 1.0 + 1e-9);

  // corner embedding is a complete isometry: seminorm of [[0,v],[0,0]]
  // equals the operator norm of v
  const CornerConeOracle oracle(res.sv_system);
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<Complex> c{rng.complex_gaussian()};
    const LevelElement emb = corner_embed(res.sv_system, v, c);
    const double sn =
        order_unit_seminorm(emb, res.sv_system->stage_count() - 1, oracle);
    CHECK(sn == Catch::Approx(std::abs(c[0])).margin(1e-7));
  }
}

TEST_CASE("embed_operator_space rejects an expansive map", "[maps]") {
  RandomStream rng(58);
  const auto ambient = catalog::full_matrix_system(2);
  OperatorSubspace v{ambient, {ComplexMatrix::unit(2, 0, 1)}};
  ComplexMatrix two = ComplexMatrix::identity(1);
  two(0, 0) = 2.0;
  CHECK_THROWS_AS(embed_operator_space(v, v, two, 2, rng), NotContractive);
}

TEST_CASE("entrywise block maps transfer positivity to the composite",
          "[maps]") {
  RandomStream rng(59);
  // Phi~(s_ij) = (c_ij V† s_ij V) is CP when (c_ij) is PSD; the composite
  // Phi(s) = Phi~(delta(s)) = c (x) V†sV must then be CP as well.
  const auto base = catalog::matrix_system(2);
  const auto lifted = level_lift_system(base, 2);
  const ComplexMatrix c = rng.psd(2);
  const ComplexMatrix vmat = rng.unitary(2);

  const auto phi_composite = LinearMapData::from_action(
      base, lifted, {0}, [&](const ComplexMatrix& s) {
        return kron(c, (vmat.adjoint() * s) * vmat);
      });
  const Report rep = verify_local_cp(phi_composite, 2, 16, rng);
  INFO(rep.render());
  CHECK(rep.passed());

  // (P (x) Q)-conjugation transfer: phi(x) = P phi1(x) P stays CP
  const ComplexMatrix pmat = rng.psd(2);
  const auto phi1 = LinearMapData::identity(base);
  const auto conj = LinearMapData::from_action(
      base, base, {0},
      [&](const ComplexMatrix& x) { return (pmat * x) * pmat; });
  const auto composed = compose(conj, phi1);
  const Report rep2 = verify_local_cp(composed, 2, 16, rng);
  INFO(rep2.render());
  CHECK(rep2.passed());
}
