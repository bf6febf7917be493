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

#include "losys/catalog.hpp"
#include "losys/choi.hpp"
#include "losys/projlim_tensor.hpp"
#include "losys/universal.hpp"

namespace losys {

/// Reproducible run parameters; recorded verbatim in every report header.
struct RunConfig {
  std::uint64_t seed{20260808};
  Tolerances tol{};
  std::size_t n_max{3};
  std::size_t samples{200};
  bool rigorous{false};
};

namespace suites {

/// Open-cone probe used by the archimedeanization checks: strict corner
/// positivity plus zero.
class OpenCornerOracle final : public ConeOracle {
 public:
  explicit OpenCornerOracle(SystemPtr system) : system_(std::move(system)) {}

  ConeVerdict membership(const LevelElement& x, std::size_t stage) const override {
    if (x.realization().frobenius_norm() < 1e-14) return ConeVerdict::yes();
    const EigResult e = eig_hermitian(x.corner(stage).hermitized());
    const double lam_min = e.values.empty() ? 1.0 : e.values.back();
    if (lam_min > 0.0) return ConeVerdict::yes();
    WitnessVector w;
    w.vector.resize(e.values.size());
    for (std::size_t i = 0; i < e.values.size(); ++i)
      w.vector[i] = e.vectors(i, e.values.size() - 1);
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

inline std::set<std::pair<std::size_t, std::size_t>> path_graph(std::size_t n) {
  std::set<std::pair<std::size_t, std::size_t>> g;
  for (std::size_t i = 0; i < n; ++i) g.insert({i, i});
  for (std::size_t i = 0; i + 1 < n; ++i) {
    g.insert({i, i + 1});
    g.insert({i + 1, i});
  }
  return g;
}

/// Criterion: order-unit seminorm by oracle bisection against the corner
/// operator norm on the two flagship systems, all stages, levels 1..3.
inline Report seminorm_oracle(const RunConfig& cfg) {
  Report rep;
  rep.title = "seminorm-oracle";
  RandomStream rng(cfg.seed);
  const std::pair<const char*, SystemPtr> systems[] = {
      {"truncated_minf(8)", catalog::full_matrix_system(8)},
      {"tridiagonal(8)", catalog::tridiagonal_system(8)}};
  double worst = 0.0;
  std::size_t checked = 0;
  for (const auto& [name, sys] : systems) {
    const CornerConeOracle oracle(sys);
    double sys_worst = 0.0;
    const std::size_t count = cfg.samples / 2;
    for (std::size_t s = 0; s < count; ++s) {
      const std::size_t level = 1 + (s % std::min<std::size_t>(cfg.n_max, 3));
      const LevelElement x = sample_hermitian(sys, level, rng);
      for (std::size_t stage = 0; stage < sys->stage_count(); ++stage) {
        const double by_oracle = order_unit_seminorm(x, stage, oracle);
        const double direct = corner_operator_norm(x, stage);
        const double dev = std::abs(by_oracle - direct) / (1.0 + direct);
        sys_worst = std::max(sys_worst, dev);
        ++checked;
        if (dev > 1e-7) {
          rep.fail("deviation",
                   std::string(name) + " level=" + std::to_string(level) +
                       " stage=" + std::to_string(stage) + " dev=" + num(dev));
          return rep;
        }
      }
    }
    rep.info(std::string("max-deviation.") + name, num(sys_worst));
    worst = std::max(worst, sys_worst);
  }
  rep.pass("max-deviation", num(worst) + " over " + std::to_string(checked) +
                                " (element, stage) pairs, bound 1e-7");
  return rep;
}

/// Criterion: archimedeanization is invisible on closed corner cones, closes
/// the open cone at the boundary, and is idempotent.
inline Report archimedean_closure(const RunConfig& cfg) {
  Report rep;
  rep.title = "archimedean-closure";
  RandomStream rng(cfg.seed ^ 0x11);

  const auto sys = catalog::full_matrix_system(3);
  const auto base = corner_cones(sys);
  const auto arch = archimedeanize(base);
  std::size_t changed = 0;
  for (std::size_t s = 0; s < cfg.samples; ++s) {
    const std::size_t level = 1 + rng.index(2);
    const std::size_t stage = rng.index(sys->stage_count());
    const LevelElement x = sample_hermitian(sys, level, rng);
    if (arch->membership(x, stage).status != base->membership(x, stage).status)
      ++changed;
  }
  rep.check(changed == 0, "closed-cones-invariant",
            "changed=" + std::to_string(changed) + "/" +
                std::to_string(cfg.samples));

  const auto open = std::make_shared<OpenCornerOracle>(sys);
  const auto closed = archimedeanize(open);
  const auto boundary =
      LevelElement::from_matrix(sys, 1, ComplexMatrix::diag({1.0, 0.0, 0.0}));
  rep.check(open->membership(boundary, 2).not_member() &&
                closed->membership(boundary, 2).member(),
            "open-cone-boundary-flip");
  const auto minus_e = LevelElement::unit(sys, 1) * Complex(-1.0, 0.0);
  rep.check(closed->membership(minus_e, 2).not_member(), "minus-unit-stays-out");

  const auto twice = archimedeanize(closed);
  std::size_t idem_bad = 0;
  for (std::size_t s = 0; s < cfg.samples; ++s) {
    const std::size_t stage = rng.index(sys->stage_count());
    const LevelElement x = sample_hermitian(sys, 1, rng);
    if (closed->membership(x, stage).status != twice->membership(x, stage).status)
      ++idem_bad;
  }
  rep.check(idem_bad == 0, "idempotent",
            "changed=" + std::to_string(idem_bad) + "/" +
                std::to_string(cfg.samples));
  return rep;
}

/// Criterion: cone sandwich with re-verified certificates plus the two
/// strictness witnesses at n = 2 over M_2.
inline Report sandwich(const RunConfig& cfg) {
  Report rep;
  rep.title = "sandwich";
  RandomStream rng(cfg.seed ^ 0x22);

  const std::vector<SystemPtr> systems{catalog::full_matrix_system(3),
                                       catalog::tridiagonal_system(4),
                                       catalog::graph_system(path_graph(3), 3)};
  std::size_t max_vs_min = 0, max_vs_concrete = 0, cert_bad = 0;
  std::size_t max_members = 0, unresolved = 0, total = 0;
  for (const auto& sys : systems) {
    const AlouSpace alou = AlouSpace::from_concrete(sys);
    LominOptions lopts;
    lopts.rigorous = cfg.rigorous;
    const LominOracle lomin(alou, cfg.seed, lopts);
    const auto lomax = lomax_cones(alou, cfg.seed);
    const std::size_t per_system = std::min<std::size_t>(cfg.samples, 100);
    for (std::size_t s = 0; s < per_system; ++s) {
      const std::size_t level = 1 + rng.index(2);
      const std::size_t stage = rng.index(sys->stage_count());
      LevelElement x = sample_hermitian(sys, level, rng);
      if (s % 3 == 0) {  // mix in certified members
        auto [xx, dd] = detail::sample_lomax_form(sys, stage, level, 2, rng);
        x = xx;
      }
      ++total;
      const ConeVerdict vmax = lomax->membership(x, stage);
      const ConeVerdict vcon = cone_member_concrete(x, stage);
      const ConeVerdict vmin = lomin.membership(x, stage);
      if (vmax.unresolved() || vmin.unresolved()) ++unresolved;
      if (vmax.member()) {
        ++max_members;
        if (vmin.not_member()) ++max_vs_min;
        if (vcon.not_member()) ++max_vs_concrete;
        if (const auto* dec = std::get_if<Decomposition>(&vmax.certificate)) {
          if (!verify_decomposition(x, stage, *dec, *alou.level1())) ++cert_bad;
        }
      }
      if (vmax.not_member()) {
        if (const auto* w = std::get_if<WitnessFunctional>(&vmax.certificate))
          if (!verify_witness_functional(x, stage, *w, *alou.level1(), rng, 64))
            ++cert_bad;
      }
      if (vcon.not_member()) {
        const auto* w = std::get_if<WitnessVector>(&vcon.certificate);
        if (!w || !verify_corner_witness(x, stage, *w)) ++cert_bad;
      }
    }
  }
  rep.check(max_vs_min == 0, "no-lomax-member-lomin-reject",
            "violations=" + std::to_string(max_vs_min));
  rep.check(max_vs_concrete == 0, "no-lomax-member-concrete-reject",
            "violations=" + std::to_string(max_vs_concrete));
  rep.check(cert_bad == 0, "certificates-reverify",
            "failures=" + std::to_string(cert_bad));
  rep.info("counts", "total=" + std::to_string(total) +
                         " lomax_members=" + std::to_string(max_members) +
                         " unresolved=" + std::to_string(unresolved));

  // strictness at n = 2 over M_2
  const auto m2 = catalog::matrix_system(2);
  const AlouSpace alou2 = AlouSpace::from_concrete(m2);
  LominOptions rigorous_opts;
  rigorous_opts.rigorous = true;
  const LominOracle lomin2(alou2, cfg.seed, rigorous_opts);
  std::vector<std::vector<Complex>> swap_coords(4);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      swap_coords[i * 2 + j] = m2->coords_of(ComplexMatrix::unit(2, j, i));
  const LevelElement swap_el(m2, 2, std::move(swap_coords));

  const ConeVerdict swap_v = lomin2.membership(swap_el, 0);
  double grid_min = 1.0;
  for (const auto& [k, v2] : swap_v.diagnostics.stats)
    if (k == "grid_min") grid_min = v2;
  const PsdResult swap_psd = psd_verdict(swap_el.realization(), cfg.tol);
  rep.check(swap_v.member() && grid_min >= -1e-9, "swap-block-positive",
            "grid_min=" + num(grid_min));
  rep.check(!swap_psd.yes && std::abs(swap_psd.min_eigenvalue + 1.0) <= 1e-8,
            "swap-not-psd", "min_eig=" + num(swap_psd.min_eigenvalue));

  std::vector<std::vector<Complex>> bell_coords(4);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      auto c = m2->coords_of(ComplexMatrix::unit(2, i, j));
      for (auto& z : c) z *= 0.5;
      bell_coords[i * 2 + j] = std::move(c);
    }
  const LevelElement bell(m2, 2, std::move(bell_coords));
  const auto lomax2 = lomax_cones(alou2, cfg.seed);
  const ConeVerdict bell_v = lomax2->membership(bell, 0);
  const auto* bw = std::get_if<WitnessFunctional>(&bell_v.certificate);
  bool bell_ok = bell_v.not_member() && bw != nullptr &&
                 psd_verdict(bell.realization(), cfg.tol).yes;
  double bell_floor = 0.0, bell_value = 0.0;
  if (bell_ok) {
    bell_value = pairing(bw->matrix, bell.realization());
    for (std::size_t t = 0; t < 10000; ++t) {
      const ComplexMatrix g = kron(rng.psd(2), rng.psd(2));
      bell_floor = std::min(bell_floor, pairing(bw->matrix, g));
    }
    bell_ok = bell_floor >= -1e-9 && std::abs(bell_value + 0.5) <= 1e-9;
  }
  rep.check(bell_ok, "bell-rejected-from-lomax",
            "value=" + num(bell_value) + " floor=" + num(bell_floor) +
                " over 10000 product pairs");
  return rep;
}

/// Criterion: the Choi test, the n-positivity sampler, and the associated
/// functional agree on every instance of a mixed CP / non-CP map panel.
inline Report choi_agreement(const RunConfig& cfg) {
  Report rep;
  rep.title = "choi";
  RandomStream rng(cfg.seed ^ 0x33);
  const std::size_t total = std::min<std::size_t>(cfg.samples, 100);
  std::size_t agreements = 0, done = 0;
  while (done < total) {
    const std::size_t d = 2 + rng.index(2);
    const std::size_t n = 2 + rng.index(2);
    const auto src = catalog::matrix_system(d);
    const auto dst = catalog::matrix_system(n);
    const bool make_bad = (done % 2) == 1;
    std::vector<std::size_t> corr{0};
    std::vector<ComplexMatrix> kraus;
    const std::size_t terms = 1 + rng.index(3);
    for (std::size_t t = 0; t < terms; ++t)
      kraus.push_back(rng.matrix_gaussian(d, n) * Complex(0.6, 0.0));
    LinearMapData phi = LinearMapData::from_action(
        src, dst, corr, [&](const ComplexMatrix& m) {
          ComplexMatrix out(n, n);
          for (const auto& a : kraus) out += (a.adjoint() * m) * a;
          return out;
        });
    if (make_bad) {
      const ComplexMatrix b = rng.matrix_gaussian(d, n);
      const auto bad_piece = LinearMapData::from_action(
          src, dst, corr, [&](const ComplexMatrix& m) {
            return (b.adjoint() * m.transpose()) * b;
          });
      phi.matrix = phi.matrix - bad_piece.matrix * Complex(1.2, 0.0);
    }
    const double margin =
        eig_hermitian(make_choi(phi).choi.hermitized()).values.back();
    if (make_bad ? margin > -1e-3 : margin < -1e-9) continue;
    const ChoiVerdict v = choi_equivalence(phi, rng);
    if (v.agreement.passed() && v.cp == !make_bad) ++agreements;
    ++done;
  }
  rep.check(agreements == total, "three-way-agreement",
            std::to_string(agreements) + "/" + std::to_string(total));
  return rep;
}

/// Criterion: the lcb norm of verified unital LUCP maps equals the norm of
/// the unit image within 1e-5.
inline Report cb_norm_identity(const RunConfig& cfg) {
  Report rep;
  rep.title = "cb-norm-identity";
  RandomStream rng(cfg.seed ^ 0x44);
  const std::size_t total = 50;
  double worst = 0.0;
  for (std::size_t t = 0; t < total; ++t) {
    const std::size_t d = 3 + rng.index(2);
    const std::size_t r = 2 + rng.index(d - 2 + 1);
    const auto src = catalog::full_matrix_system(d);
    const auto dst = catalog::matrix_system(r);
    const ComplexMatrix iso = rng.isometry(d, r);
    const ComplexMatrix u = rng.unitary(r);
    const auto phi = LinearMapData::from_action(
        src, dst, {src->stage_count() - 1}, [&](const ComplexMatrix& m) {
          const ComplexMatrix comp = (iso.adjoint() * m) * iso;
          return (u.adjoint() * comp) * u;
        });
    if (!phi.unital()) {
      rep.fail("unital", "constructed map is not unital");
      return rep;
    }
    const LcbResult lcb =
        lcb_norm(phi, src->stage_count() - 1, 0, cfg.n_max, 8, rng);
    const CornerConeOracle dst_oracle(dst);
    const double unit_norm =
        order_unit_seminorm(phi.apply(LevelElement::unit(src, 1)), 0, dst_oracle);
    worst = std::max(worst, std::abs(lcb.value - unit_norm));
  }
  rep.check(worst <= 1e-5, "lcb-equals-unit-image-norm",
            "max |lcb - ||phi(e)||| = " + num(worst) + " over " +
                std::to_string(total) + " maps");
  return rep;
}

/// Criterion: projective-limit round trip on the flagship systems.
inline Report projlim_roundtrip(const RunConfig& cfg) {
  Report rep;
  rep.title = "projlim-roundtrip";
  RandomStream rng(cfg.seed ^ 0x55);
  for (const auto& sys : {catalog::full_matrix_system(3),
                          catalog::graph_system(path_graph(3), 3)}) {
    const QuotientDecomposition qd = quotient_decomposition(sys);
    rep.merge(qd.system.validate(rng, 6), "system");
    const LimitSystem lim(qd.system);
    std::size_t agree = 0, compared = 0;
    const std::size_t total = std::min<std::size_t>(cfg.samples, 200);
    for (std::size_t s = 0; s < total; ++s) {
      const std::size_t level = 1 + rng.index(2);
      const LevelElement x = sample_hermitian(sys, level, rng);
      std::vector<std::vector<Complex>> coeffs(level * level);
      bool ok = true;
      for (std::size_t i = 0; i < level && ok; ++i)
        for (std::size_t j = 0; j < level && ok; ++j) {
          auto th = lim.thread_of(quotient_components(qd, sys, x, i, j));
          if (!th)
            ok = false;
          else
            coeffs[i * level + j] = *th;
        }
      if (!ok) continue;
      const std::size_t stage = rng.index(sys->stage_count());
      ++compared;
      if (lim.member(coeffs, level, stage).status ==
          cone_member_concrete(x, stage).status)
        ++agree;
    }
    rep.check(agree == compared && compared == total,
              "roundtrip-agreement",
              std::to_string(agree) + "/" + std::to_string(total));
  }
  return rep;
}

/// Criterion: minimal/maximal tensor identities on classical and M_2 factors.
inline Report lomin_lomax_identities(const RunConfig& cfg) {
  Report rep;
  rep.title = "lomin-lomax-identities";
  RandomStream rng(cfg.seed ^ 0x66);
  const std::size_t per = std::max<std::size_t>(cfg.samples / 4, 20);

  const AlouSpace cd2 = AlouSpace::from_concrete(catalog::diagonal_system(2));
  const AlouSpace cd3 = AlouSpace::from_concrete(catalog::diagonal_system(3));
  const AlouSpace qm2 = AlouSpace::from_concrete(catalog::matrix_system(2));

  rep.merge(lomin_tensor_identity(cd2, cd3, 2, per, cfg.seed, rng),
            "lomin.classical");
  rep.merge(lomin_tensor_identity(qm2, qm2, 2, per, cfg.seed, rng),
            "lomin.quantum");
  rep.merge(lomax_tensor_identity(cd2, cd3, 2, per, cfg.seed, rng),
            "lomax.classical");
  rep.merge(lomax_tensor_identity(qm2, qm2, 2, per, cfg.seed, rng),
            "lomax.quantum");
  return rep;
}

/// Criterion: tensor axioms and functoriality.
inline Report tensor_axioms(const RunConfig& cfg) {
  Report rep;
  rep.title = "tensor-axioms";
  RandomStream rng(cfg.seed ^ 0x77);
  const std::size_t samples = std::min<std::size_t>(cfg.samples / 4, 32);

  const TensorSystem lmin_pair(
      TensorFactor::concrete(catalog::full_matrix_system(2)),
      TensorFactor::concrete(catalog::tridiagonal_system(3)),
      TensorStructure::lmin, cfg.seed);
  rep.merge(validate_tensor_structure(lmin_pair, samples, rng), "lmin");

  const TensorSystem lmax_pair(
      TensorFactor::concrete(catalog::diagonal_system(2)),
      TensorFactor::concrete(catalog::diagonal_system(3)),
      TensorStructure::lmax, cfg.seed);
  rep.merge(validate_tensor_structure(lmax_pair, samples, rng), "lmax");

  const auto src = catalog::full_matrix_system(4);
  const auto dst = catalog::matrix_system(2);
  ComplexMatrix iso(4, 2);
  iso(0, 0) = 1.0;
  iso(1, 1) = 1.0;
  const auto comp = LinearMapData::from_action(
      src, dst, {src->stage_count() - 1},
      [&](const ComplexMatrix& m) { return (iso.adjoint() * m) * iso; });
  rep.merge(check_functoriality(TensorStructure::lmin, comp, comp, samples,
                                cfg.seed, rng),
            "functorial.lmin");
  rep.merge(check_functoriality(TensorStructure::lmax, comp, comp,
                                std::min<std::size_t>(samples, 10), cfg.seed,
                                rng),
            "functorial.lmax");

  rep.merge(check_lmin_exactness(catalog::tridiagonal_system(3),
                                 catalog::full_matrix_system(3),
                                 catalog::diagonal_system(2),
                                 catalog::full_matrix_system(2), samples,
                                 cfg.seed, rng),
            "lmin.exact");
  return rep;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{
      "sandwich",          "seminorm-oracle",  "choi",
      "lomin-lomax-identities", "projlim-roundtrip", "tensor-axioms"};
  return names;
}

inline Report run_suite(const std::string& name, const RunConfig& cfg) {
  if (name == "sandwich") return sandwich(cfg);
  if (name == "seminorm-oracle") return seminorm_oracle(cfg);
  if (name == "choi") return choi_agreement(cfg);
  if (name == "lomin-lomax-identities") return lomin_lomax_identities(cfg);
  if (name == "projlim-roundtrip") return projlim_roundtrip(cfg);
  if (name == "tensor-axioms") return tensor_axioms(cfg);
  throw ParseError("unknown suite: " + name);
}

}  // namespace suites
}  // namespace losys
