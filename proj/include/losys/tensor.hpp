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

#include "losys/lomax.hpp"
#include "losys/maps.hpp"

namespace losys {

/// One leg of a tensor product: the carrier system together with the cone
/// structure the tensor construction should respect.  `corner_exact` marks
/// factors whose cones are exactly the concrete corner cones.
struct TensorFactor {
  SystemPtr system;
  OraclePtr cones;
  bool corner_exact{false};

  static TensorFactor concrete(SystemPtr sys) {
    TensorFactor f;
    f.cones = corner_cones(sys);
    f.system = std::move(sys);
    f.corner_exact = true;
    return f;
  }

  static TensorFactor structured(SystemPtr sys, OraclePtr oracle) {
    TensorFactor f;
    f.system = std::move(sys);
    f.cones = std::move(oracle);
    return f;
  }
};

enum class TensorStructure { lmin, lmax, custom };

inline const char* to_string(TensorStructure s) {
  switch (s) {
    case TensorStructure::lmin: return "lmin";
    case TensorStructure::lmax: return "lmax";
    default: return "custom";
  }
}

namespace detail {

/// Kronecker carrier of V (x) W: basis {b_p (x) c_q}, stages P_a (x) Q_b over
/// the product poset.
inline SystemPtr tensor_carrier(const SystemPtr& v, const SystemPtr& w) {
  const std::size_t dv = v->ambient_dim();
  const std::size_t dw = w->ambient_dim();
  std::vector<ComplexMatrix> basis;
  basis.reserve(v->basis_size() * w->basis_size());
  for (std::size_t p = 0; p < v->basis_size(); ++p)
    for (std::size_t q = 0; q < w->basis_size(); ++q)
      basis.push_back(kron(v->basis_element(p), w->basis_element(q)));

  const std::size_t nv = v->stage_count();
  const std::size_t nw = w->stage_count();
  std::vector<Projection> stages;
  stages.reserve(nv * nw);
  for (std::size_t a = 0; a < nv; ++a)
    for (std::size_t b = 0; b < nw; ++b) {
      const Projection& pa = v->filtration().stage(a);
      const Projection& qb = w->filtration().stage(b);
      if (pa.coordinate() && qb.coordinate()) {
        std::vector<std::size_t> idx;
        idx.reserve(pa.rank() * qb.rank());
        for (std::size_t i : pa.coords())
          for (std::size_t j : qb.coords()) idx.push_back(i * dw + j);
        stages.push_back(Projection::onto_coords(dv * dw, idx));
      } else {
        stages.push_back(Projection::from_matrix(kron(pa.matrix(), qb.matrix())));
      }
    }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < nv; ++a)
    for (std::size_t b = 0; b < nw; ++b)
      for (std::size_t a2 = 0; a2 < nv; ++a2)
        for (std::size_t b2 = 0; b2 < nw; ++b2)
          if (v->filtration().poset().leq(a, a2) &&
              w->filtration().poset().leq(b, b2) && (a != a2 || b != b2))
            pairs.emplace_back(a * nw + b, a2 * nw + b2);
  return std::make_shared<LocalSystem>(
      std::move(basis),
      Filtration(dv * dw, std::move(stages),
                 StagePoset::from_pairs(nv * nw, pairs)),
      std::vector<std::string>{}, v->tolerances());
}

/// Alternating maximization/minimization of <l (x) xi (x) eta, K ...> over
/// unit triples; K indexed as M_n(M_rv (x) M_rw).
struct TripleExtreme {
  double value{0.0};
  std::vector<Complex> lambda, xi, eta;
};

inline TripleExtreme triple_seesaw(const ComplexMatrix& k, std::size_t n,
                                   std::size_t rv, std::size_t rw,
                                   RandomStream& rng, std::size_t restarts,
                                   std::size_t iters, bool maximize) {
  TripleExtreme best;
  best.value = maximize ? -1e300 : 1e300;
  if (n == 0 || rv == 0 || rw == 0) {
    best.value = 0.0;
    return best;
  }
  const double sign = maximize ? -1.0 : 1.0;
  auto entry = [&](std::size_t p, std::size_t a, std::size_t s, std::size_t q,
                   std::size_t b, std::size_t t) {
    return k(p * rv * rw + a * rw + s, q * rv * rw + b * rw + t);
  };
  for (std::size_t restart = 0; restart < restarts; ++restart) {
    std::vector<Complex> lam = restart == 0
                                   ? std::vector<Complex>(n, Complex(1.0 / std::sqrt(double(n)), 0.0))
                                   : rng.unit_vector(n);
    std::vector<Complex> xi = restart == 0
                                  ? std::vector<Complex>(rv, Complex(1.0 / std::sqrt(double(rv)), 0.0))
                                  : rng.unit_vector(rv);
    std::vector<Complex> eta(rw, Complex(1.0 / std::sqrt(double(rw)), 0.0));
    double value = 0.0;
    for (std::size_t it = 0; it < iters; ++it) {
      // eta step
      ComplexMatrix me(rw, rw);
      for (std::size_t s = 0; s < rw; ++s)
        for (std::size_t t = 0; t < rw; ++t) {
          Complex acc = 0.0;
          for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < n; ++q)
              for (std::size_t a = 0; a < rv; ++a)
                for (std::size_t b = 0; b < rv; ++b)
                  acc += std::conj(lam[p]) * lam[q] * std::conj(xi[a]) * xi[b] *
                         entry(p, a, s, q, b, t);
          me(s, t) = acc;
        }
      EigResult ee = eig_hermitian((me * Complex(sign, 0.0)).hermitized());
      for (std::size_t i = 0; i < rw; ++i) eta[i] = ee.vectors(i, rw - 1);
      // xi step
      ComplexMatrix mx(rv, rv);
      for (std::size_t a = 0; a < rv; ++a)
        for (std::size_t b = 0; b < rv; ++b) {
          Complex acc = 0.0;
          for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < n; ++q)
              for (std::size_t s = 0; s < rw; ++s)
                for (std::size_t t = 0; t < rw; ++t)
                  acc += std::conj(lam[p]) * lam[q] * std::conj(eta[s]) *
                         eta[t] * entry(p, a, s, q, b, t);
          mx(a, b) = acc;
        }
      EigResult ex = eig_hermitian((mx * Complex(sign, 0.0)).hermitized());
      for (std::size_t i = 0; i < rv; ++i) xi[i] = ex.vectors(i, rv - 1);
      // lambda step
      ComplexMatrix ml(n, n);
      for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q) {
          Complex acc = 0.0;
          for (std::size_t a = 0; a < rv; ++a)
            for (std::size_t b = 0; b < rv; ++b)
              for (std::size_t s = 0; s < rw; ++s)
                for (std::size_t t = 0; t < rw; ++t)
                  acc += std::conj(xi[a]) * xi[b] * std::conj(eta[s]) * eta[t] *
                         entry(p, a, s, q, b, t);
          ml(p, q) = acc;
        }
      EigResult el = eig_hermitian((ml * Complex(sign, 0.0)).hermitized());
      const double new_value = sign * el.values.back();
      for (std::size_t i = 0; i < n; ++i) lam[i] = el.vectors(i, n - 1);
      if (it > 2 &&
          std::abs(new_value - value) < 1e-13 * (1.0 + std::abs(value))) {
        value = new_value;
        break;
      }
      value = new_value;
    }
    const bool better = maximize ? value > best.value : value < best.value;
    if (better) {
      best.value = value;
      best.lambda = lam;
      best.xi = xi;
      best.eta = eta;
    }
  }
  return best;
}

}  // namespace detail

/// The tensor product carrier of two local systems with a chosen matricial
/// cone structure over the product stage poset.
class TensorSystem {
 public:
  TensorSystem(TensorFactor left, TensorFactor right, TensorStructure structure,
               std::uint64_t seed, bool archimedeanized = true,
               OraclePtr custom = nullptr);

  // the structure oracles hold a pointer back to this object
  TensorSystem(const TensorSystem&) = delete;
  TensorSystem& operator=(const TensorSystem&) = delete;

  const TensorFactor& left() const { return left_; }
  const TensorFactor& right() const { return right_; }
  const SystemPtr& space() const { return carrier_; }
  TensorStructure structure() const { return structure_; }
  const OraclePtr& cones() const { return cones_; }

  std::size_t stage_pair_index(std::size_t alpha, std::size_t beta) const {
    return alpha * right_.system->stage_count() + beta;
  }
  std::pair<std::size_t, std::size_t> stage_pair(std::size_t flat) const {
    const std::size_t nw = right_.system->stage_count();
    return {flat / nw, flat % nw};
  }

  LevelElement unit(std::size_t level) const {
    return LevelElement::unit(carrier_, level);
  }

  /// v (x) w for level-1 legs, as a level-1 element of the carrier.
  LevelElement elementary(const LevelElement& v, const LevelElement& w) const {
    if (v.level() != 1 || w.level() != 1)
      throw DimensionMismatch("elementary tensor wants level-1 legs");
    const std::size_t kv = left_.system->basis_size();
    const std::size_t kw = right_.system->basis_size();
    std::vector<Complex> c(kv * kw, Complex(0.0, 0.0));
    for (std::size_t p = 0; p < kv; ++p)
      for (std::size_t q = 0; q < kw; ++q)
        c[p * kw + q] = v.coord(0, 0)[p] * w.coord(0, 0)[q];
    return LevelElement(carrier_, 1, {std::move(c)});
  }

  /// x (x) y for x in M_n(V), y in M_m(W): a level-(n·m) carrier element.
  LevelElement kron_element(const LevelElement& x, const LevelElement& y) const {
    const std::size_t n = x.level();
    const std::size_t m = y.level();
    const std::size_t kv = left_.system->basis_size();
    const std::size_t kw = right_.system->basis_size();
    const std::size_t big = n * m;
    std::vector<std::vector<Complex>> coords(
        big * big, std::vector<Complex>(kv * kw, Complex(0.0, 0.0)));
    for (std::size_t i1 = 0; i1 < n; ++i1)
      for (std::size_t j1 = 0; j1 < n; ++j1)
        for (std::size_t i2 = 0; i2 < m; ++i2)
          for (std::size_t j2 = 0; j2 < m; ++j2) {
            auto& dst = coords[(i1 * m + i2) * big + (j1 * m + j2)];
            const auto& cx = x.coord(i1, j1);
            const auto& cy = y.coord(i2, j2);
            for (std::size_t p = 0; p < kv; ++p) {
              if (cx[p] == Complex(0.0, 0.0)) continue;
              for (std::size_t q = 0; q < kw; ++q)
                dst[p * kw + q] = cx[p] * cy[q];
            }
          }
    return LevelElement(carrier_, big, std::move(coords));
  }

  ConeVerdict member(const LevelElement& x, std::size_t alpha,
                     std::size_t beta) const {
    return cones_->membership(x, stage_pair_index(alpha, beta));
  }

 private:
  TensorFactor left_, right_;
  SystemPtr carrier_;
  TensorStructure structure_;
  OraclePtr cones_;
};

/// Verifies a tensor decomposition certificate: every term is a PSD scalar
/// against a product of verified factor-cone members.
inline bool verify_tensor_decomposition(const TensorSystem& t,
                                        const LevelElement& x, std::size_t alpha,
                                        std::size_t beta,
                                        const Decomposition& dec) {
  const Tolerances& tol = t.space()->tolerances();
  const std::size_t n = x.level();
  const std::size_t dd = t.space()->ambient_dim();
  ComplexMatrix sum(n * dd, n * dd);
  for (const auto& term : dec.terms) {
    if (term.scalar.rows() != n || term.factors.size() != 2) return false;
    if (!psd_verdict(term.scalar.hermitized(), tol).yes) return false;
    if (t.left().cones->contains(term.factors[0], alpha) != Membership::member)
      return false;
    if (t.right().cones->contains(term.factors[1], beta) != Membership::member)
      return false;
    sum += kron(term.scalar, kron(term.factors[0].realization(),
                                  term.factors[1].realization()));
  }
  const double scale = 1.0 + x.realization().frobenius_norm();
  return (sum - x.realization()).frobenius_norm() <= tol.eps_decide * scale;
}

/// Minimal tensor structure: for concrete corner factors the cone is exactly
/// corner positivity of the Kronecker realization (the concrete-embedding
/// characterization).  For structured factors only the sampled-LUCP falsifier
/// is available and Member degrades to Unresolved.
class LminTensorOracle final : public ConeOracle {
 public:
  LminTensorOracle(const TensorSystem* owner, std::uint64_t seed)
      : owner_(owner), seed_(seed) {}

  ConeVerdict membership(const LevelElement& x, std::size_t stage) const override {
    const Tolerances& tol = owner_->space()->tolerances();
    if (owner_->left().corner_exact && owner_->right().corner_exact)
      return cone_member_concrete(x, stage, tol);

    // fallback: sampled local UCP pairs as falsifiers
    RandomStream rng(seed_ ^ (0xa0761d6478bd642fULL * (stage + 1)));
    Diagnostics diag;
    diag.note = "sampled-lucp fallback, cap=4";
    const auto [alpha, beta] = owner_->stage_pair(stage);
    for (std::size_t trial = 0; trial < 64; ++trial) {
      const auto phi = sample_state_map(*owner_->left().system, alpha, rng);
      const auto psi = sample_state_map(*owner_->right().system, beta, rng);
      const ComplexMatrix img = apply_pair(x, phi, psi);
      const PsdResult psd = psd_verdict(img.hermitized(), tol);
      if (!psd.yes && psd.min_eigenvalue < -tol.eps_decide) {
        WitnessFunctional w;
        w.matrix = pullback(x, phi, psi, psd.witness);
        w.value = psd.min_eigenvalue;
        w.threshold = tol.eps_decide;
        return ConeVerdict::no(std::move(w), std::move(diag));
      }
    }
    return ConeVerdict::undecided(std::move(diag));
  }

  Membership contains(const LevelElement& x, std::size_t stage) const override {
    if (owner_->left().corner_exact && owner_->right().corner_exact)
      return cone_contains_concrete_fast(x, stage,
                                         owner_->space()->tolerances())
                 ? Membership::member
                 : Membership::not_member;
    return membership(x, stage).status;
  }

  const SystemPtr& space() const override { return owner_->space(); }
  std::string name() const override { return "lmin"; }

 private:
  /// Rank <= 4 local UCP map x -> U†(corner compression)U restricted to a
  /// random corner isometry.
  struct SampledMap {
    ComplexMatrix iso;  // d x k, columns inside the stage corner
  };

  static SampledMap sample_state_map(const LocalSystem& sys, std::size_t stage,
                                     RandomStream& rng) {
    const Projection& p = sys.filtration().stage(stage);
    const std::size_t r = std::max<std::size_t>(p.rank(), 1);
    const std::size_t k = 1 + rng.index(std::min<std::size_t>(4, r));
    // orthonormal columns inside the corner range
    const ComplexMatrix u = rng.unitary(r);
    const ComplexMatrix iso =
        p.rank() == 0 ? ComplexMatrix(sys.ambient_dim(), k)
                      : p.range_isometry() * u.block(0, 0, r, k);
    return SampledMap{iso};
  }

  ComplexMatrix apply_pair(const LevelElement& x, const SampledMap& phi,
                           const SampledMap& psi) const {
    const std::size_t n = x.level();
    const ComplexMatrix lift =
        kron(ComplexMatrix::identity(n), kron(phi.iso, psi.iso));
    return (lift.adjoint() * x.realization()) * lift;
  }

  ComplexMatrix pullback(const LevelElement& x, const SampledMap& phi,
                         const SampledMap& psi,
                         const std::vector<Complex>& witness) const {
    const std::size_t n = x.level();
    const ComplexMatrix lift =
        kron(ComplexMatrix::identity(n), kron(phi.iso, psi.iso));
    return (lift * matvec_outer(witness)) * lift.adjoint();
  }

  const TensorSystem* owner_;
  std::uint64_t seed_;
};

/// Maximal tensor structure: cones generated by PSD scalars against products
/// of level-1 factor-cone members (the collapsed presentation of
/// gamma (P (x) Q) gamma* over the factors' declared structures), then
/// Archimedeanized.  Member carries a product decomposition, NotMember a
/// corner-supported witness functional.
class LmaxTensorOracle final : public ConeOracle {
 public:
  LmaxTensorOracle(const TensorSystem* owner, std::uint64_t seed,
                   LomaxOptions opts = {})
      : owner_(owner), seed_(seed), opts_(opts) {}

  ConeVerdict membership(const LevelElement& x, std::size_t stage) const override {
    const Tolerances& tol = owner_->space()->tolerances();
    if (!x.hermitian(tol.eps_herm))
      throw NonHermitianElement("lmax membership of a non-hermitian element");
    const auto [alpha, beta] = owner_->stage_pair(stage);
    Diagnostics diag;
    RandomStream rng(seed_ ^ (0xe7037ed1a0b428dbULL * (stage + 1)));

    if (auto dec = one_term_split(x, alpha, beta)) {
      if (verify_tensor_decomposition(*owner_, x, alpha, beta, *dec)) {
        diag.note = "one-term split";
        return ConeVerdict::yes_with(std::move(*dec), std::move(diag));
      }
    }

    if (owner_->left().system->diagonal_span() &&
        owner_->right().system->diagonal_span() &&
        owner_->left().corner_exact && owner_->right().corner_exact)
      return diagonal_route(x, alpha, beta, std::move(diag));

    // the cone sits inside the corner cone: a negative corner short-circuits
    // straight to the witness search
    const PsdResult corner_psd = psd_verdict(x.corner(stage).hermitized(), tol);
    if (corner_psd.yes) {
      if (auto dec = als_search(x, alpha, beta, rng)) {
        if (verify_tensor_decomposition(*owner_, x, alpha, beta, *dec)) {
          diag.add("terms", double(dec->terms.size()));
          diag.add("residual", dec->residual);
          diag.note = "alternating least squares";
          return ConeVerdict::yes_with(std::move(*dec), std::move(diag));
        }
      }
    }

    if (auto w = witness_search(x, stage, alpha, beta, rng, diag)) {
      if (verify_witness(x, alpha, beta, *w, rng))
        return ConeVerdict::no(std::move(*w), std::move(diag));
    }

    diag.note = "no decomposition and no verified witness within budget";
    return ConeVerdict::undecided(std::move(diag));
  }

  std::vector<LevelElement> generators(std::size_t /*stage*/,
                                       std::size_t level) const override {
    return {LevelElement::unit(owner_->space(), level)};
  }

  const SystemPtr& space() const override { return owner_->space(); }
  std::string name() const override { return "lmax"; }

  /// Witness floor over sampled product generators; public so reports can
  /// re-verify certificates.
  bool verify_witness(const LevelElement& x, std::size_t alpha,
                      std::size_t beta, const WitnessFunctional& w,
                      RandomStream& rng) const {
    const Tolerances& tol = owner_->space()->tolerances();
    const LevelElement shifted =
        w.unit_shift == 0.0
            ? x
            : x + LevelElement::unit(x.system(), x.level()) *
                      Complex(w.unit_shift, 0.0);
    if (!(pairing(w.matrix, shifted.realization()) < -w.threshold)) return false;
    const std::size_t n = x.level();
    for (std::size_t s = 0; s < opts_.witness_samples; ++s) {
      const ComplexMatrix a = rng.density(n);
      auto v = sample_member(*owner_->left().cones, alpha, 1, rng);
      auto u = sample_member(*owner_->right().cones, beta, 1, rng);
      if (!v || !u) continue;
      ComplexMatrix g =
          kron(a, kron(v->realization(), u->realization()));
      const double nrm = g.frobenius_norm();
      if (nrm < 1e-12) continue;
      if (pairing(w.matrix, g) / nrm <
          -std::max(w.generator_floor, tol.eps_psd))
        return false;
    }
    return true;
  }

 private:
  std::optional<Decomposition> one_term_split(const LevelElement& x,
                                              std::size_t alpha,
                                              std::size_t beta) const {
    const std::size_t n = x.level();
    const std::size_t dv = owner_->left().system->ambient_dim();
    const std::size_t dw = owner_->right().system->ambient_dim();
    const ComplexMatrix& rx = x.realization();
    const Complex t = rx.trace();
    if (std::abs(t) < 1e-12) return std::nullopt;

    // partial traces onto each leg
    ComplexMatrix a(n, n);
    ComplexMatrix v(dv, dv);
    ComplexMatrix w(dw, dw);
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q)
        a(p, q) = rx.block(p * dv * dw, q * dv * dw, dv * dw, dv * dw).trace();
    for (std::size_t p = 0; p < n; ++p) {
      const ComplexMatrix blk = rx.block(p * dv * dw, p * dv * dw, dv * dw, dv * dw);
      for (std::size_t i = 0; i < dv; ++i)
        for (std::size_t j = 0; j < dv; ++j) {
          Complex acc = 0.0;
          for (std::size_t s = 0; s < dw; ++s) acc += blk(i * dw + s, j * dw + s);
          v(i, j) += acc;
        }
      for (std::size_t s = 0; s < dw; ++s)
        for (std::size_t u = 0; u < dw; ++u) {
          Complex acc = 0.0;
          for (std::size_t i = 0; i < dv; ++i) acc += blk(i * dw + s, i * dw + u);
          w(s, u) += acc;
        }
    }
    // a/t = A/tr(A), v/t = V/tr(V); the w-leg keeps the remaining scale so
    // that (a/t) (x) (v/t) (x) w = A (x) V (x) W
    a = a * (Complex(1.0, 0.0) / t);
    v = v * (Complex(1.0, 0.0) / t);
    const ComplexMatrix cand = kron(a, kron(v, w));
    if ((cand - rx).frobenius_norm() > 1e-9 * (1.0 + rx.frobenius_norm()))
      return std::nullopt;

    auto vc = owner_->left().system->try_coords(v);
    auto wc = owner_->right().system->try_coords(w);
    if (!vc || !wc) return std::nullopt;
    LevelElement vf(owner_->left().system, 1, {*vc});
    LevelElement wf(owner_->right().system, 1, {*wc});
    ComplexMatrix scalar = a;
    // orient signs so scalar is PSD and both legs are members
    auto orient = [&](LevelElement& leg, const OraclePtr& oracle,
                      std::size_t st) {
      if (oracle->contains(leg, st) == Membership::member) return true;
      leg = leg * Complex(-1.0, 0.0);
      scalar = -scalar;
      return oracle->contains(leg, st) == Membership::member;
    };
    if (!orient(vf, owner_->left().cones, alpha)) return std::nullopt;
    if (!orient(wf, owner_->right().cones, beta)) return std::nullopt;
    const Tolerances& tol = owner_->space()->tolerances();
    if (!psd_verdict(scalar.hermitized(), tol).yes) return std::nullopt;
    Decomposition dec;
    dec.terms.push_back({scalar.hermitized(), {std::move(vf), std::move(wf)}});
    return dec;
  }

  ConeVerdict diagonal_route(const LevelElement& x, std::size_t alpha,
                             std::size_t beta, Diagnostics diag) const {
    const Tolerances& tol = owner_->space()->tolerances();
    const std::size_t n = x.level();
    const std::size_t dv = owner_->left().system->ambient_dim();
    const std::size_t dw = owner_->right().system->ambient_dim();
    const std::size_t dd = dv * dw;
    const auto& vcoords = owner_->left().system->filtration().stage(alpha).coords();
    const auto& wcoords = owner_->right().system->filtration().stage(beta).coords();
    const ComplexMatrix& rx = x.realization();

    Decomposition dec;
    for (std::size_t tv = 0; tv < dv; ++tv)
      for (std::size_t tw = 0; tw < dw; ++tw) {
        const std::size_t slot = tv * dw + tw;
        ComplexMatrix s(n, n);
        for (std::size_t p = 0; p < n; ++p)
          for (std::size_t q = 0; q < n; ++q)
            s(p, q) = rx(p * dd + slot, q * dd + slot);
        const bool v_in = std::find(vcoords.begin(), vcoords.end(), tv) != vcoords.end();
        const bool w_in = std::find(wcoords.begin(), wcoords.end(), tw) != wcoords.end();
        auto vc = owner_->left().system->try_coords(ComplexMatrix::unit(dv, tv, tv));
        auto wc = owner_->right().system->try_coords(ComplexMatrix::unit(dw, tw, tw));
        if (!vc || !wc) continue;
        LevelElement ev(owner_->left().system, 1, {*vc});
        LevelElement ew(owner_->right().system, 1, {*wc});
        if (v_in && w_in) {
          const PsdResult psd = psd_verdict(s.hermitized(), tol);
          if (!psd.yes) {
            WitnessFunctional w;
            ComplexMatrix slot_unit(dd, dd);
            slot_unit(slot, slot) = 1.0;
            w.matrix = kron(matvec_outer(psd.witness), slot_unit);
            w.value = psd.min_eigenvalue;
            w.threshold = tol.eps_psd;
            diag.note = "diagonal slot (" + std::to_string(tv) + "," +
                        std::to_string(tw) + ")";
            return ConeVerdict::no(std::move(w), std::move(diag));
          }
          dec.terms.push_back({s.hermitized(), {ev, ew}});
        } else {
          // a leg outside its corner: split the slot across signs
          const EigResult es = eig_hermitian(s.hermitized());
          ComplexMatrix pos(n, n), neg(n, n);
          for (std::size_t k2 = 0; k2 < es.values.size(); ++k2) {
            ComplexMatrix rank1(n, n);
            for (std::size_t i = 0; i < n; ++i)
              for (std::size_t j = 0; j < n; ++j)
                rank1(i, j) = es.vectors(i, k2) * std::conj(es.vectors(j, k2));
            if (es.values[k2] >= 0.0)
              pos.add_scaled(Complex(es.values[k2], 0.0), rank1);
            else
              neg.add_scaled(Complex(-es.values[k2], 0.0), rank1);
          }
          if (pos.max_abs() > 0.0) dec.terms.push_back({pos, {ev, ew}});
          if (neg.max_abs() > 0.0) {
            if (v_in)
              dec.terms.push_back({neg, {ev, ew * Complex(-1.0, 0.0)}});
            else
              dec.terms.push_back({neg, {ev * Complex(-1.0, 0.0), ew}});
          }
        }
      }
    // residual
    ComplexMatrix sum(n * dd, n * dd);
    for (const auto& term : dec.terms)
      sum += kron(term.scalar,
                  kron(term.factors[0].realization(), term.factors[1].realization()));
    dec.residual = (sum - rx).frobenius_norm();
    diag.note = "diagonal slots";
    return ConeVerdict::yes_with(std::move(dec), std::move(diag));
  }

  std::optional<Decomposition> als_search(const LevelElement& x,
                                          std::size_t alpha, std::size_t beta,
                                          RandomStream& rng) const {
    const Tolerances& tol = owner_->space()->tolerances();
    const std::size_t n = x.level();
    const std::size_t dv = owner_->left().system->ambient_dim();
    const std::size_t dw = owner_->right().system->ambient_dim();
    const std::size_t dd = dv * dw;
    const double scale = 1.0 + x.realization().frobenius_norm();
    const SystemPtr& lsys = owner_->left().system;
    const SystemPtr& rsys = owner_->right().system;

    std::optional<Decomposition> best;
    double best_residual = 1e300;
    double prev_level_best = 1e300;

    for (std::size_t terms = 1; terms <= opts_.max_terms; terms *= 2) {
      for (std::size_t restart = 0; restart < opts_.restarts; ++restart) {
        std::vector<ComplexMatrix> a(terms);
        std::vector<LevelElement> v, w;
        ComplexMatrix greedy_resid = x.realization();
        for (std::size_t i = 0; i < terms; ++i) {
          bool seeded = false;
          if (restart == 0) {
            const auto top = detail::triple_seesaw(greedy_resid, n, dv, dw,
                                                   rng, 2, 25,
                                                   /*maximize=*/true);
            if (top.value > 1e-10 && !top.lambda.empty()) {
              auto vc = lsys->try_coords(matvec_outer(top.xi));
              auto wc = rsys->try_coords(matvec_outer(top.eta));
              if (vc && wc) {
                a[i] = matvec_outer(top.lambda) * Complex(top.value, 0.0);
                v.push_back(LevelElement(lsys, 1, {*vc}));
                w.push_back(LevelElement(rsys, 1, {*wc}));
                greedy_resid =
                    greedy_resid -
                    kron(a[i], kron(v.back().realization(),
                                    w.back().realization()));
                seeded = true;
              }
            }
          }
          if (!seeded) {
            a[i] = rng.psd(n);
            v.push_back(sample_corner_member(lsys, alpha, 1, rng));
            w.push_back(sample_corner_member(rsys, beta, 1, rng));
          }
        }
        double residual = 1e300;
        for (std::size_t it = 0; it < opts_.als_iters; ++it) {
          std::vector<ComplexMatrix> prod(terms);
          for (std::size_t i = 0; i < terms; ++i)
            prod[i] = kron(v[i].realization(), w[i].realization());

          // a-step
          ComplexMatrix gram(terms, terms);
          for (std::size_t i = 0; i < terms; ++i)
            for (std::size_t j = 0; j < terms; ++j)
              gram(i, j) = hs_inner(prod[i], prod[j]);
          double gscale = 1.0;
          for (std::size_t i = 0; i < terms; ++i)
            gscale = std::max(gscale, gram(i, i).real());
          for (std::size_t i = 0; i < terms; ++i) gram(i, i) += 1e-9 * gscale;
          for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < n; ++q) {
              std::vector<Complex> rhs(terms);
              const ComplexMatrix xb = x.realization().block(p * dd, q * dd, dd, dd);
              for (std::size_t i = 0; i < terms; ++i)
                rhs[i] = hs_inner(prod[i], xb);
              const auto sol = detail::solve_hpd(gram, rhs);
              for (std::size_t i = 0; i < terms; ++i) a[i](p, q) = sol[i];
            }
          for (std::size_t i = 0; i < terms; ++i) a[i] = detail::clip_psd(a[i]);

          // leg steps
          for (std::size_t i = 0; i < terms; ++i) {
            ComplexMatrix resid = x.realization();
            for (std::size_t j = 0; j < terms; ++j) {
              if (j == i) continue;
              resid = resid - kron(a[j], prod[j]);
            }
            // v-leg with (a_i, w_i) fixed
            const ComplexMatrix aw = kron(a[i], w[i].realization());
            const double awn2 = std::pow(aw.frobenius_norm(), 2);
            if (awn2 > 1e-14) {
              ComplexMatrix vopt(dv, dv);
              for (std::size_t p = 0; p < n; ++p)
                for (std::size_t q = 0; q < n; ++q)
                  for (std::size_t s = 0; s < dw; ++s)
                    for (std::size_t t2 = 0; t2 < dw; ++t2) {
                      const Complex wgt =
                          std::conj(a[i](p, q) * w[i].realization()(s, t2));
                      if (wgt == Complex(0.0, 0.0)) continue;
                      for (std::size_t i2 = 0; i2 < dv; ++i2)
                        for (std::size_t j2 = 0; j2 < dv; ++j2)
                          vopt(i2, j2) += wgt / awn2 *
                                          resid(p * dd + i2 * dw + s,
                                                q * dd + j2 * dw + t2);
                    }
              if (auto coords = lsys->try_coords(vopt, 1e6)) {
                LevelElement cand(lsys, 1, {*coords});
                cand = (cand + cand.adjoint()) * Complex(0.5, 0.0);
                const EigResult ec = eig_hermitian(cand.corner(alpha).hermitized());
                const double lam_min = ec.values.empty() ? 0.0 : ec.values.back();
                if (lam_min < 0.0)
                  cand = cand + LevelElement::unit(lsys, 1) *
                                    Complex(-lam_min + 1e-12, 0.0);
                v[i] = std::move(cand);
              }
            }
            // w-leg with (a_i, v_i) fixed
            const ComplexMatrix av = kron(a[i], v[i].realization());
            const double avn2 = std::pow(av.frobenius_norm(), 2);
            if (avn2 > 1e-14) {
              ComplexMatrix wopt(dw, dw);
              for (std::size_t p = 0; p < n; ++p)
                for (std::size_t q = 0; q < n; ++q)
                  for (std::size_t i2 = 0; i2 < dv; ++i2)
                    for (std::size_t j2 = 0; j2 < dv; ++j2) {
                      const Complex wgt =
                          std::conj(a[i](p, q) * v[i].realization()(i2, j2));
                      if (wgt == Complex(0.0, 0.0)) continue;
                      for (std::size_t s = 0; s < dw; ++s)
                        for (std::size_t t2 = 0; t2 < dw; ++t2)
                          wopt(s, t2) += wgt / avn2 *
                                         resid(p * dd + i2 * dw + s,
                                               q * dd + j2 * dw + t2);
                    }
              if (auto coords = rsys->try_coords(wopt, 1e6)) {
                LevelElement cand(rsys, 1, {*coords});
                cand = (cand + cand.adjoint()) * Complex(0.5, 0.0);
                const EigResult ec = eig_hermitian(cand.corner(beta).hermitized());
                const double lam_min = ec.values.empty() ? 0.0 : ec.values.back();
                if (lam_min < 0.0)
                  cand = cand + LevelElement::unit(rsys, 1) *
                                    Complex(-lam_min + 1e-12, 0.0);
                w[i] = std::move(cand);
              }
            }
          }

          ComplexMatrix sum(n * dd, n * dd);
          for (std::size_t i = 0; i < terms; ++i)
            sum += kron(a[i], kron(v[i].realization(), w[i].realization()));
          const double r = (sum - x.realization()).frobenius_norm();
          if (std::abs(residual - r) < 1e-12 * scale) {
            residual = r;
            break;
          }
          residual = r;
          if (residual <= 0.2 * tol.eps_decide * scale) break;
        }
        if (residual < best_residual) {
          Decomposition dec;
          for (std::size_t i = 0; i < terms; ++i) {
            if (a[i].frobenius_norm() < 1e-12) continue;
            dec.terms.push_back({a[i], {v[i], w[i]}});
          }
          dec.residual = residual;
          best_residual = residual;
          best = std::move(dec);
        }
        if (best_residual <= 0.2 * tol.eps_decide * scale) return best;
      }
      // growing the term count only pays while the residual keeps dropping
      if (best_residual > 0.9 * prev_level_best) break;
      prev_level_best = best_residual;
    }
    if (best && best_residual <= tol.eps_decide * scale) return best;
    return std::nullopt;
  }

  std::optional<WitnessFunctional> witness_search(const LevelElement& x,
                                                  std::size_t stage,
                                                  std::size_t alpha,
                                                  std::size_t beta,
                                                  RandomStream& rng,
                                                  Diagnostics& diag) const {
    const Tolerances& tol = owner_->space()->tolerances();
    const std::size_t n = x.level();
    const Projection& proj = owner_->space()->filtration().stage(stage);
    const std::size_t rv =
        owner_->left().system->filtration().stage(alpha).rank();
    const std::size_t rw =
        owner_->right().system->filtration().stage(beta).rank();
    if (rv == 0 || rw == 0) return std::nullopt;
    const ComplexMatrix corner = x.corner(stage).hermitized();
    const double scale = 1.0 + x.realization().frobenius_norm();

    const PsdResult psd = psd_verdict(corner, tol);
    if (!psd.yes && psd.min_eigenvalue < -tol.eps_decide) {
      WitnessFunctional w;
      w.matrix = detail::embed_corner(matvec_outer(psd.witness), proj, n);
      w.value = psd.min_eigenvalue;
      w.threshold = tol.eps_decide;
      w.generator_floor = tol.eps_psd;
      diag.note = "corner eigenvector witness";
      return w;
    }

    // a negative partially transposed corner (w-slot) refutes: product
    // generators keep a positive corner under that transpose
    {
      const ComplexMatrix pt =
          detail::partial_transpose_inner(corner, n * rv, rw);
      const PsdResult ppt = psd_verdict(pt.hermitized(), tol);
      if (!ppt.yes && ppt.min_eigenvalue < -tol.eps_decide) {
        WitnessFunctional w;
        w.matrix = detail::embed_corner(
            detail::partial_transpose_inner(matvec_outer(ppt.witness), n * rv,
                                            rw),
            proj, n);
        w.value = ppt.min_eigenvalue;
        w.threshold = tol.eps_decide;
        w.generator_floor = tol.eps_psd;
        diag.note = "partial-transpose witness";
        return w;
      }
    }

    const auto mx = detail::triple_seesaw(corner, n, rv, rw, rng,
                                          opts_.restarts, 40, /*maximize=*/true);
    diag.add("max_product_value", mx.value);
    ComplexMatrix wc = ComplexMatrix::identity(n * rv * rw) * Complex(mx.value, 0.0);
    wc = wc - corner;
    const double value = pairing(wc, corner);
    if (value < -tol.eps_decide * scale) {
      const auto mn = detail::triple_seesaw(wc, n, rv, rw, rng, opts_.restarts,
                                            40, /*maximize=*/false);
      if (mn.value >= -tol.eps_psd * (1.0 + wc.frobenius_norm())) {
        WitnessFunctional w;
        w.matrix = detail::embed_corner(wc, proj, n);
        w.value = value;
        w.threshold = tol.eps_decide;
        w.generator_floor = tol.eps_psd * (1.0 + wc.frobenius_norm());
        diag.note = "reduction witness";
        return w;
      }
    }
    return std::nullopt;
  }

  const TensorSystem* owner_;
  std::uint64_t seed_;
  LomaxOptions opts_;
};

inline TensorSystem::TensorSystem(TensorFactor left, TensorFactor right,
                                  TensorStructure structure, std::uint64_t seed,
                                  bool archimedeanized, OraclePtr custom)
    : left_(std::move(left)), right_(std::move(right)), structure_(structure) {
  carrier_ = detail::tensor_carrier(left_.system, right_.system);
  switch (structure_) {
    case TensorStructure::lmin:
      cones_ = std::make_shared<LminTensorOracle>(this, seed);
      break;
    case TensorStructure::lmax: {
      OraclePtr raw = std::make_shared<LmaxTensorOracle>(this, seed);
      cones_ = archimedeanized
                   ? std::make_shared<ArchimedeanizedOracle>(raw, true)
                   : raw;
      break;
    }
    case TensorStructure::custom:
      if (!custom) throw InvalidSystem("custom tensor structure needs an oracle");
      cones_ = std::move(custom);
      break;
  }
}

}  // namespace losys
