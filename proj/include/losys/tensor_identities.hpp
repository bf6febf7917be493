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

#include "losys/tensor_checks.hpp"

namespace losys {

namespace detail {

/// State on a corner-backed A.L.O.U. space at a stage: f(v) = <rho, corner(v)>
/// with a random density on the corner.
struct CornerState {
  ComplexMatrix rho;  // on the corner coordinates
  const Projection* proj;

  double operator()(const LevelElement& v) const {
    return hs_inner(rho, proj->compress(v.realization())).real();
  }
  Complex value(const ComplexMatrix& ambient_matrix) const {
    return hs_inner(rho, proj->compress(ambient_matrix));
  }
};

inline CornerState sample_state(const SystemPtr& sys, std::size_t stage,
                                RandomStream& rng) {
  const Projection& p = sys->filtration().stage(stage);
  return CornerState{rng.density(std::max<std::size_t>(p.rank(), 1)), &p};
}

}  // namespace detail

/// Compares the two constructions of the minimal structure on a tensor of
/// A.L.O.U. spaces: the lmin cone over the LOMIN factors (state-pair matrices
/// must be PSD) versus LOMIN of the tensor A.L.O.U. (every lambda contraction
/// must pass every product state).  The two reduce to the same quadratic data;
/// the report counts any verdict disagreement on shared samples.
inline Report lomin_tensor_identity(const AlouSpace& v, const AlouSpace& w,
                                    std::size_t n_max, std::size_t samples,
                                    std::uint64_t seed, RandomStream& rng) {
  Report rep;
  rep.title = "lomin-tensor-identity";
  if (!v.corner_backed() || !w.corner_backed())
    throw MixedRepresentations("state sampling needs corner-backed factors");
  const TensorSystem t(TensorFactor::concrete(v.space()),
                       TensorFactor::concrete(w.space()),
                       TensorStructure::lmin, seed);
  const Tolerances& tol = t.space()->tolerances();
  const std::size_t states_per_side = 24;

  std::size_t disagree = 0, member_both = 0, reject_both = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    const std::size_t alpha = rng.index(v.space()->stage_count());
    const std::size_t beta = rng.index(w.space()->stage_count());
    const std::size_t n = 1 + rng.index(n_max);
    LevelElement u = (s % 3 == 0)
                         ? t.unit(n)
                         : sample_hermitian(t.space(), n, rng);

    // shared state panel
    std::vector<detail::CornerState> fs, gs;
    for (std::size_t i = 0; i < states_per_side; ++i) {
      fs.push_back(detail::sample_state(v.space(), alpha, rng));
      gs.push_back(detail::sample_state(w.space(), beta, rng));
    }

    const std::size_t kv = v.space()->basis_size();
    const std::size_t kw = w.space()->basis_size();
    auto state_matrix = [&](const detail::CornerState& f,
                            const detail::CornerState& g) {
      // M_{ij} = (f (x) g)(u_ij) through the coordinates
      ComplexMatrix m(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          Complex acc = 0.0;
          const auto& c = u.coord(i, j);
          for (std::size_t p = 0; p < kv; ++p)
            for (std::size_t q = 0; q < kw; ++q) {
              const Complex z = c[p * kw + q];
              if (z == Complex(0.0, 0.0)) continue;
              acc += z * f.value(v.space()->basis_element(p)) *
                     g.value(w.space()->basis_element(q));
            }
          m(i, j) = acc;
        }
      return m;
    };

    bool d_side = true;   // lmin of LOMIN factors: state matrices PSD
    bool q_side = true;   // LOMIN of the tensor ALOU: contractions pass states
    for (const auto& f : fs) {
      for (const auto& g : gs) {
        const ComplexMatrix m = state_matrix(f, g).hermitized();
        const EigResult e = eig_hermitian(m, tol);
        const double lam_min = e.values.empty() ? 0.0 : e.values.back();
        if (lam_min < -tol.eps_decide) d_side = false;
        // Q side evaluates the lambda contraction at the extreme lambda and
        // a few random ones; the extreme lambda is the bottom eigenvector
        std::vector<Complex> lam(n);
        for (std::size_t i = 0; i < n; ++i) lam[i] = e.vectors(i, n - 1);
        double worst = dot(lam, matvec(m, lam)).real();
        for (std::size_t r2 = 0; r2 < 4; ++r2) {
          const auto rand_lam = rng.unit_vector(n);
          worst = std::min(worst, dot(rand_lam, matvec(m, rand_lam)).real());
        }
        if (worst < -tol.eps_decide) q_side = false;
      }
    }
    if (d_side != q_side) ++disagree;
    if (d_side && q_side) ++member_both;
    if (!d_side && !q_side) ++reject_both;
  }
  rep.check(disagree == 0, "verdict-agreement",
            "disagreements=" + std::to_string(disagree));
  rep.info("counts", "member_both=" + std::to_string(member_both) +
                         " reject_both=" + std::to_string(reject_both) +
                         " samples=" + std::to_string(samples));
  return rep;
}

/// Compares the two constructions of the maximal structure: the lmax cone
/// over LOMAX factors versus LOMAX of the tensor A.L.O.U. with the product
/// base cone.  Certified verdicts transport between the two presentations
/// term by term; Unresolved pairs are reported, never counted as
/// disagreement.
inline Report lomax_tensor_identity(const AlouSpace& v, const AlouSpace& w,
                                    std::size_t n_max, std::size_t samples,
                                    std::uint64_t seed, RandomStream& rng) {
  Report rep;
  rep.title = "lomax-tensor-identity";
  const TensorSystem t(
      TensorFactor{v.space(), v.level1(), v.corner_backed()},
      TensorFactor{w.space(), w.level1(), w.corner_backed()},
      TensorStructure::lmax, seed, /*archimedeanized=*/false);
  const Tolerances& tol = t.space()->tolerances();

  std::size_t disagree = 0, unresolved = 0, member_pairs = 0, reject_pairs = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    const std::size_t alpha = rng.index(v.space()->stage_count());
    const std::size_t beta = rng.index(w.space()->stage_count());
    const std::size_t n = 1 + rng.index(n_max);
    const std::size_t flat = t.stage_pair_index(alpha, beta);

    LevelElement u = t.unit(n);
    Decomposition built_cert;
    bool has_built_cert = false;
    if (s % 3 == 1) {
      auto [xx, dx] = detail::sample_tensor_lomax_form(t, alpha, beta, n, 2, rng);
      u = xx;
      built_cert = std::move(dx);
      has_built_cert = true;
    } else if (s % 3 == 2) {
      u = sample_hermitian(t.space(), n, rng);
    }

    // side A: structured tensor cone; constructed samples carry their own
    // membership certificates, the rest go through the search oracle
    ConeVerdict va;
    if (has_built_cert &&
        verify_tensor_decomposition(t, u, alpha, beta, built_cert))
      va = ConeVerdict::yes_with(built_cert);
    else
      va = t.cones()->membership(u, flat);
    if (va.unresolved()) {
      ++unresolved;
      continue;
    }
    if (va.member()) {
      // transport each term c (x) v (x) w into the LOMAX-of-product form
      // c (x) (v (x) w): the product leg must be a base-cone member of the
      // tensor ALOU, certified by its own one-term product split
      const auto& dec = std::get<Decomposition>(va.certificate);
      bool transported = true;
      const std::size_t dd = t.space()->ambient_dim();
      ComplexMatrix sum(n * dd, n * dd);
      for (const auto& term : dec.terms) {
        if (term.factors.size() != 2 ||
            v.level1()->contains(term.factors[0], alpha) != Membership::member ||
            w.level1()->contains(term.factors[1], beta) != Membership::member) {
          transported = false;
          break;
        }
        sum += kron(term.scalar, kron(term.factors[0].realization(),
                                      term.factors[1].realization()));
      }
      if (transported &&
          (sum - u.realization()).frobenius_norm() <=
              tol.eps_decide * (1.0 + u.realization().frobenius_norm()))
        ++member_pairs;
      else
        ++disagree;
    } else {
      // transport the witness: its floor over elementary products bounds it
      // over the product base cone of the other presentation
      const auto* wit = std::get_if<WitnessFunctional>(&va.certificate);
      bool valid = wit != nullptr;
      if (valid) {
        for (std::size_t probe = 0; probe < 64 && valid; ++probe) {
          const ComplexMatrix a = rng.density(n);
          auto pv = sample_member(*v.level1(), alpha, 1, rng);
          auto pw = sample_member(*w.level1(), beta, 1, rng);
          if (!pv || !pw) continue;
          ComplexMatrix g =
              kron(a, kron(pv->realization(), pw->realization()));
          const double nrm = g.frobenius_norm();
          if (nrm < 1e-12) continue;
          if (pairing(wit->matrix, g) / nrm < -tol.eps_psd * 10.0) valid = false;
        }
      }
      if (valid)
        ++reject_pairs;
      else
        ++disagree;
    }
  }
  rep.check(disagree == 0, "verdict-agreement",
            "disagreements=" + std::to_string(disagree));
  const double frac =
      samples == 0 ? 0.0 : double(unresolved) / double(samples);
  rep.check(frac <= 0.2, "unresolved-fraction",
            "unresolved=" + std::to_string(unresolved) + "/" +
                std::to_string(samples));
  rep.info("counts", "member_pairs=" + std::to_string(member_pairs) +
                         " reject_pairs=" + std::to_string(reject_pairs));
  return rep;
}

}  // namespace losys
