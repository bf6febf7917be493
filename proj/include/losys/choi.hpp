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

#include "losys/maps.hpp"

namespace losys {

/// Choi data of a map phi: M_d -> M_n between full matrix systems:
/// the Choi matrix (blocks phi(E_kl)) and the pairing matrix of the
/// associated functional s_phi on M_n(M_d),
///   s_phi([a_ij]) = (1/n) sum_ij phi(a_ij)_(i,j) = (1/n) <pairing, [a_ij]>.
struct ChoiData {
  ComplexMatrix choi;     // d·n x d·n, blocks (k,l) = phi(E_kl)
  ComplexMatrix pairing;  // n·d x n·d, blocks (i,j) = adjoint map at E_ij
  std::size_t d{0};
  std::size_t n{0};
};

inline ChoiData make_choi(const LinearMapData& map) {
  const std::size_t d = map.source->ambient_dim();
  const std::size_t n = map.target->ambient_dim();
  if (!map.source->full_span())
    throw SourceNotFull("Choi data needs a full matrix source");
  if (!map.target->full_span())
    throw SourceNotFull("Choi data needs a full matrix target");

  ChoiData out;
  out.d = d;
  out.n = n;
  out.choi = ComplexMatrix(d * n, d * n);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t l = 0; l < d; ++l)
      out.choi.place(k * n, l * n,
                     map.apply_matrix(ComplexMatrix::unit(d, k, l)));

  // pairing blocks F_ij satisfy <e_i, phi(a) e_j> = tr(F_ij† a)
  out.pairing = ComplexMatrix(n * d, n * d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      ComplexMatrix f(d, d);
      for (std::size_t k = 0; k < d; ++k)
        for (std::size_t l = 0; l < d; ++l) {
          const ComplexMatrix img = out.choi.block(k * n, l * n, n, n);
          // tr(F_ij† E_kl) = conj(F_ij(k,l)) must equal <e_i, phi(E_kl) e_j>
          f(k, l) = std::conj(img(i, j));
        }
      out.pairing.place(i * d, j * d, f);
    }
  return out;
}

/// Value of s_phi on a level-n element of the source system.
inline double s_phi_value(const ChoiData& choi, const ComplexMatrix& realization) {
  return hs_inner(choi.pairing, realization).real() /
         static_cast<double>(choi.n);
}

struct ChoiVerdict {
  bool cp{false};
  double min_eigenvalue{0.0};
  std::vector<Complex> witness;  // bottom eigenvector of the Choi matrix
  Report agreement;              // three-way consistency record
};

/// Decides complete positivity of phi: M_d -> M_n through the Choi matrix and
/// cross-examines the two companion characterizations: n-positivity (sampled,
/// plus the directed violation element built from the pairing spectrum) and
/// positivity of s_phi.  The three answers must agree.
inline ChoiVerdict choi_equivalence(const LinearMapData& map, RandomStream& rng,
                                    std::size_t samples = 24) {
  const ChoiData data = make_choi(map);
  const Tolerances& tol = map.source->tolerances();
  const double scale = 1.0 + data.choi.frobenius_norm();
  if (data.choi.hermiticity_defect() > 1e-8 * scale)
    throw NonHermitianInput("map is not adjoint-preserving");

  ChoiVerdict out;
  Tolerances scaled = tol;
  scaled.eps_psd = tol.eps_psd * scale;
  const PsdResult psd = psd_verdict(data.choi.hermitized(), scaled);
  out.cp = psd.yes;
  out.min_eigenvalue = psd.min_eigenvalue;
  out.witness = psd.witness;
  out.agreement.title = "choi-equivalence";
  out.agreement.info("choi.min_eigenvalue", num(psd.min_eigenvalue));

  const std::size_t n = data.n;
  const std::size_t d = data.d;

  // (2) n-positivity with a directed candidate from the pairing spectrum
  bool npos_violation = false;
  double npos_worst = 0.0;
  auto test_npos = [&](const ComplexMatrix& a) {
    ComplexMatrix img(n * n, n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        img.place(i * n, j * n, map.apply_matrix(a.block(i * d, j * d, d, d)));
    const PsdResult r = psd_verdict(img.hermitized(), scaled);
    npos_worst = std::min(npos_worst, r.min_eigenvalue);
    if (!r.yes) npos_violation = true;
  };
  for (std::size_t s = 0; s < samples; ++s) test_npos(rng.psd(n * d, 1.0));
  {
    const EigResult pe = eig_hermitian(data.pairing.hermitized(), tol);
    std::vector<Complex> y(n * d);
    for (std::size_t i = 0; i < n * d; ++i) y[i] = pe.vectors(i, n * d - 1);
    test_npos(matvec_outer(y));
  }
  out.agreement.info("npositivity.worst", num(npos_worst));

  // (3) positivity of s_phi, sampled plus directed
  bool s_violation = false;
  double s_worst = 0.0;
  auto test_s = [&](const ComplexMatrix& a) {
    const double v = s_phi_value(data, a);
    s_worst = std::min(s_worst, v);
    if (v < -tol.eps_psd * scale) s_violation = true;
  };
  for (std::size_t s = 0; s < samples; ++s) test_s(rng.psd(n * d, 1.0));
  {
    const EigResult pe = eig_hermitian(data.pairing.hermitized(), tol);
    std::vector<Complex> y(n * d);
    for (std::size_t i = 0; i < n * d; ++i) y[i] = pe.vectors(i, n * d - 1);
    test_s(matvec_outer(y));
  }
  out.agreement.info("s_phi.worst", num(s_worst));

  out.agreement.check(out.cp == !npos_violation, "choi-vs-npositivity");
  out.agreement.check(out.cp == !s_violation, "choi-vs-s_phi");
  return out;
}

/// Local-CP verification that upgrades to the exact Choi decision when the
/// source is a full matrix system queried at its top stage (and the target is
/// a full matrix system); otherwise falls back to the sampling route.
inline Report verify_local_cp_with_choi(const LinearMapData& map,
                                        std::size_t n_max, std::size_t samples,
                                        RandomStream& rng) {
  map.validate();
  if (map.source->full_span() && map.target->full_span()) {
    bool top_only = true;
    for (std::size_t b : map.stage_correspondence)
      top_only = top_only && (b + 1 == map.source->stage_count());
    if (top_only) {
      try {
        Report rep;
        rep.title = "local-cp(exact)";
        const ChoiVerdict v = choi_equivalence(map, rng);
        rep.check(v.cp, "choi-exact",
                  "min_eigenvalue=" + num(v.min_eigenvalue));
        rep.merge(v.agreement, "agreement");
        return rep;
      } catch (const NonHermitianInput&) {
        // not adjoint-preserving: the sampled route below still applies
      }
    }
  }
  return verify_local_cp(map, n_max, samples, rng);
}

}  // namespace losys
