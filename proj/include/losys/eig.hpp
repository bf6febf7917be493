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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "losys/complex_matrix.hpp"
#include "losys/tolerances.hpp"

namespace losys {

struct EigResult {
  std::vector<double> values;  // descending
  ComplexMatrix vectors;       // unitary, columns match values
};

namespace detail {

inline double offdiag_sq(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) s += std::norm(a(i, j));
  return 2.0 * s;
}

}  // namespace detail

/// Hermitian eigendecomposition by cyclic Jacobi with complex rotations.
/// The sweep order is fixed, so identical inputs give identical outputs.
inline EigResult eig_hermitian(const ComplexMatrix& m,
                               const Tolerances& tol = Tolerances{}) {
  if (!m.square()) throw DimensionMismatch("eig_hermitian needs a square matrix");
  if (!m.is_hermitian(tol.eps_herm))
    throw NonHermitianInput("hermiticity defect above eps_herm");

  const std::size_t n = m.rows();
  ComplexMatrix a = m.hermitized();
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double scale = a.frobenius_norm();
  const double stop = std::max(1e-28, 1e-26 * scale * scale);
  const std::size_t max_sweeps = 64;

  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    if (detail::offdiag_sq(a) <= stop) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double r = std::abs(apq);
        if (r <= 1e-40) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // phase so the pivot becomes real, then a real Jacobi rotation;
        // U = diag(1, conj(phase)) * [[c, s], [-s, c]]
        const Complex phase = apq / r;
        const double tau = (aqq - app) / (2.0 * r);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex u10 = -s * std::conj(phase);
        const Complex u11 = c * std::conj(phase);
        for (std::size_t i = 0; i < n; ++i) {  // A <- A U on columns p, q
          const Complex aip = a(i, p);
          const Complex aiq = a(i, q);
          a(i, p) = c * aip + u10 * aiq;
          a(i, q) = s * aip + u11 * aiq;
        }
        for (std::size_t j = 0; j < n; ++j) {  // A <- U† A on rows p, q
          const Complex apj = a(p, j);
          const Complex aqj = a(q, j);
          a(p, j) = c * apj + std::conj(u10) * aqj;
          a(q, j) = s * apj + std::conj(u11) * aqj;
        }
        for (std::size_t i = 0; i < n; ++i) {  // V <- V U
          const Complex vip = v(i, p);
          const Complex viq = v(i, q);
          v(i, p) = c * vip + u10 * viq;
          v(i, q) = s * vip + u11 * viq;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() > a(j, j).real();
  });

  EigResult out;
  out.values.resize(n);
  out.vectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

/// Three-part verdict of positive semidefiniteness with explicit witness.
struct PsdResult {
  bool yes{false};
  double min_eigenvalue{0.0};
  std::vector<Complex> witness;  // unit vector attaining min_eigenvalue when !yes
};

/// Yes iff lambda_min(M) >= -tol.eps_psd (boundary points count as positive).
inline PsdResult psd_verdict(const ComplexMatrix& m,
                             const Tolerances& tol = Tolerances{}) {
  if (m.rows() == 0) return PsdResult{true, 0.0, {}};
  const EigResult eig = eig_hermitian(m, tol);
  PsdResult out;
  out.min_eigenvalue = eig.values.back();
  out.yes = out.min_eigenvalue >= -tol.eps_psd;
  if (!out.yes) {
    out.witness.resize(m.rows());
    const std::size_t k = m.rows() - 1;
    for (std::size_t i = 0; i < m.rows(); ++i) out.witness[i] = eig.vectors(i, k);
  }
  return out;
}

/// Fast status probe: does M + shift*I admit a Cholesky factorization?
/// Equivalent (up to rounding) to lambda_min(M) > -shift.  Used by searches
/// that only need the boolean, not a witness.
inline bool psd_probe(const ComplexMatrix& m, double shift) {
  const std::size_t n = m.rows();
  if (n == 0) return true;
  ComplexMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double djj = m(j, j).real() + shift;
    for (std::size_t k = 0; k < j; ++k) djj -= std::norm(l(j, k));
    if (!(djj > 0.0) || std::isnan(djj)) return false;
    const double ljj = std::sqrt(djj);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      Complex s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / ljj;
    }
  }
  return true;
}

/// Compression V† M V where V is an isometry onto range(P).
/// P must be an orthogonal projection; the output has dimension rank(P).
inline ComplexMatrix compress(const ComplexMatrix& m, const ComplexMatrix& p,
                              const Tolerances& tol = Tolerances{}) {
  if (!p.square() || p.rows() != m.rows() || !m.square())
    throw DimensionMismatch("compress shape");
  const double proj_defect =
      std::max((p * p - p).max_abs(), p.hermiticity_defect());
  if (proj_defect > 1e2 * tol.eps_herm)
    throw NotAProjection("P*P != P or P not hermitian");

  const EigResult eig = eig_hermitian(p, tol);
  std::size_t rank = 0;
  for (double lam : eig.values) {
    if (lam > 0.5)
      ++rank;
    else if (lam > 0.1 && lam < 0.9)
      throw NotAProjection("eigenvalue away from {0,1}");
  }
  ComplexMatrix iso = eig.vectors.block(0, 0, p.rows(), rank);
  return (iso.adjoint() * m) * iso;
}

}  // namespace losys
