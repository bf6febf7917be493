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

namespace losys {

namespace detail {

/// Real-affine constraints on the space of hermitian matrices,
/// <A_j, X> = t_j with hermitian A_j under the trace pairing.
class HermitianAffineSet {
 public:
  explicit HermitianAffineSet(std::size_t dim) : dim_(dim) {}

  /// Adds the complex constraint tr(A† X) = v for hermitian X (split into the
  /// two real constraints carried by the hermitian parts of A).
  void add_complex(const ComplexMatrix& a, Complex v) {
    ComplexMatrix h(dim_, dim_), k(dim_, dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) {
        const Complex z = a(i, j);
        const Complex zc = std::conj(a(j, i));
        h(i, j) = 0.5 * (z + zc);
        k(i, j) = Complex(0.0, -0.5) * (z - zc);
      }
    add_real(h, v.real());
    add_real(k, -v.imag());
  }

  /// Adds the real constraint <A, X> = t (A hermitian), Gram-Schmidt reduced.
  void add_real(ComplexMatrix a, double t) {
    for (std::size_t j = 0; j < basis_.size(); ++j) {
      const double c = pairing(basis_[j], a);
      a.add_scaled(Complex(-c, 0.0), basis_[j]);
      t -= c * targets_[j];
    }
    const double nrm = a.frobenius_norm();
    if (nrm < 1e-12) return;  // dependent (or contradictory within noise)
    a = a * Complex(1.0 / nrm, 0.0);
    basis_.push_back(std::move(a));
    targets_.push_back(t / nrm);
  }

  ComplexMatrix project(ComplexMatrix x) const {
    for (std::size_t j = 0; j < basis_.size(); ++j) {
      const double gap = targets_[j] - pairing(basis_[j], x);
      x.add_scaled(Complex(gap, 0.0), basis_[j]);
    }
    return x;
  }

  double residual(const ComplexMatrix& x) const {
    double r = 0.0;
    for (std::size_t j = 0; j < basis_.size(); ++j)
      r = std::max(r, std::abs(targets_[j] - pairing(basis_[j], x)));
    return r;
  }

 private:
  std::size_t dim_;
  std::vector<ComplexMatrix> basis_;
  std::vector<double> targets_;
};

/// Projection onto {X hermitian : X supported on `support` coords, supported
/// block PSD}: zero outside the support, clip eigenvalues inside.
inline ComplexMatrix project_supported_psd(const ComplexMatrix& x,
                                           const std::vector<std::size_t>& support) {
  ComplexMatrix blk = x.hermitized().gather(support);
  const EigResult e = eig_hermitian(blk);
  ComplexMatrix clipped(blk.rows(), blk.cols());
  for (std::size_t k = 0; k < e.values.size(); ++k) {
    const double lam = std::max(0.0, e.values[k]);
    if (lam == 0.0) continue;
    for (std::size_t i = 0; i < blk.rows(); ++i)
      for (std::size_t j = 0; j < blk.cols(); ++j)
        clipped(i, j) += Complex(lam, 0.0) * e.vectors(i, k) *
                         std::conj(e.vectors(j, k));
  }
  ComplexMatrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < support.size(); ++i)
    for (std::size_t j = 0; j < support.size(); ++j)
      out(support[i], support[j]) = clipped(i, j);
  return out;
}

struct DykstraOutcome {
  ComplexMatrix point;
  double affine_residual{0.0};
  double cone_residual{0.0};
  bool converged{false};
  std::size_t iterations{0};
};

/// Dykstra-style alternating projection between the affine agreement set and
/// a supported-PSD cone; existence theorems make convergence the expected
/// outcome, non-convergence is surfaced to the caller.
inline DykstraOutcome dykstra_feasibility(const HermitianAffineSet& affine,
                                          const std::vector<std::size_t>& support,
                                          ComplexMatrix start,
                                          std::size_t max_iters, double tol) {
  DykstraOutcome out;
  ComplexMatrix y = std::move(start);
  ComplexMatrix corr(y.rows(), y.cols());
  for (std::size_t it = 0; it < max_iters; ++it) {
    const ComplexMatrix u = affine.project(y);
    const ComplexMatrix w = u + corr;
    y = project_supported_psd(w, support);
    corr = w - y;
    out.iterations = it + 1;
    if (it % 8 == 7 || it + 1 == max_iters) {
      out.affine_residual = affine.residual(y);
      out.cone_residual = (y - project_supported_psd(y, support)).frobenius_norm();
      if (out.affine_residual <= tol && out.cone_residual <= tol) {
        out.converged = true;
        break;
      }
    }
  }
  out.point = y;
  return out;
}

}  // namespace detail

enum class ExtendStatus { found, unresolved };

struct FunctionalExtension {
  ExtendStatus status{ExtendStatus::unresolved};
  ComplexMatrix dual;        // corner-supported hermitian representer
  LinearMapData functional;  // ambient -> C
  double affine_residual{0.0};
  double cone_residual{0.0};
};

/// Extension of a local positive functional phi on a subsystem S (given
/// against `ambient`'s filtration) to a functional positive on the stage-alpha
/// corner cone of the ambient system: feasibility search for a hermitian
/// corner-supported PSD representer agreeing with phi on S.
inline FunctionalExtension extend_positive(const LinearMapData& phi,
                                           std::size_t stage, SystemPtr ambient,
                                           RandomStream& rng,
                                           std::size_t precheck_samples = 32) {
  phi.validate();
  if (phi.target->ambient_dim() != 1)
    throw DimensionMismatch("extend_positive expects a functional");
  const SystemPtr& sub = phi.source;
  if (sub->ambient_dim() != ambient->ambient_dim())
    throw DimensionMismatch("subsystem/ambient dimension mismatch");
  const Tolerances& tol = ambient->tolerances();
  const std::size_t alpha = phi.stage_correspondence.empty()
                                ? stage
                                : phi.stage_correspondence[0];

  // positivity of phi on the subsystem cone
  for (std::size_t s = 0; s < precheck_samples; ++s) {
    const LevelElement x = sample_corner_member(sub, alpha, 1, rng);
    const double v = phi.apply_coords(x.coord(0, 0))[0].real();
    if (v < -tol.eps_decide * (1.0 + x.realization().frobenius_norm()))
      throw NotPositiveOnSubsystem("phi is negative on a sampled cone member");
  }

  const std::size_t d = ambient->ambient_dim();
  detail::HermitianAffineSet affine(d);
  for (std::size_t i = 0; i < sub->basis_size(); ++i) {
    // tr(rho b_i) = phi(b_i):   tr(A† rho) with A = b_i†
    affine.add_complex(sub->basis_element(i).adjoint(), phi.matrix(0, i));
  }
  const Projection& p = ambient->filtration().stage(stage);
  std::vector<std::size_t> support;
  if (p.coordinate()) {
    support = p.coords();
  } else {
    for (std::size_t i = 0; i < d; ++i) support.push_back(i);
  }

  const auto run = detail::dykstra_feasibility(
      affine, support, ComplexMatrix::zeros(d, d), tol.max_iters,
      1e-10 * (1.0 + phi.matrix.frobenius_norm()));

  FunctionalExtension out;
  out.dual = run.point.hermitized();
  out.affine_residual = run.affine_residual;
  out.cone_residual = run.cone_residual;
  out.status = run.converged ? ExtendStatus::found : ExtendStatus::unresolved;
  out.functional = LinearMapData::from_action(
      ambient, catalog::matrix_system(1), {alpha}, [&](const ComplexMatrix& b) {
        ComplexMatrix v(1, 1);
        v(0, 0) = hs_inner(out.dual, b);
        return v;
      });
  return out;
}

struct LucpExtension {
  ExtendStatus status{ExtendStatus::unresolved};
  ComplexMatrix choi;  // corner-supported PSD Choi matrix of the extension
  LinearMapData map;   // ambient -> target
  double affine_residual{0.0};
  double cone_residual{0.0};
};

/// Extension of a local CP map phi: S -> M_n to the ambient matrix system:
/// the same feasibility scheme applied to the Choi pairing (affine agreement
/// on S's coordinates intersected with the corner-supported PSD cone).
inline LucpExtension extend_lucp(const LinearMapData& phi, std::size_t stage,
                                 SystemPtr ambient, RandomStream& rng,
                                 std::size_t precheck_samples = 24) {
  phi.validate();
  const SystemPtr& sub = phi.source;
  const SystemPtr& target = phi.target;
  if (!target->full_span())
    throw SourceNotFull("extend_lucp expects a full matrix target");
  if (sub->ambient_dim() != ambient->ambient_dim())
    throw DimensionMismatch("subsystem/ambient dimension mismatch");
  const std::size_t d = ambient->ambient_dim();
  const std::size_t n = target->ambient_dim();
  const Tolerances& tol = ambient->tolerances();
  const std::size_t alpha = phi.stage_correspondence.empty()
                                ? stage
                                : phi.stage_correspondence[0];

  // local CP of phi on the subsystem, sampled
  for (std::size_t s = 0; s < precheck_samples; ++s) {
    const std::size_t lvl = 1 + (s % 2);
    const LevelElement x = sample_corner_member(sub, alpha, lvl, rng);
    const LevelElement y = phi.apply(x);
    const PsdResult r = psd_verdict(y.realization().hermitized(), tol);
    if (r.min_eigenvalue <
        -tol.eps_decide * (1.0 + y.realization().frobenius_norm()))
      throw NotCPOnSubsystem("phi maps a sampled cone member outside PSD");
  }

  // variables: Choi matrix C in M_d(M_n), constraint psi(b) = phi(b) on S
  detail::HermitianAffineSet affine(d * n);
  for (std::size_t ib = 0; ib < sub->basis_size(); ++ib) {
    const ComplexMatrix& b = sub->basis_element(ib);
    const ComplexMatrix img = target->realize([&] {
      std::vector<Complex> c(target->basis_size(), Complex(0.0, 0.0));
      for (std::size_t i = 0; i < target->basis_size(); ++i)
        c[i] = phi.matrix(i, ib);
      return c;
    }());
    for (std::size_t p_i = 0; p_i < n; ++p_i)
      for (std::size_t q = 0; q < n; ++q) {
        // sum_kl b_kl C(k n + p, l n + q) = phi(b)_{pq}
        ComplexMatrix a(d * n, d * n);
        for (std::size_t k = 0; k < d; ++k)
          for (std::size_t l = 0; l < d; ++l)
            a(k * n + p_i, l * n + q) = std::conj(b(k, l));
        affine.add_complex(a, img(p_i, q));
      }
  }

  const Projection& p = ambient->filtration().stage(stage);
  std::vector<std::size_t> support;
  const auto corner_coords = p.coordinate()
                                 ? p.coords()
                                 : [&] {
                                     std::vector<std::size_t> all(d);
                                     for (std::size_t i = 0; i < d; ++i) all[i] = i;
                                     return all;
                                   }();
  for (std::size_t c : corner_coords)
    for (std::size_t t = 0; t < n; ++t) support.push_back(c * n + t);

  const auto run = detail::dykstra_feasibility(
      affine, support, ComplexMatrix::zeros(d * n, d * n), tol.max_iters,
      1e-9 * (1.0 + phi.matrix.frobenius_norm()));

  LucpExtension out;
  out.choi = run.point.hermitized();
  out.affine_residual = run.affine_residual;
  out.cone_residual = run.cone_residual;
  out.status = run.converged ? ExtendStatus::found : ExtendStatus::unresolved;
  out.map = LinearMapData::from_action(
      ambient, target, {alpha}, [&](const ComplexMatrix& b) {
        ComplexMatrix img(n, n);
        for (std::size_t k = 0; k < d; ++k)
          for (std::size_t l = 0; l < d; ++l) {
            if (b(k, l) == Complex(0.0, 0.0)) continue;
            img.add_scaled(b(k, l), out.choi.block(k * n, l * n, n, n));
          }
        return img;
      });
  return out;
}

}  // namespace losys
