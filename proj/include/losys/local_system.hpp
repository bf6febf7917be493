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

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "losys/filtration.hpp"

namespace losys {

namespace detail {

/// Solves the hermitian positive-definite system G x = b (complex Cholesky).
inline std::vector<Complex> solve_hpd(const ComplexMatrix& g,
                                      std::vector<Complex> b) {
  const std::size_t n = g.rows();
  ComplexMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double djj = g(j, j).real();
    for (std::size_t k = 0; k < j; ++k) djj -= std::norm(l(j, k));
    if (!(djj > 0.0)) throw Error("solve_hpd: matrix not positive definite");
    const double ljj = std::sqrt(djj);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      Complex s = g(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / ljj;
    }
  }
  // forward then backward substitution
  for (std::size_t i = 0; i < n; ++i) {
    Complex s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * b[k];
    b[i] = s / l(i, i);
  }
  for (std::size_t ii = n; ii-- > 0;) {
    Complex s = b[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= std::conj(l(k, ii)) * b[k];
    b[ii] = s / l(ii, ii);
  }
  return b;
}

}  // namespace detail

/// A *-vector space of d x d matrices presented by a finite linearly
/// independent basis whose first element is the identity, together with a
/// filtration of stage projections.  Cones at every matrix level are induced
/// by corner positivity of realizations.
class LocalSystem : public std::enable_shared_from_this<LocalSystem> {
 public:
  LocalSystem(std::vector<ComplexMatrix> basis, Filtration filtration,
              std::vector<std::string> labels = {},
              const Tolerances& tol = Tolerances{})
      : basis_(std::move(basis)),
        filtration_(std::move(filtration)),
        labels_(std::move(labels)),
        tol_(tol) {
    if (basis_.empty()) throw InvalidSystem("empty basis");
    dim_ = basis_[0].rows();
    if (dim_ != filtration_.ambient_dim())
      throw InvalidSystem("basis/filtration dimension mismatch");
    for (const auto& b : basis_)
      if (b.rows() != dim_ || b.cols() != dim_)
        throw InvalidSystem("basis element shape mismatch");
    if (!basis_[0].approx_equal(ComplexMatrix::identity(dim_), tol.eps_herm))
      throw InvalidSystem("first basis element must be the unit (identity)");

    gram_ = ComplexMatrix(basis_.size(), basis_.size());
    for (std::size_t i = 0; i < basis_.size(); ++i)
      for (std::size_t j = 0; j < basis_.size(); ++j)
        gram_(i, j) = hs_inner(basis_[i], basis_[j]);
    // linear independence: Gram must be positive definite
    double basis_scale = 0.0;
    for (const auto& b : basis_) basis_scale = std::max(basis_scale, b.frobenius_norm());
    if (!psd_probe(gram_, -1e-10 * basis_scale * basis_scale))
      throw InvalidSystem("basis is not linearly independent");

    // closure under adjoints, recorded as coordinates of each b_i†
    adjoint_coords_.reserve(basis_.size());
    for (const auto& b : basis_) {
      auto c = try_coords(b.adjoint());
      if (!c) throw InvalidSystem("basis span is not closed under adjoints");
      adjoint_coords_.push_back(std::move(*c));
    }
  }

  std::size_t ambient_dim() const { return dim_; }
  std::size_t basis_size() const { return basis_.size(); }
  const std::vector<ComplexMatrix>& basis() const { return basis_; }
  const ComplexMatrix& basis_element(std::size_t i) const { return basis_[i]; }
  const Filtration& filtration() const { return filtration_; }
  std::size_t stage_count() const { return filtration_.stage_count(); }
  const Tolerances& tolerances() const { return tol_; }
  const std::vector<std::string>& labels() const { return labels_; }

  /// True when the basis spans all of M_d.
  bool full_span() const { return basis_.size() == dim_ * dim_; }

  /// True when every basis element is diagonal.
  bool diagonal_span() const {
    for (const auto& b : basis_)
      for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j)
          if (i != j && std::abs(b(i, j)) > 1e-14) return false;
    return true;
  }

  ComplexMatrix realize(const std::vector<Complex>& coords) const {
    if (coords.size() != basis_.size())
      throw DimensionMismatch("coordinate count mismatch");
    ComplexMatrix m(dim_, dim_);
    for (std::size_t i = 0; i < coords.size(); ++i) {
      if (coords[i] == Complex(0.0, 0.0)) continue;
      m.add_scaled(coords[i], basis_[i]);
    }
    return m;
  }

  /// Least-squares coordinates; nullopt when the matrix lies off the span.
  std::optional<std::vector<Complex>> try_coords(const ComplexMatrix& m,
                                                 double rel_tol = 1e-8) const {
    std::vector<Complex> rhs(basis_.size());
    for (std::size_t i = 0; i < basis_.size(); ++i) rhs[i] = hs_inner(basis_[i], m);
    std::vector<Complex> c = detail::solve_hpd(gram_, std::move(rhs));
    const ComplexMatrix back = realize(c);
    const double scale = 1.0 + m.frobenius_norm();
    if ((back - m).frobenius_norm() > rel_tol * scale) return std::nullopt;
    return c;
  }

  std::vector<Complex> coords_of(const ComplexMatrix& m) const {
    auto c = try_coords(m);
    if (!c) throw InvalidSystem("matrix does not lie in the basis span");
    return *c;
  }

  /// Coordinates of (realize(coords))†.
  std::vector<Complex> adjoint_coords(const std::vector<Complex>& coords) const {
    std::vector<Complex> out(basis_.size(), Complex(0.0, 0.0));
    for (std::size_t i = 0; i < coords.size(); ++i) {
      const Complex c = std::conj(coords[i]);
      if (c == Complex(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < basis_.size(); ++j)
        out[j] += c * adjoint_coords_[i][j];
    }
    return out;
  }

  std::vector<Complex> unit_coords() const {
    std::vector<Complex> c(basis_.size(), Complex(0.0, 0.0));
    c[0] = 1.0;
    return c;
  }

 private:
  std::vector<ComplexMatrix> basis_;
  Filtration filtration_;
  std::vector<std::string> labels_;
  Tolerances tol_;
  std::size_t dim_{0};
  ComplexMatrix gram_;
  std::vector<std::vector<Complex>> adjoint_coords_;
};

using SystemPtr = std::shared_ptr<const LocalSystem>;

/// An element of M_n(V): an n x n array of coordinate vectors plus its cached
/// (n·d) x (n·d) realization.
class LevelElement {
 public:
  LevelElement(SystemPtr system, std::size_t level,
               std::vector<std::vector<Complex>> coords)
      : system_(std::move(system)), level_(level), coords_(std::move(coords)) {
    check_shape();
    rebuild_realization();
  }

  /// Builds an element from an (n·d) x (n·d) matrix that must lie blockwise in
  /// the basis span.
  static LevelElement from_matrix(SystemPtr system, std::size_t level,
                                  const ComplexMatrix& m) {
    const std::size_t d = system->ambient_dim();
    if (m.rows() != level * d || !m.square())
      throw DimensionMismatch("realization shape mismatch");
    std::vector<std::vector<Complex>> coords(level * level);
    for (std::size_t i = 0; i < level; ++i)
      for (std::size_t j = 0; j < level; ++j)
        coords[i * level + j] =
            system->coords_of(m.block(i * d, j * d, d, d));
    return LevelElement(std::move(system), level, std::move(coords));
  }

  static LevelElement unit(SystemPtr system, std::size_t level) {
    const std::size_t k = system->basis_size();
    std::vector<std::vector<Complex>> coords(level * level,
                                             std::vector<Complex>(k, 0.0));
    for (std::size_t i = 0; i < level; ++i) coords[i * level + i][0] = 1.0;
    return LevelElement(std::move(system), level, std::move(coords));
  }

  static LevelElement zero(SystemPtr system, std::size_t level) {
    const std::size_t k = system->basis_size();
    std::vector<std::vector<Complex>> coords(level * level,
                                             std::vector<Complex>(k, 0.0));
    return LevelElement(std::move(system), level, std::move(coords));
  }

  const SystemPtr& system() const { return system_; }
  std::size_t level() const { return level_; }
  const std::vector<Complex>& coord(std::size_t i, std::size_t j) const {
    return coords_[i * level_ + j];
  }
  const std::vector<std::vector<Complex>>& coords() const { return coords_; }
  const ComplexMatrix& realization() const { return realization_; }

  bool hermitian(double eps_herm) const {
    return realization_.is_hermitian(eps_herm);
  }

  LevelElement adjoint() const {
    std::vector<std::vector<Complex>> coords(level_ * level_);
    for (std::size_t i = 0; i < level_; ++i)
      for (std::size_t j = 0; j < level_; ++j)
        coords[i * level_ + j] = system_->adjoint_coords(coord(j, i));
    return LevelElement(system_, level_, std::move(coords));
  }

  LevelElement operator+(const LevelElement& o) const {
    check_compatible(o);
    std::vector<std::vector<Complex>> coords(coords_);
    for (std::size_t c = 0; c < coords.size(); ++c)
      for (std::size_t m = 0; m < coords[c].size(); ++m)
        coords[c][m] += o.coords_[c][m];
    return LevelElement(system_, level_, std::move(coords));
  }

  LevelElement operator-(const LevelElement& o) const {
    return *this + (o * Complex(-1.0, 0.0));
  }

  LevelElement operator*(const Complex& s) const {
    std::vector<std::vector<Complex>> coords(coords_);
    for (auto& c : coords)
      for (auto& z : c) z *= s;
    return LevelElement(system_, level_, std::move(coords));
  }

  /// X† x X for a scalar matrix X in M_{n,m}; the result lives at level m.
  LevelElement scalar_conjugate(const ComplexMatrix& x) const {
    if (x.rows() != level_) throw DimensionMismatch("scalar conjugation shape");
    const std::size_t m = x.cols();
    const std::size_t k = system_->basis_size();
    std::vector<std::vector<Complex>> coords(m * m,
                                             std::vector<Complex>(k, 0.0));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t p = 0; p < level_; ++p)
          for (std::size_t q = 0; q < level_; ++q) {
            const Complex w = std::conj(x(p, i)) * x(q, j);
            if (w == Complex(0.0, 0.0)) continue;
            const auto& src = coord(p, q);
            auto& dst = coords[i * m + j];
            for (std::size_t t = 0; t < k; ++t) dst[t] += w * src[t];
          }
    return LevelElement(system_, m, std::move(coords));
  }

  /// Corner compression of the realization at a stage.
  ComplexMatrix corner(std::size_t stage) const {
    return system_->filtration().stage(stage).compress_level(realization_,
                                                             level_);
  }

  /// [[r·e_n, x], [x†, r·e_n]] at level 2n; assembled from the cached
  /// realization so order-unit seminorm bisection stays cheap.
  LevelElement order_block(double r) const {
    const std::size_t n = level_;
    const std::size_t k = system_->basis_size();
    const LevelElement adj = adjoint();
    std::vector<std::vector<Complex>> coords(4 * n * n,
                                             std::vector<Complex>(k, 0.0));
    const std::size_t big = 2 * n;
    for (std::size_t i = 0; i < n; ++i) {
      coords[i * big + i][0] = r;
      coords[(n + i) * big + (n + i)][0] = r;
      for (std::size_t j = 0; j < n; ++j) {
        coords[i * big + (n + j)] = coord(i, j);
        coords[(n + i) * big + j] = adj.coord(i, j);
      }
    }
    LevelElement out(system_, big, LevelElement::SkipRealization{});
    out.coords_ = std::move(coords);
    const std::size_t d = system_->ambient_dim();
    out.realization_ = ComplexMatrix(big * d, big * d);
    for (std::size_t t = 0; t < n * d; ++t)
      out.realization_(t, t) = out.realization_(n * d + t, n * d + t) = r;
    for (std::size_t i = 0; i < n * d; ++i)
      for (std::size_t j = 0; j < n * d; ++j) {
        out.realization_(i, n * d + j) = realization_(i, j);
        out.realization_(n * d + i, j) = std::conj(realization_(j, i));
      }
    return out;
  }

 private:
  struct SkipRealization {};
  LevelElement(SystemPtr system, std::size_t level, SkipRealization)
      : system_(std::move(system)), level_(level) {}

  void check_shape() const {
    if (level_ == 0) throw DimensionMismatch("level must be positive");
    if (coords_.size() != level_ * level_)
      throw DimensionMismatch("coords shape mismatch");
    for (const auto& c : coords_)
      if (c.size() != system_->basis_size())
        throw DimensionMismatch("coordinate vector length mismatch");
  }

  void check_compatible(const LevelElement& o) const {
    if (system_.get() != o.system_.get() || level_ != o.level_)
      throw DimensionMismatch("elements live in different spaces");
  }

  void rebuild_realization() {
    const std::size_t d = system_->ambient_dim();
    realization_ = ComplexMatrix(level_ * d, level_ * d);
    for (std::size_t i = 0; i < level_; ++i)
      for (std::size_t j = 0; j < level_; ++j) {
        const auto& c = coord(i, j);
        bool zero = true;
        for (const Complex& z : c)
          if (z != Complex(0.0, 0.0)) {
            zero = false;
            break;
          }
        if (zero) continue;
        const ComplexMatrix blk = system_->realize(c);
        realization_.place(i * d, j * d, blk);
      }
  }

  SystemPtr system_;
  std::size_t level_{1};
  std::vector<std::vector<Complex>> coords_;
  ComplexMatrix realization_;
};

}  // namespace losys
