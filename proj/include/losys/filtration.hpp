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

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "losys/eig.hpp"

namespace losys {

/// Orthogonal projection on C^d.  Coordinate projections (the default
/// filtrations of the example systems) compress by index gathering; explicit
/// projections go through an isometry onto the range.
class Projection {
 public:
  static Projection onto_first(std::size_t dim, std::size_t count) {
    std::vector<std::size_t> idx(count);
    for (std::size_t i = 0; i < count; ++i) idx[i] = i;
    return onto_coords(dim, idx);
  }

  static Projection onto_coords(std::size_t dim, std::vector<std::size_t> idx) {
    Projection p;
    p.dim_ = dim;
    p.coords_ = std::move(idx);
    for (std::size_t c : p.coords_)
      if (c >= dim) throw DimensionMismatch("projection coordinate out of range");
    p.rank_ = p.coords_.size();
    p.matrix_ = ComplexMatrix(dim, dim);
    for (std::size_t c : p.coords_) p.matrix_(c, c) = 1.0;
    return p;
  }

  static Projection from_matrix(const ComplexMatrix& m,
                                const Tolerances& tol = Tolerances{}) {
    // recognize coordinate projections so compressions stay cheap
    bool coordinate = true;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < m.rows() && coordinate; ++i) {
      for (std::size_t j = 0; j < m.cols() && coordinate; ++j) {
        const Complex z = m(i, j);
        if (i == j) {
          if (std::abs(z) <= tol.eps_herm) continue;
          if (std::abs(z - Complex(1.0, 0.0)) <= tol.eps_herm)
            idx.push_back(i);
          else
            coordinate = false;
        } else if (std::abs(z) > tol.eps_herm) {
          coordinate = false;
        }
      }
    }
    if (coordinate) return onto_coords(m.rows(), idx);

    const double defect =
        std::max((m * m - m).max_abs(), m.hermiticity_defect());
    if (defect > 1e2 * tol.eps_herm)
      throw NotAProjection("matrix is not an orthogonal projection");
    Projection p;
    p.dim_ = m.rows();
    p.matrix_ = m.hermitized();
    const EigResult eig = eig_hermitian(p.matrix_, tol);
    std::size_t rank = 0;
    while (rank < eig.values.size() && eig.values[rank] > 0.5) ++rank;
    p.rank_ = rank;
    p.isometry_ = eig.vectors.block(0, 0, m.rows(), rank);
    return p;
  }

  std::size_t dim() const { return dim_; }
  std::size_t rank() const { return rank_; }
  bool coordinate() const { return !coords_.empty() || rank_ == 0; }
  const std::vector<std::size_t>& coords() const { return coords_; }
  const ComplexMatrix& matrix() const { return matrix_; }

  /// d x rank isometry onto the range.
  ComplexMatrix range_isometry() const {
    if (!coordinate()) return isometry_;
    ComplexMatrix v(dim_, rank_);
    for (std::size_t i = 0; i < rank_; ++i) v(coords_[i], i) = 1.0;
    return v;
  }

  bool is_identity() const { return rank_ == dim_; }

  /// V† M V on C^d.
  ComplexMatrix compress(const ComplexMatrix& m) const {
    if (m.rows() != dim_ || !m.square())
      throw DimensionMismatch("projection/matrix dimension mismatch");
    if (coordinate()) return m.gather(coords_);
    return (isometry_.adjoint() * m) * isometry_;
  }

  /// (I_n ⊗ V)† M (I_n ⊗ V) for M of size (n·d) x (n·d).
  ComplexMatrix compress_level(const ComplexMatrix& m, std::size_t level) const {
    if (m.rows() != level * dim_ || !m.square())
      throw DimensionMismatch("level compression dimension mismatch");
    if (coordinate()) {
      std::vector<std::size_t> idx;
      idx.reserve(level * rank_);
      for (std::size_t i = 0; i < level; ++i)
        for (std::size_t c : coords_) idx.push_back(i * dim_ + c);
      return m.gather(idx);
    }
    ComplexMatrix out(level * rank_, level * rank_);
    for (std::size_t i = 0; i < level; ++i)
      for (std::size_t j = 0; j < level; ++j) {
        ComplexMatrix blk = m.block(i * dim_, j * dim_, dim_, dim_);
        out.place(i * rank_, j * rank_, (isometry_.adjoint() * blk) * isometry_);
      }
    return out;
  }

  /// Nestedness with a larger projection: P Q = Q P = P.
  bool nested_in(const Projection& q, double eps) const {
    const ComplexMatrix& pm = matrix_.empty() ? rebuild() : matrix_;
    const ComplexMatrix& qm = q.matrix_.empty() ? q.rebuild() : q.matrix_;
    return (pm * qm - pm).max_abs() <= eps && (qm * pm - pm).max_abs() <= eps;
  }

 private:
  const ComplexMatrix& rebuild() const { return matrix_; }

  std::size_t dim_{0};
  std::size_t rank_{0};
  std::vector<std::size_t> coords_;
  ComplexMatrix matrix_;
  ComplexMatrix isometry_;
};

/// Finite directed poset of stage indices given by its <= relation.
class StagePoset {
 public:
  StagePoset() = default;

  static StagePoset chain(std::size_t n) {
    StagePoset p;
    p.n_ = n;
    p.leq_.assign(n * n, false);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a; b < n; ++b) p.leq_[a * n + b] = true;
    return p;
  }

  static StagePoset from_pairs(std::size_t n,
                               const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    StagePoset p;
    p.n_ = n;
    p.leq_.assign(n * n, false);
    for (std::size_t a = 0; a < n; ++a) p.leq_[a * n + a] = true;
    for (auto [a, b] : pairs) {
      if (a >= n || b >= n) throw StageOutOfRange("poset pair out of range");
      p.leq_[a * n + b] = true;
    }
    // transitive closure
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t a = 0; a < n; ++a)
        if (p.leq_[a * n + k])
          for (std::size_t b = 0; b < n; ++b)
            if (p.leq_[k * n + b]) p.leq_[a * n + b] = true;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        if (p.leq_[a * n + b] && p.leq_[b * n + a])
          throw Error("StagePoset: relation is not antisymmetric");
    return p;
  }

  std::size_t size() const { return n_; }

  bool leq(std::size_t a, std::size_t b) const {
    if (a >= n_ || b >= n_) throw StageOutOfRange("poset query out of range");
    return leq_[a * n_ + b];
  }

  std::optional<std::size_t> upper_bound(std::size_t a, std::size_t b) const {
    for (std::size_t c = 0; c < n_; ++c)
      if (leq(a, c) && leq(b, c)) return c;
    return std::nullopt;
  }

  bool directed() const {
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t b = a + 1; b < n_; ++b)
        if (!upper_bound(a, b)) return false;
    return true;
  }

  std::optional<std::size_t> top() const {
    for (std::size_t c = 0; c < n_; ++c) {
      bool all = true;
      for (std::size_t a = 0; a < n_; ++a) all = all && leq(a, c);
      if (all) return c;
    }
    return std::nullopt;
  }

  std::vector<std::pair<std::size_t, std::size_t>> cover_pairs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t b = 0; b < n_; ++b)
        if (a != b && leq(a, b)) out.emplace_back(a, b);
    return out;
  }

 private:
  std::size_t n_{0};
  std::vector<bool> leq_;
};

/// Nested stages of projections over a directed poset; the top stage must be
/// the identity (the finite stand-in for the dense union of the domain).
class Filtration {
 public:
  Filtration(std::size_t ambient_dim, std::vector<Projection> stages,
             StagePoset poset, bool require_top_identity = true,
             bool require_nested = true, const Tolerances& tol = Tolerances{})
      : dim_(ambient_dim), stages_(std::move(stages)), poset_(std::move(poset)) {
    if (stages_.empty()) throw InvalidSystem("filtration needs at least one stage");
    if (poset_.size() != stages_.size())
      throw InvalidSystem("poset size does not match stage count");
    for (const auto& p : stages_)
      if (p.dim() != dim_) throw DimensionMismatch("stage dimension mismatch");
    if (require_nested)
      for (std::size_t a = 0; a < stages_.size(); ++a)
        for (std::size_t b = 0; b < stages_.size(); ++b)
          if (a != b && poset_.leq(a, b) &&
              !stages_[a].nested_in(stages_[b], 1e2 * tol.eps_herm))
            throw InvalidSystem("stages not nested along the poset order");
    if (!poset_.directed()) throw InvalidSystem("stage poset is not directed");
    if (require_top_identity) {
      const auto t = poset_.top();
      if (!t || !stages_[*t].is_identity())
        throw InvalidSystem("top stage must be the identity projection");
    }
  }

  static Filtration corner_chain(std::size_t dim) {
    std::vector<Projection> stages;
    stages.reserve(dim);
    for (std::size_t r = 1; r <= dim; ++r)
      stages.push_back(Projection::onto_first(dim, r));
    return Filtration(dim, std::move(stages), StagePoset::chain(dim));
  }

  std::size_t ambient_dim() const { return dim_; }
  std::size_t stage_count() const { return stages_.size(); }
  const Projection& stage(std::size_t a) const {
    if (a >= stages_.size()) throw StageOutOfRange("stage index out of range");
    return stages_[a];
  }
  const StagePoset& poset() const { return poset_; }

 private:
  std::size_t dim_;
  std::vector<Projection> stages_;
  StagePoset poset_;
};

}  // namespace losys
