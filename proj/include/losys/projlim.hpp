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

namespace detail {

/// Orthonormal basis of the nullspace of A by row reduction.
inline std::vector<std::vector<Complex>> nullspace(ComplexMatrix a,
                                                   double tol = 1e-10) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < m; ++col) {
    // partial pivot
    std::size_t best = row;
    for (std::size_t r = row + 1; r < m; ++r)
      if (std::abs(a(r, col)) > std::abs(a(best, col))) best = r;
    if (std::abs(a(best, col)) <= tol) continue;
    if (best != row)
      for (std::size_t c = 0; c < n; ++c) std::swap(a(row, c), a(best, c));
    const Complex piv = a(row, col);
    for (std::size_t c = 0; c < n; ++c) a(row, c) /= piv;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == row) continue;
      const Complex f = a(r, col);
      if (f == Complex(0.0, 0.0)) continue;
      for (std::size_t c = 0; c < n; ++c) a(r, c) -= f * a(row, c);
    }
    pivot_col.push_back(col);
    ++row;
  }
  std::vector<bool> is_pivot(n, false);
  for (std::size_t c : pivot_col) is_pivot[c] = true;

  std::vector<std::vector<Complex>> basis;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Complex> x(n, Complex(0.0, 0.0));
    x[free] = 1.0;
    for (std::size_t p = 0; p < pivot_col.size(); ++p)
      x[pivot_col[p]] = -a(p, free);
    basis.push_back(std::move(x));
  }
  // orthonormalize the returned basis
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const Complex proj = dot(basis[j], basis[i]);
      for (std::size_t c = 0; c < n; ++c) basis[i][c] -= proj * basis[j][c];
    }
    normalize(basis[i]);
  }
  return basis;
}

}  // namespace detail

/// Projective system of operator systems over a finite directed poset: one
/// single-stage system per index and a unital CP connecting map for every
/// related pair.
class ProjectiveSystem {
 public:
  struct Arrow {
    std::size_t to;    // alpha
    std::size_t from;  // beta, with alpha <= beta
    LinearMapData map;
  };

  ProjectiveSystem(StagePoset poset, std::vector<SystemPtr> stages,
                   std::vector<Arrow> arrows)
      : poset_(std::move(poset)),
        stages_(std::move(stages)),
        arrows_(std::move(arrows)) {
    if (poset_.size() != stages_.size())
      throw InvalidSystem("poset/stage count mismatch");
    for (const auto& s : stages_)
      if (s->stage_count() != 1)
        throw InvalidSystem("projective stages must be single-stage systems");
    for (const auto& ar : arrows_) {
      if (ar.to >= stages_.size() || ar.from >= stages_.size() ||
          !poset_.leq(ar.to, ar.from) || ar.to == ar.from)
        throw IncompatibleConnectingMaps("arrow does not follow the poset");
      if (ar.map.source.get() != stages_[ar.from].get() ||
          ar.map.target.get() != stages_[ar.to].get())
        throw IncompatibleConnectingMaps("arrow endpoints mismatch");
    }
    // every related pair must carry a map
    for (std::size_t a = 0; a < size(); ++a)
      for (std::size_t b = 0; b < size(); ++b)
        if (a != b && poset_.leq(a, b) && !find_arrow(a, b))
          throw IncompatibleConnectingMaps("missing connecting map");
  }

  std::size_t size() const { return stages_.size(); }
  const StagePoset& poset() const { return poset_; }
  const SystemPtr& stage(std::size_t i) const { return stages_[i]; }

  const LinearMapData& connecting(std::size_t to, std::size_t from) const {
    const Arrow* ar = find_arrow(to, from);
    if (!ar) throw IncompatibleConnectingMaps("no such arrow");
    return ar->map;
  }

  /// Cocycle residuals, identity-on-diagonal and sampled UCP checks.
  Report validate(RandomStream& rng, std::size_t samples = 8) const {
    Report rep;
    rep.title = "projective-system";
    double worst_cocycle = 0.0;
    for (std::size_t a = 0; a < size(); ++a)
      for (std::size_t b = 0; b < size(); ++b)
        for (std::size_t c = 0; c < size(); ++c) {
          if (a == b || b == c) continue;
          if (!poset_.leq(a, b) || !poset_.leq(b, c)) continue;
          const ComplexMatrix lhs =
              connecting(a, b).matrix * connecting(b, c).matrix;
          worst_cocycle =
              std::max(worst_cocycle,
                       (lhs - connecting(a, c).matrix).max_abs());
        }
    rep.check(worst_cocycle <= 1e-10, "cocycle",
              "residual=" + num(worst_cocycle));

    bool all_unital = true;
    std::size_t cp_bad = 0;
    for (const auto& ar : arrows_) {
      all_unital = all_unital && ar.map.unital();
      const Report r = verify_local_cp(ar.map, 2, samples, rng);
      if (!r.passed()) ++cp_bad;
    }
    rep.check(all_unital, "unital");
    rep.check(cp_bad == 0, "completely-positive",
              "failing_maps=" + std::to_string(cp_bad));
    return rep;
  }

 private:
  const Arrow* find_arrow(std::size_t to, std::size_t from) const {
    for (const auto& ar : arrows_)
      if (ar.to == to && ar.from == from) return &ar;
    return nullptr;
  }

  StagePoset poset_;
  std::vector<SystemPtr> stages_;
  std::vector<Arrow> arrows_;
};

/// The thread space of a projective system: tuples (v_alpha) with
/// f_ab(v_b) = v_a, carried by a basis of solutions of the linear thread
/// constraints.  Cones are componentwise positivity; the unit thread is the
/// order unit.
class LimitSystem {
 public:
  explicit LimitSystem(const ProjectiveSystem& sys) : sys_(&sys) {
    // the construction is meaningless without the cocycle identities
    for (std::size_t a = 0; a < sys.size(); ++a)
      for (std::size_t b = 0; b < sys.size(); ++b)
        for (std::size_t c = 0; c < sys.size(); ++c) {
          if (a == b || b == c) continue;
          if (!sys.poset().leq(a, b) || !sys.poset().leq(b, c)) continue;
          const ComplexMatrix composite =
              sys.connecting(a, b).matrix * sys.connecting(b, c).matrix;
          if ((composite - sys.connecting(a, c).matrix).max_abs() > 1e-10)
            throw CocycleViolation("f_ab o f_bc differs from f_ac");
        }
    offsets_.resize(sys.size() + 1, 0);
    for (std::size_t i = 0; i < sys.size(); ++i)
      offsets_[i + 1] = offsets_[i] + sys.stage(i)->basis_size();
    const std::size_t total = offsets_.back();

    // stack the constraints c_a - F_ab c_b = 0 over related pairs
    std::vector<std::pair<std::size_t, std::size_t>> rel;
    for (std::size_t a = 0; a < sys.size(); ++a)
      for (std::size_t b = 0; b < sys.size(); ++b)
        if (a != b && sys.poset().leq(a, b)) rel.emplace_back(a, b);
    std::size_t rows = 0;
    for (auto [a, b] : rel) rows += sys.stage(a)->basis_size();
    ComplexMatrix constraints(rows == 0 ? 1 : rows, total);
    std::size_t r0 = 0;
    for (auto [a, b] : rel) {
      const std::size_t ka = sys.stage(a)->basis_size();
      const std::size_t kb = sys.stage(b)->basis_size();
      const ComplexMatrix& f = sys.connecting(a, b).matrix;
      for (std::size_t i = 0; i < ka; ++i) {
        constraints(r0 + i, offsets_[a] + i) = 1.0;
        for (std::size_t j = 0; j < kb; ++j)
          constraints(r0 + i, offsets_[b] + j) = -f(i, j);
      }
      r0 += ka;
    }
    threads_ = detail::nullspace(constraints);
    if (threads_.empty()) throw EmptyLimit("thread space is zero");

    // the unit thread must exist and be expressible in the thread basis
    std::vector<Complex> unit(total, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < sys.size(); ++i) unit[offsets_[i]] = 1.0;
    unit_coeffs_.assign(threads_.size(), Complex(0.0, 0.0));
    std::vector<Complex> resid = unit;
    for (std::size_t t = 0; t < threads_.size(); ++t) {
      unit_coeffs_[t] = dot(threads_[t], unit);
      for (std::size_t c = 0; c < total; ++c)
        resid[c] -= unit_coeffs_[t] * threads_[t][c];
    }
    if (vec_norm(resid) > 1e-8)
      throw EmptyLimit("unit tuple is not a thread");
  }

  std::size_t dim() const { return threads_.size(); }
  const ProjectiveSystem& system() const { return *sys_; }
  const std::vector<Complex>& unit_coeffs() const { return unit_coeffs_; }

  /// Component of a level-n limit element at one index of the poset.
  LevelElement component(const std::vector<std::vector<Complex>>& coeffs,
                         std::size_t level, std::size_t index) const {
    const SystemPtr& st = sys_->stage(index);
    const std::size_t k = st->basis_size();
    std::vector<std::vector<Complex>> coords(level * level,
                                             std::vector<Complex>(k, 0.0));
    for (std::size_t c = 0; c < level * level; ++c)
      for (std::size_t t = 0; t < threads_.size(); ++t) {
        const Complex z = coeffs[c][t];
        if (z == Complex(0.0, 0.0)) continue;
        for (std::size_t i = 0; i < k; ++i)
          coords[c][i] += z * threads_[t][offsets_[index] + i];
      }
    return LevelElement(st, level, std::move(coords));
  }

  /// Thread coefficients of a compatible tuple given by its component
  /// coordinate blocks; nullopt when the tuple is not a thread.
  std::optional<std::vector<Complex>> thread_of(
      const std::vector<std::vector<Complex>>& per_stage_coords) const {
    const std::size_t total = offsets_.back();
    std::vector<Complex> flat(total, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < sys_->size(); ++i) {
      if (per_stage_coords[i].size() != sys_->stage(i)->basis_size())
        return std::nullopt;
      for (std::size_t c = 0; c < per_stage_coords[i].size(); ++c)
        flat[offsets_[i] + c] = per_stage_coords[i][c];
    }
    std::vector<Complex> coeff(threads_.size());
    std::vector<Complex> resid = flat;
    for (std::size_t t = 0; t < threads_.size(); ++t) {
      coeff[t] = dot(threads_[t], flat);
      for (std::size_t c = 0; c < total; ++c)
        resid[c] -= coeff[t] * threads_[t][c];
    }
    if (vec_norm(resid) > 1e-8 * (1.0 + vec_norm(flat))) return std::nullopt;
    return coeff;
  }

  /// Cone verdict at one poset index: positivity of that component.
  ConeVerdict member(const std::vector<std::vector<Complex>>& coeffs,
                     std::size_t level, std::size_t index) const {
    return cone_member_concrete(component(coeffs, level, index), 0,
                                sys_->stage(index)->tolerances());
  }

 private:
  const ProjectiveSystem* sys_;
  std::vector<std::size_t> offsets_;
  std::vector<std::vector<Complex>> threads_;  // thread -> flat coords
  std::vector<Complex> unit_coeffs_;
};

inline LimitSystem limit(const ProjectiveSystem& sys) { return LimitSystem(sys); }

/// Quotient decomposition of a concrete local system: for each stage, the
/// kernel of the corner map is divided out by realizing the quotient as the
/// corner-image system; connecting maps pass corners down the filtration.
struct QuotientDecomposition {
  ProjectiveSystem system;
  // provenance: coordinates of each quotient stage basis element expressed
  // through corners of the source basis
  std::vector<std::vector<std::size_t>> picked;  // stage -> source basis idx
};

inline QuotientDecomposition quotient_decomposition(const SystemPtr& v) {
  const std::size_t nstages = v->stage_count();
  std::vector<SystemPtr> stages;
  std::vector<std::vector<std::size_t>> picked(nstages);

  for (std::size_t s = 0; s < nstages; ++s) {
    const Projection& p = v->filtration().stage(s);
    const std::size_t r = std::max<std::size_t>(p.rank(), 1);
    std::vector<ComplexMatrix> basis{ComplexMatrix::identity(r)};
    std::vector<ComplexMatrix> ortho{ComplexMatrix::identity(r) *
                                     Complex(1.0 / std::sqrt(double(r)), 0.0)};
    for (std::size_t i = 1; i < v->basis_size(); ++i) {
      ComplexMatrix cand = p.compress(v->basis_element(i));
      ComplexMatrix resid = cand;
      for (const auto& o : ortho)
        resid = resid - o * hs_inner(o, resid);
      if (resid.frobenius_norm() > 1e-9 * (1.0 + cand.frobenius_norm())) {
        basis.push_back(cand);
        picked[s].push_back(i);
        resid = resid * Complex(1.0 / resid.frobenius_norm(), 0.0);
        ortho.push_back(resid);
      }
    }
    std::vector<Projection> st{Projection::onto_first(r, r)};
    stages.push_back(std::make_shared<LocalSystem>(
        std::move(basis), Filtration(r, std::move(st), StagePoset::chain(1)),
        std::vector<std::string>{}, v->tolerances()));
  }

  std::vector<ProjectiveSystem::Arrow> arrows;
  for (std::size_t a = 0; a < nstages; ++a)
    for (std::size_t b = 0; b < nstages; ++b) {
      if (a == b || !v->filtration().poset().leq(a, b)) continue;
      const Projection& pa = v->filtration().stage(a);
      // map corner_b(x) -> corner_a(x); well-defined by nestedness
      LinearMapData f;
      f.source = stages[b];
      f.target = stages[a];
      f.stage_correspondence = {0};
      f.matrix = ComplexMatrix(stages[a]->basis_size(), stages[b]->basis_size());
      // column 0 is the unit; the others track their source basis elements
      auto source_of = [&](std::size_t col) -> const ComplexMatrix& {
        return col == 0 ? v->basis_element(0)
                        : v->basis_element(picked[b][col - 1]);
      };
      for (std::size_t col = 0; col < stages[b]->basis_size(); ++col) {
        const ComplexMatrix img = pa.compress(source_of(col));
        const auto coords = stages[a]->coords_of(img);
        for (std::size_t row = 0; row < coords.size(); ++row)
          f.matrix(row, col) = coords[row];
      }
      f.validate();
      arrows.push_back({a, b, std::move(f)});
    }

  return QuotientDecomposition{
      ProjectiveSystem(v->filtration().poset(), std::move(stages),
                       std::move(arrows)),
      std::move(picked)};
}

/// Corner coordinates of an element of the source system at every stage, in
/// the quotient bases (for pushing samples through the round trip).
inline std::vector<std::vector<Complex>> quotient_components(
    const QuotientDecomposition& qd, const SystemPtr& v, const LevelElement& x,
    std::size_t cell_i, std::size_t cell_j) {
  std::vector<std::vector<Complex>> out(qd.system.size());
  for (std::size_t s = 0; s < qd.system.size(); ++s) {
    const Projection& p = v->filtration().stage(s);
    const ComplexMatrix corner =
        p.compress(v->realize(x.coord(cell_i, cell_j)));
    out[s] = qd.system.stage(s)->coords_of(corner);
  }
  return out;
}

/// The Cuntz relations admit no finite-dimensional realization: n >= 2
/// isometries S_i on H with sum_i S_i S_i* = 1 would give n·dim(H) = dim(H).
[[noreturn]] inline void cuntz_guard(std::size_t n) {
  throw UnrepresentableAtFiniteDimension(
      "Cuntz system with n = " + std::to_string(n) +
      " generators: isometries satisfying sum_i S_i S_i* = 1 would force "
      "n*dim(H) = dim(H), impossible at any finite dimension; these systems "
      "exist only as projective limits over infinite-dimensional domains");
}

}  // namespace losys
