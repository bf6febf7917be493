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
#include <set>
#include <sstream>
#include <utility>

#include "losys/concrete.hpp"

namespace losys::catalog {

namespace detail {

/// Basis [I, E_00..E_{d-2,d-2}, off-diagonal units from `offdiag`].
/// With all diagonal units implied present, dropping one keeps the set
/// linearly independent while the unit stays first.
inline std::vector<ComplexMatrix> pattern_basis(
    std::size_t d, const std::vector<std::pair<std::size_t, std::size_t>>& offdiag) {
  std::vector<ComplexMatrix> basis;
  basis.push_back(ComplexMatrix::identity(d));
  for (std::size_t i = 0; i + 1 < d; ++i)
    basis.push_back(ComplexMatrix::unit(d, i, i));
  for (auto [i, j] : offdiag) basis.push_back(ComplexMatrix::unit(d, i, j));
  return basis;
}

}  // namespace detail

/// Finite truncation of M_infinity: full matrix algebra M_N with the corner
/// filtration P_1 <= ... <= P_N.
inline SystemPtr full_matrix_system(std::size_t n) {
  if (n < 1) throw InvalidSystem("need N >= 1");
  std::vector<std::pair<std::size_t, std::size_t>> offdiag;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) offdiag.emplace_back(i, j);
  return std::make_shared<LocalSystem>(detail::pattern_basis(n, offdiag),
                                       Filtration::corner_chain(n));
}

/// Plain operator system M_n: full matrix algebra with a single (identity)
/// stage.  The natural target for Choi-style map analysis.
inline SystemPtr matrix_system(std::size_t n) {
  if (n < 1) throw InvalidSystem("need N >= 1");
  std::vector<std::pair<std::size_t, std::size_t>> offdiag;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) offdiag.emplace_back(i, j);
  std::vector<Projection> stages{Projection::onto_first(n, n)};
  return std::make_shared<LocalSystem>(
      detail::pattern_basis(n, offdiag),
      Filtration(n, std::move(stages), StagePoset::chain(1)));
}

/// Tridiagonal subsystem: span{E_ij : |i-j| <= 1} with corner filtration.
inline SystemPtr tridiagonal_system(std::size_t n) {
  if (n < 1) throw InvalidSystem("need N >= 1");
  std::vector<std::pair<std::size_t, std::size_t>> offdiag;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    offdiag.emplace_back(i, i + 1);
    offdiag.emplace_back(i + 1, i);
  }
  return std::make_shared<LocalSystem>(detail::pattern_basis(n, offdiag),
                                       Filtration::corner_chain(n));
}

/// Graph subsystem span{E_ij : (i,j) in G}; G must be symmetric and contain
/// the whole diagonal.
inline SystemPtr graph_system(
    const std::set<std::pair<std::size_t, std::size_t>>& graph, std::size_t n) {
  if (n < 1) throw InvalidSystem("need N >= 1");
  for (std::size_t i = 0; i < n; ++i)
    if (!graph.count({i, i}))
      throw InvalidGraph("graph must contain every diagonal pair");
  std::vector<std::pair<std::size_t, std::size_t>> offdiag;
  for (auto [i, j] : graph) {
    if (i >= n || j >= n) throw InvalidGraph("vertex out of range");
    if (!graph.count({j, i})) throw InvalidGraph("graph must be symmetric");
    if (i != j) offdiag.emplace_back(i, j);
  }
  return std::make_shared<LocalSystem>(detail::pattern_basis(n, offdiag),
                                       Filtration::corner_chain(n));
}

/// Diagonal graph system (no off-diagonal entries): the classical function
/// system of dimension n.
inline SystemPtr diagonal_system(std::size_t n) {
  std::set<std::pair<std::size_t, std::size_t>> g;
  for (std::size_t i = 0; i < n; ++i) g.insert({i, i});
  return graph_system(g, n);
}

/// span{I, T, T*} inside B(C^d) with the corner filtration; linearly
/// dependent generators are dropped.
inline SystemPtr generated_by(const ComplexMatrix& t) {
  if (!t.square()) throw InvalidSystem("generator must be square");
  const std::size_t d = t.rows();
  std::vector<ComplexMatrix> basis{ComplexMatrix::identity(d)};
  auto try_add = [&](const ComplexMatrix& cand) {
    // Gram-Schmidt residual against current basis
    ComplexMatrix resid = cand;
    for (const auto& b : basis) {
      const Complex coeff = hs_inner(b, resid) /
                            Complex(b.frobenius_norm() * b.frobenius_norm(), 0.0);
      resid = resid - b * coeff;
    }
    if (resid.frobenius_norm() > 1e-10 * (1.0 + cand.frobenius_norm()))
      basis.push_back(cand);
  };
  try_add(t);
  try_add(t.adjoint());
  return std::make_shared<LocalSystem>(std::move(basis),
                                       Filtration::corner_chain(d));
}

/// Discretized C(R): functions become diagonal matrices over the points of the
/// largest grid; the stage for grid K_m projects onto the coordinates of K_m.
/// Grids must be nested and non-empty.
inline SystemPtr sampled_function_system(const std::vector<std::vector<double>>& grids) {
  if (grids.empty()) throw EmptyGrid("need at least one grid");
  for (const auto& g : grids)
    if (g.empty()) throw EmptyGrid("grid without points");
  const std::vector<double>& top = grids.back();
  std::vector<double> points(top);
  std::sort(points.begin(), points.end());
  const std::size_t d = points.size();

  auto index_of = [&](double x) -> std::size_t {
    for (std::size_t i = 0; i < points.size(); ++i)
      if (points[i] == x) return i;
    throw EmptyGrid("grids are not nested");
  };

  std::vector<Projection> stages;
  for (const auto& g : grids) {
    std::vector<std::size_t> idx;
    idx.reserve(g.size());
    for (double x : g) idx.push_back(index_of(x));
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    stages.push_back(Projection::onto_coords(d, idx));
  }
  // nestedness of the grids themselves
  for (std::size_t m = 0; m + 1 < grids.size(); ++m)
    for (double x : grids[m])
      if (std::find(grids[m + 1].begin(), grids[m + 1].end(), x) ==
          grids[m + 1].end())
        throw EmptyGrid("grids are not nested");

  std::vector<ComplexMatrix> basis{ComplexMatrix::identity(d)};
  for (std::size_t i = 0; i + 1 < d; ++i)
    basis.push_back(ComplexMatrix::unit(d, i, i));

  std::vector<std::string> labels;
  labels.reserve(points.size());
  for (double x : points) {
    std::ostringstream os;
    os << "x=" << x;
    labels.push_back(os.str());
  }
  return std::make_shared<LocalSystem>(
      std::move(basis),
      Filtration(d, std::move(stages), StagePoset::chain(grids.size())),
      std::move(labels));
}

/// Tagged request covering the whole example family; `make_example`
/// dispatches to the factory functions above.
struct ExampleSpec {
  enum class Kind { truncated_minf, tridiagonal, graph, los_of, sampled_cr };
  Kind kind{Kind::truncated_minf};
  std::size_t n{1};
  std::set<std::pair<std::size_t, std::size_t>> graph;
  ComplexMatrix generator;
  std::vector<std::vector<double>> grids;

  static ExampleSpec truncated(std::size_t n) {
    return {Kind::truncated_minf, n, {}, {}, {}};
  }
  static ExampleSpec tri(std::size_t n) {
    return {Kind::tridiagonal, n, {}, {}, {}};
  }
  static ExampleSpec of_graph(std::set<std::pair<std::size_t, std::size_t>> g,
                              std::size_t n) {
    return {Kind::graph, n, std::move(g), {}, {}};
  }
  static ExampleSpec of_operator(ComplexMatrix t) {
    return {Kind::los_of, 0, {}, std::move(t), {}};
  }
  static ExampleSpec sampled(std::vector<std::vector<double>> grids) {
    return {Kind::sampled_cr, 0, {}, {}, std::move(grids)};
  }
};

inline SystemPtr make_example(const ExampleSpec& spec) {
  switch (spec.kind) {
    case ExampleSpec::Kind::truncated_minf: return full_matrix_system(spec.n);
    case ExampleSpec::Kind::tridiagonal: return tridiagonal_system(spec.n);
    case ExampleSpec::Kind::graph: return graph_system(spec.graph, spec.n);
    case ExampleSpec::Kind::los_of: return generated_by(spec.generator);
    case ExampleSpec::Kind::sampled_cr: return sampled_function_system(spec.grids);
  }
  throw InvalidSystem("unknown example kind");
}

}  // namespace losys::catalog
