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

/// A (not necessarily unital) subspace of a concrete system's ambient algebra;
/// the raw material of a local operator space.
struct OperatorSubspace {
  SystemPtr ambient;
  std::vector<ComplexMatrix> basis;

  void validate() const {
    for (const auto& b : basis)
      if (b.rows() != ambient->ambient_dim() || !b.square())
        throw DimensionMismatch("subspace basis shape mismatch");
  }
};

/// The 2x2-corner system {[[l·1, v],[w*, m·1]]} over the subspace, carried by
/// M_2 of the ambient space with the doubled filtration.
inline SystemPtr corner_embedding_system(const OperatorSubspace& v) {
  v.validate();
  const std::size_t d = v.ambient->ambient_dim();
  std::vector<ComplexMatrix> basis;
  basis.push_back(ComplexMatrix::identity(2 * d));
  basis.push_back(kron(ComplexMatrix::unit(2, 0, 0), ComplexMatrix::identity(d)));
  for (const auto& b : v.basis)
    basis.push_back(kron(ComplexMatrix::unit(2, 0, 1), b));
  for (const auto& b : v.basis)
    basis.push_back(kron(ComplexMatrix::unit(2, 1, 0), b.adjoint()));

  const Filtration& f = v.ambient->filtration();
  std::vector<Projection> stages;
  for (std::size_t s = 0; s < f.stage_count(); ++s) {
    const Projection& p = f.stage(s);
    if (p.coordinate()) {
      std::vector<std::size_t> idx;
      for (std::size_t half = 0; half < 2; ++half)
        for (std::size_t c : p.coords()) idx.push_back(half * d + c);
      stages.push_back(Projection::onto_coords(2 * d, idx));
    } else {
      stages.push_back(Projection::from_matrix(
          kron(ComplexMatrix::identity(2), p.matrix())));
    }
  }
  return std::make_shared<LocalSystem>(
      std::move(basis), Filtration(2 * d, std::move(stages), f.poset()),
      std::vector<std::string>{}, v.ambient->tolerances());
}

/// Embeds a subspace element v as [[0, v],[0, 0]] in the corner system.
inline LevelElement corner_embed(const SystemPtr& sv, const OperatorSubspace& v,
                                 const std::vector<Complex>& coords) {
  if (coords.size() != v.basis.size())
    throw DimensionMismatch("subspace coordinate mismatch");
  std::vector<Complex> c(sv->basis_size(), Complex(0.0, 0.0));
  for (std::size_t i = 0; i < coords.size(); ++i) c[2 + i] = coords[i];
  return LevelElement(sv, 1, {c});
}

struct EmbedResult {
  SystemPtr sv_system;       // S^l over the source subspace
  SystemPtr sw_system;       // S^l over the target subspace
  LinearMapData induced;     // the 2x2 lift of phi
  double lcb_estimate{0.0};  // sampled lcb of phi at the checked stage pair
  Report cp_report;          // verify_local_cp of the lift
};

/// Builds S^l_V, S^l_W and the induced 2x2 lift of a locally completely
/// contractive map phi (given by its coordinate matrix against the subspace
/// bases).  Contractivity is sampled at every matched stage pair, so the two
/// ambient filtrations must have the same stage count; NotContractive is
/// raised when the lcb estimate exceeds 1 + eps_decide.
inline EmbedResult embed_operator_space(const OperatorSubspace& v,
                                        const OperatorSubspace& w,
                                        const ComplexMatrix& phi_coords,
                                        std::size_t n_max, RandomStream& rng,
                                        std::size_t samples = 24) {
  v.validate();
  w.validate();
  if (phi_coords.rows() != w.basis.size() || phi_coords.cols() != v.basis.size())
    throw DimensionMismatch("phi coordinate matrix shape mismatch");
  if (v.ambient->stage_count() != w.ambient->stage_count())
    throw DimensionMismatch("matched filtrations required");
  const Tolerances& tol = v.ambient->tolerances();

  // contractivity estimate of phi through ambient corner norms
  auto subspace_element = [](const OperatorSubspace& space,
                             const std::vector<std::vector<Complex>>& coords,
                             std::size_t n) {
    const std::size_t d = space.ambient->ambient_dim();
    ComplexMatrix m(n * d, n * d);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        ComplexMatrix blk(d, d);
        for (std::size_t t = 0; t < space.basis.size(); ++t)
          blk.add_scaled(coords[i * n + j][t], space.basis[t]);
        m.place(i * d, j * d, blk);
      }
    return m;
  };
  auto corner_norm = [](const SystemPtr& ambient, const ComplexMatrix& m,
                        std::size_t n, std::size_t stage) {
    const ComplexMatrix corner =
        ambient->filtration().stage(stage).compress_level(m, n);
    const std::size_t r = corner.rows();
    ComplexMatrix dbl(2 * r, 2 * r);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) {
        dbl(i, r + j) = corner(i, j);
        dbl(r + i, j) = std::conj(corner(j, i));
      }
    const EigResult e = eig_hermitian(dbl);
    return e.values.empty() ? 0.0 : e.values.front();
  };

  double lcb = 0.0;
  for (std::size_t stage = 0; stage < v.ambient->stage_count(); ++stage) {
    for (std::size_t n = 1; n <= n_max; ++n) {
      for (std::size_t s = 0; s < samples; ++s) {
        std::vector<std::vector<Complex>> xc(
            n * n, std::vector<Complex>(v.basis.size()));
        for (auto& row : xc)
          for (auto& z : row) z = rng.complex_gaussian();
        const double nx =
            corner_norm(v.ambient, subspace_element(v, xc, n), n, stage);
        if (nx < 1e-9) continue;
        std::vector<std::vector<Complex>> yc(n * n);
        for (std::size_t c = 0; c < n * n; ++c) {
          yc[c].assign(w.basis.size(), Complex(0.0, 0.0));
          for (std::size_t i = 0; i < w.basis.size(); ++i)
            for (std::size_t j = 0; j < v.basis.size(); ++j)
              yc[c][i] += phi_coords(i, j) * xc[c][j];
        }
        const double ny =
            corner_norm(w.ambient, subspace_element(w, yc, n), n, stage);
        lcb = std::max(lcb, ny / nx);
      }
    }
  }
  if (lcb > 1.0 + tol.eps_decide)
    throw NotContractive("sampled lcb exceeds 1: " + num(lcb));

  EmbedResult out;
  out.lcb_estimate = lcb;
  out.sv_system = corner_embedding_system(v);
  out.sw_system = corner_embedding_system(w);

  const std::size_t kv = v.basis.size();
  const std::size_t kw = w.basis.size();
  ComplexMatrix lift(out.sw_system->basis_size(), out.sv_system->basis_size());
  lift(0, 0) = 1.0;  // unit -> unit
  lift(1, 1) = 1.0;  // E11 slot -> E11 slot
  for (std::size_t j = 0; j < kv; ++j)
    for (std::size_t i = 0; i < kw; ++i) {
      lift(2 + i, 2 + j) = phi_coords(i, j);                    // v-slot
      lift(2 + kw + i, 2 + kv + j) = std::conj(phi_coords(i, j));  // w*-slot
    }
  LinearMapData induced;
  induced.source = out.sv_system;
  induced.target = out.sw_system;
  induced.matrix = std::move(lift);
  induced.stage_correspondence.resize(out.sw_system->stage_count());
  for (std::size_t b = 0; b < out.sw_system->stage_count(); ++b)
    induced.stage_correspondence[b] = b;
  out.induced = std::move(induced);
  out.induced.validate();

  out.cp_report = verify_local_cp(out.induced, n_max, samples, rng);
  return out;
}

}  // namespace losys
