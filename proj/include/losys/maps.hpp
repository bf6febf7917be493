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

#include "losys/archimedean.hpp"
#include "losys/ordering_checks.hpp"
#include "losys/seminorm.hpp"

namespace losys {

/// Linear map between local systems, stored as a coordinate matrix against the
/// declared bases.  The stage correspondence names, for every target stage,
/// the source stage whose cone must map forward.
struct LinearMapData {
  SystemPtr source;
  SystemPtr target;
  ComplexMatrix matrix;  // target coords x source coords
  std::vector<std::size_t> stage_correspondence;

  void validate() const {
    if (matrix.rows() != target->basis_size() ||
        matrix.cols() != source->basis_size())
      throw DimensionMismatch("map matrix shape mismatch");
    if (stage_correspondence.size() != target->stage_count())
      throw DimensionMismatch("stage correspondence must cover target stages");
    for (std::size_t a : stage_correspondence)
      if (a >= source->stage_count())
        throw StageOutOfRange("stage correspondence out of range");
  }

  bool unital(double tol = 1e-10) const {
    const std::vector<Complex> img = apply_coords(source->unit_coords());
    const std::vector<Complex> e = target->unit_coords();
    double defect = 0.0;
    for (std::size_t i = 0; i < img.size(); ++i)
      defect = std::max(defect, std::abs(img[i] - e[i]));
    return defect <= tol;
  }

  std::vector<Complex> apply_coords(const std::vector<Complex>& c) const {
    std::vector<Complex> out(target->basis_size(), Complex(0.0, 0.0));
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
      Complex s = 0.0;
      for (std::size_t j = 0; j < matrix.cols(); ++j) s += matrix(i, j) * c[j];
      out[i] = s;
    }
    return out;
  }

  /// phi^{(n)}: entrywise application at any level.
  LevelElement apply(const LevelElement& x) const {
    if (x.system().get() != source.get())
      throw DimensionMismatch("element lives on a different source space");
    const std::size_t n = x.level();
    std::vector<std::vector<Complex>> coords(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        coords[i * n + j] = apply_coords(x.coord(i, j));
    return LevelElement(target, n, std::move(coords));
  }

  /// phi(realized level-1 element), as a target realization.
  ComplexMatrix apply_matrix(const ComplexMatrix& m) const {
    return target->realize(apply_coords(source->coords_of(m)));
  }

  static LinearMapData identity(SystemPtr system) {
    LinearMapData f;
    f.source = system;
    f.target = system;
    f.matrix = ComplexMatrix::identity(system->basis_size());
    f.stage_correspondence.resize(system->stage_count());
    for (std::size_t b = 0; b < system->stage_count(); ++b)
      f.stage_correspondence[b] = b;
    return f;
  }

  /// Builds the coordinate matrix from the action on basis realizations; the
  /// images must lie in the target span.
  template <typename Action>
  static LinearMapData from_action(SystemPtr source, SystemPtr target,
                                   std::vector<std::size_t> correspondence,
                                   Action&& action) {
    LinearMapData f;
    f.source = std::move(source);
    f.target = std::move(target);
    f.stage_correspondence = std::move(correspondence);
    f.matrix =
        ComplexMatrix(f.target->basis_size(), f.source->basis_size());
    for (std::size_t j = 0; j < f.source->basis_size(); ++j) {
      const ComplexMatrix img = action(f.source->basis_element(j));
      const std::vector<Complex> c = f.target->coords_of(img);
      for (std::size_t i = 0; i < c.size(); ++i) f.matrix(i, j) = c[i];
    }
    f.validate();
    return f;
  }
};

inline LinearMapData compose(const LinearMapData& g, const LinearMapData& f) {
  if (f.target.get() != g.source.get())
    throw DimensionMismatch("composition domain mismatch");
  LinearMapData h;
  h.source = f.source;
  h.target = g.target;
  h.matrix = g.matrix * f.matrix;
  h.stage_correspondence.resize(g.stage_correspondence.size());
  for (std::size_t b = 0; b < g.stage_correspondence.size(); ++b)
    h.stage_correspondence[b] = f.stage_correspondence[g.stage_correspondence[b]];
  return h;
}

/// M_n(V) as a local system on C^{n·d}: stage projections I_n (x) P_alpha and
/// basis {unit} + matrix units tensored with the base basis.
inline SystemPtr level_lift_system(const SystemPtr& base, std::size_t n) {
  const std::size_t d = base->ambient_dim();
  std::vector<ComplexMatrix> basis;
  basis.push_back(ComplexMatrix::identity(n * d));
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t m = 0; m < base->basis_size(); ++m) {
        if (p == n - 1 && q == n - 1 && m == 0) continue;  // unit absorbs it
        basis.push_back(kron(ComplexMatrix::unit(n, p, q), base->basis_element(m)));
      }
  std::vector<Projection> stages;
  for (std::size_t s = 0; s < base->stage_count(); ++s) {
    const Projection& p = base->filtration().stage(s);
    std::vector<std::size_t> idx;
    if (p.coordinate()) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c : p.coords()) idx.push_back(i * d + c);
      stages.push_back(Projection::onto_coords(n * d, idx));
    } else {
      stages.push_back(Projection::from_matrix(
          kron(ComplexMatrix::identity(n), p.matrix())));
    }
  }
  return std::make_shared<LocalSystem>(
      std::move(basis),
      Filtration(n * d, std::move(stages), base->filtration().poset()),
      std::vector<std::string>{}, base->tolerances());
}

/// Samples source cone members at each level and checks that images land in
/// the target cones named by the stage correspondence; also exercises the
/// kernel condition on corner-null directions.  For full matrix systems
/// verify_local_cp_with_choi (choi.hpp) replaces the sampling by the exact
/// Choi decision.  Violations falsify the map, never the theory; they are
/// listed in the report.
inline Report verify_local_cp(const LinearMapData& map, std::size_t n_max,
                              std::size_t samples, RandomStream& rng) {
  map.validate();
  Report rep;
  rep.title = "local-cp";
  rep.info("unital", map.unital() ? "yes" : "no");
  const Tolerances& tol = map.target->tolerances();

  for (std::size_t beta = 0; beta < map.target->stage_count(); ++beta) {
    const std::size_t alpha = map.stage_correspondence[beta];
    std::size_t bad = 0;
    for (std::size_t n = 1; n <= n_max; ++n) {
      for (std::size_t s = 0; s < samples; ++s) {
        LevelElement x = sample_corner_member(map.source, alpha, n, rng);
        const LevelElement y = map.apply(x);
        if (cone_member_concrete(y, beta, tol).not_member()) ++bad;
      }
    }
    rep.check(bad == 0,
              "positivity.beta=" + std::to_string(beta) +
                  ".alpha=" + std::to_string(alpha),
              "violations=" + std::to_string(bad));

    // kernel condition: corner-null inputs must have corner-null images
    const auto junk = null_basis_indices(*map.source, alpha);
    if (!junk.empty()) {
      double worst = 0.0;
      for (std::size_t s = 0; s < std::min<std::size_t>(samples, 16); ++s) {
        std::vector<Complex> c(map.source->basis_size(), Complex(0.0, 0.0));
        for (std::size_t m : junk) c[m] = rng.complex_gaussian();
        LevelElement x(map.source, 1, {c});
        x = (x + x.adjoint()) * Complex(0.5, 0.0);
        const ComplexMatrix img_corner = map.apply(x).corner(beta);
        const double scale = 1.0 + x.realization().frobenius_norm();
        worst = std::max(worst, img_corner.frobenius_norm() / scale);
      }
      rep.check(worst <= tol.eps_decide,
                "kernel.beta=" + std::to_string(beta), "residual=" + num(worst));
    }
  }
  return rep;
}

struct LcbResult {
  double value{0.0};
  std::size_t used{0};
  std::size_t skipped{0};
};

/// Local completely bounded norm of phi at a stage pair, lower-bounded by
/// sampling: max over levels n <= n_max of ||phi^{(n)}(x)||_beta / ||x||_alpha.
/// The unit is always among the samples, so verified LUCP maps attain
/// ||phi(e)||_beta exactly.  Directed swap-type samples chase the cb norm of
/// transpose-like maps.
inline LcbResult lcb_norm(const LinearMapData& map, std::size_t alpha,
                          std::size_t beta, std::size_t n_max,
                          std::size_t samples, RandomStream& rng) {
  map.validate();
  const CornerConeOracle src(map.source);
  const CornerConeOracle dst(map.target);
  LcbResult out;

  auto consider = [&](const LevelElement& x) {
    const double nx = order_unit_seminorm(x, alpha, src);
    if (nx < 1e-9) {
      ++out.skipped;
      return;
    }
    const double ny = order_unit_seminorm(map.apply(x), beta, dst);
    out.value = std::max(out.value, ny / nx);
    ++out.used;
  };

  const std::size_t d = map.source->ambient_dim();
  for (std::size_t n = 1; n <= n_max; ++n) {
    consider(LevelElement::unit(map.source, n));
    if (map.source->full_span() && n >= 2 && n <= d) {
      // sum_ij E_ij (x) U E_ji U†, the swap pattern conjugated around
      for (std::size_t t = 0; t < 4; ++t) {
        const ComplexMatrix u = t == 0 ? ComplexMatrix::identity(d)
                                       : rng.unitary(d);
        std::vector<std::vector<Complex>> coords(n * n);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j)
            coords[i * n + j] = map.source->coords_of(
                (u * ComplexMatrix::unit(d, j, i)) * u.adjoint());
        consider(LevelElement(map.source, n, std::move(coords)));
      }
    }
    for (std::size_t s = 0; s < samples; ++s)
      consider(sample_hermitian(map.source, n, rng));
  }
  if (out.used < out.skipped)
    throw DegenerateSeminorm("seminorm vanished on most samples");
  return out;
}

}  // namespace losys
