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

#include <numbers>

#include "losys/alou.hpp"

namespace losys {

namespace detail {

/// min/max of <l (x) xi, K (l (x) xi)> over unit product vectors by
/// alternating eigenvector steps: fixing xi the optimal l is an extreme
/// eigenvector of the partial contraction, and symmetrically.
struct ProductExtreme {
  double value{0.0};
  std::vector<Complex> lambda;  // C^n
  std::vector<Complex> xi;      // C^r
};

inline ProductExtreme product_seesaw(const ComplexMatrix& k, std::size_t n,
                                     std::size_t r, RandomStream& rng,
                                     std::size_t restarts, std::size_t iters,
                                     bool maximize) {
  ProductExtreme best;
  best.value = maximize ? -1e300 : 1e300;
  if (n == 0 || r == 0) {
    best.value = 0.0;
    return best;
  }
  auto block = [&](std::size_t p, std::size_t q) {
    return k.block(p * r, q * r, r, r);
  };
  const double sign = maximize ? -1.0 : 1.0;

  for (std::size_t restart = 0; restart < restarts; ++restart) {
    std::vector<Complex> xi =
        restart == 0 ? std::vector<Complex>(r, Complex(1.0 / std::sqrt(double(r)), 0.0))
                     : rng.unit_vector(r);
    std::vector<Complex> lam(n, Complex(0.0, 0.0));
    double value = 0.0;
    for (std::size_t it = 0; it < iters; ++it) {
      // optimal lambda for fixed xi
      ComplexMatrix a(n, n);
      for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q)
          a(p, q) = dot(xi, matvec(block(p, q), xi));
      const EigResult ea = eig_hermitian((a * Complex(sign, 0.0)).hermitized());
      lam.resize(n);
      for (std::size_t i = 0; i < n; ++i) lam[i] = ea.vectors(i, n - 1);
      // optimal xi for fixed lambda
      ComplexMatrix b(r, r);
      for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q) {
          const Complex w = std::conj(lam[p]) * lam[q];
          if (w == Complex(0.0, 0.0)) continue;
          b.add_scaled(w, block(p, q));
        }
      const EigResult eb = eig_hermitian((b * Complex(sign, 0.0)).hermitized());
      const double new_value = sign * eb.values.back();
      for (std::size_t i = 0; i < r; ++i) xi[i] = eb.vectors(i, r - 1);
      if (it > 2 && std::abs(new_value - value) < 1e-13 * (1.0 + std::abs(value))) {
        value = new_value;
        break;
      }
      value = new_value;
    }
    const bool better = maximize ? value > best.value : value < best.value;
    if (better) {
      best.value = value;
      best.lambda = lam;
      best.xi = xi;
    }
  }
  return best;
}

}  // namespace detail

/// Contraction sum_{p,q} conj(l_p) l_q x_{pq}, a level-1 element.
inline LevelElement lambda_contraction(const LevelElement& x,
                                       const std::vector<Complex>& lambda) {
  ComplexMatrix col(x.level(), 1);
  for (std::size_t p = 0; p < x.level(); ++p) col(p, 0) = lambda[p];
  return x.scalar_conjugate(col);
}

struct LominOptions {
  bool rigorous{false};
  std::size_t grid_theta{61};
  std::size_t grid_phi{120};
  std::size_t restarts{16};
  std::size_t iters{40};
};

/// Minimal local operator system structure over an A.L.O.U. space: the
/// level-n cone holds the matrices whose lambda-contractions all land in the
/// level-1 cone.  NotMember comes with a re-verified contraction witness;
/// Member is certified through the concrete corner shortcut or, in rigorous
/// mode at n = 2, an exhaustive grid over the lambda sphere.  Everything else
/// is Unresolved with search diagnostics.
class LominOracle final : public ConeOracle {
 public:
  LominOracle(AlouSpace base, std::uint64_t seed, LominOptions opts = {})
      : base_(std::move(base)), seed_(seed), opts_(opts) {}

  const AlouSpace& base() const { return base_; }

  ConeVerdict membership(const LevelElement& x, std::size_t stage) const override {
    const Tolerances& tol = base_.space()->tolerances();
    if (x.level() == 1) return base_.level1()->membership(x, stage);
    if (!x.hermitian(tol.eps_herm))
      throw NonHermitianElement("lomin membership of a non-hermitian element");

    Diagnostics diag;

    // sufficient condition: a positive corner is block-positive
    if (base_.corner_backed() &&
        cone_member_concrete(x, stage, tol).member()) {
      diag.note = "corner-positive";
      return ConeVerdict::yes(std::move(diag));
    }

    // witness search by alternating eigenvectors on the corner blocks
    const ComplexMatrix corner = x.corner(stage);
    const std::size_t n = x.level();
    const std::size_t r = corner.rows() / n;
    RandomStream rng(seed_ ^ (0x9e3779b97f4a7c15ULL * (stage + 1)));
    detail::ProductExtreme search;
    if (base_.corner_backed() && r > 0) {
      search = detail::product_seesaw(corner, n, r, rng, opts_.restarts,
                                      opts_.iters, /*maximize=*/false);
      diag.add("seesaw_min", search.value);
      if (!search.lambda.empty()) {
        ConeVerdict probe =
            base_.level1()->membership(lambda_contraction(x, search.lambda), stage);
        if (probe.not_member()) return witness_from(search.lambda, probe, diag);
      }
    } else {
      // oracle-only level-1 cones: random directions
      for (std::size_t t = 0; t < opts_.restarts * 8; ++t) {
        const std::vector<Complex> lam = rng.unit_vector(n);
        ConeVerdict probe =
            base_.level1()->membership(lambda_contraction(x, lam), stage);
        if (probe.not_member()) return witness_from(lam, probe, diag);
      }
    }

    if (opts_.rigorous && n == 2) return rigorous_grid(x, stage, diag);

    diag.note = "no violating contraction found within the search budget";
    return ConeVerdict::undecided(std::move(diag));
  }

  const SystemPtr& space() const override { return base_.space(); }

  std::string name() const override { return "lomin"; }

 private:
  static ConeVerdict witness_from(const std::vector<Complex>& lambda,
                                  const ConeVerdict& level1_verdict,
                                  Diagnostics diag) {
    WitnessVector w;
    w.vector = lambda;
    w.context = "lambda";
    if (const auto* inner = std::get_if<WitnessVector>(&level1_verdict.certificate)) {
      w.violation = inner->violation;
      w.threshold = inner->threshold;
    }
    return ConeVerdict::no(std::move(w), std::move(diag));
  }

  /// Exhaustive scan of the lambda sphere at n = 2 (global phase quotiented
  /// away): lambda(theta, phi) = (cos theta, e^{i phi} sin theta).  The grid
  /// minimum together with the Lipschitz constant 2||K|| bounds how far the
  /// true minimum can hide between grid points; both are recorded.
  ConeVerdict rigorous_grid(const LevelElement& x, std::size_t stage,
                            Diagnostics diag) const {
    const Tolerances& tol = base_.space()->tolerances();
    double grid_min = 1e300;
    const bool track_values = base_.corner_backed();
    for (std::size_t it = 0; it < opts_.grid_theta; ++it) {
      const double theta = (std::numbers::pi / 2.0) * double(it) /
                           double(opts_.grid_theta - 1);
      for (std::size_t ip = 0; ip < opts_.grid_phi; ++ip) {
        const double phi = 2.0 * std::numbers::pi * double(ip) /
                           double(opts_.grid_phi);
        const std::vector<Complex> lam{
            Complex(std::cos(theta), 0.0),
            std::polar(std::sin(theta), phi)};
        const LevelElement contr = lambda_contraction(x, lam);
        if (track_values) {
          const EigResult e = eig_hermitian(contr.corner(stage).hermitized());
          const double lam_min = e.values.empty() ? 0.0 : e.values.back();
          grid_min = std::min(grid_min, lam_min);
          if (lam_min < -tol.eps_psd) {
            ConeVerdict probe = base_.level1()->membership(contr, stage);
            if (probe.not_member()) return witness_from(lam, probe, diag);
          }
        } else if (base_.level1()->contains(contr, stage) ==
                   Membership::not_member) {
          ConeVerdict probe = base_.level1()->membership(contr, stage);
          if (probe.not_member()) return witness_from(lam, probe, diag);
        }
      }
    }
    diag.add("grid_points", double(opts_.grid_theta * opts_.grid_phi));
    if (track_values) {
      diag.add("grid_min", grid_min);
      const double corner_scale = x.corner(stage).frobenius_norm();
      const double spacing = (std::numbers::pi / 2.0) / double(opts_.grid_theta - 1);
      diag.add("lipschitz_gap", 2.0 * corner_scale * spacing);
    }
    diag.note = "rigorous-grid";
    return ConeVerdict::yes(std::move(diag));
  }

  AlouSpace base_;
  std::uint64_t seed_;
  LominOptions opts_;
};

inline std::shared_ptr<const LominOracle> lomin_cones(AlouSpace base,
                                                      std::uint64_t seed,
                                                      LominOptions opts = {}) {
  return std::make_shared<LominOracle>(std::move(base), seed, opts);
}

/// gram-style membership: lomin_member as a free function mirroring the other
/// cone entry points.
inline ConeVerdict lomin_member(const LevelElement& x, std::size_t stage,
                                const AlouSpace& base, std::uint64_t seed,
                                LominOptions opts = {}) {
  return LominOracle(base, seed, opts).membership(x, stage);
}

}  // namespace losys
