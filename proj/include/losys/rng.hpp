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

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "losys/complex_matrix.hpp"

namespace losys {

/// xoshiro256++ seeded through splitmix64.  Self-contained so that every
/// randomized search replays bit-for-bit from the seed recorded in reports.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : s_) {
      x += 0x9e3779b97f4a7c15ULL;
      std::uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      word = z ^ (z >> 31);
    }
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform in [0, 1).
  double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(next_u64() % n); }

  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

  Complex complex_gaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return Complex(re, im);
  }

  std::vector<Complex> unit_vector(std::size_t n) {
    std::vector<Complex> v(n);
    for (auto& z : v) z = complex_gaussian();
    normalize(v);
    return v;
  }

  ComplexMatrix matrix_gaussian(std::size_t rows, std::size_t cols) {
    ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = complex_gaussian();
    return m;
  }

  ComplexMatrix hermitian(std::size_t n, double scale = 1.0) {
    ComplexMatrix g = matrix_gaussian(n, n);
    ComplexMatrix h = g.hermitized();
    return h * Complex(scale, 0.0);
  }

  ComplexMatrix psd(std::size_t n, double scale = 1.0) {
    ComplexMatrix g = matrix_gaussian(n, n);
    ComplexMatrix p = g.adjoint() * g;
    return p * Complex(scale / static_cast<double>(n), 0.0);
  }

  /// Unit-trace positive matrix (a density matrix).
  ComplexMatrix density(std::size_t n) {
    ComplexMatrix p = psd(n);
    const double t = p.trace().real();
    return p * Complex(1.0 / (t > 0.0 ? t : 1.0), 0.0);
  }

  /// Haar-ish unitary from Gram-Schmidt on a gaussian matrix;
  /// deterministic given the stream state.
  ComplexMatrix unitary(std::size_t n) {
    ComplexMatrix g = matrix_gaussian(n, n);
    // modified Gram-Schmidt on columns
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < j; ++k) {
        Complex proj = 0.0;
        for (std::size_t i = 0; i < n; ++i) proj += std::conj(g(i, k)) * g(i, j);
        for (std::size_t i = 0; i < n; ++i) g(i, j) -= proj * g(i, k);
      }
      double nrm = 0.0;
      for (std::size_t i = 0; i < n; ++i) nrm += std::norm(g(i, j));
      nrm = std::sqrt(nrm);
      if (nrm < 1e-12) {
        for (std::size_t i = 0; i < n; ++i) g(i, j) = (i == j) ? 1.0 : 0.0;
        nrm = 1.0;
      }
      for (std::size_t i = 0; i < n; ++i) g(i, j) /= nrm;
    }
    return g;
  }

  /// d x r matrix with orthonormal columns.
  ComplexMatrix isometry(std::size_t d, std::size_t r) {
    ComplexMatrix u = unitary(d);
    return u.block(0, 0, d, r);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4]{};
  double spare_{0.0};
  bool has_spare_{false};
};

}  // namespace losys
