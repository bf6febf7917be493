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
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "losys/errors.hpp"

namespace losys {

using Complex = std::complex<double>;

/// Dense complex matrix, row-major.  Values are immutable in spirit: every
/// operation returns a fresh matrix, mutation is limited to construction.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, Complex(0.0, 0.0)) {}

  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
      : rows_(rows), cols_(cols), a_(std::move(entries)) {
    if (a_.size() != rows_ * cols_)
      throw DimensionMismatch("entry count does not match rows*cols");
  }

  /// Row-major initializer, e.g. ComplexMatrix::of(2, 2, {1, 0, 0, 1}).
  static ComplexMatrix of(std::size_t rows, std::size_t cols,
                          std::initializer_list<Complex> entries) {
    return ComplexMatrix(rows, cols, std::vector<Complex>(entries));
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix zeros(std::size_t rows, std::size_t cols) {
    return ComplexMatrix(rows, cols);
  }

  static ComplexMatrix diag(const std::vector<double>& d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  /// Matrix unit E_{ij} of size n.
  static ComplexMatrix unit(std::size_t n, std::size_t i, std::size_t j) {
    ComplexMatrix m(n, n);
    m(i, j) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  bool empty() const { return a_.empty(); }

  Complex& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const {
    return a_[i * cols_ + j];
  }

  const std::vector<Complex>& entries() const { return a_; }
  std::vector<Complex>& entries() { return a_; }

  ComplexMatrix adjoint() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
  }

  ComplexMatrix transpose() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
    return m;
  }

  ComplexMatrix conjugate() const {
    ComplexMatrix m(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] = std::conj(a_[k]);
    return m;
  }

  Complex trace() const {
    if (!square()) throw DimensionMismatch("trace of non-square matrix");
    Complex t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const Complex& z : a_) s += std::norm(z);
    return std::sqrt(s);
  }

  double max_abs() const {
    double m = 0.0;
    for (const Complex& z : a_) m = std::max(m, std::abs(z));
    return m;
  }

  /// max_{ij} |M - M†| entrywise.
  double hermiticity_defect() const {
    if (!square()) return frobenius_norm() + 1.0;
    double m = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i; j < cols_; ++j)
        m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return m;
  }

  bool is_hermitian(double eps_herm) const {
    return square() && hermiticity_defect() <= eps_herm;
  }

  /// (M + M†)/2.
  ComplexMatrix hermitized() const {
    if (!square()) throw DimensionMismatch("hermitize non-square matrix");
    ComplexMatrix m(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        m(i, j) = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
    return m;
  }

  ComplexMatrix operator+(const ComplexMatrix& o) const {
    check_same_shape(o);
    ComplexMatrix m(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] = a_[k] + o.a_[k];
    return m;
  }

  ComplexMatrix operator-(const ComplexMatrix& o) const {
    check_same_shape(o);
    ComplexMatrix m(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] = a_[k] - o.a_[k];
    return m;
  }

  ComplexMatrix operator-() const {
    ComplexMatrix m(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] = -a_[k];
    return m;
  }

  ComplexMatrix operator*(const ComplexMatrix& o) const {
    if (cols_ != o.rows_) throw DimensionMismatch("matrix product shape");
    ComplexMatrix m(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t k = 0; k < cols_; ++k) {
        const Complex aik = (*this)(i, k);
        if (aik == Complex(0.0, 0.0)) continue;
        const Complex* brow = &o.a_[k * o.cols_];
        Complex* mrow = &m.a_[i * o.cols_];
        for (std::size_t j = 0; j < o.cols_; ++j) mrow[j] += aik * brow[j];
      }
    }
    return m;
  }

  ComplexMatrix operator*(const Complex& c) const {
    ComplexMatrix m(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] = c * a_[k];
    return m;
  }

  friend ComplexMatrix operator*(const Complex& c, const ComplexMatrix& m) {
    return m * c;
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    check_same_shape(o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
  }

  ComplexMatrix& add_scaled(const Complex& c, const ComplexMatrix& o) {
    check_same_shape(o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += c * o.a_[k];
    return *this;
  }

  bool approx_equal(const ComplexMatrix& o, double tol) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) return false;
    double m = 0.0;
    for (std::size_t k = 0; k < a_.size(); ++k)
      m = std::max(m, std::abs(a_[k] - o.a_[k]));
    return m <= tol;
  }

  /// Copies `block` into position (r0, c0).
  void place(std::size_t r0, std::size_t c0, const ComplexMatrix& block) {
    if (r0 + block.rows() > rows_ || c0 + block.cols() > cols_)
      throw DimensionMismatch("block placement out of range");
    for (std::size_t i = 0; i < block.rows(); ++i)
      for (std::size_t j = 0; j < block.cols(); ++j)
        (*this)(r0 + i, c0 + j) = block(i, j);
  }

  ComplexMatrix block(std::size_t r0, std::size_t c0, std::size_t r,
                      std::size_t c) const {
    if (r0 + r > rows_ || c0 + c > cols_)
      throw DimensionMismatch("block extraction out of range");
    ComplexMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m(i, j) = (*this)(r0 + i, c0 + j);
    return m;
  }

  /// Rows/cols restricted to the given index set (gather).
  ComplexMatrix gather(const std::vector<std::size_t>& idx) const {
    ComplexMatrix m(idx.size(), idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < idx.size(); ++j)
        m(i, j) = (*this)(idx[i], idx[j]);
    return m;
  }

 private:
  void check_same_shape(const ComplexMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw DimensionMismatch("shape mismatch");
  }

  std::size_t rows_{0}, cols_{0};
  std::vector<Complex> a_;
};

/// Kronecker product; (kron(A,B))[(i*rB+k),(j*cB+l)] = A[i,j]*B[k,l].
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix m(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex(0.0, 0.0)) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          m(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return m;
}

/// Hilbert-Schmidt pairing tr(A† B).
inline Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("hs_inner shape");
  Complex s = 0.0;
  const auto& ae = a.entries();
  const auto& be = b.entries();
  for (std::size_t k = 0; k < ae.size(); ++k) s += std::conj(ae[k]) * be[k];
  return s;
}

/// Real pairing Re tr(A† B); equals tr(AB) for hermitian A, B.
inline double pairing(const ComplexMatrix& a, const ComplexMatrix& b) {
  return hs_inner(a, b).real();
}

inline ComplexMatrix matvec_outer(const std::vector<Complex>& v) {
  ComplexMatrix m(v.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j)
      m(i, j) = v[i] * std::conj(v[j]);
  return m;
}

inline std::vector<Complex> matvec(const ComplexMatrix& m,
                                  const std::vector<Complex>& v) {
  if (m.cols() != v.size()) throw DimensionMismatch("matvec shape");
  std::vector<Complex> out(m.rows(), Complex(0.0, 0.0));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Complex s = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) s += m(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

inline Complex dot(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.size() != b.size()) throw DimensionMismatch("dot shape");
  Complex s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += std::conj(a[k]) * b[k];
  return s;
}

inline double vec_norm(const std::vector<Complex>& v) {
  double s = 0.0;
  for (const Complex& z : v) s += std::norm(z);
  return std::sqrt(s);
}

inline void normalize(std::vector<Complex>& v) {
  const double n = vec_norm(v);
  if (n > 0.0)
    for (Complex& z : v) z /= n;
}

}  // namespace losys
