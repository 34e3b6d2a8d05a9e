#pragma once

// Small dense matrices over double or Jet. Pivoting compares values only, so
// the same elimination produces exact derivatives when the scalar is a Jet.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qstat/jet.hpp"

namespace qstat {

inline double value_of(double x) { return x; }
inline double value_of(const Jet& x) { return x.value(); }

class SingularMatrix : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T(0.0)) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1.0);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Matrix<double> values() const {
    Matrix<double> m(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) m.data_[i] = value_of(data_[i]);
    return m;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("Matrix: shape mismatch in product");
    Matrix r(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) {
        T s(0.0);
        for (std::size_t k = 0; k < a.cols_; ++k) s = s + a(i, k) * b(k, j);
        r(i, j) = s;
      }
    return r;
  }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

 private:
  template <class>
  friend class Matrix;

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

namespace detail {

// Gauss-Jordan on [a | b]; returns the determinant of a and leaves a^{-1} b in b.
template <class T>
T eliminate(Matrix<T> a, Matrix<T>& b, bool throw_if_singular) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.rows() != n) throw std::invalid_argument("Matrix: elimination needs a square system");
  T det(1.0);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(value_of(a(r, col))) > std::fabs(value_of(a(pivot, col)))) pivot = r;
    if (value_of(a(pivot, col)) == 0.0) {
      if (throw_if_singular) throw SingularMatrix("matrix is singular");
      return T(0.0);
    }
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(pivot, c), a(col, c));
      for (std::size_t c = 0; c < b.cols(); ++c) std::swap(b(pivot, c), b(col, c));
      det = -det;
    }
    const T p = a(col, col);
    det = det * p;
    const T inv = T(1.0) / p;
    for (std::size_t c = 0; c < n; ++c) a(col, c) = a(col, c) * inv;
    for (std::size_t c = 0; c < b.cols(); ++c) b(col, c) = b(col, c) * inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const T f = a(r, col);
      for (std::size_t c = 0; c < n; ++c) a(r, c) = a(r, c) - f * a(col, c);
      for (std::size_t c = 0; c < b.cols(); ++c) b(r, c) = b(r, c) - f * b(col, c);
    }
  }
  return det;
}

template <>
inline double eliminate(Matrix<double> a, Matrix<double>& b, bool throw_if_singular) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.rows() != n) throw std::invalid_argument("Matrix: elimination needs a square system");
  double det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(a(r, col)) > std::fabs(a(pivot, col))) pivot = r;
    if (a(pivot, col) == 0.0) {
      if (throw_if_singular) throw SingularMatrix("matrix is singular");
      return 0.0;
    }
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(pivot, c), a(col, c));
      for (std::size_t c = 0; c < b.cols(); ++c) std::swap(b(pivot, c), b(col, c));
      det = -det;
    }
    const double p = a(col, col);
    det *= p;
    for (std::size_t c = 0; c < n; ++c) a(col, c) /= p;
    for (std::size_t c = 0; c < b.cols(); ++c) b(col, c) /= p;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a(r, col);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < n; ++c) a(r, c) -= f * a(col, c);
      for (std::size_t c = 0; c < b.cols(); ++c) b(r, c) -= f * b(col, c);
    }
  }
  return det;
}

}  // namespace detail

template <class T>
T determinant(const Matrix<T>& a) {
  Matrix<T> b(a.rows(), 0);
  return detail::eliminate(a, b, false);
}

template <class T>
Matrix<T> inverse(const Matrix<T>& a) {
  Matrix<T> b = Matrix<T>::identity(a.rows());
  detail::eliminate(a, b, true);
  return b;
}

template <class T>
std::vector<T> solve(const Matrix<T>& a, const std::vector<T>& rhs) {
  Matrix<T> b(rhs.size(), 1);
  for (std::size_t i = 0; i < rhs.size(); ++i) b(i, 0) = rhs[i];
  detail::eliminate(a, b, true);
  std::vector<T> x(rhs.size());
  for (std::size_t i = 0; i < rhs.size(); ++i) x[i] = b(i, 0);
  return x;
}

}  // namespace qstat
