#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "berezin/errors.hpp"
#include "berezin/scalar.hpp"

namespace berezin {

/// Dense row-major matrix over an exact or floating coefficient type.
template <Scalar T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
  Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw DimensionError("ragged matrix initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  /// Keeps the listed rows and columns, in the given order.
  Matrix select(std::span<const std::size_t> keep_rows, std::span<const std::size_t> keep_cols) const {
    Matrix s(keep_rows.size(), keep_cols.size());
    for (std::size_t i = 0; i < keep_rows.size(); ++i)
      for (std::size_t j = 0; j < keep_cols.size(); ++j) s(i, j) = (*this)(keep_rows[i], keep_cols[j]);
    return s;
  }

  /// Removes row i and column j.
  Matrix minor_matrix(std::size_t i, std::size_t j) const {
    std::vector<std::size_t> r, c;
    for (std::size_t k = 0; k < rows_; ++k)
      if (k != i) r.push_back(k);
    for (std::size_t k = 0; k < cols_; ++k)
      if (k != j) c.push_back(k);
    return select(r, c);
  }

  bool is_symmetric() const {
    if (!square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i + 1; j < cols_; ++j)
        if (!ScalarTraits<T>::equal((*this)(i, j), (*this)(j, i))) return false;
    return true;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw DimensionError("matrix product shape mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (ScalarTraits<T>::is_zero(aik)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionError("matrix sum shape mismatch");
    for (std::size_t k = 0; k < a.data_.size(); ++k) a.data_[k] += b.data_[k];
    return a;
  }

  friend Matrix operator*(const T& s, Matrix a) {
    for (auto& v : a.data_) v *= s;
    return a;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
    for (std::size_t k = 0; k < a.data_.size(); ++k)
      if (!ScalarTraits<T>::equal(a.data_[k], b.data_[k])) return false;
    return true;
  }

  template <Scalar U>
  Matrix<U> convert() const {
    Matrix<U> out(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) {
        if constexpr (std::is_same_v<T, U>) {
          out(i, j) = (*this)(i, j);
        } else {
          out(i, j) = static_cast<U>((*this)(i, j));
        }
      }
    return out;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

/// Determinant. Exact coefficients use fraction-free Bareiss elimination;
/// floating coefficients use partially pivoted Gaussian elimination. The
/// empty matrix has determinant 1.
template <Scalar T>
T determinant(const Matrix<T>& a) {
  if (!a.square()) throw DimensionError("determinant of non-square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return T(1);
  Matrix<T> m = a;
  T sign(1);
  if constexpr (ScalarTraits<T>::exact) {
    T prev(1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
      if (m(k, k) == 0) {
        std::size_t p = k + 1;
        while (p < n && m(p, k) == 0) ++p;
        if (p == n) return T(0);
        for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
        sign = -sign;
      }
      for (std::size_t i = k + 1; i < n; ++i) {
        for (std::size_t j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
        m(i, k) = 0;
      }
      prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
  } else {
    T det(1);
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t p = k;
      for (std::size_t i = k + 1; i < n; ++i)
        if (std::abs(m(i, k)) > std::abs(m(p, k))) p = i;
      if (m(p, k) == 0.0) return 0.0;
      if (p != k) {
        for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
        sign = -sign;
      }
      det *= m(k, k);
      for (std::size_t i = k + 1; i < n; ++i) {
        const T f = m(i, k) / m(k, k);
        for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
      }
    }
    return sign * det;
  }
}

/// Inverse by Gauss-Jordan elimination (pivoting on the first nonzero entry
/// in exact mode, largest magnitude in float mode).
template <Scalar T>
Matrix<T> inverse(const Matrix<T>& a) {
  if (!a.square()) throw DimensionError("inverse of non-square matrix");
  const std::size_t n = a.rows();
  Matrix<T> m = a;
  Matrix<T> inv = Matrix<T>::identity(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    if constexpr (ScalarTraits<T>::exact) {
      while (p < n && m(p, k) == 0) ++p;
    } else {
      for (std::size_t i = k + 1; i < n; ++i)
        if (std::abs(m(i, k)) > std::abs(m(p, k))) p = i;
      if (m(p, k) == 0.0) p = n;
    }
    if (p == n) throw SingularityError("matrix is singular");
    if (p != k)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(m(k, j), m(p, j));
        std::swap(inv(k, j), inv(p, j));
      }
    const T piv = m(k, k);
    for (std::size_t j = 0; j < n; ++j) {
      m(k, j) /= piv;
      inv(k, j) /= piv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || ScalarTraits<T>::is_zero(m(i, k))) continue;
      const T f = m(i, k);
      for (std::size_t j = 0; j < n; ++j) {
        m(i, j) -= f * m(k, j);
        inv(i, j) -= f * inv(k, j);
      }
    }
  }
  return inv;
}

/// True when the symmetric matrix `a` is positive-definite, decided by the
/// signs of the pivots of an unpivoted LDL^T factorization.
template <Scalar T>
bool is_positive_definite(const Matrix<T>& a) {
  if (!a.is_symmetric()) return false;
  const std::size_t n = a.rows();
  Matrix<T> m = a;
  for (std::size_t k = 0; k < n; ++k) {
    if (!(m(k, k) > T(0))) return false;
    for (std::size_t i = k + 1; i < n; ++i) {
      const T f = m(i, k) / m(k, k);
      for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return true;
}

template <Scalar T>
std::string to_string(const Matrix<T>& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    s += i ? ",[" : "[";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) s += ",";
      s += ScalarTraits<T>::to_string(m(i, j));
    }
    s += "]";
  }
  return s + "]";
}

}  // namespace berezin
