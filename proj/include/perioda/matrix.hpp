#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "perioda/rational.hpp"

namespace perioda {

/// Dense square-or-rectangular matrix over Q, row-major.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  explicit Matrix(const std::vector<std::vector<Rational>>& rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows[0].size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) throw InputError("ragged matrix");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<Rational> column(std::size_t j) const {
    std::vector<Rational> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  std::vector<std::vector<Rational>> to_rows() const {
    std::vector<std::vector<Rational>> out(rows_, std::vector<Rational>(cols_));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out[i][j] = (*this)(i, j);
    return out;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw InputError("matrix shape mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }

  std::vector<Rational> apply(const std::vector<Rational>& v) const {
    if (v.size() != cols_) throw InputError("matrix/vector shape mismatch");
    std::vector<Rational> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      Rational acc = 0;
      for (std::size_t j = 0; j < cols_; ++j)
        if (v[j] != 0) acc += (*this)(i, j) * v[j];
      out[i] = acc;
    }
    return out;
  }

  Matrix scaled(const Rational& k) const {
    Matrix m = *this;
    for (auto& x : m.data_) x *= k;
    return m;
  }

  Rational determinant() const {
    if (rows_ != cols_) throw InputError("determinant of non-square matrix");
    Matrix m = *this;
    Rational det = 1;
    for (std::size_t c = 0; c < cols_; ++c) {
      std::size_t piv = c;
      while (piv < rows_ && m(piv, c) == 0) ++piv;
      if (piv == rows_) return 0;
      if (piv != c) {
        m.swap_rows(piv, c);
        det = -det;
      }
      det *= m(c, c);
      for (std::size_t r = c + 1; r < rows_; ++r) {
        if (m(r, c) == 0) continue;
        Rational f = m(r, c) / m(c, c);
        for (std::size_t k = c; k < cols_; ++k) m(r, k) -= f * m(c, k);
      }
    }
    return det;
  }

  Matrix inverse() const {
    if (rows_ != cols_) throw InputError("inverse of non-square matrix");
    std::size_t n = rows_;
    Matrix m = *this;
    Matrix inv = identity(n);
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t piv = c;
      while (piv < n && m(piv, c) == 0) ++piv;
      if (piv == n) throw InputError("singular matrix");
      m.swap_rows(piv, c);
      inv.swap_rows(piv, c);
      Rational d = m(c, c);
      for (std::size_t k = 0; k < n; ++k) {
        m(c, k) /= d;
        inv(c, k) /= d;
      }
      for (std::size_t r = 0; r < n; ++r) {
        if (r == c || m(r, c) == 0) continue;
        Rational f = m(r, c);
        for (std::size_t k = 0; k < n; ++k) {
          m(r, k) -= f * m(c, k);
          inv(r, k) -= f * inv(c, k);
        }
      }
    }
    return inv;
  }

  bool is_integral() const {
    for (const auto& x : data_)
      if (!is_integer(x)) return false;
    return true;
  }

  /// Least common denominator of all entries.
  Integer common_denominator() const {
    Integer d = 1;
    for (const auto& x : data_) d = lcm(d, x.get_den());
    return d;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t k = 0; k < cols_; ++k) std::swap((*this)(a, k), (*this)(b, k));
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Column-style Hermite normal form of an integer matrix whose columns span a
/// full-rank lattice in Z^rows. Returns a rows x rows lower-triangular basis
/// with positive diagonal and 0 <= H(i,j) < H(i,i) for j < i.
inline Matrix column_hnf(const Matrix& gens) {
  const std::size_t r = gens.rows();
  const std::size_t n = gens.cols();
  if (!gens.is_integral()) throw InputError("column_hnf expects an integer matrix");
  std::vector<std::vector<Integer>> col(n, std::vector<Integer>(r));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < r; ++i) col[j][i] = gens(i, j).get_num();

  auto axpy = [&](std::size_t dst, const Integer& k, std::size_t src) {
    if (k == 0) return;
    for (std::size_t i = 0; i < r; ++i) col[dst][i] += k * col[src][i];
  };

  std::size_t pivot = 0;
  for (std::size_t row = 0; row < r; ++row) {
    if (pivot >= n) throw InputError("generators do not span a full-rank lattice");
    // Euclid across columns pivot..n-1 on this row.
    for (;;) {
      std::size_t best = n;
      for (std::size_t j = pivot; j < n; ++j)
        if (col[j][row] != 0 && (best == n || abs(col[j][row]) < abs(col[best][row]))) best = j;
      if (best == n) throw InputError("generators do not span a full-rank lattice");
      std::swap(col[pivot], col[best]);
      bool done = true;
      for (std::size_t j = pivot + 1; j < n; ++j) {
        if (col[j][row] == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), col[j][row].get_mpz_t(), col[pivot][row].get_mpz_t());
        axpy(j, -q, pivot);
        if (col[j][row] != 0) done = false;
      }
      if (done) break;
    }
    if (col[pivot][row] < 0)
      for (auto& v : col[pivot]) v = -v;
    ++pivot;
  }
  // Reduce entries left of each diagonal.
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), col[j][i].get_mpz_t(), col[i][i].get_mpz_t());
      axpy(j, -q, i);
    }
  }
  Matrix h(r, r);
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t i = 0; i < r; ++i) h(i, j) = col[j][i];
  return h;
}

}  // namespace perioda
