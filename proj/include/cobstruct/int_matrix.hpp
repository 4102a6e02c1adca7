#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cobstruct/errors.hpp"

namespace cobstruct {

// Expression templates off so temporaries like (a % b) are plain values.
using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;

/// Dense row-major matrix of arbitrary-precision integers.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<long long>> init) {
    rows_ = init.size();
    cols_ = rows_ == 0 ? 0 : init.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw ValidationError("IntMatrix: ragged initializer");
      for (long long x : row) data_.emplace_back(x);
    }
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  BigInt& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const BigInt& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const BigInt& x) { return x.is_zero(); });
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, a), (*this)(r, b));
  }
  // row[dst] += k * row[src]
  void add_row(std::size_t dst, std::size_t src, const BigInt& k) {
    if (k.is_zero()) return;
    for (std::size_t c = 0; c < cols_; ++c) (*this)(dst, c) += k * (*this)(src, c);
  }
  // col[dst] += k * col[src]
  void add_col(std::size_t dst, std::size_t src, const BigInt& k) {
    if (k.is_zero()) return;
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, dst) += k * (*this)(r, src);
  }
  void negate_row(std::size_t r) {
    for (std::size_t c = 0; c < cols_; ++c) (*this)(r, c) = -(*this)(r, c);
  }

  /// Columns [first, last) as a new matrix.
  IntMatrix col_range(std::size_t first, std::size_t last) const {
    IntMatrix out(rows_, last - first);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = first; c < last; ++c) out(r, c - first) = (*this)(r, c);
    return out;
  }
  IntMatrix row_range(std::size_t first, std::size_t last) const {
    IntMatrix out(last - first, cols_);
    for (std::size_t r = first; r < last; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out(r - first, c) = (*this)(r, c);
    return out;
  }

  /// [a | b]
  static IntMatrix hconcat(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows() != b.rows()) throw PreconditionError("hconcat: row mismatch");
    IntMatrix out(a.rows(), a.cols() + b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
      for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a(r, c);
      for (std::size_t c = 0; c < b.cols(); ++c) out(r, a.cols() + c) = b(r, c);
    }
    return out;
  }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols() != b.rows()) throw PreconditionError("matrix product: dimension mismatch");
    IntMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t k = 0; k < a.cols(); ++k) {
        const BigInt& aik = a(i, k);
        if (aik.is_zero()) continue;
        for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

  std::string to_string() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t r = 0; r < rows_; ++r) {
      os << (r ? ", [" : "[");
      for (std::size_t c = 0; c < cols_; ++c) os << (c ? ", " : "") << (*this)(r, c);
      os << ']';
    }
    os << ']';
    return os.str();
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BigInt> data_;
};

inline std::ostream& operator<<(std::ostream& os, const IntMatrix& m) { return os << m.to_string(); }

/// Determinant by fraction-free (Bareiss) elimination. Square matrices only.
inline BigInt determinant(IntMatrix m) {
  if (m.rows() != m.cols()) throw PreconditionError("determinant: matrix not square");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  BigInt sign = 1;
  BigInt prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k).is_zero()) {
      std::size_t p = k + 1;
      while (p < n && m(p, k).is_zero()) ++p;
      if (p == n) return 0;
      m.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

struct SmithDecomposition {
  IntMatrix u;  // rows x rows, unimodular
  IntMatrix d;  // rows x cols, diagonal, d_i | d_{i+1}, d_i >= 0
  IntMatrix v;  // cols x cols, unimodular
  std::size_t rank = 0;
};

/// d = u * m * v with u, v unimodular and d in Smith normal form.
inline SmithDecomposition smith_normal_form(const IntMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  IntMatrix a = m;
  IntMatrix u = IntMatrix::identity(rows);
  IntMatrix v = IntMatrix::identity(cols);
  std::size_t rank = 0;

  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    bool found_pivot = false;
    for (;;) {
      // smallest nonzero entry of the trailing block becomes the pivot
      std::size_t pi = rows, pj = cols;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j) {
          if (a(i, j).is_zero()) continue;
          if (pi == rows || abs(a(i, j)) < abs(a(pi, pj))) {
            pi = i;
            pj = j;
          }
        }
      if (pi == rows) break;
      found_pivot = true;
      a.swap_rows(t, pi);
      u.swap_rows(t, pi);
      a.swap_cols(t, pj);
      v.swap_cols(t, pj);

      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a(i, t).is_zero()) continue;
        BigInt q = a(i, t) / a(t, t);
        a.add_row(i, t, -q);
        u.add_row(i, t, -q);
        if (!a(i, t).is_zero()) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a(t, j).is_zero()) continue;
        BigInt q = a(t, j) / a(t, t);
        a.add_col(j, t, -q);
        v.add_col(j, t, -q);
        if (!a(t, j).is_zero()) clean = false;
      }
      if (!clean) continue;

      // pivot must divide the whole trailing block
      std::size_t bad_row = rows;
      for (std::size_t i = t + 1; i < rows && bad_row == rows; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (!(a(i, j) % a(t, t)).is_zero()) {
            bad_row = i;
            break;
          }
      if (bad_row == rows) break;
      a.add_row(t, bad_row, 1);
      u.add_row(t, bad_row, 1);
    }
    if (!found_pivot) break;
    if (a(t, t) < 0) {
      a.negate_row(t);
      u.negate_row(t);
    }
    ++rank;
  }
  return {std::move(u), std::move(a), std::move(v), rank};
}

/// Basis (as columns) of the integer kernel {x : m x = 0}.
inline IntMatrix integer_kernel(const IntMatrix& m) {
  auto snf = smith_normal_form(m);
  return snf.v.col_range(snf.rank, m.cols());
}

/// Basis (as columns) of the lattice spanned by the columns of m.
inline IntMatrix lattice_basis(const IntMatrix& m) {
  auto snf = smith_normal_form(m);
  return (m * snf.v).col_range(0, snf.rank);
}

/// Solves basis * c = x for integer c, where basis has full column rank.
/// Throws ValidationError when some column of x is outside the lattice.
inline IntMatrix solve_in_lattice(const IntMatrix& basis, const IntMatrix& x) {
  const std::size_t k = basis.cols();
  auto snf = smith_normal_form(basis);
  if (snf.rank != k) throw PreconditionError("solve_in_lattice: basis is not of full column rank");
  IntMatrix ux = snf.u * x;
  IntMatrix y(k, x.cols());
  for (std::size_t c = 0; c < x.cols(); ++c) {
    for (std::size_t i = 0; i < k; ++i) {
      const BigInt& di = snf.d(i, i);
      if (!(ux(i, c) % di).is_zero()) throw ValidationError("solve_in_lattice: vector outside lattice");
      y(i, c) = ux(i, c) / di;
    }
    for (std::size_t i = k; i < ux.rows(); ++i)
      if (!ux(i, c).is_zero()) throw ValidationError("solve_in_lattice: vector outside span");
  }
  return snf.v * y;
}

}  // namespace cobstruct
