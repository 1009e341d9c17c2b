#include "gapjohn/linalg.hpp"

#include <utility>

#include "gapjohn/errors.hpp"

namespace gapjohn {

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::from_columns(const std::vector<RationalVector>& columns, std::size_t rows) {
  RationalMatrix m(rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != rows) throw PreconditionError("column length mismatch");
    m.set_column(c, columns[c]);
  }
  return m;
}

RationalVector RationalMatrix::column(std::size_t c) const {
  RationalVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

RationalVector RationalMatrix::row(std::size_t r) const {
  return RationalVector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                        data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

void RationalMatrix::set_column(std::size_t c, const RationalVector& v) {
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.cols() != b.rows()) throw PreconditionError("matrix product dimension mismatch");
  RationalMatrix p(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) p(i, j) += a(i, k) * b(k, j);
    }
  return p;
}

RationalVector operator*(const RationalMatrix& a, const RationalVector& x) {
  if (a.cols() != x.size()) throw PreconditionError("matrix-vector dimension mismatch");
  RationalVector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) y[i] += a(i, k) * x[k];
  return y;
}

Rational dot(const RationalVector& a, const RationalVector& b) {
  if (a.size() != b.size()) throw PreconditionError("dot product length mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Rational bilinear(const RationalVector& a, const RationalMatrix& gram, const RationalVector& b) {
  return dot(a, gram * b);
}

namespace {

// Gaussian elimination in place; returns rank and accumulates the
// determinant sign/product when requested.
std::size_t eliminate(RationalMatrix& m, Rational* det) {
  std::size_t rank = 0;
  if (det) *det = 1;
  for (std::size_t col = 0; col < m.cols() && rank < m.rows(); ++col) {
    std::size_t pivot = rank;
    while (pivot < m.rows() && m(pivot, col) == 0) ++pivot;
    if (pivot == m.rows()) {
      if (det) *det = 0;
      continue;
    }
    if (pivot != rank) {
      for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(pivot, c), m(rank, c));
      if (det) *det = -*det;
    }
    const Rational p = m(rank, col);
    if (det) *det *= p;
    for (std::size_t r = rank + 1; r < m.rows(); ++r) {
      if (m(r, col) == 0) continue;
      const Rational f = m(r, col) / p;
      for (std::size_t c = col; c < m.cols(); ++c) m(r, c) -= f * m(rank, c);
    }
    ++rank;
  }
  return rank;
}

}  // namespace

Rational determinant(RationalMatrix m) {
  if (m.rows() != m.cols()) throw PreconditionError("determinant of a non-square matrix");
  if (m.rows() == 0) return 1;
  Rational det;
  std::size_t rank = eliminate(m, &det);
  return rank == m.rows() ? det : Rational(0);
}

std::size_t matrix_rank(RationalMatrix m) { return eliminate(m, nullptr); }

std::optional<RationalMatrix> inverse(const RationalMatrix& m) {
  const std::size_t n = m.rows();
  if (n != m.cols()) throw PreconditionError("inverse of a non-square matrix");
  RationalMatrix a(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) = m(i, j);
    a(i, n + i) = 1;
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a(pivot, col) == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    if (pivot != col)
      for (std::size_t c = 0; c < 2 * n; ++c) std::swap(a(pivot, c), a(col, c));
    const Rational p = a(col, col);
    for (std::size_t c = 0; c < 2 * n; ++c) a(col, c) /= p;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a(r, col) == 0) continue;
      const Rational f = a(r, col);
      for (std::size_t c = 0; c < 2 * n; ++c) a(r, c) -= f * a(col, c);
    }
  }
  RationalMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = a(i, n + j);
  return inv;
}

std::optional<RationalVector> solve(const RationalMatrix& m, const RationalVector& b) {
  const std::size_t n = m.rows();
  if (n != m.cols() || b.size() != n) throw PreconditionError("solve dimension mismatch");
  RationalMatrix a(n, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) = m(i, j);
    a(i, n) = b[i];
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a(pivot, col) == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    if (pivot != col)
      for (std::size_t c = 0; c <= n; ++c) std::swap(a(pivot, c), a(col, c));
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a(r, col) == 0) continue;
      const Rational f = a(r, col) / a(col, col);
      for (std::size_t c = col; c <= n; ++c) a(r, c) -= f * a(col, c);
    }
  }
  RationalVector x(n);
  for (std::size_t i = n; i-- > 0;) {
    Rational s = a(i, n);
    for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

bool is_integral(const RationalMatrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (m(r, c).get_den() != 1) return false;
  return true;
}

bool is_integral(const RationalVector& v) {
  for (const auto& x : v)
    if (x.get_den() != 1) return false;
  return true;
}

bool is_positive_definite(const RationalMatrix& m) {
  const std::size_t n = m.rows();
  if (n != m.cols()) return false;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (m(i, j) != m(j, i)) return false;
  for (std::size_t k = 1; k <= n; ++k) {
    RationalMatrix minor(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) minor(i, j) = m(i, j);
    if (determinant(minor) <= 0) return false;
  }
  return true;
}

}  // namespace gapjohn
