#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "gapjohn/rational.hpp"

namespace gapjohn {

using RationalVector = std::vector<Rational>;

// Dense row-major rational matrix.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  static RationalMatrix identity(std::size_t n);
  // Matrix whose columns are the given vectors (all of equal length).
  static RationalMatrix from_columns(const std::vector<RationalVector>& columns, std::size_t rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  RationalVector column(std::size_t c) const;
  RationalVector row(std::size_t r) const;
  void set_column(std::size_t c, const RationalVector& v);
  RationalMatrix transpose() const;

  friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
RationalVector operator*(const RationalMatrix& a, const RationalVector& x);

Rational dot(const RationalVector& a, const RationalVector& b);
// a^T G b
Rational bilinear(const RationalVector& a, const RationalMatrix& gram, const RationalVector& b);

Rational determinant(RationalMatrix m);
std::size_t matrix_rank(RationalMatrix m);
// Inverse of a square matrix, or nullopt when singular.
std::optional<RationalMatrix> inverse(const RationalMatrix& m);
// Solution of m x = b for square nonsingular m.
std::optional<RationalVector> solve(const RationalMatrix& m, const RationalVector& b);

bool is_integral(const RationalMatrix& m);
bool is_integral(const RationalVector& v);

// Exact positive-definiteness test (symmetric input) via leading minors.
bool is_positive_definite(const RationalMatrix& m);

}  // namespace gapjohn
