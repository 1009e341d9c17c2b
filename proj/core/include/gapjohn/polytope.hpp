#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <vector>

#include "gapjohn/linalg.hpp"
#include "gapjohn/rational.hpp"

namespace gapjohn {

// |<a, x>| <= b
struct SymmetricConstraint {
  RationalVector a;
  Rational b;

  friend bool operator==(const SymmetricConstraint&, const SymmetricConstraint&) = default;
};

// A bounded, origin-symmetric rational polytope in H-representation.
//
// Constraints are stored normalized: b = 1, first nonzero entry of a
// positive, duplicates removed, sorted lexicographically.  A zero-dimensional
// polytope is the single point {0}.  The vertex list is computed on demand
// and shared between copies.
class SymmetricPolytope {
 public:
  SymmetricPolytope() : SymmetricPolytope(0, {}) {}
  // Throws PreconditionError for non-positive b, dimension mismatches or
  // unbounded bodies (normals not spanning R^dim).
  SymmetricPolytope(std::size_t dim, std::vector<SymmetricConstraint> constraints);

  static SymmetricPolytope box(const std::vector<Rational>& half_widths);
  static SymmetricPolytope cube(std::size_t dim, const Rational& half_width = 1);
  static SymmetricPolytope cross_polytope(std::size_t dim);

  std::size_t dim() const { return dim_; }
  const std::vector<SymmetricConstraint>& constraints() const { return constraints_; }

  bool contains(const RationalVector& x) const;

  SymmetricPolytope dilate(const Rational& t) const;
  // The image {U x : x in B}; throws PreconditionError when U is singular.
  SymmetricPolytope transform(const RationalMatrix& u) const;
  // Shadow under the projection dropping the last coordinate.
  SymmetricPolytope project() const;
  // Drops constraints that do not define facets.
  SymmetricPolytope pruned() const;

  const std::vector<RationalVector>& vertices() const;
  // Exact Lebesgue measure; throws PreconditionError when dim > dim_limit.
  Rational volume(std::size_t dim_limit = 4) const;
  // Per-coordinate maxima |x_i| over the body.
  std::vector<Rational> bounding_box() const;

  friend bool operator==(const SymmetricPolytope& a, const SymmetricPolytope& b) {
    return a.dim_ == b.dim_ && a.constraints_ == b.constraints_;
  }

 private:
  struct VertexCache {
    std::once_flag once;
    std::vector<RationalVector> vertices;
  };

  std::size_t dim_ = 0;
  std::vector<SymmetricConstraint> constraints_;
  std::shared_ptr<VertexCache> cache_;
};

// E = {x : x^T Q x <= 1}.
struct Ellipsoid {
  RationalMatrix shape;
  // B is contained in rho * E; rho_squared is exact.
  Rational rho_squared;
  double rho = 0;
  // rho <= (1 + eps) sqrt(d) held on this run.
  bool within_contract = false;
};

// Approximate maximal-volume ellipsoid inscribed in B: float iteration on
// the polar body, rationalized and rescaled so that E is contained in B
// exactly.  Throws PreconditionError for zero-dimensional bodies.
Ellipsoid inscribed_ellipsoid(const SymmetricPolytope& body, double eps = 0.01);

}  // namespace gapjohn
