#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "gapjohn/group.hpp"
#include "gapjohn/linalg.hpp"
#include "gapjohn/polytope.hpp"

namespace gapjohn {

// A full-rank rational lattice in R^d; basis vectors are the columns.
class Lattice {
 public:
  Lattice() = default;
  // Throws PreconditionError when the basis is not square and nonsingular.
  explicit Lattice(RationalMatrix basis);
  static Lattice standard(std::size_t dim);

  std::size_t dim() const { return basis_.rows(); }
  const RationalMatrix& basis() const { return basis_; }
  const RationalMatrix& inverse_basis() const { return inverse_; }
  Rational covolume() const;

  // Coefficients of x in the basis (rational in general).
  RationalVector coordinates(const RationalVector& x) const;
  bool contains(const RationalVector& x) const;
  RationalVector point(const std::vector<std::int64_t>& coeffs) const;

  friend bool operator==(const Lattice& a, const Lattice& b) { return a.basis_ == b.basis_; }

 private:
  RationalMatrix basis_;
  RationalMatrix inverse_;
};

struct HnfResult {
  RationalMatrix h;  // column Hermite normal form, zero columns last
  RationalMatrix u;  // unimodular, m * u = h
  std::size_t rank = 0;
};

// Column-style Hermite normal form of an integer matrix.  Rank-deficient
// input is allowed; the trailing columns of h are then zero.
HnfResult hnf(const RationalMatrix& m);

struct PrimitiveFactor {
  Integer n;
  RationalVector primitive;
};

// y = n * y' with y' primitive in the lattice.  Throws PreconditionError for
// y = 0 or y outside the lattice.
PrimitiveFactor primitive_factor(const RationalVector& y, const Lattice& lattice);

struct CompletedBasis {
  // Unimodularly equivalent basis whose last column is y'.
  Lattice basis;
  // Unimodular change of basis: old_basis * change = new basis.
  RationalMatrix change;
  // The map sending the new basis to the standard basis (y' -> e_d).
  RationalMatrix normalizing;
};

// Throws PreconditionError when y' is not primitive.
CompletedBasis complete_basis(const RationalVector& y_primitive, const Lattice& lattice);

struct ReducedBasisReport {
  Lattice basis;
  RationalMatrix change;  // old basis * change = reduced basis, |det| = 1
  std::vector<Rational> squared_lengths;
  // (prod |v_i|)^2 / covol^2 under the supplied form, exact.
  Rational defect_squared;
  double defect = 1;
};

inline constexpr int kLllDeltaNumerator = 99;
inline constexpr int kLllDeltaDenominator = 100;

// LLL reduction under the quadratic form x^T G x.  Throws PreconditionError
// unless G is symmetric positive definite.
ReducedBasisReport reduced_basis(const Lattice& lattice, const RationalMatrix& gram);

// Lattice points of B, returned as basis coefficients in lexicographic
// order.  Uses exact per-level bounds from successive projections.
std::vector<std::vector<std::int64_t>> enumerate_points(const SymmetricPolytope& body, const Lattice& lattice,
                                                        std::size_t cap = kDefaultCap);
// Same traversal with a visitor; stops as soon as visit returns false.
void for_each_point(const SymmetricPolytope& body, const Lattice& lattice,
                    const std::function<bool(const std::vector<std::int64_t>&)>& visit);
// Reference enumeration: bounding-box scan plus membership filter.
std::vector<std::vector<std::int64_t>> enumerate_points_box(const SymmetricPolytope& body,
                                                            const Lattice& lattice,
                                                            std::size_t cap = kDefaultCap);

// The subgroup of G generated by the given elements, as the column HNF of
// its preimage in Z^{r+s} (torsion relations m_i e_{r+i} included).  Equal
// subgroups give equal matrices.
RationalMatrix subgroup_lattice(const AmbientGroup& group, const std::vector<GroupElement>& generators);
bool same_subgroup(const AmbientGroup& group, const std::vector<GroupElement>& a,
                   const std::vector<GroupElement>& b);
// x in <generators>.
bool in_subgroup(const AmbientGroup& group, const std::vector<GroupElement>& generators, const GroupElement& x);

}  // namespace gapjohn
