#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gapjohn/lattice.hpp"
#include "gapjohn/polytope.hpp"
#include "gapjohn/progression.hpp"

// Naive reference implementations.  Nothing here calls the progression,
// lattice or covering algorithms; only the data types are shared.
namespace gapjohn::oracle {

struct VerificationReport {
  std::string claim;
  bool holds = true;
  std::optional<GroupElement> counterexample;
  std::size_t elements_checked = 0;
  // Text form of a counterexample that is not a group element.
  std::string detail;
};

// Image(P_t) by nested loops over the coefficient box.  Requires t > 0.
FiniteSet brute_image(const CosetProgression& p, const Rational& t, std::size_t cap = kDefaultCap);

// A value taken by two formal terms of P_t, found by sorting all term values.
std::optional<GroupElement> brute_collision(const CosetProgression& p, const Rational& t,
                                            std::size_t cap = kDefaultCap);
bool brute_is_proper(const CosetProgression& p, const Rational& t, std::size_t cap = kDefaultCap);

FiniteSet brute_sumset(const FiniteSet& a, const FiniteSet& b, std::size_t cap = kDefaultCap);
// lA by l - 1 successive additions of A.
FiniteSet brute_iterated_sumset(const FiniteSet& a, std::int64_t l, std::size_t cap = kDefaultCap);
// <S> in a finite group by closure under addition.
FiniteSet brute_subgroup(const FiniteSet& generators, std::size_t cap = kDefaultCap);

// S1 <= S2; the counterexample is the least element of S1 \ S2.
VerificationReport verify_inclusion(const FiniteSet& s1, const FiniteSet& s2, std::string claim = "inclusion");

// Some x with x + T <= S, scanning candidates s - min(T) for s in S in order.
struct TranslateSearch {
  bool found = false;
  std::optional<GroupElement> x;
};
TranslateSearch verify_translate_containment(const FiniteSet& s, const FiniteSet& t);

// Lattice points of the body as vectors of R^d, by a scan over a coordinate box
// obtained from d independent constraints.
std::vector<RationalVector> brute_body_points(const SymmetricPolytope& body, const RationalMatrix& basis,
                                              std::size_t cap = kDefaultCap);

// x is an integer combination of the columns of the basis.
bool brute_in_lattice(const RationalVector& x, const RationalMatrix& basis);

}  // namespace gapjohn::oracle
