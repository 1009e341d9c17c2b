#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gapjohn/coalescence.hpp"
#include "gapjohn/progression.hpp"

namespace gapjohn {

struct DoublingReport {
  Rational doubling;  // |2A| / |A|
  // |2^{k+1}A| / |2^k A| for k = 0 .. k'.
  std::vector<Rational> ratios;
};

struct SymmetricCore {
  FiniteSet f;
  GroupElement center;  // F = center - F
  std::size_t representations = 0;
};

// center maximizes the number of pairs (a, b) in A^2 with a + b = center;
// ties go to 0, then to the least element.  Requires A non-empty.
SymmetricCore symmetric_core(const FiniteSet& a, std::size_t cap = kDefaultCap);

struct DoublingIndex {
  int k_prime = 0;
  DoublingReport report;
};

// Least k' with |2^{k'+1} A| <= 2^d |2^{k'} A|.
DoublingIndex find_doubling_index(const FiniteSet& a, int d, std::size_t cap = kDefaultCap);

struct FreimanExtractOptions {
  std::size_t max_rank = 4;
  // Number of candidate progressions whose images may be evaluated.
  std::size_t budget = 4000;
  std::size_t cap = kDefaultCap;
};

struct FreimanExtractResult {
  CosetProgression p;
  std::size_t size = 0;
  Rational size_ratio;  // size(P) / |F|
  std::size_t evaluations = 0;
  bool budget_exhausted = false;
};

// Proper coset progression inside 2F - 2F, grown greedily over symmetry
// groups generated from F - F and steps from F - F.
FreimanExtractResult freiman_extract(const FiniteSet& f, FreimanExtractOptions options = {});

struct AdjoinResult {
  CosetProgression p_prime;
  GroupElement x1;
  std::size_t m = 0;
  std::vector<GroupElement> a, b, c;
  // B <= U (2 x0 + a_i + Image(P)) <= 2 x0 + Image(P'), B = 2^{k'+2} A.
  bool cover_verified = false;
  // Image(P') <= Image(P) + sum [-1,1] (b_i - c_i).
  bool decomposition_verified = false;
  // x1 + Image(P') <= (m+1) 2^{k'+3} A.
  bool base_verified = false;
};

// Requires 0 in A and 2 x0 + Image(P) <= 2^{k'+2} A.
AdjoinResult adjoin_steps(const CosetProgression& p, const FiniteSet& a, int k_prime, const GroupElement& x0,
                          std::size_t cap = kDefaultCap);

struct StructureOptions {
  // Hypothesis gate l^d |A| >= threshold |lA|.
  Rational threshold = 8;
  FreimanExtractOptions extract;
  std::size_t cap = kDefaultCap;
};

struct SumsetStructureResult {
  CosetProgression q;
  GroupElement x;        // x + Image(Q) <= lA
  GroupElement x_prime;  // lA <= x' + K Image(Q)
  std::int64_t k_factor = 1;
  std::int64_t l = 1;
  int d = 1;
  GroupElement shift;  // A - shift contains 0
  int k_prime = 0;
  DoublingReport doubling;
  SymmetricCore core;
  FreimanExtractResult extracted;
  AdjoinResult adjoined;
  std::int64_t l_prime = 1;
  CoalescenceResult coalescence;
  std::size_t size_la = 0;
  bool inner_verified = false;
  bool outer_verified = false;
  bool rank_within_bound = false;  // rank(Q) <= d - 1
  // A = -A with 0 in A, and x = x' = 0 passes both inclusions.
  std::optional<bool> zero_base;
};

// Throws HypothesisNotMet when the gate fails or the room l' drops below 1.
SumsetStructureResult iterated_structure(const FiniteSet& a, std::int64_t l, int d, StructureOptions options = {});

struct SarkozyResult {
  bool holds = false;
  std::optional<GroupElement> witness;  // lA = witness + <A - A>
  FiniteSubgroup difference_group;
  std::size_t size_la = 0;
  // Least l' <= l at which l'A is a coset of <A - A>.
  std::optional<std::int64_t> first_l;
};

// Requires a finite ambient group.
SarkozyResult sarkozy_check(const FiniteSet& a, std::int64_t l, std::size_t cap = kDefaultCap);

// Least l with l|A| >= threshold |lA| (scanned up to max_l).
std::optional<std::int64_t> sarkozy_gate(const FiniteSet& a, const Rational& threshold, std::int64_t max_l,
                                         std::size_t cap = kDefaultCap);

struct FreimanHomResult {
  bool is_hom = true;
  // (x1, x2; x3, x4) with x1 + x2 = x3 + x4 but f(x1) + f(x2) != f(x3) + f(x4).
  std::optional<std::array<GroupElement, 4>> witness;
};

using FiniteMap = std::vector<std::pair<GroupElement, GroupElement>>;

// Exhaustive check over additive quadruples.  Throws PreconditionError when
// the map lists an input twice.
FreimanHomResult freiman_hom_check(const AmbientGroup& domain, const AmbientGroup& codomain, const FiniteMap& f);

}  // namespace gapjohn
