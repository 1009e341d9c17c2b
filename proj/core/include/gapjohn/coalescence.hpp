#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gapjohn/progression.hpp"

namespace gapjohn {

struct CoalescenceLevel {
  std::size_t rank = 0;
  // Dilation handled at this level.
  Rational l = 1;
  // P is 2^k-proper but not 2^{k+1}-proper; unset when no search was needed.
  std::optional<int> k;
  std::optional<Rational> lambda;
  // Dilation passed to the next level.
  std::optional<Rational> l_next;
  // "rank-zero", "proper", "recurse", "dilate-fallback" or "greedy-fallback".
  std::string action;
};

struct CoalescenceResult {
  // Proper, integer dimensions.
  CosetProgression q;
  Rational l = 1;
  // Least K with l Image(P) <= K Image(Q), found by search.
  std::int64_t k_factor = 1;
  // Factor obtained from the recursion alone, when every level supplies one.
  std::optional<Integer> structural_k;
  std::size_t depth = 0;
  std::vector<CoalescenceLevel> levels;
  std::size_t size_q = 0;
  std::size_t size_lp = 0;
  std::size_t size_p = 0;
  // size(Q) / (l^rank(Q) size(P)).
  Rational run_constant;
  bool inner_verified = false;  // Image(Q) <= l Image(P)
  bool outer_verified = false;  // l Image(P) <= K Image(Q)
  bool proper = false;
  bool same_group = false;
  // K <= floor((16d)^{3d^2/4}), d = rank(P).
  bool k_within_bound = false;
};

// floor((16d)^{3d^2/4}); 1 for d = 0.
Integer coalescence_bound(std::size_t d);

// Proper Q with Image(Q) <= l Image(P) <= K Image(Q), generating the same
// group.  Requires l >= 1 and l Image(P) enumerable under cap.
CoalescenceResult coalesce(const CosetProgression& p, std::int64_t l, std::size_t cap = kDefaultCap);

}  // namespace gapjohn
