#include "gapjohn/coalescence.hpp"

#include <algorithm>
#include <cstdlib>

#include "gapjohn/errors.hpp"
#include "gapjohn/john.hpp"
#include "gapjohn/lattice.hpp"

namespace gapjohn {

namespace {

Rational power_of_two(int e) {
  Rational r = 1;
  for (int i = 0; i < e; ++i) r *= 2;
  for (int i = 0; i > e; --i) r /= 2;
  return r;
}

// Largest power of two <= x, for x >= 1.
Rational power_of_two_below(const Rational& x) {
  Rational r = 1;
  while (r * 2 <= x) r *= 2;
  return r;
}

std::vector<GroupElement> generators_of(const CosetProgression& p) {
  const CosetProgression f = p.floored();
  std::vector<GroupElement> out = f.steps();
  for (const auto& h : f.symmetry().generators()) out.push_back(h);
  return out;
}

CosetProgression with(const CosetProgression& p, std::vector<Rational> dims, std::vector<GroupElement> steps,
                      const FiniteSubgroup& h) {
  Gap gp;
  gp.dims = std::move(dims);
  gp.steps = std::move(steps);
  return CosetProgression(p.group(), std::move(gp), h);
}

// is_proper, decided by counting when the formal size is beyond the scan cap.
bool proper_at(const CosetProgression& p, const Rational& t, std::size_t cap) {
  if (p.formal_size(t) > static_cast<unsigned long>(cap))
    return Integer(static_cast<unsigned long>(image(p, t, cap).size())) == p.formal_size(t);
  return is_proper(p, t, cap).proper;
}

bool fits(const CosetProgression& q, const FiniteSet& target, std::size_t cap) {
  if (!proper_at(q, 1, cap)) return false;
  return image(q, 1, cap).is_subset_of(target);
}

// Proper progression with integer dimensions inside target generating the
// same group as P, built from P's own steps.  Used when the recursion has no
// room left.  Steps already in the generated group are skipped; a step that
// breaks properness is absorbed into the symmetry group when its cyclic group
// fits, or swapped for an earlier step it makes redundant.
CosetProgression greedy_progression(const CosetProgression& p, const std::vector<GroupElement>& order,
                                    const FiniteSet& target, std::size_t cap) {
  const AmbientGroup& g = p.group();
  std::vector<Rational> dims;
  std::vector<GroupElement> steps;
  FiniteSubgroup h = p.symmetry();
  auto current_gens = [&] {
    std::vector<GroupElement> out = steps;
    for (const auto& x : h.generators()) out.push_back(x);
    return out;
  };
  for (const auto& v : order) {
    if (in_subgroup(g, current_gens(), v)) continue;
    std::vector<Rational> d2 = dims;
    std::vector<GroupElement> s2 = steps;
    d2.push_back(1);
    s2.push_back(v);
    if (fits(with(p, d2, s2, h), target, cap)) {
      dims = std::move(d2);
      steps = std::move(s2);
      continue;
    }
    if (g.element_order(v) != 0) {
      std::vector<GroupElement> hg = h.generators();
      hg.push_back(v);
      FiniteSubgroup h2 = subgroup_generated(g, hg, cap);
      if (fits(with(p, dims, steps, h2), target, cap)) {
        h = std::move(h2);
        continue;
      }
    }
    bool swapped = false;
    for (std::size_t i = 0; i < steps.size() && !swapped; ++i) {
      std::vector<GroupElement> s3 = steps;
      s3[i] = v;
      std::vector<GroupElement> gens = s3;
      for (const auto& x : h.generators()) gens.push_back(x);
      if (!in_subgroup(g, gens, steps[i])) continue;
      std::vector<Rational> d3 = dims;
      d3[i] = 1;
      if (fits(with(p, d3, s3, h), target, cap)) {
        steps = std::move(s3);
        dims = std::move(d3);
        swapped = true;
      }
    }
  }
  // Grow each dimension as far as properness and containment allow; both are
  // monotone in a single dimension.
  for (std::size_t i = 0; i < dims.size(); ++i) {
    auto ok = [&](const Integer& n) {
      std::vector<Rational> d2 = dims;
      d2[i] = Rational(n);
      return fits(with(p, d2, steps, h), target, cap);
    };
    Integer lo = floor(dims[i]), hi = lo * 2;
    while (ok(hi)) {
      lo = hi;
      hi *= 2;
    }
    while (hi - lo > 1) {
      Integer mid = (lo + hi) / 2;
      if (ok(mid))
        lo = mid;
      else
        hi = mid;
    }
    dims[i] = Rational(lo);
  }
  return with(p, dims, steps, h);
}

// Greedy runs over P's step order and over an order that puts steps
// generating <P> on their own first, then shorter steps; the lower rank wins.
CosetProgression greedy_best(const CosetProgression& p, const FiniteSet& target, std::size_t cap) {
  const AmbientGroup& g = p.group();
  const std::vector<GroupElement> all = generators_of(p);
  auto key = [&](const GroupElement& v) {
    std::vector<GroupElement> alone{v};
    for (const auto& x : p.symmetry().generators()) alone.push_back(x);
    std::int64_t norm = 0;
    for (int i = 0; i < g.free_rank(); ++i) norm = std::max(norm, std::abs(v.coords[i]));
    return std::pair{!same_subgroup(g, alone, all), norm};
  };
  std::vector<GroupElement> sorted = p.steps();
  std::stable_sort(sorted.begin(), sorted.end(),
                   [&](const GroupElement& a, const GroupElement& b) { return key(a) < key(b); });
  CosetProgression best = greedy_progression(p, p.steps(), target, cap);
  if (sorted != p.steps()) {
    CosetProgression alt = greedy_progression(p, sorted, target, cap);
    if (alt.rank() < best.rank()) best = std::move(alt);
  }
  return best;
}

struct Step {
  CosetProgression q;
  std::optional<Integer> k;
};

Step coalesce_level(const CosetProgression& input, const Rational& l, std::size_t cap,
                    std::vector<CoalescenceLevel>& levels) {
  const CosetProgression p = input.floored();
  CoalescenceLevel level;
  level.rank = p.rank();
  level.l = l;
  if (p.rank() == 0) {
    level.action = "rank-zero";
    levels.push_back(level);
    return {p, Integer(1)};
  }
  if (proper_at(p, l, cap)) {
    level.action = "proper";
    levels.push_back(level);
    return {p.dilate(l).floored(), Integer(1)};
  }

  // Least j with P_{2^j} improper.
  int j = 0;
  if (proper_at(p, 1, cap)) {
    while (proper_at(p, power_of_two(j), cap)) ++j;
  } else {
    while (!proper_at(p, power_of_two(j - 1), cap)) --j;
  }
  level.k = j - 1;
  const Rational scale = power_of_two(j + 1);

  std::optional<GapJohnOuterResult> outer;
  if (j + 1 >= 0) {
    // Over the cap the recursion is skipped in favour of the fallbacks.
    try {
      if (p.formal_size(scale) > static_cast<unsigned long>(cap)) throw CapExceeded("coalesce: P_{2^{j+1}} too large");
      outer = gap_john_outer(p.dilate(scale), 1, cap);
    } catch (const CapExceeded&) {
      level.action = "outer-over-cap";
    }
  }
  if (outer) {
    level.lambda = outer->lambda;
    const Rational room = l / (outer->lambda * scale);
    if (room >= 1) {
      const Rational next = power_of_two_below(room);
      level.l_next = next;
      level.action = "recurse";
      levels.push_back(level);
      Step rec = coalesce_level(outer->q, next, cap, levels);
      if (rec.k) rec.k = ceil(l / (scale * next)) * *rec.k;
      return rec;
    }
  }
  if (j >= 1) {
    const Rational s = power_of_two(j - 1);
    level.action = level.action.empty() ? "dilate-fallback" : level.action + ", dilate-fallback";
    levels.push_back(level);
    return {p.dilate(s).floored(), ceil(l / s)};
  }
  level.action = level.action.empty() ? "greedy-fallback" : level.action + ", greedy-fallback";
  levels.push_back(level);
  return {greedy_best(p, image(p, l, cap), cap), std::nullopt};
}

}  // namespace

Integer coalescence_bound(std::size_t d) {
  if (d == 0) return 1;
  Integer base = 16 * static_cast<unsigned long>(d);
  Integer big;
  mpz_pow_ui(big.get_mpz_t(), base.get_mpz_t(), 3 * d * d);
  Integer root;
  mpz_root(root.get_mpz_t(), big.get_mpz_t(), 4);
  return root;
}

CoalescenceResult coalesce(const CosetProgression& p, std::int64_t l, std::size_t cap) {
  if (l < 1) throw PreconditionError("coalesce requires l >= 1");
  CoalescenceResult r;
  r.l = Rational(static_cast<long>(l));
  const CosetProgression base = p.floored();
  const FiniteSet target = image(base, r.l, cap);
  r.size_lp = target.size();
  r.size_p = image(base, 1, cap).size();

  Step s = coalesce_level(base, r.l, cap, r.levels);
  r.q = s.q;
  r.structural_k = s.k;
  r.depth = r.levels.size() - 1;

  const AmbientGroup& g = p.group();
  r.same_group = same_subgroup(g, generators_of(base), generators_of(r.q));
  if (!r.same_group) throw Error("coalesce: Q does not generate the group generated by P");
  r.proper = proper_at(r.q, 1, cap);
  const FiniteSet img_q = image(r.q, 1, cap);
  r.size_q = img_q.size();
  r.inner_verified = img_q.is_subset_of(target);

  // Least K with target <= Image(Q_K); Q has integer dimensions so
  // Image(Q_K) = K Image(Q).
  auto covers = [&](std::int64_t k) { return target.is_subset_of(image(r.q, Rational(static_cast<long>(k)), cap)); };
  std::int64_t hi = 1;
  while (!covers(hi)) {
    if (hi > (std::int64_t{1} << 40)) throw CapExceeded("coalesce: no covering dilation found");
    hi *= 2;
  }
  std::int64_t lo = hi / 2;  // fails, or 0
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (covers(mid))
      hi = mid;
    else
      lo = mid;
  }
  r.k_factor = hi;
  r.outer_verified = true;
  r.k_within_bound = Integer(static_cast<long>(hi)) <= coalescence_bound(base.rank());
  r.run_constant = fraction(r.size_q, r.size_p) / pow(r.l, static_cast<unsigned>(r.q.rank()));
  return r;
}

}  // namespace gapjohn
