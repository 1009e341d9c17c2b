#include "gapjohn/sumset_structure.hpp"

#include <algorithm>
#include <unordered_map>

#include "gapjohn/covering.hpp"
#include "gapjohn/errors.hpp"

namespace gapjohn {

namespace {

Rational ratio(std::size_t a, std::size_t b) { return fraction(a, b); }

// 2^k A by repeated doubling.
FiniteSet dyadic_sumset(const FiniteSet& a, int k, std::size_t cap) {
  FiniteSet s = a;
  for (int i = 0; i < k; ++i) s = sumset(s, s, cap);
  return s;
}

CosetProgression make(const AmbientGroup& g, std::vector<Rational> dims, std::vector<GroupElement> steps,
                      const FiniteSubgroup& h) {
  Gap gp;
  gp.dims = std::move(dims);
  gp.steps = std::move(steps);
  return CosetProgression(g, std::move(gp), h);
}

// Least K <= limit with target <= x + Image(Q_K); Q has integer dimensions.
std::optional<std::int64_t> least_k(const FiniteSet& target, const CosetProgression& q, const GroupElement& x,
                                    std::int64_t limit, std::size_t cap) {
  const FiniteSet shifted = translate(target, q.group().negate(x));
  auto covers = [&](std::int64_t k) {
    return shifted.is_subset_of(image(q, Rational(static_cast<long>(k)), cap));
  };
  std::int64_t hi = 1;
  while (!covers(hi)) {
    if (hi >= limit) return std::nullopt;
    hi = std::min(hi * 2, limit);
  }
  std::int64_t lo = hi / 2;
  if (lo >= 1 && covers(lo)) return lo;
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (covers(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

struct Cover {
  AdjoinResult r;
  FiniteSet b;
  FiniteSet img_p;
};

Cover adjoin_cover(const CosetProgression& p, const FiniteSet& a, int k_prime, const GroupElement& x0,
                   std::size_t cap) {
  const AmbientGroup& g = a.group();
  require_same_group(g, p.group(), "adjoin_steps");
  Cover c;
  c.b = dyadic_sumset(a, k_prime + 2, cap);
  c.img_p = image(p, 1, cap);
  const GroupElement two_x0 = g.scale(2, x0);
  if (!translate(c.img_p, two_x0).is_subset_of(c.b))
    throw PreconditionError("adjoin_steps: 2 x0 + Image(P) is not inside 2^{k'+2} A");
  // Each greedy translate is y - min(Image P) for some y in B, so
  // a_i = y - (2 x0 + min Image P) with both terms in B.
  const GroupElement& low = c.img_p[0];
  const GroupElement c_i = g.add(two_x0, low);
  std::vector<Rational> dims = p.dims();
  std::vector<GroupElement> steps = p.steps();
  for (const auto& t : greedy_cover(c.b, c.img_p)) {
    GroupElement y = g.add(t, low);
    c.r.a.push_back(g.subtract(y, c_i));
    c.r.b.push_back(std::move(y));
    c.r.c.push_back(c_i);
    dims.push_back(1);
    steps.push_back(c.r.a.back());
  }
  c.r.m = c.r.a.size();
  c.r.p_prime = make(g, std::move(dims), std::move(steps), p.symmetry());
  GroupElement x1 = two_x0;
  for (std::size_t i = 0; i < c.r.m; ++i) {
    g.add_in_place(x1, c.r.b[i]);
    g.add_in_place(x1, c.r.c[i]);
  }
  c.r.x1 = std::move(x1);
  return c;
}

void verify_adjoin(Cover& c, const FiniteSet& a, int k_prime, const GroupElement& x0, std::size_t cap) {
  const AmbientGroup& g = a.group();
  AdjoinResult& r = c.r;
  const GroupElement two_x0 = g.scale(2, x0);
  const FiniteSet img_pp = image(r.p_prime, 1, cap);

  std::vector<GroupElement> bases;
  for (const auto& ai : r.a) bases.push_back(g.add(two_x0, ai));
  const bool covered = !first_uncovered(c.b, bases, c.img_p);
  const FiniteSet shifted_pp = translate(img_pp, two_x0);
  bool inside = true;
  for (const auto& base : bases) {
    for (const auto& s : c.img_p) {
      if (!shifted_pp.contains(g.add(base, s))) {
        inside = false;
        break;
      }
    }
    if (!inside) break;
  }
  r.cover_verified = covered && inside;

  FiniteSet sum = c.img_p;
  for (std::size_t i = 0; i < r.m; ++i) {
    const GroupElement diff = g.subtract(r.b[i], r.c[i]);
    sum = sumset(sum, FiniteSet(g, std::vector<GroupElement>{g.negate(diff), g.zero(), diff}), cap);
  }
  r.decomposition_verified = img_pp.is_subset_of(sum);

  const std::int64_t fold = static_cast<std::int64_t>(r.m + 1) * (std::int64_t{1} << (k_prime + 3));
  r.base_verified = translate(img_pp, r.x1).is_subset_of(iterated_sumset(a, fold, cap));
}

}  // namespace

SymmetricCore symmetric_core(const FiniteSet& a, std::size_t cap) {
  if (a.empty()) throw PreconditionError("symmetric_core requires a non-empty set");
  const AmbientGroup& g = a.group();
  std::unordered_map<GroupElement, std::size_t, ElementHash> count;
  for (const auto& x : a)
    for (const auto& y : a) {
      ++count[g.add(x, y)];
      if (count.size() > cap) throw CapExceeded("symmetric_core: 2A exceeds cap");
    }
  const GroupElement zero = g.zero();
  const GroupElement* best = nullptr;
  std::size_t best_count = 0;
  for (const auto& [s, n] : count) {
    bool better = n > best_count;
    if (!better && n == best_count && best) {
      if (s == zero)
        better = true;
      else if (*best != zero)
        better = s < *best;
    }
    if (better) {
      best = &s;
      best_count = n;
    }
  }
  SymmetricCore core;
  core.center = *best;
  core.representations = best_count;
  std::vector<GroupElement> f;
  for (const auto& x : a)
    if (a.contains(g.subtract(core.center, x))) f.push_back(x);
  core.f = FiniteSet(g, std::move(f));
  return core;
}

DoublingIndex find_doubling_index(const FiniteSet& a, int d, std::size_t cap) {
  if (a.empty()) throw PreconditionError("find_doubling_index requires a non-empty set");
  if (d < 1 || d > 60) throw PreconditionError("find_doubling_index requires 1 <= d <= 60");
  DoublingIndex out;
  FiniteSet s = a;
  const Integer bound = Integer(1) << d;
  for (int k = 0; k < 62; ++k) {
    FiniteSet next = sumset(s, s, cap);
    out.report.ratios.push_back(ratio(next.size(), s.size()));
    if (k == 0) out.report.doubling = out.report.ratios.back();
    if (Integer(static_cast<unsigned long>(next.size())) <= bound * static_cast<unsigned long>(s.size())) {
      out.k_prime = k;
      return out;
    }
    s = std::move(next);
  }
  throw CapExceeded("find_doubling_index: no index found");
}

FreimanExtractResult freiman_extract(const FiniteSet& f, FreimanExtractOptions options) {
  if (f.empty()) throw PreconditionError("freiman_extract requires a non-empty set");
  const AmbientGroup& g = f.group();
  const std::size_t cap = options.cap;
  const FiniteSet two_f = sumset(f, f, cap);
  const FiniteSet target = difference_set(two_f, two_f, cap);
  const FiniteSet diffs = difference_set(f, f, cap);

  // One representative of each pair {v, -v}, v != 0.
  std::vector<GroupElement> reps;
  for (const auto& v : diffs)
    if (v != g.zero() && !(g.negate(v) < v)) reps.push_back(v);

  FreimanExtractResult best;
  best.p = CosetProgression(g, Gap{});
  best.size = 1;

  // Candidate symmetry groups: cyclic groups of torsion differences that fit
  // in the target, largest first, plus their join.
  std::vector<FiniteSubgroup> groups{FiniteSubgroup::trivial(g)};
  std::vector<GroupElement> fitting;
  for (const auto& v : reps) {
    if (g.element_order(v) == 0) continue;
    FiniteSubgroup h = subgroup_generated(g, std::vector<GroupElement>{v}, cap);
    if (!h.elements().is_subset_of(target)) continue;
    fitting.push_back(v);
    if (std::none_of(groups.begin(), groups.end(), [&](const FiniteSubgroup& k) { return k == h; }))
      groups.push_back(std::move(h));
  }
  if (fitting.size() > 1) {
    FiniteSubgroup join = subgroup_generated(g, fitting, cap);
    if (join.elements().is_subset_of(target) &&
        std::none_of(groups.begin(), groups.end(), [&](const FiniteSubgroup& k) { return k == join; }))
      groups.push_back(std::move(join));
  }
  std::stable_sort(groups.begin(), groups.end(),
                   [](const FiniteSubgroup& x, const FiniteSubgroup& y) { return x.order() > y.order(); });

  std::size_t evaluations = 0;
  auto fits = [&](const CosetProgression& q, std::size_t& size) {
    ++evaluations;
    if (!is_proper(q, 1, cap).proper) return false;
    FiniteSet img = image(q, 1, cap);
    if (!img.is_subset_of(target)) return false;
    size = img.size();
    return true;
  };

  for (const auto& h : groups) {
    if (evaluations >= options.budget) break;
    std::vector<Rational> dims;
    std::vector<GroupElement> steps;
    std::size_t size = h.order();
    while (steps.size() < options.max_rank && evaluations < options.budget && size < target.size()) {
      std::optional<std::size_t> pick;
      Integer pick_dim;
      std::size_t pick_size = size;
      for (std::size_t i = 0; i < reps.size() && evaluations < options.budget; ++i) {
        std::vector<Rational> d2 = dims;
        std::vector<GroupElement> s2 = steps;
        d2.push_back(1);
        s2.push_back(reps[i]);
        std::size_t sz = 0;
        if (!fits(make(g, d2, s2, h), sz)) continue;
        // Largest dimension keeping properness and containment; both are
        // monotone in the dimension.
        Integer lo = 1, hi = 2;
        std::size_t lo_size = sz;
        auto try_dim = [&](const Integer& n) {
          d2.back() = Rational(n);
          std::size_t s = 0;
          const bool ok = fits(make(g, d2, s2, h), s);
          if (ok) lo_size = s;
          return ok;
        };
        while (evaluations < options.budget && try_dim(hi)) {
          lo = hi;
          hi *= 2;
        }
        while (hi - lo > 1 && evaluations < options.budget) {
          Integer mid = (lo + hi) / 2;
          if (try_dim(mid))
            lo = mid;
          else
            hi = mid;
        }
        // lo_size belongs to the last successful dimension, which is lo.
        if (lo_size > pick_size) {
          pick = i;
          pick_dim = lo;
          pick_size = lo_size;
        }
      }
      if (!pick) break;
      dims.push_back(Rational(pick_dim));
      steps.push_back(reps[*pick]);
      size = pick_size;
    }
    if (size > best.size) {
      best.p = make(g, dims, steps, h);
      best.size = size;
    }
    if (best.size == target.size()) break;
  }
  best.evaluations = evaluations;
  best.budget_exhausted = evaluations >= options.budget;
  best.size_ratio = ratio(best.size, f.size());
  return best;
}

AdjoinResult adjoin_steps(const CosetProgression& p, const FiniteSet& a, int k_prime, const GroupElement& x0,
                          std::size_t cap) {
  Cover c = adjoin_cover(p, a, k_prime, x0, cap);
  verify_adjoin(c, a, k_prime, x0, cap);
  return c.r;
}

SumsetStructureResult iterated_structure(const FiniteSet& a_in, std::int64_t l, int d, StructureOptions options) {
  if (a_in.empty()) throw PreconditionError("iterated_structure requires a non-empty set");
  if (l < 1 || d < 1) throw PreconditionError("iterated_structure requires l >= 1 and d >= 1");
  const std::size_t cap = options.cap;
  const AmbientGroup& g = a_in.group();
  SumsetStructureResult r;
  r.l = l;
  r.d = d;

  const FiniteSet la = iterated_sumset(a_in, l, cap);
  r.size_la = la.size();
  const Integer lhs = pow(Rational(static_cast<long>(l)), static_cast<unsigned>(d)).get_num() *
                      static_cast<unsigned long>(a_in.size());
  if (Rational(lhs) < options.threshold * Rational(static_cast<unsigned long>(la.size())))
    throw HypothesisNotMet("iterated_structure: l^d |A| < T |lA|");

  r.shift = a_in.contains(g.zero()) ? g.zero() : a_in[0];
  const FiniteSet a = translate(a_in, g.negate(r.shift));

  const DoublingIndex di = find_doubling_index(a, d, cap);
  r.k_prime = di.k_prime;
  r.doubling = di.report;
  r.core = symmetric_core(dyadic_sumset(a, r.k_prime, cap), cap);
  FreimanExtractOptions eo = options.extract;
  eo.cap = cap;
  r.extracted = freiman_extract(r.core.f, eo);

  Cover c = adjoin_cover(r.extracted.p, a, r.k_prime, r.core.center, cap);
  const std::int64_t fold = static_cast<std::int64_t>(c.r.m + 1) * (std::int64_t{1} << (r.k_prime + 3));
  r.l_prime = l / fold;
  if (r.l_prime < 1) throw HypothesisNotMet("iterated_structure: l' = floor(l / ((m+1) 2^{k'+3})) is 0");
  verify_adjoin(c, a, r.k_prime, r.core.center, cap);
  r.adjoined = c.r;

  r.coalescence = coalesce(r.adjoined.p_prime, r.l_prime, cap);
  r.q = r.coalescence.q;

  // x + Image(Q) <= l' x_1 + l' Image(P') <= l'(m+1) 2^{k'+3} A' + l a0 <= lA.
  const GroupElement la0 = g.scale(l, r.shift);
  r.x = g.add(la0, g.scale(r.l_prime, r.adjoined.x1));
  const FiniteSet img_q = image(r.q, 1, cap);
  r.inner_verified = translate(img_q, r.x).is_subset_of(la);

  // lA' <= qB <= 2q x0 + q Image(P') <= 2q x0 + q K_c Image(Q), q = ceil(l / 2^{k'+2}).
  const std::int64_t q = (l + (std::int64_t{1} << (r.k_prime + 2)) - 1) >> (r.k_prime + 2);
  const std::int64_t limit = q * r.coalescence.k_factor;
  const GroupElement guaranteed = g.add(la0, g.scale(2 * q, r.core.center));
  std::optional<std::int64_t> best = least_k(la, r.q, guaranteed, limit, cap);
  if (!best) throw Error("iterated_structure: outer inclusion failed at the proven factor");
  r.x_prime = guaranteed;
  for (const auto& cand : {la0, r.x}) {
    if (auto k = least_k(la, r.q, cand, *best, cap); k && *k < *best) {
      best = k;
      r.x_prime = cand;
    }
  }
  r.k_factor = *best;
  r.outer_verified = true;

  if (a_in.contains(g.zero()) && negate_set(a_in) == a_in) {
    const bool inner0 = img_q.is_subset_of(la);
    const auto k0 = inner0 ? least_k(la, r.q, g.zero(), limit, cap) : std::nullopt;
    r.zero_base = inner0 && k0.has_value();
    if (*r.zero_base) {
      r.x = g.zero();
      r.x_prime = g.zero();
      r.k_factor = *k0;
    }
  }
  r.rank_within_bound = r.q.rank() + 1 <= static_cast<std::size_t>(d);
  return r;
}

SarkozyResult sarkozy_check(const FiniteSet& a, std::int64_t l, std::size_t cap) {
  const AmbientGroup& g = a.group();
  if (!g.finite()) throw PreconditionError("sarkozy_check requires a finite group");
  if (a.empty() || l < 1) throw PreconditionError("sarkozy_check requires non-empty A and l >= 1");
  SarkozyResult r;
  r.difference_group = subgroup_generated(difference_set(a, a, cap), cap);
  const std::size_t order = r.difference_group.order();
  // jA lies in one coset of <A - A>, so it is that coset exactly when it has
  // the coset's size; from then on (j+1)A = jA + a.
  FiniteSet s = a;
  std::int64_t j = 1;
  while (s.size() < order) {
    s = sumset(s, a, cap);
    ++j;
  }
  r.first_l = j;
  const FiniteSet la = l >= j ? translate(s, g.scale(l - j, a[0])) : iterated_sumset(a, l, cap);
  r.size_la = la.size();
  const GroupElement w = la[0];
  r.holds = translate(la, g.negate(w)) == r.difference_group.elements();
  if (r.holds) r.witness = w;
  return r;
}

std::optional<std::int64_t> sarkozy_gate(const FiniteSet& a, const Rational& threshold, std::int64_t max_l,
                                         std::size_t cap) {
  if (a.empty()) throw PreconditionError("sarkozy_gate requires a non-empty set");
  const AmbientGroup& g = a.group();
  const Rational n(static_cast<unsigned long>(a.size()));
  std::optional<std::size_t> saturated;
  if (g.finite()) saturated = subgroup_generated(difference_set(a, a, cap), cap).order();
  FiniteSet s = a;
  for (std::int64_t l = 1; l <= max_l; ++l) {
    if (l > 1) s = sumset(s, a, cap);
    const Rational size(static_cast<unsigned long>(s.size()));
    if (Rational(static_cast<long>(l)) * n >= threshold * size) return l;
    if (saturated && s.size() == *saturated) {
      // |lA| is constant from here on.
      const Integer need = ceil(threshold * size / n);
      return need <= max_l ? std::optional<std::int64_t>(to_int64(need)) : std::nullopt;
    }
  }
  return std::nullopt;
}

FreimanHomResult freiman_hom_check(const AmbientGroup& domain, const AmbientGroup& codomain, const FiniteMap& f) {
  std::vector<std::pair<GroupElement, GroupElement>> xs = f;
  for (const auto& [x, y] : xs) {
    if (!domain.is_member(x) || !codomain.is_member(y))
      throw PreconditionError("freiman_hom_check: element outside its group");
  }
  std::sort(xs.begin(), xs.end());
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (xs[i].first == xs[i - 1].first) throw PreconditionError("freiman_hom_check: input listed twice");

  FreimanHomResult r;
  std::unordered_map<GroupElement, std::pair<std::size_t, std::size_t>, ElementHash> first;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i; j < xs.size(); ++j) {
      const GroupElement s = domain.add(xs[i].first, xs[j].first);
      auto [it, inserted] = first.try_emplace(s, i, j);
      if (inserted) continue;
      const auto [p, q] = it->second;
      if (codomain.add(xs[p].second, xs[q].second) != codomain.add(xs[i].second, xs[j].second)) {
        r.is_hom = false;
        r.witness = std::array<GroupElement, 4>{xs[p].first, xs[q].first, xs[i].first, xs[j].first};
        return r;
      }
    }
  }
  return r;
}

}  // namespace gapjohn
