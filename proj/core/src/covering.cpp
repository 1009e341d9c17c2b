#include "gapjohn/covering.hpp"

#include "gapjohn/errors.hpp"

namespace gapjohn {

std::vector<GroupElement> greedy_cover(const FiniteSet& target, const FiniteSet& tile) {
  require_same_group(target.group(), tile.group(), "greedy_cover");
  if (tile.empty()) throw PreconditionError("greedy_cover: empty tile");
  const AmbientGroup& g = target.group();
  const GroupElement& low = tile[0];
  ElementHashSet covered;
  std::vector<GroupElement> out;
  for (const auto& x : target) {
    if (covered.contains(x)) continue;
    GroupElement base = g.subtract(x, low);
    for (const auto& s : tile) covered.insert(g.add(base, s));
    out.push_back(std::move(base));
  }
  return out;
}

std::optional<GroupElement> first_uncovered(const FiniteSet& target, const std::vector<GroupElement>& translates,
                                            const FiniteSet& tile) {
  const AmbientGroup& g = target.group();
  ElementHashSet covered;
  for (const auto& x : translates)
    for (const auto& s : tile) covered.insert(g.add(x, s));
  for (const auto& x : target)
    if (!covered.contains(x)) return x;
  return std::nullopt;
}

namespace {

CoveringCertificate finish_doubling(const FiniteSet& small, const FiniteSet& large, std::size_t rank,
                                    const Rational& t) {
  CoveringCertificate c;
  c.translates = greedy_cover(large, small);
  c.covering_set = "Image(P)";
  c.count = c.translates.size();
  c.bound = pow(4 * t + 1, static_cast<unsigned>(rank));
  c.within_bound = Rational(static_cast<unsigned long>(c.count)) <= c.bound;
  c.target_size = large.size();
  c.tile_size = small.size();
  c.size_inequality_holds = small.size() <= large.size() && fraction(large.size(), small.size()) <= c.bound;
  if (first_uncovered(large, c.translates, small)) throw Error("doubling_cover: greedy cover is incomplete");
  return c;
}

}  // namespace

CoveringCertificate doubling_cover(const CosetProgression& p, const Rational& t, std::size_t cap) {
  if (t < 1) throw PreconditionError("doubling_cover requires t >= 1");
  return finish_doubling(image(p, 1, cap), image(p, t, cap), p.rank(), t);
}

CoveringCertificate doubling_cover(const ConvexCosetProgression& p, const Rational& t, std::size_t cap) {
  if (t < 1) throw PreconditionError("doubling_cover requires t >= 1");
  return finish_doubling(image(p, 1, cap), image(p, t, cap), p.rank(), t);
}

CoveringCertificate ruzsa_cover(const CosetProgression& p, const CosetProgression& q, const Rational& t,
                                const Rational& t_prime, std::size_t cap) {
  require_same_group(p.group(), q.group(), "ruzsa_cover");
  if (t <= 0 || t_prime <= 0) throw PreconditionError("ruzsa_cover requires t, t' > 0");
  const AmbientGroup& g = p.group();
  const FiniteSet img_q = image(q, 1, cap);
  if (!img_q.is_subset_of(image(p, t, cap))) throw PreconditionError("ruzsa_cover: Image(Q) is not inside Image(P_t)");
  const FiniteSet target = image(p, t_prime, cap);

  // Maximal family of bases whose Q-translates are pairwise disjoint.
  ElementHashSet occupied;
  CoveringCertificate c;
  for (const auto& x : target) {
    bool disjoint = true;
    for (const auto& s : img_q) {
      if (occupied.contains(g.add(x, s))) {
        disjoint = false;
        break;
      }
    }
    if (!disjoint) continue;
    for (const auto& s : img_q) occupied.insert(g.add(x, s));
    c.translates.push_back(x);
  }

  // Maximality puts every y of the target in some x + Q - Q <= x + Image(Q_2).
  const FiniteSet q2 = image(q, 2, cap);
  c.covering_set = "Image(Q_2)";
  c.count = c.translates.size();
  c.target_size = target.size();
  c.tile_size = q2.size();
  // Disjoint translates inside Image(P_t) + Image(P_{t'}) <= Image(P_{t+t'}).
  const std::size_t outer = image(p, t + t_prime, cap).size();
  c.bound = fraction(outer, img_q.size());
  c.within_bound = Rational(static_cast<unsigned long>(c.count)) <= c.bound;
  const std::size_t size_p = image(p, 1, cap).size();
  c.run_constant = Rational(static_cast<unsigned long>(c.count * img_q.size())) /
                   (pow(t + t_prime + 1, static_cast<unsigned>(p.rank())) * Rational(static_cast<unsigned long>(size_p)));
  if (first_uncovered(target, c.translates, q2)) throw Error("ruzsa_cover: cover is incomplete");
  return c;
}

}  // namespace gapjohn
