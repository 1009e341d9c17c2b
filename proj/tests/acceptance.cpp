// Acceptance suite: one PASS/FAIL line per criterion.  Every structural
// inclusion is re-checked with the brute-force oracle; the main modules are
// only used to produce the objects under test.
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "gapjohn/coalescence.hpp"
#include "gapjohn/commands.hpp"
#include "gapjohn/covering.hpp"
#include "gapjohn/errors.hpp"
#include "gapjohn/john.hpp"
#include "gapjohn/oracle.hpp"
#include "gapjohn/sumset_structure.hpp"

using namespace gapjohn;

namespace {

using Rng = std::mt19937_64;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Counts cases and keeps the first few failure descriptions.
struct Tally {
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::vector<std::string> notes;

  void fail(const std::string& what) {
    ++failures;
    if (notes.size() < 3) notes.push_back(what);
  }
  std::string summary() const {
    std::string s;
    for (const auto& n : notes) s += "; " + n;
    return s;
  }
};

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

AmbientGroup random_group(Rng& rng) {
  while (true) {
    const int free_rank = uniform(rng, 0, 2);
    std::vector<std::int64_t> moduli;
    for (int i = uniform(rng, 0, 2); i > 0; --i) moduli.push_back(uniform(rng, 2, 12));
    if (free_rank + moduli.size() > 0) return AmbientGroup(free_rank, moduli);
  }
}

GroupElement random_element(Rng& rng, const AmbientGroup& g, int range) {
  std::vector<std::int64_t> c(g.arity());
  for (auto& x : c) x = uniform(rng, -range, range);
  return g.element(c);
}

FiniteSubgroup random_symmetry(Rng& rng, const AmbientGroup& g) {
  if (g.torsion_free() || uniform(rng, 0, 2) != 0) return FiniteSubgroup::trivial(g);
  std::vector<std::int64_t> c(g.arity(), 0);
  for (std::size_t i = g.free_rank(); i < g.arity(); ++i) c[i] = uniform(rng, 0, 12);
  return subgroup_generated(FiniteSet(g, std::vector<GroupElement>{g.element(c)}));
}

// Rank <= 3, dims in {1/2, 1, ..., 5} (integers only when asked).
CosetProgression random_progression(Rng& rng, const AmbientGroup& g, bool integer_dims, int max_rank = 3) {
  Gap gp;
  for (int i = uniform(rng, 1, max_rank); i > 0; --i) {
    gp.dims.push_back(integer_dims ? Rational(uniform(rng, 1, 5)) : fraction(uniform(rng, 1, 10), 2));
    gp.steps.push_back(random_element(rng, g, 12));
  }
  return CosetProgression(g, gp, random_symmetry(rng, g));
}

// (16d)^{e d} compared through integer powers; d = 0 gives 1.
Rational power_16d(std::size_t d, unsigned e_num) {
  if (d == 0) return 1;
  return pow(Rational(static_cast<long>(16 * d)), e_num * static_cast<unsigned>(d));
}

bool proper_by_oracle(const CosetProgression& q, const Rational& t) { return oracle::brute_is_proper(q, t); }

bool included(const FiniteSet& a, const FiniteSet& b) { return oracle::verify_inclusion(a, b).holds; }

FiniteSet shifted(const FiniteSet& s, const GroupElement& x) {
  std::vector<GroupElement> v;
  for (const auto& e : s) v.push_back(s.group().add(e, x));
  return FiniteSet(s.group(), v);
}

FiniteSet tiled(const std::vector<GroupElement>& xs, const FiniteSet& tile) {
  std::vector<GroupElement> v;
  for (const auto& x : xs)
    for (const auto& e : tile) v.push_back(tile.group().add(x, e));
  return FiniteSet(tile.group(), v);
}

// Shared corpus for the first three criteria: image of P_2 at most 20,000.
std::vector<CosetProgression> properization_corpus(std::size_t n) {
  Rng rng(20260101);
  std::vector<CosetProgression> out;
  while (out.size() < n) {
    const AmbientGroup g = random_group(rng);
    const CosetProgression p = random_progression(rng, g, false);
    try {
      oracle::brute_image(p, 2, 20000);
    } catch (const CapExceeded&) {
      continue;
    }
    out.push_back(p);
  }
  return out;
}

struct JohnRuns {
  std::vector<std::pair<std::size_t, GapJohnResult>> inner;   // (corpus index, result)
  std::vector<std::pair<std::size_t, GapJohnOuterResult>> outer;
  std::vector<Rational> inner_t, outer_t;
  std::vector<std::string> errors;
  double seconds_inner = 0, seconds_outer = 0;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

JohnRuns run_john(const std::vector<CosetProgression>& corpus) {
  JohnRuns runs;
  auto t0 = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < corpus.size(); ++i)
    for (Rational t : {Rational(1), Rational(2)}) {
      try {
        runs.inner.emplace_back(i, gap_john(corpus[i], t));
        runs.inner_t.push_back(t);
      } catch (const std::exception& e) {
        runs.errors.push_back(std::string("gap_john: ") + e.what());
      }
    }
  runs.seconds_inner = seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < corpus.size(); ++i)
    for (Rational t : {Rational(1), Rational(2)}) {
      try {
        runs.outer.emplace_back(i, gap_john_outer(corpus[i], t));
        runs.outer_t.push_back(t);
      } catch (const std::exception& e) {
        runs.errors.push_back(std::string("gap_john_outer: ") + e.what());
      }
    }
  runs.seconds_outer = seconds_since(t0);
  return runs;
}

Outcome criterion1(const std::vector<CosetProgression>& corpus, const JohnRuns& runs) {
  const auto t0 = std::chrono::steady_clock::now();
  Tally tally;
  for (const auto& e : runs.errors)
    if (e.rfind("gap_john:", 0) == 0) tally.fail(e);
  for (std::size_t k = 0; k < runs.inner.size(); ++k) {
    const auto& [i, r] = runs.inner[k];
    const Rational t = runs.inner_t[k];
    const CosetProgression& p = corpus[i];
    ++tally.cases;
    const FiniteSet img_p = oracle::brute_image(p, 1);
    // Image(P) <= Image(Q_mu) for a certified mu <= lambda implies the claim at lambda.
    const Rational mu = r.cert.verified_outer_factor.value_or(r.lambda);
    const Rational ratio = r.lambda / t;
    if (!proper_by_oracle(r.q, t))
      tally.fail("Q not t-proper at case " + std::to_string(i));
    else if (!included(oracle::brute_image(r.q, 1), img_p))
      tally.fail("Image(Q) not inside Image(P) at case " + std::to_string(i));
    else if (mu > r.lambda || !included(img_p, oracle::brute_image(r.q, mu)))
      tally.fail("Image(P) not inside Image(Q_lambda) at case " + std::to_string(i));
    else if (ratio * ratio > power_16d(p.rank(), 3))
      tally.fail("lambda/t = " + to_string(ratio) + " above (16d)^{3d/2} at case " + std::to_string(i));
  }
  const double total = runs.seconds_inner + seconds_since(t0);
  if (total > 600) tally.fail("runtime " + std::to_string(total) + " s");
  std::ostringstream s;
  s << tally.cases << " runs on " << corpus.size() << " progressions, t in {1, 2}; " << tally.failures
    << " failures; gap_john " << static_cast<int>(runs.seconds_inner) << " s, total "
    << static_cast<int>(total) << " s (limit 600 s)" << tally.summary();
  return {tally.failures == 0 && tally.cases >= 1000, s.str()};
}

Outcome criterion2(const std::vector<CosetProgression>& corpus, const JohnRuns& runs) {
  Tally tally;
  for (const auto& e : runs.errors)
    if (e.rfind("gap_john_outer:", 0) == 0) tally.fail(e);
  for (std::size_t k = 0; k < runs.outer.size(); ++k) {
    const auto& [i, r] = runs.outer[k];
    const Rational t = runs.outer_t[k];
    const CosetProgression& p = corpus[i];
    ++tally.cases;
    const FiniteSet img_p = oracle::brute_image(p, 1);
    const FiniteSet img_q = oracle::brute_image(r.q, 1);
    const Rational mu = r.cert.verified_outer_factor.value_or(r.lambda * t);
    const std::size_t d = p.rank();
    // size(Q) <= (16d)^{3d^2/2} t^d size(P), squared to stay rational.
    const Rational lhs = pow(Rational(static_cast<long>(img_q.size())), 2);
    const Rational rhs = pow(power_16d(d, 3), static_cast<unsigned>(d)) * pow(t, 2 * static_cast<unsigned>(d)) *
                         pow(Rational(static_cast<long>(img_p.size())), 2);
    if (!included(img_p, img_q))
      tally.fail("Image(P) not inside Image(Q) at case " + std::to_string(i));
    else if (mu > r.lambda * t || !included(img_q, oracle::brute_image(p, mu)))
      tally.fail("Image(Q) not inside Image(P_{lambda t}) at case " + std::to_string(i));
    else if (lhs > rhs)
      tally.fail("size bound fails at case " + std::to_string(i));
  }
  std::ostringstream s;
  s << tally.cases << " runs, t in {1, 2}; " << tally.failures << " failures; " << static_cast<int>(runs.seconds_outer)
    << " s" << tally.summary();
  return {tally.failures == 0 && tally.cases >= 1000, s.str()};
}

Outcome criterion3(const std::vector<CosetProgression>& corpus, const JohnRuns& runs) {
  Tally tally;
  std::size_t improper = 0;
  std::vector<bool> half_improper(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    half_improper[i] = !oracle::brute_is_proper(corpus[i], Rational(1, 2));
    improper += half_improper[i];
  }
  auto check = [&](std::size_t i, const CosetProgression& q, const char* who) {
    if (!half_improper[i]) return;
    ++tally.cases;
    if (q.rank() + 1 > corpus[i].rank())
      tally.fail(std::string(who) + " rank " + std::to_string(q.rank()) + " from rank " +
                 std::to_string(corpus[i].rank()) + " at case " + std::to_string(i));
  };
  for (const auto& [i, r] : runs.inner) check(i, r.q, "gap_john");
  for (const auto& [i, r] : runs.outer) check(i, r.q, "gap_john_outer");
  std::ostringstream s;
  s << improper << " of " << corpus.size() << " inputs are not 1/2-proper; " << tally.cases << " outputs checked, "
    << tally.failures << " with rank above d - 1" << tally.summary();
  return {tally.failures == 0 && tally.cases > 0, s.str()};
}

// Distinct values of sum n_i s_i over the box floor(t N_i), as vectors.
std::set<RationalVector> vector_image(const std::vector<Rational>& dims, const std::vector<RationalVector>& steps,
                                      const Rational& t, std::size_t d) {
  std::vector<std::int64_t> m;
  for (const auto& n : dims) m.push_back(to_int64(floor(n * t)));
  std::set<RationalVector> out;
  std::vector<std::int64_t> c(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) c[i] = -m[i];
  while (true) {
    RationalVector x(d);
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t k = 0; k < d; ++k) x[k] += Rational(static_cast<long>(c[i])) * steps[i][k];
    out.insert(x);
    std::size_t i = 0;
    while (i < m.size() && c[i] == m[i]) c[i] = -m[i], ++i;
    if (i == m.size()) break;
    ++c[i];
  }
  return out;
}

bool in_body(const SymmetricPolytope& b, const RationalVector& x) {
  for (const auto& c : b.constraints()) {
    Rational dot = 0;
    for (std::size_t k = 0; k < x.size(); ++k) dot += c.a[k] * x[k];
    if (abs(dot) > c.b) return false;
  }
  return true;
}

Outcome criterion4() {
  Rng rng(4004);
  Tally tally;
  std::size_t count_checked = 0, skipped_dilations = 0;
  while (tally.cases < 200) {
    const std::size_t d = 1 + tally.cases % 3;
    const int hi = d == 3 ? 4 : 8;
    std::vector<SymmetricConstraint> cs;
    for (std::size_t i = 0; i < d; ++i) {
      RationalVector a(d);
      a[i] = 1;
      cs.push_back({a, fraction(uniform(rng, 2, 2 * hi), 2)});
    }
    for (int k = uniform(rng, 0, 2); k > 0; --k) {
      RationalVector a(d);
      for (auto& x : a) x = uniform(rng, -3, 3);
      a[0] = uniform(rng, 1, 3);
      cs.push_back({a, Rational(uniform(rng, 1, 3 * hi))});
    }
    RationalMatrix basis = RationalMatrix::identity(d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        if (i < j) basis(i, j) = uniform(rng, -2, 2);
    if (uniform(rng, 0, 2) == 0) basis(0, 0) = fraction(uniform(rng, 1, 3), 2);
    const SymmetricPolytope body(d, cs);
    ++tally.cases;
    const std::string id = "body " + std::to_string(tally.cases);
    try {
      const DiscreteJohnResult r = discrete_john(body, Lattice(basis));
      skipped_dilations += r.cert.skipped_dilations.size();
      for (const auto& t : r.cert.checked_dilations) {
        const auto pts = vector_image(r.gap.dims(), r.steps, t, d);
        const SymmetricPolytope outer = body.dilate(t);
        bool ok = true;
        for (const auto& x : pts) ok = ok && in_body(outer, x) && oracle::brute_in_lattice(x, basis);
        if (!ok) {
          tally.fail("Image(P_t) leaves tB n Gamma, " + id);
          break;
        }
        for (const auto& x : oracle::brute_body_points(body.dilate(t / r.lambda), basis))
          ok = ok && pts.count(x);
        if (!ok) {
          tally.fail("(t/lambda)B n Gamma not inside Image(P_t), " + id);
          break;
        }
      }
      const auto size_p = static_cast<long>(vector_image(r.gap.dims(), r.steps, 1, d).size());
      const auto points = static_cast<long>(oracle::brute_body_points(body, basis).size());
      if (size_p > points || Rational(points) * points > power_16d(d, 7) * size_p * size_p)
        tally.fail("size bounds fail, " + id);
      if (r.point_count_holds) {
        ++count_checked;
        if (!*r.point_count_holds) tally.fail("point-count inequality fails, " + id);
      }
    } catch (const std::exception& e) {
      tally.fail(id + ": " + e.what());
    }
  }
  std::ostringstream s;
  s << tally.cases << " bodies in dims 1-3; " << tally.failures << " failures; point-count inequality evaluated on "
    << count_checked << " full-rank instances; " << skipped_dilations << " dilations skipped by cap" << tally.summary();
  return {tally.failures == 0, s.str()};
}

Outcome criterion5() {
  Rng rng(5005);
  Tally doubling, ruzsa;
  while (doubling.cases < 300) {
    const AmbientGroup g = random_group(rng);
    const CosetProgression p = random_progression(rng, g, false);
    const Rational t = uniform(rng, 1, 3);
    try {
      oracle::brute_image(p, t, 20000);
    } catch (const CapExceeded&) {
      continue;
    }
    ++doubling.cases;
    try {
      const CoveringCertificate c = doubling_cover(p, t);
      const Rational bound = pow(4 * t + 1, static_cast<unsigned>(p.rank()));
      if (Rational(static_cast<long>(c.translates.size())) > bound)
        doubling.fail("count above (4t+1)^d");
      else if (!included(oracle::brute_image(p, t), tiled(c.translates, oracle::brute_image(p, 1))))
        doubling.fail("union misses a point of P_t");
    } catch (const std::exception& e) {
      doubling.fail(e.what());
    }
  }
  while (ruzsa.cases < 100) {
    const AmbientGroup g = random_group(rng);
    const CosetProgression p = random_progression(rng, g, false);
    // Q: a sub-progression of P, so Q <= P <= P_t.
    Gap gq;
    for (std::size_t i = 0; i < p.rank(); ++i)
      if (uniform(rng, 0, 2) != 0) {
        gq.dims.push_back(fraction(uniform(rng, 1, 2 * to_int64(ceil(p.dims()[i]))), 2));
        if (gq.dims.back() > p.dims()[i]) gq.dims.back() = p.dims()[i];
        gq.steps.push_back(p.steps()[i]);
      }
    const CosetProgression q(g, gq, p.symmetry());
    const Rational t = uniform(rng, 1, 2), tp = uniform(rng, 1, 3);
    try {
      oracle::brute_image(p, t + tp, 20000);
    } catch (const CapExceeded&) {
      continue;
    }
    ++ruzsa.cases;
    try {
      const CoveringCertificate c = ruzsa_cover(p, q, t, tp);
      const FiniteSet img_q = oracle::brute_image(q, 1);
      const Rational bound = fraction(oracle::brute_image(p, t + tp).size(), img_q.size());
      if (!included(oracle::brute_image(p, tp), tiled(c.translates, oracle::brute_image(q, 2))))
        ruzsa.fail("union misses a point of P_{t'}");
      else if (Rational(static_cast<long>(c.translates.size())) > bound)
        ruzsa.fail("count above |P_{t+t'}| / |Q|");
    } catch (const std::exception& e) {
      ruzsa.fail(e.what());
    }
  }
  std::ostringstream s;
  s << "doubling: " << doubling.cases << " instances (t in {1,2,3}, d <= 3), " << doubling.failures
    << " failures; ruzsa: " << ruzsa.cases << " instances, " << ruzsa.failures << " failures" << doubling.summary()
    << ruzsa.summary();
  return {doubling.failures + ruzsa.failures == 0, s.str()};
}

Outcome criterion6() {
  Rng rng(6006);
  Tally tally;
  std::size_t fallbacks = 0;
  while (tally.cases < 100) {
    const AmbientGroup g = random_group(rng);
    const CosetProgression p = random_progression(rng, g, true);
    const std::int64_t l = uniform(rng, 1, 64);
    FiniteSet lp;
    try {
      // For integer dimensions l Image(P) = Image(P_l); criterion 9 checks this identity.
      lp = oracle::brute_image(p, Rational(static_cast<long>(l)), 50000);
    } catch (const CapExceeded&) {
      continue;
    }
    ++tally.cases;
    const std::string id = "case " + std::to_string(tally.cases) + " (l = " + std::to_string(l) + ")";
    try {
      const CoalescenceResult r = coalesce(p, l);
      for (const auto& lv : r.levels) fallbacks += lv.action.find("fallback") != std::string::npos;
      bool integer = true;
      for (const auto& n : r.q.dims()) integer = integer && n.get_den() == 1;
      const auto k = Rational(static_cast<long>(r.k_factor));
      if (!integer || r.k_factor < 1) {
        tally.fail("Q has fractional dims or K < 1, " + id);
      } else if (!proper_by_oracle(r.q, 1)) {
        tally.fail("Q not proper, " + id);
      } else if (!included(oracle::brute_image(r.q, 1), lp)) {
        tally.fail("Image(Q) not inside l Image(P), " + id);
      } else {
        const FiniteSet kq = oracle::brute_image(r.q, k);
        // P <= lP <= K Q <= <Q> and Q <= lP <= <P> give equal generated groups.
        if (!included(lp, kq))
          tally.fail("l Image(P) not inside K Image(Q), " + id);
        else if (!included(oracle::brute_image(p, 1), kq))
          tally.fail("generated groups differ, " + id);
      }
    } catch (const std::exception& e) {
      tally.fail(id + ": " + e.what());
    }
  }
  std::ostringstream s;
  s << tally.cases << " progressions, l <= 64, |l Image(P)| <= 50000; " << tally.failures << " failures; "
    << fallbacks << " levels used a fallback" << tally.summary();
  return {tally.failures == 0, s.str()};
}

struct StructureCase {
  std::string name;
  FiniteSet a;
  std::int64_t l;
  int d;
};

std::vector<StructureCase> structure_suite() {
  std::vector<StructureCase> out;
  const AmbientGroup z = AmbientGroup::integers();
  auto ints = [&](const AmbientGroup& g, const std::vector<std::int64_t>& xs) {
    std::vector<GroupElement> v;
    for (auto x : xs) v.push_back(g.element({x}));
    return FiniteSet(g, v);
  };
  for (int d : {1, 2})
    for (std::int64_t l : {16, 64, 200}) {
      for (std::int64_t n : {2, 3, 5}) {
        for (std::int64_t a0 : {0, -2, 7}) {
          std::vector<std::int64_t> xs;
          for (std::int64_t i = 0; i < n; ++i) xs.push_back(a0 + i);
          out.push_back({"interval", ints(z, xs), l, d});
        }
      }
      out.push_back({"two intervals", ints(z, {0, 1, 2, 9, 10, 11}), l, d});
      out.push_back({"two intervals", ints(z, {-3, -2, 4, 5, 6}), l, d});
      out.push_back({"two intervals", ints(z, {1, 2, 3, 20, 21}), l, d});
    }
  for (int d : {1, 2})
    for (std::int64_t m : {12, 30, 64, 210, 500}) {
      const AmbientGroup g = AmbientGroup::cyclic(m);
      for (std::int64_t step : {2, 3, 5}) {
        if (m % step) continue;
        std::vector<std::int64_t> xs;
        for (std::int64_t x = 1; x < m; x += step) xs.push_back(x);
        for (std::int64_t l : {8, 20}) out.push_back({"subgroup coset", ints(g, xs), l, d});
      }
    }
  Rng rng(7007);
  for (int d : {1, 2})
    for (std::int64_t m : {31, 64, 101, 250, 500}) {
      const AmbientGroup g = AmbientGroup::cyclic(m);
      for (int density : {2, 4}) {
        std::vector<std::int64_t> xs;
        for (std::int64_t x = 0; x < m; ++x)
          if (uniform(rng, 1, density) == 1) xs.push_back(x);
        for (std::int64_t l : {std::int64_t{16}, std::int64_t{40}})
          out.push_back({"dense random", ints(g, xs), l, d});
      }
    }
  return out;
}

Outcome criterion7() {
  Tally tally;
  std::size_t gated = 0, rank_ok = 0, short_l = 0;
  for (const auto& c : structure_suite()) {
    const std::string id = c.name + " |A| = " + std::to_string(c.a.size()) + ", l = " + std::to_string(c.l) +
                           ", d = " + std::to_string(c.d);
    ++tally.cases;
    SumsetStructureResult r;
    try {
      r = iterated_structure(c.a, c.l, c.d);
    } catch (const HypothesisNotMet& e) {
      // The gate itself, or l' = l / ((m+1) 2^{k'+3}) < 1 after it passed.
      short_l += std::string(e.what()).find("l'") != std::string::npos;
      continue;
    } catch (const std::exception& e) {
      tally.fail(id + ": " + e.what());
      continue;
    }
    ++gated;
    const FiniteSet la = oracle::brute_iterated_sumset(c.a, c.l);
    bool integer = true;
    for (const auto& n : r.q.dims()) integer = integer && n.get_den() == 1;
    if (!integer || r.k_factor < 1 || !proper_by_oracle(r.q, 1))
      tally.fail("Q malformed or improper, " + id);
    else if (!included(shifted(oracle::brute_image(r.q, 1), r.x), la))
      tally.fail("x + Image(Q) not inside lA, " + id);
    else if (!included(la, shifted(oracle::brute_image(r.q, Rational(static_cast<long>(r.k_factor))), r.x_prime)))
      tally.fail("lA not inside x' + K Image(Q), " + id);
    else if (static_cast<int>(r.q.rank()) > c.d - 1)
      tally.fail("rank " + std::to_string(r.q.rank()) + " > d - 1, " + id);
    else
      ++rank_ok;
  }
  std::ostringstream s;
  s << tally.cases << " curated cases, gate passed on " << gated + short_l << " (" << short_l
    << " of them stop at l' < 1); " << rank_ok << " verified with rank <= d - 1; "
    << tally.failures << " failures" << tally.summary();
  return {tally.failures == 0 && gated > 0, s.str()};
}

// Cyclic-group sumsets on bit masks, independent of the library.
std::uint64_t rotate(std::uint64_t s, int b, int n) {
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  return b == 0 ? s : ((s << b) | (s >> (n - b))) & full;
}

std::uint64_t mask_sum(std::uint64_t s, std::uint64_t t, int n) {
  std::uint64_t out = 0;
  for (int b = 0; b < n; ++b)
    if (t >> b & 1) out |= rotate(s, b, n);
  return out;
}

Outcome criterion8() {
  Tally tally;
  for (int n = 1; n <= 30; ++n) {
    const AmbientGroup g = n == 1 ? AmbientGroup(0, {}) : AmbientGroup::cyclic(n);
    // Sets containing 0; lA is a coset of <A - A> for A exactly when it is for A - a.
    const int rest = n - 1;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << rest); ++bits) {
      if (__builtin_popcountll(bits) > 4) continue;
      const std::uint64_t mask = 1 | bits << 1;
      std::vector<GroupElement> v;
      for (int x = 0; x < n; ++x)
        if (mask >> x & 1) v.push_back(n == 1 ? g.zero() : g.element({x}));
      const FiniteSet a(g, v);
      ++tally.cases;
      const auto l = sarkozy_gate(a, 8, 8 * n + 1);
      if (!l) {
        tally.fail("gate never passed, n = " + std::to_string(n));
        continue;
      }
      // <A - A> = <A> since 0 is in A: closure under adding A.
      std::uint64_t h = 1;
      while (true) {
        const std::uint64_t next = h | mask_sum(h, mask, n);
        if (next == h) break;
        h = next;
      }
      std::uint64_t la = mask, power = mask;
      std::int64_t rem = *l - 1;
      for (; rem > 0; rem >>= 1) {
        if (rem & 1) la = mask_sum(la, power, n);
        power = mask_sum(power, power, n);
      }
      const int w = __builtin_ctzll(la);
      if (rotate(h, w, n) != la) tally.fail("lA not a coset, n = " + std::to_string(n) + ", l = " + std::to_string(*l));
    }
  }
  std::ostringstream s;
  s << tally.cases << " sets (0 in A, |A| <= 5, |G| <= 30) at the first gate threshold, T = 8; " << tally.failures
    << " failures" << tally.summary();
  return {tally.failures == 0, s.str()};
}

Outcome criterion9() {
  Rng rng(9009);
  Tally tally;
  for (int k = 0; k < 1000; ++k) {
    const AmbientGroup g = random_group(rng);
    const CosetProgression p = random_progression(rng, g, false);
    for (Rational t : {Rational(1, 2), Rational(1), Rational(2)}) {
      ++tally.cases;
      try {
        if (!(image(p, t, 50000) == oracle::brute_image(p, t, 50000))) tally.fail("image differs");
        if (is_proper(p, t, 200000).proper != oracle::brute_is_proper(p, t, 200000)) tally.fail("properness differs");
      } catch (const CapExceeded&) {
        --tally.cases;
      }
    }
  }
  for (int k = 0; k < 1000; ++k) {
    const AmbientGroup g = random_group(rng);
    std::vector<GroupElement> a, b;
    for (int i = uniform(rng, 1, 6); i > 0; --i) a.push_back(random_element(rng, g, 9));
    for (int i = uniform(rng, 1, 6); i > 0; --i) b.push_back(random_element(rng, g, 9));
    const FiniteSet sa(g, a), sb(g, b);
    const std::int64_t l = uniform(rng, 1, 6);
    tally.cases += 2;
    if (!(sumset(sa, sb) == oracle::brute_sumset(sa, sb))) tally.fail("sumset differs");
    if (!(iterated_sumset(sa, l) == oracle::brute_iterated_sumset(sa, l))) tally.fail("iterated sumset differs");
  }
  // l Image(P) = Image(P_l) for integer dimensions, relied on above.
  for (int k = 0; k < 200; ++k) {
    const AmbientGroup g = random_group(rng);
    const CosetProgression p = random_progression(rng, g, true, 2);
    const std::int64_t l = uniform(rng, 1, 5);
    try {
      ++tally.cases;
      if (!(oracle::brute_iterated_sumset(oracle::brute_image(p, 1), l, 50000) ==
            oracle::brute_image(p, Rational(static_cast<long>(l)), 50000)))
        tally.fail("l Image(P) differs from Image(P_l)");
    } catch (const CapExceeded&) {
      --tally.cases;
    }
  }
  std::ostringstream s;
  s << tally.cases << " comparisons (image, properness, sumset, iterated sumset, l-fold image); " << tally.failures
    << " mismatches" << tally.summary();
  return {tally.failures == 0 && tally.cases >= 1000, s.str()};
}

Json doc(const AmbientGroup& g, const char* key, const Json& payload) {
  return Json{{"version", kSchemaVersion}, {"group", to_json(g)}, {key, payload}};
}

bool image_exceeds_symmetry(const Json& cert) {
  const AmbientGroup g = group_from_json(cert["input"]["group"]);
  const CosetProgression p = progression_from_json(g, cert["input"]["progression"]);
  return oracle::brute_image(p, 1).size() > p.symmetry().order();
}

Outcome criterion10() {
  Rng rng(1010);
  std::vector<Json> certs;
  std::vector<std::string> errors;
  auto emit = [&](const std::string& cmd, const Json& input, CommandOptions o) {
    try {
      certs.push_back(parse_document(dump_document(run_command(cmd, input, o))));
    } catch (const std::exception& e) {
      errors.push_back(cmd + ": " + e.what());
    }
  };
  const AmbientGroup z = AmbientGroup::integers();
  for (int k = 0; k < 10; ++k) {
    AmbientGroup g = random_group(rng);
    CosetProgression p = random_progression(rng, g, false, 2);
    while (oracle::brute_image(p, 4, 1 << 22).size() > 4000) p = random_progression(rng, g = random_group(rng), false, 2);
    CommandOptions o;
    o.t = uniform(rng, 1, 2);
    for (const char* cmd : {"properize", "john", "john-outer", "cover"}) emit(cmd, doc(g, "progression", to_json(p)), o);
    Json ruzsa = doc(g, "progression", to_json(p));
    ruzsa["inner"] = to_json(CosetProgression(g, Gap{{p.dims()[0]}, {p.steps()[0]}}, p.symmetry()));
    emit("cover", ruzsa, o);

    Gap gz;
    for (int i = uniform(rng, 1, 2); i > 0; --i) {
      gz.dims.push_back(uniform(rng, 1, 3));
      gz.steps.push_back(z.element({uniform(rng, 1, 9)}));
    }
    emit("john-outer", doc(z, "progression", to_json(CosetProgression(z, gz))), o);
    gz = Gap{};
    for (int i = uniform(rng, 1, 2); i > 0; --i) {
      gz.dims.push_back(uniform(rng, 1, 3));
      gz.steps.push_back(z.element({uniform(rng, 1, 9)}));
    }
    CommandOptions oc;
    oc.l = uniform(rng, 2, 8);
    emit("coalesce", doc(z, "progression", to_json(CosetProgression(z, gz))), oc);

    const std::size_t d = 1 + k % 3;
    std::vector<SymmetricConstraint> cs;
    for (std::size_t i = 0; i < d; ++i) {
      RationalVector a(d);
      a[i] = 1;
      cs.push_back({a, Rational(uniform(rng, 1, 4))});
    }
    emit("discrete-john", Json{{"version", kSchemaVersion}, {"polytope", to_json(SymmetricPolytope(d, cs))}},
         CommandOptions{});

    std::vector<std::int64_t> xs{0};
    for (int i = uniform(rng, 1, 3); i > 0; --i) xs.push_back(uniform(rng, 1, 4));
    CommandOptions os;
    os.l = 64;
    os.d = 2;
    emit("sumset-structure", doc(z, "set", to_json(FiniteSet(z, [&] {
                                   std::vector<GroupElement> v;
                                   for (auto x : xs) v.push_back(z.element({x}));
                                   return v;
                                 }()))),
         os);

    const AmbientGroup zm = AmbientGroup::cyclic(uniform(rng, 3, 20));
    CommandOptions ol;
    ol.l = uniform(rng, 1, 12);
    emit("sarkozy", doc(zm, "set", Json{0, uniform(rng, 1, 19)}), ol);
    CommandOptions od;
    od.n = 2 * uniform(rng, 1, 12);
    emit("demo-counterexample", Json::object(), od);
  }
  std::size_t passed = 0;
  for (const auto& c : certs) {
    try {
      passed += audit_certificate(c).passed;
    } catch (const std::exception& e) {
      errors.push_back(std::string("audit: ") + e.what());
    }
  }

  // Ten corruptions of each kind, each invalid by construction.
  std::vector<Json> bad;
  std::map<std::string, int> made;
  for (const auto& c : certs) {
    const std::string cmd = c["command"];
    const Json& res = c["result"];
    Json x = c;
    if (cmd == "cover" && made["cover"] < 10) {
      // Greedy translates each cover a point the earlier ones miss.
      x["result"]["translates"].erase(x["result"]["translates"].size() - 1);
    } else if (cmd == "john-outer" && made[cmd] < 10 && image_exceeds_symmetry(c)) {
      // P_{t / 1000} is H alone, which cannot contain Image(Q) >= Image(P).
      x["result"]["lambda"] = "1/1000";
      x["result"]["certificate"].erase("verified_outer_factor");
    } else if (cmd == "coalesce" && made[cmd] < 10) {
      if (res["k_factor"].get<std::int64_t>() > 1)
        x["result"]["k_factor"] = res["k_factor"].get<std::int64_t>() - 1;  // K is the least factor
      else
        x["result"]["q"]["dims"][0] = "1000";  // outgrows the bounded set l Image(P) in Z
    } else if (cmd == "sumset-structure" && made[cmd] < 10) {
      x["result"]["x"] = Json{res["x"][0].get<std::int64_t>() + 1000000};
    } else if (cmd == "sarkozy" && made[cmd] < 10) {
      x["result"]["holds"] = !res["holds"].get<bool>();
    } else {
      continue;
    }
    ++made[cmd];
    bad.push_back(x);
  }
  std::size_t rejected = 0;
  for (const auto& c : bad) {
    try {
      rejected += !audit_certificate(c).passed;
    } catch (const Error&) {
      ++rejected;
    }
  }
  std::ostringstream s;
  s << passed << " of " << certs.size() << " emitted certificates pass verify; " << rejected << " of " << bad.size()
    << " corrupted certificates rejected";
  for (std::size_t i = 0; i < errors.size() && i < 3; ++i) s << "; " << errors[i];
  return {errors.empty() && passed == certs.size() && bad.size() == 50 && rejected == bad.size(), s.str()};
}

}  // namespace

int main() {
  int failed = 0;
  auto report = [&](int n, const char* name, const Outcome& o) {
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", n, name, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  };
  auto guarded = [](const std::function<Outcome()>& f) {
    try {
      return f();
    } catch (const std::exception& e) {
      return Outcome{false, std::string("aborted: ") + e.what()};
    }
  };

  const auto corpus = properization_corpus(500);
  const JohnRuns runs = run_john(corpus);
  report(1, "properization soundness", guarded([&] { return criterion1(corpus, runs); }));
  report(2, "outer properization", guarded([&] { return criterion2(corpus, runs); }));
  report(3, "rank guarantee", guarded([&] { return criterion3(corpus, runs); }));
  report(4, "discrete John", guarded(criterion4));
  report(5, "covering bounds", guarded(criterion5));
  report(6, "coalescence", guarded(criterion6));
  report(7, "sumset structure", guarded(criterion7));
  report(8, "Sarkozy", guarded(criterion8));
  report(9, "oracle cross-checks", guarded(criterion9));
  report(10, "certificate audit", guarded(criterion10));
  std::printf("%d of 10 criteria passed\n", 10 - failed);
  return failed == 0 ? 0 : 1;
}
