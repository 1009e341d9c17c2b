#include "gapjohn/john.hpp"

#include <cmath>
#include <string>

#include "gapjohn/errors.hpp"

namespace gapjohn {

namespace {

const Rational kHalf(1, 2);

std::vector<std::int64_t> to_int_vector(const RationalVector& v) {
  std::vector<std::int64_t> out;
  out.reserve(v.size());
  for (const auto& x : v) {
    if (x.get_den() != 1) throw Error("expected an integral vector");
    out.push_back(to_int64(x.get_num()));
  }
  return out;
}

RationalVector to_rational_vector(const std::vector<std::int64_t>& v) {
  RationalVector out;
  out.reserve(v.size());
  for (auto x : v) out.emplace_back(static_cast<long>(x));
  return out;
}

void require_subset(const FiniteSet& a, const FiniteSet& b, const std::string& what) {
  if (!a.is_subset_of(b)) throw Error("inclusion check failed: " + what);
}

// Runs a check, returning false when it was skipped because a set did not
// fit under the verification cap.
template <typename F>
bool capped(F&& check) {
  try {
    check();
    return true;
  } catch (const CapExceeded&) {
    return false;
  }
}

template <typename F>
void for_each_box_point(const std::vector<std::int64_t>& box, F&& visit) {
  const std::size_t d = box.size();
  std::vector<std::int64_t> n(d);
  for (std::size_t i = 0; i < d; ++i) n[i] = -box[i];
  while (true) {
    visit(n);
    std::size_t i = d;
    while (i > 0 && n[i - 1] == box[i - 1]) {
      n[i - 1] = -box[i - 1];
      --i;
    }
    if (i == 0) return;
    ++n[i - 1];
  }
}

Rational power_of_two(long e) {
  Rational r = 1;
  for (long i = 0; i < e; ++i) r *= 2;
  for (long i = 0; i > e; --i) r /= 2;
  return r;
}

}  // namespace

std::optional<Rational> least_covering_dilation(const FiniteSet& inner, const CosetProgression& outer,
                                                const Rational& bound, std::size_t cap) {
  std::vector<Rational> candidates;
  for (Rational mu = 1; mu < bound; mu *= 2) candidates.push_back(mu);
  candidates.push_back(bound);
  for (const auto& mu : candidates) {
    if (inner.is_subset_of(image(outer, mu, cap))) return mu;
  }
  return std::nullopt;
}

DiscreteJohnResult discrete_john(const SymmetricPolytope& body, const Lattice& lattice,
                                 const std::vector<Rational>& check_dilations, VerifyOptions verify) {
  const std::size_t d = body.dim();
  if (lattice.dim() != d) throw PreconditionError("discrete_john: body and lattice dimensions differ");
  DiscreteJohnResult res;
  if (d == 0) {
    res.gap = CosetProgression(AmbientGroup::integers(0), Gap{});
    res.body_points = 1;
    res.size_bounds_hold = true;
    return res;
  }

  const Ellipsoid e = inscribed_ellipsoid(body);
  const ReducedBasisReport rep = reduced_basis(lattice, e.shape);
  const RationalMatrix& u = rep.change;
  const Rational dd(static_cast<long>(d));

  Gap gap;
  Rational worst = 0;
  for (std::size_t i = 0; i < d; ++i) {
    const Rational& q = rep.squared_lengths[i];
    // N_i <= 1 / (d |v_i|)
    Rational n = sqrt_lower(1 / (dd * dd * q));
    if (n <= 0) throw Error("discrete_john: basis vector too long for the dimension precision");
    gap.dims.push_back(n);
    gap.steps.push_back(GroupElement{to_int_vector(u.column(i))});
    worst = std::max(worst, Rational(1 / (q * n * n)));
    res.steps.push_back(rep.basis.basis().column(i));
  }
  // Cramer: |n_i| <= |x| defect / |v_i|, and |x| <= rho t / lambda on (t/lambda) B.
  res.lambda = sqrt_upper(e.rho_squared * rep.defect_squared * worst);
  res.gap = CosetProgression(AmbientGroup::integers(static_cast<int>(d)), std::move(gap));
  res.ellipsoid = e;
  res.reduction = rep;
  res.cert.inner_factor = 1 / res.lambda;
  res.cert.outer_factor = 1;
  res.lambda_within_bound = res.lambda * res.lambda <= pow(Rational(16 * static_cast<long>(d)), 3 * d);
  if (!verify.enabled) return res;

  const RationalMatrix u_inv = *inverse(u);
  for (const auto& t : check_dilations) {
    const bool done = capped([&] {
      const auto box = res.gap.box(t);
      if (res.gap.formal_size(t) > static_cast<unsigned long>(verify.cap)) throw CapExceeded("box");
      const SymmetricPolytope outer = body.dilate(t);
      for_each_box_point(box, [&](const std::vector<std::int64_t>& n) {
        const RationalVector c = u * to_rational_vector(n);
        if (!outer.contains(lattice.basis() * c)) throw Error("discrete_john: outer inclusion failed");
      });
      std::size_t seen = 0;
      for_each_point(body.dilate(t / res.lambda), lattice, [&](const std::vector<std::int64_t>& c) {
        const RationalVector n = u_inv * to_rational_vector(c);
        for (std::size_t i = 0; i < d; ++i) {
          if (abs(n[i]) > Rational(static_cast<long>(box[i]))) throw Error("discrete_john: inner inclusion failed");
        }
        if (++seen > verify.cap) throw CapExceeded("inner");
        return true;
      });
    });
    (done ? res.cert.checked_dilations : res.cert.skipped_dilations).push_back(t);
  }

  capped([&] {
    const auto pts = enumerate_points(body, lattice, verify.cap);
    res.body_points = pts.size();
    const Integer size_p = res.gap.formal_size(1);
    const Integer count(static_cast<unsigned long>(pts.size()));
    const Rational c16 = pow(Rational(16 * static_cast<long>(d)), 7 * d);
    res.size_bounds_hold = size_p <= count && Rational(count * count) <= Rational(size_p * size_p) * c16;
    RationalMatrix span(pts.size(), d);
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = 0; j < d; ++j) span(i, j) = Rational(static_cast<long>(pts[i][j]));
    if (d <= 4 && matrix_rank(std::move(span)) == d) {
      Integer fact = 1;
      for (std::size_t i = 2; i <= d; ++i) fact *= static_cast<unsigned long>(i);
      const Rational rhs = pow(Rational(3), d) * Rational(fact) * body.volume() / (power_of_two(static_cast<long>(d)) * lattice.covolume());
      res.point_count_holds = Rational(count) <= rhs;
    }
  });
  return res;
}

namespace {

std::pair<ConvexCosetProgression, RankReductionTrace> reduce_with_witness(const ConvexCosetProgression& s,
                                                                          const ConvexCollision& witness,
                                                                          const ConvexCosetProgression& original,
                                                                          std::size_t cap, VerifyOptions verify) {
  const std::size_t d = s.rank();
  const AmbientGroup& g = s.group();
  RankReductionTrace tr;
  tr.rank_before = d;
  tr.witness = witness;
  tr.y.resize(d);
  for (std::size_t i = 0; i < d; ++i) tr.y[i] = witness.first.coeffs[i] - witness.second.coeffs[i];

  const Lattice standard = Lattice::standard(d);
  const PrimitiveFactor pf = primitive_factor(to_rational_vector(tr.y), standard);
  tr.n = pf.n;
  tr.y_primitive = to_int_vector(pf.primitive);
  const GroupElement gen = s.phi(tr.y_primitive);
  const FiniteSubgroup& h = s.symmetry();
  const std::int64_t n_bound = to_int64(pf.n);
  tr.torsion_order = 0;
  for (std::int64_t k = 1; k <= n_bound; ++k) {
    if (h.contains(g.scale(k, gen))) {
      tr.torsion_order = k;
      break;
    }
  }
  if (tr.torsion_order == 0) throw Error("rank_reduce: collision does not land in the symmetry group");

  const CompletedBasis cb = complete_basis(pf.primitive, standard);
  tr.change = cb.change;
  tr.normalizing = cb.normalizing;
  SymmetricPolytope projected = s.body().transform(cb.normalizing).project();
  if (projected.dim() > 0) projected = projected.dilate(kHalf);
  tr.projected_body = projected;

  std::vector<GroupElement> images;
  for (std::size_t j = 0; j + 1 < d; ++j) images.push_back(s.phi(to_int_vector(cb.change.column(j))));
  std::vector<GroupElement> gens = h.generators();
  gens.push_back(gen);
  tr.symmetry_after = subgroup_generated(g, gens, cap);
  if (tr.symmetry_after.order() != static_cast<std::size_t>(tr.torsion_order) * h.order() ||
      !tr.symmetry_after.contains(h)) {
    throw Error("rank_reduce: extended symmetry group has unexpected order");
  }
  ConvexCosetProgression q(g, projected, Lattice::standard(d - 1), std::move(images), tr.symmetry_after);

  if (verify.enabled) {
    for (const Rational& t : {kHalf, Rational(1), Rational(2)}) {
      const bool done = capped([&] {
        require_subset(image(original, t, verify.cap), image(q, 2 * t, verify.cap), "Image(P_t) <= Image(Q_2t)");
        if (t >= 1) require_subset(image(q, t, verify.cap), image(original, t, verify.cap), "Image(Q_t) <= Image(P_t)");
      });
      (done ? tr.verified_dilations : tr.skipped_dilations).push_back(t);
    }
  }
  return {std::move(q), std::move(tr)};
}

}  // namespace

std::pair<ConvexCosetProgression, RankReductionTrace> rank_reduce(const ConvexCosetProgression& p,
                                                                  std::size_t cap, VerifyOptions verify) {
  if (p.rank() == 0) throw PreconditionError("rank_reduce: rank-0 progressions are proper");
  const ConvexCosetProgression s = p.standardized();
  const ConvexPropernessResult prop = is_proper(s, kHalf, cap);
  if (prop.proper) throw PreconditionError("rank_reduce: P_{1/2} is proper");
  return reduce_with_witness(s, *prop.witness, p, cap, verify);
}

ConvJohnResult conv_john(const ConvexCosetProgression& p, const Rational& t, std::size_t cap,
                         VerifyOptions verify) {
  if (t < kHalf) throw PreconditionError("conv_john requires t >= 1/2");
  ConvJohnResult res;
  res.t = t;
  ConvexCosetProgression q = p;
  while (q.rank() > 0) {
    const ConvexCosetProgression s = q.standardized();
    const ConvexPropernessResult prop = is_proper(s, kHalf, cap);
    if (prop.proper) break;
    auto [next, trace] = reduce_with_witness(s, *prop.witness, q, cap, verify);
    res.ledger.push_back(std::move(trace));
    q = std::move(next);
  }
  res.q = q.dilate(1 / (2 * t));
  const long drop = static_cast<long>(p.rank() - res.q.rank());
  res.outer_factor = power_of_two(drop + 1) * t;
  res.inner_factor = 2 * t;
  res.cert.outer_factor = res.outer_factor;
  res.cert.inner_factor = res.inner_factor;
  if (!verify.enabled) return res;

  for (const Rational& s : {kHalf, Rational(1), Rational(2)}) {
    const bool done = capped([&] {
      require_subset(image(p, s, verify.cap), image(res.q, res.outer_factor * s, verify.cap),
                     "Image(P_s) <= Image(Q_{outer s})");
      if (s >= 1) {
        require_subset(image(res.q, res.inner_factor * s, verify.cap), image(p, s, verify.cap),
                       "Image(Q_{inner s}) <= Image(P_s)");
      }
    });
    (done ? res.cert.checked_dilations : res.cert.skipped_dilations).push_back(s);
  }
  capped([&] {
    if (!is_proper(res.q, t, verify.cap).proper) throw Error("conv_john: output is not t-proper");
  });
  return res;
}

namespace {

struct CoreResult {
  CosetProgression q;
  Rational discrete_lambda = 1;
  Rational lambda = 1;
  std::size_t reductions = 0;
};

CoreResult gap_john_core(const CosetProgression& p, const Rational& t, std::size_t cap) {
  if (t < 1) throw PreconditionError("gap_john requires t >= 1");
  if (p.rank() == 0) return {p, 1, 1, 0};
  const ConvJohnResult cj = conv_john(to_convex(p), kHalf, cap, VerifyOptions{false, cap});
  const ConvexCosetProgression pp = cj.q.standardized();
  const std::size_t d1 = pp.rank();
  const SymmetricPolytope half = d1 > 0 ? pp.body().dilate(kHalf) : pp.body();
  const DiscreteJohnResult dj = discrete_john(half, Lattice::standard(d1), {}, VerifyOptions{false, cap});

  Gap gap;
  for (std::size_t i = 0; i < d1; ++i) {
    gap.dims.push_back(dj.gap.dims()[i] / t);
    gap.steps.push_back(pp.phi(dj.gap.steps()[i].coords));
  }
  CoreResult out;
  out.q = CosetProgression(p.group(), std::move(gap), pp.symmetry());
  out.discrete_lambda = dj.lambda;
  out.lambda = dj.lambda * power_of_two(static_cast<long>(p.rank() - d1) + 1) * t;
  out.reductions = cj.ledger.size();
  return out;
}

bool log_ratio_within(std::size_t numerator, std::size_t denominator, double log2_bound) {
  return std::log2(static_cast<double>(numerator)) - std::log2(static_cast<double>(denominator)) <=
         log2_bound + 1e-9;
}

}  // namespace

GapJohnResult gap_john(const CosetProgression& p, const Rational& t, std::size_t cap, VerifyOptions verify) {
  CoreResult core = gap_john_core(p, t, cap);
  GapJohnResult res;
  res.q = std::move(core.q);
  res.rank_before = p.rank();
  res.reductions = core.reductions;
  res.discrete_lambda = core.discrete_lambda;
  res.lambda = core.lambda;
  res.cert.inner_factor = 1;
  res.cert.outer_factor = res.lambda;
  const std::size_t d = p.rank();
  res.lambda_within_bound =
      res.lambda * res.lambda <= pow(Rational(16 * static_cast<long>(d)), 3 * d) * t * t;
  if (!verify.enabled) return res;

  const bool done = capped([&] {
    if (!is_proper(res.q, t, verify.cap).proper) throw Error("gap_john: output is not t-proper");
    const FiniteSet img_p = image(p, 1, verify.cap);
    const FiniteSet img_q = image(res.q, 1, verify.cap);
    require_subset(img_q, img_p, "Image(Q) <= Image(P)");
    res.cert.verified_outer_factor = least_covering_dilation(img_p, res.q, res.lambda, verify.cap);
    if (!res.cert.verified_outer_factor) throw Error("gap_john: Image(P) not inside Image(Q_lambda)");
    res.size_p = img_p.size();
    res.size_q = img_q.size();
    const double dd = static_cast<double>(d);
    const double bound =
        d == 0 ? 0.0 : dd * std::log2(t.get_d()) + dd * dd + 16 * dd * (1 + std::log2(dd));
    res.size_bound_holds = log_ratio_within(img_p.size(), img_q.size(), bound);
  });
  (done ? res.cert.checked_dilations : res.cert.skipped_dilations).push_back(1);
  return res;
}

GapJohnOuterResult gap_john_outer(const CosetProgression& p, const Rational& t, std::size_t cap, int retry_limit,
                                  VerifyOptions verify) {
  if (t < 1) throw PreconditionError("gap_john_outer requires t >= 1");
  GapJohnOuterResult res;
  if (p.rank() == 0) {
    res.q = p;
    res.lambda = 1;
    res.cert.outer_factor = t;
    return res;
  }
  const FiniteSet img_p = image(p, 1, cap);
  Rational mu = 1;
  bool found = false;
  for (int attempt = 1; attempt <= retry_limit; ++attempt, mu *= 2) {
    res.attempts = attempt;
    CoreResult core = gap_john_core(p.dilate(mu * t), t, cap);
    if (img_p.is_subset_of(image(core.q, 1, cap))) {
      res.q = std::move(core.q);
      found = true;
      break;
    }
  }
  if (!found) throw CapExceeded("gap_john_outer: retry limit exceeded");
  res.lambda = mu;
  res.cert.inner_factor = 1;
  res.cert.outer_factor = mu * t;
  if (!verify.enabled) return res;

  const bool done = capped([&] {
    if (!is_proper(res.q, t, verify.cap).proper) throw Error("gap_john_outer: output is not t-proper");
    const FiniteSet img_q = image(res.q, 1, verify.cap);
    res.cert.verified_outer_factor = least_covering_dilation(img_q, p, mu * t, verify.cap);
    if (!res.cert.verified_outer_factor) throw Error("gap_john_outer: Image(Q) not inside Image(P_{lambda t})");
    res.size_p = img_p.size();
    res.size_q = img_q.size();
    const double dd = static_cast<double>(p.rank());
    const double bound = 1.5 * dd * dd * std::log2(16 * dd) + dd * std::log2(t.get_d());
    res.size_bound_holds = log_ratio_within(img_q.size(), img_p.size(), bound);
  });
  (done ? res.cert.checked_dilations : res.cert.skipped_dilations).push_back(1);
  return res;
}

}  // namespace gapjohn
