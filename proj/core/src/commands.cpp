#include "gapjohn/commands.hpp"

#include <algorithm>

#include "gapjohn/coalescence.hpp"
#include "gapjohn/covering.hpp"
#include "gapjohn/errors.hpp"
#include "gapjohn/sumset_structure.hpp"

namespace gapjohn {

namespace {

Json cert_json(const InclusionCert& c) {
  Json checked = Json::array(), skipped = Json::array();
  for (const auto& t : c.checked_dilations) checked.push_back(to_json(t));
  for (const auto& t : c.skipped_dilations) skipped.push_back(to_json(t));
  Json j{{"inner_factor", to_json(c.inner_factor)},
         {"outer_factor", to_json(c.outer_factor)},
         {"checked_dilations", checked},
         {"skipped_dilations", skipped},
         {"method", c.method}};
  if (c.verified_outer_factor) j["verified_outer_factor"] = to_json(*c.verified_outer_factor);
  return j;
}

template <typename T>
void put_optional(Json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

Json properize(const CosetProgression& p, const CommandOptions& o) {
  if (o.t < 1) throw PreconditionError("properize requires t >= 1");
  if (is_proper(p, o.t, o.cap).proper) {
    return Json{{"kind", "outer"}, {"q", to_json(p)}, {"lambda", "1"}, {"already_proper", true}};
  }
  const GapJohnOuterResult r = gap_john_outer(p, o.t, o.cap, o.retry_limit);
  Json j{{"kind", "outer"}, {"q", to_json(r.q)}, {"lambda", to_json(r.lambda)}, {"already_proper", false},
         {"attempts", r.attempts}, {"certificate", cert_json(r.cert)}};
  put_optional(j, "size_p", r.size_p);
  put_optional(j, "size_q", r.size_q);
  put_optional(j, "size_bound_holds", r.size_bound_holds);
  return j;
}

Json john(const CosetProgression& p, const CommandOptions& o) {
  const GapJohnResult r = gap_john(p, o.t, o.cap);
  Json j{{"kind", "inner"},
         {"q", to_json(r.q)},
         {"lambda", to_json(r.lambda)},
         {"rank_before", r.rank_before},
         {"reductions", r.reductions},
         {"discrete_lambda", to_json(r.discrete_lambda)},
         {"lambda_within_bound", r.lambda_within_bound},
         {"certificate", cert_json(r.cert)}};
  put_optional(j, "size_p", r.size_p);
  put_optional(j, "size_q", r.size_q);
  put_optional(j, "size_bound_holds", r.size_bound_holds);
  return j;
}

Json john_outer(const CosetProgression& p, const CommandOptions& o) {
  const GapJohnOuterResult r = gap_john_outer(p, o.t, o.cap, o.retry_limit);
  Json j{{"kind", "outer"}, {"q", to_json(r.q)}, {"lambda", to_json(r.lambda)}, {"attempts", r.attempts},
         {"certificate", cert_json(r.cert)}};
  put_optional(j, "size_p", r.size_p);
  put_optional(j, "size_q", r.size_q);
  put_optional(j, "size_bound_holds", r.size_bound_holds);
  return j;
}

Json discrete(const SymmetricPolytope& body, const Lattice& lattice, const CommandOptions& o) {
  const DiscreteJohnResult r = discrete_john(body, lattice, {1, 2, 4}, VerifyOptions{true, o.cap});
  Json steps = Json::array();
  for (const auto& s : r.steps) steps.push_back(to_json(s));
  Json dims = Json::array();
  for (const auto& n : r.gap.dims()) dims.push_back(to_json(n));
  Json j{{"dims", dims},
         {"steps", steps},
         {"lambda", to_json(r.lambda)},
         {"lambda_within_bound", r.lambda_within_bound},
         {"certificate", cert_json(r.cert)}};
  put_optional(j, "body_points", r.body_points);
  put_optional(j, "size_bounds_hold", r.size_bounds_hold);
  put_optional(j, "point_count_holds", r.point_count_holds);
  if (r.reduction) j["orthogonality_defect_squared"] = to_json(r.reduction->defect_squared);
  return j;
}

Json cover(const AmbientGroup& g, const Json& input, const CosetProgression& p, const CommandOptions& o) {
  CoveringCertificate c;
  std::string kind = "doubling";
  if (input.contains("inner")) {
    kind = "ruzsa";
    c = ruzsa_cover(p, progression_from_json(g, input.at("inner")), o.t, o.t_prime, o.cap);
  } else {
    c = doubling_cover(p, o.t, o.cap);
  }
  Json translates = Json::array();
  for (const auto& x : c.translates) translates.push_back(to_json(x));
  Json j{{"kind", kind},           {"translates", translates}, {"covering_set", c.covering_set},
         {"count", c.count},       {"bound", to_json(c.bound)}, {"within_bound", c.within_bound},
         {"target_size", c.target_size}, {"tile_size", c.tile_size}};
  put_optional(j, "size_inequality_holds", c.size_inequality_holds);
  if (c.run_constant) j["run_constant"] = to_json(*c.run_constant);
  return j;
}

Json coalesce_json(const CoalescenceResult& r) {
  Json levels = Json::array();
  for (const auto& lv : r.levels) {
    Json e{{"rank", lv.rank}, {"l", to_json(lv.l)}, {"action", lv.action}};
    put_optional(e, "k", lv.k);
    if (lv.lambda) e["lambda"] = to_json(*lv.lambda);
    if (lv.l_next) e["l_next"] = to_json(*lv.l_next);
    levels.push_back(e);
  }
  Json j{{"q", to_json(r.q)},
         {"k_factor", r.k_factor},
         {"depth", r.depth},
         {"levels", levels},
         {"size_q", r.size_q},
         {"size_lp", r.size_lp},
         {"size_p", r.size_p},
         {"run_constant", to_json(r.run_constant)},
         {"proper", r.proper},
         {"same_group", r.same_group},
         {"k_within_bound", r.k_within_bound},
         {"k_bound", to_string(coalescence_bound(r.levels.empty() ? 0 : r.levels[0].rank))}};
  if (r.structural_k) j["structural_k"] = to_string(*r.structural_k);
  return j;
}

Json structure(const FiniteSet& a, const CommandOptions& o) {
  StructureOptions so;
  so.threshold = o.threshold;
  so.cap = o.cap;
  const SumsetStructureResult r = iterated_structure(a, o.l, o.d, so);
  Json steps = Json::array();
  for (std::size_t i = 0; i < r.adjoined.m; ++i)
    steps.push_back(Json{{"a", to_json(r.adjoined.a[i])}, {"b", to_json(r.adjoined.b[i])}, {"c", to_json(r.adjoined.c[i])}});
  Json ratios = Json::array();
  for (const auto& q : r.doubling.ratios) ratios.push_back(to_json(q));
  Json j{{"q", to_json(r.q)},
         {"x", to_json(r.x)},
         {"x_prime", to_json(r.x_prime)},
         {"k_factor", r.k_factor},
         {"rank", r.q.rank()},
         {"rank_within_bound", r.rank_within_bound},
         {"shift", to_json(r.shift)},
         {"k_prime", r.k_prime},
         {"doubling", to_json(r.doubling.doubling)},
         {"doubling_ratios", ratios},
         {"core", Json{{"set", to_json(r.core.f)}, {"center", to_json(r.core.center)}}},
         {"extracted", to_json(r.extracted.p)},
         {"extracted_size", r.extracted.size},
         {"adjoined", Json{{"p_prime", to_json(r.adjoined.p_prime)},
                           {"x1", to_json(r.adjoined.x1)},
                           {"m", r.adjoined.m},
                           {"steps", steps},
                           {"cover_verified", r.adjoined.cover_verified},
                           {"decomposition_verified", r.adjoined.decomposition_verified},
                           {"base_verified", r.adjoined.base_verified}}},
         {"l_prime", r.l_prime},
         {"coalescence", coalesce_json(r.coalescence)},
         {"size_la", r.size_la},
         {"threshold", to_json(o.threshold)}};
  put_optional(j, "zero_base", r.zero_base);
  return j;
}

Json sarkozy(const FiniteSet& a, const CommandOptions& o) {
  const SarkozyResult r = sarkozy_check(a, o.l, o.cap);
  Json j{{"holds", r.holds}, {"size_la", r.size_la}, {"difference_group_order", r.difference_group.order()},
         {"difference_group", to_json(r.difference_group.elements())}};
  if (r.witness) j["witness"] = to_json(*r.witness);
  put_optional(j, "first_l", r.first_l);
  if (auto gate = sarkozy_gate(a, o.threshold, 1 << 20, o.cap)) j["gate_l"] = *gate;
  return j;
}

Json demo(const CommandOptions& o) {
  const std::int64_t n = o.n;
  if (n < 2 || n > 64) throw PreconditionError("demo-counterexample requires 2 <= n <= 64");
  const AmbientGroup z = AmbientGroup::integers();
  Gap gp;
  gp.dims = {fraction(n, 2), Rational(static_cast<long>(n))};
  gp.steps = {z.element({1}), z.element({n})};
  const CosetProgression p(z, gp);
  const FiniteSet img = image(p, 1, o.cap);
  // Open interval (-N^2 + N/2, N^2 - N/2).
  const Rational lo = -Rational(static_cast<long>(n * n)) + fraction(n, 2);
  const Rational hi = -lo;
  Json missing = Json::array();
  for (std::int64_t x = to_int64(floor(lo)) + 1; Rational(static_cast<long>(x)) < hi; ++x)
    if (!img.contains(z.element({x}))) missing.push_back(x);
  std::size_t half_total = 0, half_missing = 0;
  if (n % 2 == 0) {
    for (std::int64_t k = -n; k <= n; ++k) {
      const std::int64_t x = k * n + n / 2;
      if (Rational(static_cast<long>(x)) <= lo || Rational(static_cast<long>(x)) >= hi) continue;
      ++half_total;
      half_missing += !img.contains(z.element({x}));
    }
  }
  // Coordinate map x -> (n1, n2) from the first representation found, and
  // the linear map x -> x.
  const AmbientGroup z2 = AmbientGroup::integers(2);
  FiniteMap coord, linear;
  const std::int64_t m1 = n / 2;
  std::vector<bool> seen(static_cast<std::size_t>(2 * (m1 + n * n) + 1), false);
  for (std::int64_t n2 = -n; n2 <= n; ++n2)
    for (std::int64_t n1 = -m1; n1 <= m1; ++n1) {
      const std::int64_t x = n1 + n * n2;
      auto idx = static_cast<std::size_t>(x + m1 + n * n);
      if (seen[idx]) continue;
      seen[idx] = true;
      coord.push_back({z.element({x}), z2.element({n1, n2})});
      linear.push_back({z.element({x}), z.element({x})});
    }
  const FreimanHomResult c = freiman_hom_check(z, z2, coord);
  const FreimanHomResult l = freiman_hom_check(z, z, linear);
  Json j{{"n", n},
         {"progression", to_json(p)},
         {"image_size", img.size()},
         {"interval", Json{to_string(lo), to_string(hi)}},
         {"missing_in_interval", missing},
         {"half_multiples_total", half_total},
         {"half_multiples_missing", half_missing},
         {"half_multiples_all_missing", n % 2 == 0 && half_total > 0 && half_missing == half_total},
         {"coordinate_map_is_freiman_hom", c.is_hom},
         {"linear_map_is_freiman_hom", l.is_hom}};
  if (c.witness) {
    Json w = Json::array();
    for (const auto& e : *c.witness) w.push_back(to_json(e));
    j["coordinate_map_witness"] = w;
  }
  return j;
}

}  // namespace

Json run_command(const std::string& command, const Json& input, const CommandOptions& o) {
  Json params{{"t", to_json(o.t)}, {"cap", o.cap}};
  Json result;
  Json in = Json::object();
  if (command == "discrete-john") {
    const SymmetricPolytope body = polytope_from_json(input.contains("polytope") ? input.at("polytope") : input);
    RationalMatrix basis = RationalMatrix::identity(body.dim());
    if (input.contains("lattice")) basis = matrix_from_json(input.at("lattice"));
    if (basis.rows() != body.dim() || basis.cols() != body.dim()) throw ParseError("lattice basis has the wrong shape");
    in = Json{{"polytope", to_json(body)}, {"lattice", to_json(basis)}};
    result = discrete(body, Lattice(basis), o);
    params = Json{{"cap", o.cap}};
  } else if (command == "demo-counterexample") {
    result = demo(o);
    params = Json{{"n", o.n}};
  } else if (command == "sumset-structure" || command == "sarkozy") {
    const AmbientGroup g = group_from_json(input.contains("group") ? input.at("group") : Json());
    const FiniteSet a = set_from_json(g, input.contains("set") ? input.at("set") : Json());
    if (a.empty()) throw PreconditionError("the input set is empty");
    in = Json{{"group", to_json(g)}, {"set", to_json(a)}};
    params = Json{{"l", o.l}, {"cap", o.cap}, {"threshold", to_json(o.threshold)}};
    if (command == "sumset-structure") {
      params["d"] = o.d;
      result = structure(a, o);
    } else {
      result = sarkozy(a, o);
    }
  } else if (std::find(kCommands.begin(), kCommands.end(), command) != kCommands.end()) {
    const AmbientGroup g = group_from_json(input.contains("group") ? input.at("group") : Json());
    const CosetProgression p = progression_from_json(g, input.contains("progression") ? input.at("progression") : Json());
    in = Json{{"group", to_json(g)}, {"progression", to_json(p)}};
    if (command == "properize") {
      result = properize(p, o);
    } else if (command == "john") {
      result = john(p, o);
    } else if (command == "john-outer") {
      params["retry_limit"] = o.retry_limit;
      result = john_outer(p, o);
    } else if (command == "cover") {
      if (input.contains("inner")) {
        in["inner"] = to_json(progression_from_json(g, input.at("inner")));
        params["t_prime"] = to_json(o.t_prime);
      }
      result = cover(g, input, p, o);
    } else {
      params = Json{{"l", o.l}, {"cap", o.cap}};
      result = coalesce_json(coalesce(p, o.l, o.cap));
    }
  } else {
    throw PreconditionError("unknown command " + command);
  }
  return Json{{"version", kSchemaVersion}, {"command", command}, {"parameters", params}, {"input", in}, {"result", result}};
}

}  // namespace gapjohn
