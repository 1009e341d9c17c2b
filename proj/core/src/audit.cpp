#include <set>
#include <sstream>

#include "gapjohn/commands.hpp"
#include "gapjohn/errors.hpp"

namespace gapjohn {

namespace {

using oracle::VerificationReport;

const Json& at(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("certificate is missing \"") + key + "\"");
  return j.at(key);
}

VerificationReport fact(std::string claim, bool holds, std::string detail = {}) {
  VerificationReport r;
  r.claim = std::move(claim);
  r.holds = holds;
  r.elements_checked = 1;
  if (!holds) r.detail = std::move(detail);
  return r;
}

VerificationReport proper_claim(const std::string& claim, const CosetProgression& q, const Rational& t,
                                std::size_t cap) {
  VerificationReport r;
  r.claim = claim;
  if (auto c = oracle::brute_collision(q, t, cap)) {
    r.holds = false;
    r.counterexample = *c;
  }
  r.elements_checked = 1;
  return r;
}

bool integer_dims(const CosetProgression& q) {
  for (const auto& n : q.dims())
    if (n.get_den() != 1) return false;
  return true;
}

// target <= union of (x + tile).
VerificationReport union_claim(const FiniteSet& target, const std::vector<GroupElement>& xs, const FiniteSet& tile) {
  const AmbientGroup& g = target.group();
  std::set<GroupElement> covered;
  for (const auto& x : xs)
    for (const auto& s : tile) covered.insert(g.add(x, s));
  std::vector<GroupElement> u(covered.begin(), covered.end());
  return oracle::verify_inclusion(target, FiniteSet(g, std::move(u)), "target inside union of translates");
}

std::string vector_text(const RationalVector& v) {
  std::ostringstream out;
  out << "(";
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << to_string(v[i]);
  out << ")";
  return out.str();
}

void audit_inner_outer(const Json& doc, AuditReport& a, std::size_t cap) {
  const Json& input = at(doc, "input");
  const Json& result = at(doc, "result");
  const AmbientGroup g = group_from_json(at(input, "group"));
  const CosetProgression p = progression_from_json(g, at(input, "progression"));
  const CosetProgression q = progression_from_json(g, at(result, "q"));
  const Rational t = rational_from_json(at(at(doc, "parameters"), "t"));
  const Rational lambda = rational_from_json(at(result, "lambda"));
  if (lambda <= 0) {
    a.checks.push_back(fact("lambda positive", false, "lambda = " + to_string(lambda)));
    return;
  }
  a.checks.push_back(proper_claim("Q is t-proper", q, t, cap));
  const FiniteSet img_p = oracle::brute_image(p, 1, cap);
  const FiniteSet img_q = oracle::brute_image(q, 1, cap);
  // A certified smaller factor is checked instead: P_s <= P_u for s <= u.
  auto checked_factor = [&](const Rational& claimed) {
    if (result.contains("certificate") && result.at("certificate").contains("verified_outer_factor")) {
      const Rational v = rational_from_json(result.at("certificate").at("verified_outer_factor"));
      if (v > 0 && v < claimed) return v;
    }
    return claimed;
  };
  if (at(result, "kind") == "inner") {
    const Rational mu = checked_factor(lambda);
    a.checks.push_back(oracle::verify_inclusion(img_q, img_p, "Image(Q) inside Image(P)"));
    a.checks.push_back(oracle::verify_inclusion(img_p, oracle::brute_image(q, mu, cap),
                                                "Image(P) inside Image(Q_" + to_string(mu) + ")"));
  } else {
    const Rational mu = checked_factor(lambda * t);
    a.checks.push_back(oracle::verify_inclusion(img_p, img_q, "Image(P) inside Image(Q)"));
    a.checks.push_back(oracle::verify_inclusion(img_q, oracle::brute_image(p, mu, cap),
                                                "Image(Q) inside Image(P_" + to_string(mu) + ")"));
  }
}

void audit_discrete(const Json& doc, AuditReport& a, std::size_t cap) {
  const Json& input = at(doc, "input");
  const Json& result = at(doc, "result");
  const SymmetricPolytope body = polytope_from_json(at(input, "polytope"));
  const RationalMatrix basis =
      input.contains("lattice") ? matrix_from_json(input.at("lattice")) : RationalMatrix::identity(body.dim());
  std::vector<Rational> dims;
  for (const auto& n : at(result, "dims")) dims.push_back(rational_from_json(n));
  std::vector<RationalVector> steps;
  for (const auto& s : at(result, "steps")) steps.push_back(vector_from_json(s));
  const Rational lambda = rational_from_json(at(result, "lambda"));
  if (dims.size() != steps.size() || lambda <= 0) {
    a.checks.push_back(fact("well-formed progression", false, "dims/steps mismatch or lambda <= 0"));
    return;
  }
  const std::size_t d = body.dim();
  std::vector<Rational> ts;
  for (const auto& t : at(at(result, "certificate"), "checked_dilations")) ts.push_back(rational_from_json(t));
  for (const auto& t : ts) {
    // Points of P_t as vectors, by nested loops.
    std::vector<std::int64_t> m;
    Integer count = 1;
    for (const auto& n : dims) {
      m.push_back(to_int64(floor(n * t)));
      count *= 2 * m.back() + 1;
    }
    if (count > static_cast<unsigned long>(cap)) throw CapExceeded("audit: P_t exceeds cap");
    std::set<RationalVector> pts;
    std::vector<std::int64_t> n(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) n[i] = -m[i];
    while (true) {
      RationalVector x(d);
      for (std::size_t i = 0; i < n.size(); ++i)
        for (std::size_t k = 0; k < d; ++k) x[k] += Rational(static_cast<long>(n[i])) * steps[i][k];
      pts.insert(std::move(x));
      std::size_t i = 0;
      while (i < m.size() && n[i] == m[i]) n[i] = -m[i], ++i;
      if (i == m.size()) break;
      ++n[i];
    }
    const SymmetricPolytope outer = body.dilate(t);
    VerificationReport in_body;
    in_body.claim = "Image(P_" + to_string(t) + ") inside " + to_string(t) + "B n Gamma";
    for (const auto& x : pts) {
      ++in_body.elements_checked;
      bool ok = oracle::brute_in_lattice(x, basis);
      for (const auto& c : outer.constraints()) {
        Rational dot = 0;
        for (std::size_t k = 0; k < d; ++k) dot += c.a[k] * x[k];
        ok = ok && abs(dot) <= c.b;
      }
      if (!ok) {
        in_body.holds = false;
        in_body.detail = vector_text(x);
        break;
      }
    }
    a.checks.push_back(in_body);
    VerificationReport covers;
    covers.claim = "(" + to_string(t) + "/lambda)B n Gamma inside Image(P_" + to_string(t) + ")";
    for (const auto& x : oracle::brute_body_points(body.dilate(t / lambda), basis, cap)) {
      ++covers.elements_checked;
      if (!pts.count(x)) {
        covers.holds = false;
        covers.detail = vector_text(x);
        break;
      }
    }
    a.checks.push_back(covers);
  }
}

void audit_cover(const Json& doc, AuditReport& a, std::size_t cap) {
  const Json& input = at(doc, "input");
  const Json& result = at(doc, "result");
  const Json& params = at(doc, "parameters");
  const AmbientGroup g = group_from_json(at(input, "group"));
  const CosetProgression p = progression_from_json(g, at(input, "progression"));
  const Rational t = rational_from_json(at(params, "t"));
  std::vector<GroupElement> xs;
  for (const auto& x : at(result, "translates")) xs.push_back(element_from_json(g, x));
  const Rational count(static_cast<unsigned long>(xs.size()));
  if (at(result, "kind") == "ruzsa") {
    const CosetProgression q = progression_from_json(g, at(input, "inner"));
    const Rational tp = rational_from_json(at(params, "t_prime"));
    const FiniteSet img_q = oracle::brute_image(q, 1, cap);
    a.checks.push_back(oracle::verify_inclusion(img_q, oracle::brute_image(p, t, cap), "Image(Q) inside Image(P_t)"));
    a.checks.push_back(union_claim(oracle::brute_image(p, tp, cap), xs, oracle::brute_image(q, 2, cap)));
    const Rational bound = fraction(oracle::brute_image(p, t + tp, cap).size(), img_q.size());
    a.checks.push_back(fact("count within |Image(P_{t+t'})| / |Image(Q)|", count <= bound,
                            to_string(count) + " > " + to_string(bound)));
  } else {
    a.checks.push_back(union_claim(oracle::brute_image(p, t, cap), xs, oracle::brute_image(p, 1, cap)));
    const Rational bound = pow(4 * t + 1, static_cast<unsigned>(p.rank()));
    a.checks.push_back(fact("count within (4t+1)^d", count <= bound, to_string(count) + " > " + to_string(bound)));
  }
}

// x + Image(Q) <= target <= x' + K Image(Q).
void audit_sandwich(const FiniteSet& target, const CosetProgression& q, const GroupElement& x,
                    const GroupElement& x_prime, std::int64_t k, AuditReport& a, std::size_t cap) {
  const AmbientGroup& g = target.group();
  a.checks.push_back(proper_claim("Q is proper", q, 1, cap));
  a.checks.push_back(fact("Q has integer dimensions", integer_dims(q)));
  if (k < 1) {
    a.checks.push_back(fact("K >= 1", false, "K = " + std::to_string(k)));
    return;
  }
  auto shifted = [&](const FiniteSet& s, const GroupElement& by) {
    std::vector<GroupElement> v;
    for (const auto& e : s) v.push_back(g.add(e, by));
    return FiniteSet(g, std::move(v));
  };
  a.checks.push_back(oracle::verify_inclusion(shifted(oracle::brute_image(q, 1, cap), x), target, "x + Image(Q) inside target"));
  a.checks.push_back(oracle::verify_inclusion(target, shifted(oracle::brute_image(q, Rational(static_cast<long>(k)), cap), x_prime),
                                              "target inside x' + K Image(Q)"));
}

void audit_coalesce(const Json& doc, AuditReport& a, std::size_t cap) {
  const Json& input = at(doc, "input");
  const Json& result = at(doc, "result");
  const AmbientGroup g = group_from_json(at(input, "group"));
  const CosetProgression p = progression_from_json(g, at(input, "progression"));
  const std::int64_t l = at(at(doc, "parameters"), "l").get<std::int64_t>();
  const CosetProgression q = progression_from_json(g, at(result, "q"));
  const FiniteSet lp = oracle::brute_iterated_sumset(oracle::brute_image(p, 1, cap), l, cap);
  audit_sandwich(lp, q, g.zero(), g.zero(), at(result, "k_factor").get<std::int64_t>(), a, cap);
}

void audit_structure(const Json& doc, AuditReport& a, std::size_t cap) {
  const Json& input = at(doc, "input");
  const Json& result = at(doc, "result");
  const AmbientGroup g = group_from_json(at(input, "group"));
  const FiniteSet set = set_from_json(g, at(input, "set"));
  const std::int64_t l = at(at(doc, "parameters"), "l").get<std::int64_t>();
  const CosetProgression q = progression_from_json(g, at(result, "q"));
  const FiniteSet la = oracle::brute_iterated_sumset(set, l, cap);
  audit_sandwich(la, q, element_from_json(g, at(result, "x")), element_from_json(g, at(result, "x_prime")),
                 at(result, "k_factor").get<std::int64_t>(), a, cap);
}

void audit_sarkozy(const Json& doc, AuditReport& a, std::size_t cap) {
  const Json& input = at(doc, "input");
  const Json& result = at(doc, "result");
  const AmbientGroup g = group_from_json(at(input, "group"));
  const FiniteSet set = set_from_json(g, at(input, "set"));
  const std::int64_t l = at(at(doc, "parameters"), "l").get<std::int64_t>();
  const FiniteSet la = oracle::brute_iterated_sumset(set, l, cap);
  std::vector<GroupElement> neg;
  for (const auto& x : set) neg.push_back(g.negate(x));
  const FiniteSet h = oracle::brute_subgroup(oracle::brute_sumset(set, FiniteSet(g, neg), cap), cap);
  const GroupElement w = result.contains("witness") ? element_from_json(g, result.at("witness")) : la[0];
  std::vector<GroupElement> coset;
  for (const auto& e : h) coset.push_back(g.add(e, w));
  const bool is_coset = la.contains(w) && FiniteSet(g, coset) == la;
  const bool claimed = at(result, "holds").get<bool>();
  a.checks.push_back(fact("lA is a coset of <A - A> exactly when claimed", is_coset == claimed,
                          claimed ? "claimed coset, but lA differs" : "claimed no coset, but lA is one"));
}

void audit_demo(const Json& doc, AuditReport& a, std::size_t cap) {
  const Json& result = at(doc, "result");
  const AmbientGroup z = AmbientGroup::integers();
  const CosetProgression p = progression_from_json(z, at(result, "progression"));
  const FiniteSet img = oracle::brute_image(p, 1, cap);
  a.checks.push_back(fact("image size", img.size() == at(result, "image_size").get<std::size_t>()));
  const Rational lo = rational_from_json(at(result, "interval")[0]);
  const Rational hi = rational_from_json(at(result, "interval")[1]);
  Json missing = Json::array();
  for (std::int64_t x = to_int64(floor(lo)) + 1; Rational(static_cast<long>(x)) < hi; ++x)
    if (!img.contains(z.element({x}))) missing.push_back(x);
  a.checks.push_back(fact("missing points of the interval", missing == at(result, "missing_in_interval")));
}

}  // namespace

AuditReport audit_certificate(const Json& doc, std::size_t cap) {
  if (!doc.is_object() || !doc.contains("version") || doc.at("version") != kSchemaVersion)
    throw ParseError("certificate has no supported version");
  const std::string command = at(doc, "command").get<std::string>();
  AuditReport a;
  try {
    if (command == "properize" || command == "john" || command == "john-outer")
      audit_inner_outer(doc, a, cap);
    else if (command == "discrete-john")
      audit_discrete(doc, a, cap);
    else if (command == "cover")
      audit_cover(doc, a, cap);
    else if (command == "coalesce")
      audit_coalesce(doc, a, cap);
    else if (command == "sumset-structure")
      audit_structure(doc, a, cap);
    else if (command == "sarkozy")
      audit_sarkozy(doc, a, cap);
    else if (command == "demo-counterexample")
      audit_demo(doc, a, cap);
    else
      throw ParseError("unknown certificate command " + command);
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed certificate: ") + e.what());
  }
  for (const auto& c : a.checks) a.passed = a.passed && c.holds;
  return a;
}

Json to_json(const AuditReport& report) {
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    Json j{{"claim", c.claim}, {"holds", c.holds}, {"elements_checked", c.elements_checked}};
    if (c.counterexample) j["counterexample"] = to_json(*c.counterexample);
    if (!c.detail.empty()) j["detail"] = c.detail;
    checks.push_back(j);
  }
  return Json{{"version", kSchemaVersion}, {"passed", report.passed}, {"checks", checks}};
}

}  // namespace gapjohn
