#include "gapjohn/io.hpp"

#include "gapjohn/errors.hpp"

namespace gapjohn {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

const Json& array(const Json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + " must be an array");
  return j;
}

std::int64_t int_from_json(const Json& j) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_string()) {
    const Rational q = parse_rational(j.get<std::string>());
    if (q.get_den() != 1) throw ParseError("expected an integer, got " + j.get<std::string>());
    return to_int64(q.get_num());
  }
  throw ParseError("expected an integer");
}

}  // namespace

Json to_json(const Rational& q) { return to_string(q); }

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<std::int64_t>()));
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw ParseError("expected a rational string");
}

Json to_json(const AmbientGroup& g) { return Json{{"free_rank", g.free_rank()}, {"moduli", g.moduli()}}; }

AmbientGroup group_from_json(const Json& j) {
  const std::int64_t r = int_from_json(field(j, "free_rank"));
  std::vector<std::int64_t> moduli;
  if (j.contains("moduli"))
    for (const auto& m : array(j.at("moduli"), "moduli")) moduli.push_back(int_from_json(m));
  try {
    return AmbientGroup(static_cast<int>(r), std::move(moduli));
  } catch (const PreconditionError& e) {
    throw ParseError(std::string("invalid group: ") + e.what());
  }
}

Json to_json(const GroupElement& e) { return e.coords; }

GroupElement element_from_json(const AmbientGroup& g, const Json& j) {
  std::vector<std::int64_t> c;
  if (j.is_array()) {
    for (const auto& x : j) c.push_back(int_from_json(x));
  } else {
    c.push_back(int_from_json(j));
  }
  if (c.size() != g.arity()) throw ParseError("element has the wrong number of coordinates");
  return g.element(std::move(c));
}

Json to_json(const FiniteSet& s) {
  Json out = Json::array();
  for (const auto& e : s) out.push_back(to_json(e));
  return out;
}

FiniteSet set_from_json(const AmbientGroup& g, const Json& j) {
  std::vector<GroupElement> v;
  for (const auto& x : array(j, "set")) v.push_back(element_from_json(g, x));
  return FiniteSet(g, std::move(v));
}

Json to_json(const CosetProgression& p) {
  Json dims = Json::array(), steps = Json::array(), gens = Json::array();
  for (const auto& n : p.dims()) dims.push_back(to_json(n));
  for (const auto& v : p.steps()) steps.push_back(to_json(v));
  for (const auto& h : p.symmetry().generators()) gens.push_back(to_json(h));
  return Json{{"dims", dims}, {"steps", steps}, {"symmetry_generators", gens}};
}

CosetProgression progression_from_json(const AmbientGroup& g, const Json& j) {
  Gap gp;
  for (const auto& n : array(field(j, "dims"), "dims")) gp.dims.push_back(rational_from_json(n));
  for (const auto& v : array(field(j, "steps"), "steps")) gp.steps.push_back(element_from_json(g, v));
  if (gp.dims.size() != gp.steps.size()) throw ParseError("dims and steps differ in length");
  std::vector<GroupElement> gens;
  if (j.contains("symmetry_generators"))
    for (const auto& h : array(j.at("symmetry_generators"), "symmetry_generators"))
      gens.push_back(element_from_json(g, h));
  try {
    return CosetProgression(g, std::move(gp), subgroup_generated(g, gens));
  } catch (const PreconditionError& e) {
    throw ParseError(std::string("invalid progression: ") + e.what());
  }
}

Json to_json(const SymmetricPolytope& b) {
  Json cs = Json::array();
  for (const auto& c : b.constraints()) cs.push_back(Json{{"a", to_json(c.a)}, {"b", to_json(c.b)}});
  return Json{{"dim", b.dim()}, {"constraints", cs}};
}

SymmetricPolytope polytope_from_json(const Json& j) {
  const std::int64_t d = int_from_json(field(j, "dim"));
  if (d < 0) throw ParseError("negative dimension");
  std::vector<SymmetricConstraint> cs;
  for (const auto& c : array(field(j, "constraints"), "constraints"))
    cs.push_back({vector_from_json(field(c, "a")), rational_from_json(field(c, "b"))});
  try {
    return SymmetricPolytope(static_cast<std::size_t>(d), std::move(cs));
  } catch (const PreconditionError& e) {
    throw ParseError(std::string("invalid polytope: ") + e.what());
  }
}

Json to_json(const RationalMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(to_json(m.row(i)));
  return rows;
}

RationalMatrix matrix_from_json(const Json& j) {
  std::vector<RationalVector> rows;
  for (const auto& r : array(j, "matrix")) rows.push_back(vector_from_json(r));
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  RationalMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw ParseError("ragged matrix");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = rows[i][k];
  }
  return m;
}

Json to_json(const RationalVector& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_json(x));
  return out;
}

RationalVector vector_from_json(const Json& j) {
  RationalVector v;
  for (const auto& x : array(j, "vector")) v.push_back(rational_from_json(x));
  return v;
}

Json parse_document(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("document must be a JSON object");
  if (!j.contains("version")) throw ParseError("missing field \"version\"");
  if (!j.at("version").is_number_integer() || j.at("version").get<int>() != kSchemaVersion)
    throw ParseError("unsupported schema version");
  return j;
}

std::string dump_document(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace gapjohn
