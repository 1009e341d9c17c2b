#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "gapjohn/group.hpp"
#include "gapjohn/lattice.hpp"
#include "gapjohn/polytope.hpp"
#include "gapjohn/progression.hpp"

namespace gapjohn {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Conversions between library objects and JSON.  Rationals are strings
// ("3/2"); integers may also be plain numbers on input.  Every *_from_json
// throws ParseError on malformed input.
Json to_json(const Rational& q);
Rational rational_from_json(const Json& j);

Json to_json(const AmbientGroup& g);
AmbientGroup group_from_json(const Json& j);

Json to_json(const GroupElement& e);
// Accepts a coordinate array, or a bare integer for groups of arity one.
GroupElement element_from_json(const AmbientGroup& g, const Json& j);

Json to_json(const FiniteSet& s);
FiniteSet set_from_json(const AmbientGroup& g, const Json& j);

Json to_json(const CosetProgression& p);
CosetProgression progression_from_json(const AmbientGroup& g, const Json& j);

Json to_json(const SymmetricPolytope& b);
SymmetricPolytope polytope_from_json(const Json& j);

// Row-major array of rational strings.
Json to_json(const RationalMatrix& m);
RationalMatrix matrix_from_json(const Json& j);

Json to_json(const RationalVector& v);
RationalVector vector_from_json(const Json& j);

// Parses text, checking the mandatory version field.
Json parse_document(const std::string& text);
// Canonical text: sorted keys, two-space indent, trailing newline.
std::string dump_document(const Json& j);

}  // namespace gapjohn
