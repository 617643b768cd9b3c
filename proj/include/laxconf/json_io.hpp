#pragma once

#include <json.hpp>

#include "laxconf/conformance.hpp"

namespace laxconf {

using json = nlohmann::json;

// Numeric input policy: rationals are strings "p/q" (or "p") and "inf"; JSON
// integers are accepted exactly; floating-point literals are rejected unless
// allow_float is set, in which case they are converted to the nearest
// rational with denominator at most max_denominator and saw_float is raised
// so callers can downgrade their exactness claims.
struct parse_context {
  bool allow_float = false;
  long long max_denominator = 1000000;
  bool saw_float = false;
};

rational rational_from_json(const json& j, parse_context& ctx);
qvalue qvalue_from_json(quantale_kind k, const json& j, parse_context& ctx);

json to_json(const qvalue& v);
json to_json(const vrel& r);
vrel vrel_from_json(const json& j, parse_context& ctx);

json to_json(const carrier& c);

// System files. Schemas by "kind": lts, mts, stream, mlmc, weighted, list.
coalgebra coalgebra_from_json(const json& j, parse_context& ctx);
json to_json(const coalgebra& c);

// Standalone list for the edit command: {"symbols": ["a","b",...]}.
std::pair<carrier, list_elem> list_file_from_json(const json& j);

// Measure file for the ot command: {"monoid": "...", "mass": {key: "p/q"}}.
struct measure_file {
  monoid_kind monoid = monoid_kind::nat;
  std::vector<std::string> keys;
  std::vector<rational> mass;
};
measure_file measure_from_json(const json& j, parse_context& ctx);

json element_to_json(const functor_instance& inst, const carrier& states, const functor_element& t);

json load_json_file(const std::string& path);

}  // namespace laxconf
