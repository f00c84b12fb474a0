#pragma once

#include <nlohmann/json.hpp>

#include "opschur/kv_extension.hpp"
#include "opschur/star_algebra.hpp"
#include "opschur/types.hpp"

namespace opschur {

using Json = nlohmann::json;

/// Shared matrix format: {"dim": n, "entries": [[[re, im], ...], ...]} with
/// row-major nesting. A real-only shorthand [[x, ...], ...] is accepted, as
/// is a bare nested array and, for rectangular matrices, {"rows", "cols",
/// "entries"}. All numbers must be finite.
Matrix matrix_from_json(const Json& doc);
Json matrix_to_json(const Matrix& m);

/// Vectors are arrays of numbers or [re, im] pairs.
Vector vector_from_json(const Json& doc);
Json vector_to_json(const Vector& v);

/// {"ambientDim": n, "domainBasis": matrix, "values": matrix}
PartialPositiveOperator partial_operator_from_json(const Json& doc,
                                                   const TolerancePolicy& pol = {});
Json partial_operator_to_json(const PartialPositiveOperator& p);

/// {"envDim": d, "basis": [matrix, ...], "unital": bool (optional)}
AlgebraPtr algebra_from_json(const Json& doc, const TolerancePolicy& pol = {});

/// {"values": [[re, im], ...]}
Functional functional_from_json(const Json& doc, const AlgebraPtr& algebra);
Json functional_to_json(const Functional& f);

Json policy_to_json(const TolerancePolicy& pol);

Json parse_json_file(const std::string& path);
Json parse_json_text(const std::string& text);

}  // namespace opschur
