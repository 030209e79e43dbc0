#pragma once

#include <json.hpp>

#include "impq/operator_core.hpp"

namespace impq {

/// { "dim": n, "entries": [[ [re, im], ... ], ...] }, row-major.
nlohmann::json matrix_to_json(const ComplexMatrix& m);

/// Parse the matrix schema. Throws SchemaError naming the first violation:
/// missing or non-integer dim, entries not an n x n array of [re, im] pairs,
/// non-finite values.
ComplexMatrix matrix_from_json(const nlohmann::json& j);

}  // namespace impq
