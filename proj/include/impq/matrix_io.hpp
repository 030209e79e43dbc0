#pragma once

#include <filesystem>

#include "impq/operator_core.hpp"

namespace impq {

/// Write M in the matrix JSON schema. Doubles are printed with enough digits
/// to round-trip bit-exactly. Throws IoError / SchemaError (non-finite entry).
void save_matrix(const std::filesystem::path& path, const ComplexMatrix& m);

/// Read a matrix JSON file. Errors carry the offending path: IoError when
/// the file cannot be read, SchemaError for malformed JSON or schema violations.
ComplexMatrix load_matrix(const std::filesystem::path& path);

}  // namespace impq
