#pragma once

#include <string>

#include "rr/common.hpp"

namespace rr {

/// Headerless, row-major numeric CSV. Blank lines and lines starting with
/// '#' are skipped. Throws PreconditionError on ragged rows or bad numbers.
Matrix read_matrix_csv(const std::string& path);

/// Accepts one value per line or a single row.
Vector read_vector_csv(const std::string& path);

/// 0-based integer indices, any mix of commas and newlines.
IndexSet read_index_csv(const std::string& path);

/// Parses "1,4,7" (0-based) into a set.
IndexSet parse_index_list(const std::string& text);

}  // namespace rr
