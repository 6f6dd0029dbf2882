#pragma once

#include <string>

#include "ncrank/pencil.hpp"

namespace ncrank {

// {"rows","cols","num_vars","modulus"?,"constant":[[i,j,"v"],...],"coeffs":[[...],...]}
// Output is canonical: entries sorted by (i, j), values as decimal strings,
// no whitespace. Parsing then printing reproduces the input byte for byte.
std::string pencil_to_json(const LinearPencil& a);
// Throws std::invalid_argument on malformed input.
LinearPencil pencil_from_json(const std::string& text);

}  // namespace ncrank
