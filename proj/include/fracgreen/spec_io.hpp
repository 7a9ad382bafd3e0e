#pragma once

#include <string>

#include "fracgreen/model.hpp"

namespace fracgreen {

// Parses the JSON problem document. Schema errors carry a JSON-pointer-style
// path; model violations propagate as ValidationError verbatim.
ProblemSpec parse_spec(const std::string& json_text);

// Shortest round-trip decimal form, locale-independent.
std::string format_double(double v);

} // namespace fracgreen
