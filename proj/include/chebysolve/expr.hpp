#pragma once

#include <string>

#include "chebysolve/target.hpp"

namespace cheby {

// Parses a small arithmetic grammar over variables x (alias x1), x2, ..., xm:
// +, -, *, /, ^ (right associative), sin, cos, exp, parentheses, numeric
// literals. Derivatives come from finite differences.
ExplicitTarget parse_expression_target(const std::string& text, int m);

}  // namespace cheby
