#pragma once

#include <string>

#include "weaklie/chart.hpp"
#include "weaklie/errors.hpp"
#include "weaklie/expr.hpp"

namespace weaklie {

/// Parses the expression grammar against declared coordinates, parameters
/// and opaque functions. Throws SyntaxError, UnknownIdentifier, ArityMismatch.
Expr parse_expression(const std::string& text, const Chart& chart, const Registry& registry);

/// Exact rational literal "p" or "p/q" (optional sign).
Rational parse_rational(const std::string& text);

}  // namespace weaklie
