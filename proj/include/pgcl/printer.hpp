#pragma once

#include <string>

#include "pgcl/syntax.hpp"

namespace pgcl {

enum class Layout { SingleLine, Indented };

/// Concrete syntax accepted by parse(); parse(pretty_print(p)) is
/// structurally equal to p. A Seq whose first part is itself a Seq is
/// printed with grouping braces so the nesting survives the round trip.
/// The terminal marker prints as "↓" (only meaningful for state display).
std::string pretty_print(const Program& p, Layout layout = Layout::SingleLine);

std::string to_string(const Arith& e);
std::string to_string(const Bool& b);

}  // namespace pgcl
