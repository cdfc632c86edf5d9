#pragma once

#include <string>
#include <string_view>

#include "pgcl/syntax.hpp"

namespace pgcl {

/// Malformed program text. Line and column are 1-based; columns count bytes.
class SyntaxError : public Error {
 public:
  SyntaxError(int line, int column, const std::string& message);

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Parses `.pgcl` text. `skip` and `if`/`else` are desugared on the way in;
/// each if-site gets its own fresh "__t<n>" flag not used anywhere in `text`.
///
/// Grammar summary:
///   prog   := stmt (';' stmt)* [';']
///   stmt   := ID ':=' arith | 'skip' | 'while' '(' bool ')' block
///           | 'if' '(' bool ')' block ['else' (block | if)]
///           | block ['[' NUMBER ']' block]
///   block  := '{' prog '}'
///   arith  := literals, variables, + - * / div mod, parentheses
///   bool   := comparisons (< <= = != > >=) joined by && || !
///
/// A number written "n/m" with no spaces is a single rational literal; the
/// division operator needs an operand that is not a bare digit string on
/// both sides ("x/2", "1 / 2").
Program parse(std::string_view text);

/// As above, drawing desugaring flags from `names`.
Program parse(std::string_view text, NameSupply& names);

Arith parse_arith(std::string_view text);
Bool parse_bool(std::string_view text);

}  // namespace pgcl
