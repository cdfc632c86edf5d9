#pragma once

// Bijections used to enumerate input valuations of an ordinary program:
// naturals <-> pairs (Cantor), naturals <-> nonnegative rationals
// (0 followed by the Calkin-Wilf sequence), and their composition
// naturals <-> valuations over a fixed variable list.

#include <string>
#include <utility>
#include <vector>

#include "pgcl/semantics.hpp"

namespace pgcl {

class CodecError : public Error {
 public:
  using Error::Error;
};

/// (a + b)(a + b + 1)/2 + b
Natural cantor_pair(const Natural& a, const Natural& b);
std::pair<Natural, Natural> cantor_unpair(const Natural& n);

/// 0 -> 0, n + 1 -> n-th Calkin-Wilf term (1, 1/2, 2, 1/3, 3/2, ...).
Rational nat_to_rat(const Natural& n);
/// Inverse of nat_to_rat; throws CodecError for negative input.
Natural rat_to_nat(const Rational& q);

struct InputCodec {
  std::vector<Var> vars;
  std::string scheme = "cantor-calkin-wilf/v1";

  /// Codec over the user variables of `q` (reserved "__" names excluded), in
  /// first-occurrence order.
  static InputCodec for_program(const Program& q);
};

/// Splits i into one natural per variable by iterated unpairing
/// (i -> (n0, rest), rest -> (n1, rest'), ..., last component = remainder)
/// and maps each through nat_to_rat.
Valuation g_decode(const InputCodec& codec, const Natural& i);
/// Throws CodecError if `env` is nonzero outside the codec's variables.
Natural g_encode(const InputCodec& codec, const Valuation& env);

}  // namespace pgcl
