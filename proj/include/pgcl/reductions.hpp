#pragma once

// Program generators for three many-one reductions:
//
//   ast_to_exp : Q            -> (v := 0; Q; v := 1,  v, 1)
//   uh_to_ast  : ordinary Q   -> geometric i; decode inputs from i; Q
//   uh_to_uexp : ordinary Q   -> geometric i and s; decode inputs from i;
//                                Q instrumented to flag "halted after exactly
//                                s cost units"; v := flag * 2^(s+1)
//
// Q is inlined rather than interpreted, so the generated program is an
// ordinary object-language program that anyone can run or analyse.

#include <optional>
#include <string>

#include "pgcl/codec.hpp"

namespace pgcl {

class NotOrdinaryError : public Error {
 public:
  using Error::Error;
};

class ReservedVarClashError : public Error {
 public:
  using Error::Error;
};

enum class ReductionKind { UhToUexp, AstToExp, UhToAst };

std::string to_string(ReductionKind kind);  // "uh_to_uexp", ...
/// Accepts both "uh_to_uexp" and the short CLI spelling "uh2uexp".
ReductionKind parse_reduction_kind(std::string_view text);

struct ReductionOutput {
  Program program;
  std::optional<Var> target_var;
  std::optional<Rational> target_value;
  ReductionKind kind;
  std::string source_hash;
};

/// "fnv1a64:<16 hex digits>" over the single-line pretty print of `p`.
std::string source_hash(const Program& p);

/// "counter := 0; {coin := 0} [1/2] {coin := 1};
///  while (coin != 0) { counter := counter + 1; {coin := 0} [1/2] {coin := 1} }"
/// leaves counter = k with probability 2^-(k+1).
Program geometric_generator(const Var& counter, const Var& coin);

/// Ordinary program that, started with `index` holding a natural and the
/// codec variables at 0, terminates with the codec variables holding
/// g_decode(codec, index). Scratch variables come from `names`.
Program gen_decoder_program(const InputCodec& codec, const Var& index, NameSupply& names);
Program gen_decoder_program(const InputCodec& codec, const Var& index);

inline constexpr std::string_view kCounterVar = "__cnt";
inline constexpr std::string_view kAbortVar = "__abort";
inline constexpr std::string_view kFlagVar = "__flag";

/// Cost of running Q: one unit per executed assignment of Q, plus one unit
/// per iteration of each loop whose body can finish without assigning.
/// The instrumented program always terminates and sets __flag = 1 iff Q
/// halts having spent exactly `budget` units (the value of `budget` at
/// entry), else __flag = 0.
Program instrument_exact_steps(const Program& q, const Var& budget, NameSupply& names);
Program instrument_exact_steps(const Program& q, const Var& budget);

/// True iff every complete execution of p runs at least one assignment.
bool always_assigns(const Program& p);

ReductionOutput reduce_ast_to_exp(const Program& q);
ReductionOutput reduce_uh_to_ast(const Program& q);
ReductionOutput reduce_uh_to_uexp(const Program& q);
ReductionOutput reduce(ReductionKind kind, const Program& q);

}  // namespace pgcl
