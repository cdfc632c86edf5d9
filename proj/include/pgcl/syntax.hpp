#pragma once

// Abstract syntax of the probabilistic guarded-command language.
//
// Nodes are immutable and shared through shared_ptr<const ...>, so programs
// are cheap to copy and execution states can share unchanged subtrees.

#include <cstddef>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pgcl/rational.hpp"

namespace pgcl {

using Var = std::string;

/// True for identifiers matching [A-Za-z_][A-Za-z0-9_]* that are not keywords.
bool is_valid_var_name(std::string_view name);
/// Names starting with "__" belong to generated code.
bool is_reserved_name(std::string_view name);

// ---------------------------------------------------------------------------
// Arithmetic expressions

enum class ArithOp { Add, Sub, Mul, Div, IntDiv, Mod };

struct ArithExpr;
using Arith = std::shared_ptr<const ArithExpr>;

struct ArithExpr {
  struct Literal {
    Rational value;
  };
  struct Variable {
    Var name;
  };
  struct Binary {
    ArithOp op;
    Arith lhs;
    Arith rhs;
  };
  std::variant<Literal, Variable, Binary> node;
};

Arith lit(const Rational& value);
Arith lit(long value);
Arith var(Var name);
Arith binary(ArithOp op, Arith lhs, Arith rhs);
Arith operator+(Arith a, Arith b);
Arith operator-(Arith a, Arith b);
Arith operator*(Arith a, Arith b);

// ---------------------------------------------------------------------------
// Boolean expressions

enum class CmpOp { Lt, Le, Eq, Ne };
enum class BoolOp { And, Or };

struct BoolExpr;
using Bool = std::shared_ptr<const BoolExpr>;

struct BoolExpr {
  struct Compare {
    CmpOp op;
    Arith lhs;
    Arith rhs;
  };
  struct Binary {
    BoolOp op;
    Bool lhs;
    Bool rhs;
  };
  struct Not {
    Bool operand;
  };
  std::variant<Compare, Binary, Not> node;
};

Bool compare(CmpOp op, Arith lhs, Arith rhs);
Bool conj(Bool lhs, Bool rhs);
Bool disj(Bool lhs, Bool rhs);
Bool negate(Bool operand);

// ---------------------------------------------------------------------------
// Programs
//
// `Done` is the terminal marker. The parser never produces it; it only shows
// up inside execution states, either alone or as the left part of a Seq.

struct Stmt;
using Program = std::shared_ptr<const Stmt>;

struct Stmt {
  struct Assign {
    Var target;
    Arith value;
  };
  struct Seq {
    Program first;
    Program second;
  };
  struct Choice {
    Program left;
    Rational prob;
    Program right;
  };
  struct While {
    Bool guard;
    Program body;
  };
  struct Done {};
  std::variant<Assign, Seq, Choice, While, Done> node;
};

/// Raised when a choice probability lies outside [0, 1].
class ProbabilityRangeError : public Error {
 public:
  using Error::Error;
};

Program assign(Var target, Arith value);
Program seq(Program first, Program second);
/// Right-nested sequence of the given statements; needs at least one.
Program seq(const std::vector<Program>& parts);
/// Throws ProbabilityRangeError unless 0 <= prob <= 1.
Program choice(Program left, const Rational& prob, Program right);
Program loop(Bool guard, Program body);
/// The shared terminal marker.
const Program& done();

bool is_done(const Program& p);
bool is_assign(const Program& p);
bool is_seq(const Program& p);
bool is_choice(const Program& p);
bool is_while(const Program& p);

// Structural equality and hashing (pointer-equal subtrees short-circuit).
bool equal(const Arith& a, const Arith& b);
bool equal(const Bool& a, const Bool& b);
bool equal(const Program& a, const Program& b);
std::size_t hash_value(const Program& p);

/// True iff the program contains no probabilistic choice.
bool is_ordinary(const Program& p);
/// Number of Choice nodes.
std::size_t count_choices(const Program& p);

/// Variables in first-occurrence order (left to right; an assignment's
/// target precedes its right-hand side).
std::vector<Var> vars_of(const Program& p);
void collect_vars(const Arith& e, std::vector<Var>& out);
void collect_vars(const Bool& b, std::vector<Var>& out);

// ---------------------------------------------------------------------------
// Fresh names and surface sugar

/// Hands out "__<stem><n>" names that avoid every name registered so far.
class NameSupply {
 public:
  NameSupply() = default;
  explicit NameSupply(const std::vector<Var>& taken);

  void reserve(const Var& name);
  void reserve(const std::vector<Var>& names);
  Var fresh(std::string_view stem);

 private:
  std::set<Var> taken_;
};

/// `skip`, realised as an assignment to a reserved scratch variable.
Program make_skip();

/// `if (b) {then} else {otherwise}` expanded into a flag and two loops:
///   __t := 0;
///   while (b && __t = 0) { then; __t := 1 };
///   while (!(b) && __t = 0) { otherwise; __t := 1 }
Program make_if(const Bool& guard, Program then_branch, Program else_branch,
                NameSupply& names);

}  // namespace pgcl
