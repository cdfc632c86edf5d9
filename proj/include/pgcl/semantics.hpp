#pragma once

// Small-step operational semantics over execution states
// <control, valuation, path probability, choice trace>.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pgcl/syntax.hpp"

namespace pgcl {

/// Finite map Var -> nonnegative rational. Absent variables read as 0 and
/// zero entries are never stored, so the empty valuation is the all-zero one.
class Valuation {
 public:
  Valuation() = default;
  Valuation(std::initializer_list<std::pair<const Var, Rational>> init);

  Rational get(const Var& v) const;
  /// Throws Error for a negative value.
  void set(const Var& v, const Rational& value);

  const std::map<Var, Rational>& entries() const { return entries_; }
  bool operator==(const Valuation&) const = default;

 private:
  std::map<Var, Rational> entries_;
};

enum class Dir : char { L = 'L', R = 'R' };

/// Word over {L, R} recording how choices were resolved.
class ChoiceString {
 public:
  ChoiceString() = default;
  /// Throws Error on any letter other than L or R.
  explicit ChoiceString(std::string_view letters);

  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Dir operator[](std::size_t i) const { return static_cast<Dir>(letters_[i]); }
  void push_back(Dir d) { letters_.push_back(static_cast<char>(d)); }
  const std::string& str() const { return letters_; }

  bool operator==(const ChoiceString&) const = default;

 private:
  std::string letters_;
};

ChoiceString operator+(const ChoiceString& a, const ChoiceString& b);

struct State {
  Program control;  // done() once terminated
  Valuation env;
  Rational prob = 1;
  ChoiceString trace;

  bool terminated() const { return is_done(control); }
  /// Reached through a probability-0 branch.
  bool zero_mass() const { return prob == 0; }
};

/// Exact state equality (structural on the control part).
bool operator==(const State& a, const State& b);

/// <P, eta_0, 1, epsilon>
State initial_state(const Program& p);

/// Result of a successor computation; nullopt is the marker for "no state".
using StepOutcome = std::optional<State>;

/// step() called on a state whose next rule is a probabilistic choice.
class ChoiceHeadedError : public Error {
 public:
  using Error::Error;
};

/// step_prob() called on a state whose next rule is not a probabilistic choice.
class NotChoiceHeadedError : public Error {
 public:
  using Error::Error;
};

Rational eval_arith(const Arith& e, const Valuation& env);
bool eval_bool(const Bool& b, const Valuation& env);

/// True iff the next inference on `control` uses a choice rule.
bool choice_headed(const Program& control);

/// Deterministic successor: rules assign (with clamp at 0), concat1,
/// concat2, while1, while2. Returns nullopt for a terminated state.
StepOutcome step(const State& s);

/// Resolves the head choice {P1} [p] {P2}: L gives <P1, eta, a*p, theta L>,
/// R gives <P2, eta, a*(1-p), theta R>.
State step_prob(const State& s, Dir d);

/// State after exactly k inferences of which exactly |w| are choices,
/// resolved by w in order; nullopt in every other case (terminated early,
/// choices left over, or a choice needed beyond w).
StepOutcome run(const State& s, std::uint64_t k, const ChoiceString& w);

/// Path probability of a terminated state, 0 for anything else.
Rational alpha(const StepOutcome& o);
/// eta(v) * a for a terminated state, 0 for anything else.
Rational weight(const StepOutcome& o, const Var& v);

/// Length-then-lexicographic enumeration of {L,R}* with L < R:
/// 0 -> "", 1 -> L, 2 -> R, 3 -> LL, 4 -> LR, ...
ChoiceString h(const Natural& n);
Natural h_inv(const ChoiceString& w);
/// Largest index whose word has length <= len, i.e. 2^(len+1) - 2.
Natural h_last_of_length(std::uint64_t len);

}  // namespace pgcl
