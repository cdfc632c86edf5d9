#pragma once

// Exact anytime analysis of the execution tree rooted at <P, eta_0, 1, eps>.
//
// Two routes compute the same quantities:
//  * the double sum over (choice-string index i <= y1, step count j <= y2),
//    evaluated per word h(i) along a single trajectory, and
//  * a breadth-first frontier over the tree, splitting at choices.
// Both are exact; the frontier is the workhorse and the double sum the
// reference the frontier is checked against.

#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "pgcl/semantics.hpp"

namespace pgcl {

struct SumBounds {
  std::uint64_t y1 = 0;  // largest choice-string index h(i) summed over
  std::uint64_t y2 = 0;  // largest step count summed over
};

struct NodeBudget {
  std::uint64_t nodes = 0;  // number of states the frontier may expand
};

using Budget = std::variant<SumBounds, NodeBudget>;

// ---------------------------------------------------------------------------
// Double sums

struct PartialSums {
  Rational termination;
  std::vector<std::pair<Var, Rational>> expectation;  // in query order
};

PartialSums double_sum(const Program& p, const std::vector<Var>& vars, std::uint64_t y1,
                       std::uint64_t y2);
Rational expected_partial(const Program& p, const Var& v, std::uint64_t y1, std::uint64_t y2);
Rational termination_partial(const Program& p, std::uint64_t y1, std::uint64_t y2);

/// The terminated state reached by following word `w` from `s`, provided it
/// terminates within `max_steps` inferences after consuming all of `w`;
/// paired with the number of inferences taken.
std::optional<std::pair<State, std::uint64_t>> follow_word(const State& s,
                                                           const ChoiceString& w,
                                                           std::uint64_t max_steps);

// ---------------------------------------------------------------------------
// Divergence certificates

enum class Verdict { Certified, Unknown };

struct DivergenceCertificate {
  Verdict verdict = Verdict::Unknown;
  std::uint64_t period = 0;  // cycle length in inferences when certified
};

/// Sound, incomplete: certifies only when the choice-free continuation of
/// `s` revisits a (control, valuation) pair within `step_limit` inferences.
DivergenceCertificate certify_divergence(const State& s, std::uint64_t step_limit = 4096);

// ---------------------------------------------------------------------------
// Frontier exploration

struct ExploreOptions {
  std::uint64_t node_budget = 10000;
  std::optional<std::uint64_t> max_depth;  // do not expand states deeper than this
  bool certify_divergence = false;
  std::uint64_t certify_step_limit = 4096;
  unsigned workers = 1;
};

/// Double-sum bounds (y1, y2) whose partial sums equal the frontier's masses.
struct SumCoverage {
  Natural y1;
  std::uint64_t y2 = 0;
};

struct Coverage {
  std::uint64_t nodes_expanded = 0;
  std::optional<std::uint64_t> complete_depth;  // all states this deep or shallower expanded
  bool exhausted = false;                       // nothing live remains
  std::optional<SumCoverage> matched;           // set when stopped on a level boundary
  Natural max_trace_index;                      // over terminated states found
  std::uint64_t max_terminal_depth = 0;
};

struct BoundReport {
  Rational terminated_mass;
  Rational live_mass;
  Rational divergent_mass;
  std::vector<std::pair<Var, Rational>> expectation_mass;  // in query order
  Coverage budget_used;

  /// Throws Error for a variable that was not queried.
  const Rational& expectation(const Var& v) const;
};

/// Incremental breadth-first exploration. Deterministic for fixed inputs and
/// independent of the worker count.
class Explorer {
 public:
  Explorer(Program p, std::vector<Var> vars, ExploreOptions options = {});

  /// Expands up to `nodes` states, crossing level boundaries. Returns the
  /// number expanded.
  std::uint64_t advance(std::uint64_t nodes);
  /// Expands up to `nodes` states without leaving the current level.
  std::uint64_t advance_level(std::uint64_t nodes);

  /// True when nothing is left to expand (frontier empty or depth cap hit).
  bool finished() const;
  BoundReport report() const;

 private:
  struct SliceResult;
  SliceResult expand_slice(std::size_t begin, std::size_t end) const;
  void absorb(SliceResult&& r);
  void roll_level();

  Program program_;
  std::vector<Var> vars_;
  ExploreOptions options_;

  std::vector<State> level_;
  std::size_t cursor_ = 0;
  std::uint64_t depth_ = 0;
  std::vector<State> next_;

  Rational terminated_;
  Rational divergent_;
  std::vector<Rational> expectation_;
  std::uint64_t expanded_ = 0;
  bool any_terminal_ = false;
  Natural max_trace_index_;
  std::uint64_t max_terminal_depth_ = 0;
};

/// Runs a fresh Explorer for `options.node_budget` expansions.
BoundReport explore(const Program& p, const std::vector<Var>& vars,
                    const ExploreOptions& options = {});
BoundReport explore(const Program& p, std::uint64_t node_budget, const std::vector<Var>& vars);

// ---------------------------------------------------------------------------
// Semi-decision of q < E_P(v) and refutation of upper-bound candidates

struct LexpWitness {
  Natural y1;
  std::uint64_t y2 = 0;
  /// A lower bound on the double sum at (y1, y2), strictly above q.
  Rational partial_sum;
};

struct LexpUnknown {
  Budget exhausted;
  Rational best_sum;
};

using LexpVerdict = std::variant<LexpWitness, LexpUnknown>;

/// Searches for bounds (y1, y2) whose partial sum exceeds q. A witness proves
/// q < E_P(v); Unknown proves nothing.
LexpVerdict lexp_semidecide(const Program& p, const Var& v, const Rational& q,
                            const Budget& budget, unsigned workers = 1);

class DeltaNonPositiveError : public Error {
 public:
  using Error::Error;
};

struct UexpRefuted {
  Natural y1;
  std::uint64_t y2 = 0;
  Rational partial_sum;  // >= q - delta
};

struct UexpNotRefuted {
  Budget exhausted;
  Rational best_sum;  // < q - delta
};

using UexpVerdict = std::variant<UexpRefuted, UexpNotRefuted>;

/// Checks the candidate "every partial sum stays below q - delta" against
/// all truncations within the budget.
UexpVerdict uexp_refute(const Program& p, const Var& v, const Rational& q,
                        const Rational& delta, const Budget& budget, unsigned workers = 1);

}  // namespace pgcl
