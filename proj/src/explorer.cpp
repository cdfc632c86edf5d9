#include "pgcl/explorer.hpp"

#include <algorithm>
#include <functional>
#include <thread>

namespace pgcl {

std::optional<std::pair<State, std::uint64_t>> follow_word(const State& s,
                                                           const ChoiceString& w,
                                                           std::uint64_t max_steps) {
  State cur = s;
  std::size_t used = 0;
  for (std::uint64_t steps = 0;; ++steps) {
    if (cur.terminated()) {
      if (used != w.size()) return std::nullopt;
      return std::pair{std::move(cur), steps};
    }
    if (steps == max_steps) return std::nullopt;
    if (choice_headed(cur.control)) {
      if (used == w.size()) return std::nullopt;
      cur = step_prob(cur, w[used++]);
    } else {
      cur = *step(cur);
    }
  }
}

PartialSums double_sum(const Program& p, const std::vector<Var>& vars, std::uint64_t y1,
                       std::uint64_t y2) {
  PartialSums out;
  for (const auto& v : vars) out.expectation.emplace_back(v, Rational(0));
  const State init = initial_state(p);
  // For a fixed word, T*_prob(init, j, h(i)) is a terminated state for at
  // most one j: the step at which that trajectory stops, if it stops after
  // using the whole word. Every other j contributes 0.
  for (std::uint64_t i = 0;; ++i) {
    if (auto hit = follow_word(init, h(to_natural(i)), y2)) {
      const State& t = hit->first;
      out.termination += t.prob;
      for (auto& [v, sum] : out.expectation) sum += t.env.get(v) * t.prob;
    }
    if (i == y1) break;
  }
  return out;
}

Rational expected_partial(const Program& p, const Var& v, std::uint64_t y1, std::uint64_t y2) {
  return double_sum(p, {v}, y1, y2).expectation.front().second;
}

Rational termination_partial(const Program& p, std::uint64_t y1, std::uint64_t y2) {
  return double_sum(p, {}, y1, y2).termination;
}

DivergenceCertificate certify_divergence(const State& s, std::uint64_t step_limit) {
  auto deterministic = [](const State& x) {
    return !x.terminated() && !choice_headed(x.control);
  };
  auto same = [](const State& a, const State& b) {
    return a.env == b.env && equal(a.control, b.control);
  };
  if (!deterministic(s)) return {};
  // Brent's cycle detection on the choice-free continuation.
  State tortoise = s;
  State hare = *step(s);
  std::uint64_t power = 1;
  std::uint64_t lambda = 1;
  for (std::uint64_t steps = 1; !same(tortoise, hare); ++steps) {
    if (!deterministic(hare) || steps >= step_limit) return {};
    if (power == lambda) {
      tortoise = hare;
      power *= 2;
      lambda = 0;
    }
    hare = *step(hare);
    ++lambda;
  }
  return {Verdict::Certified, lambda};
}

const Rational& BoundReport::expectation(const Var& v) const {
  for (const auto& [name, value] : expectation_mass) {
    if (name == v) return value;
  }
  throw Error("variable '" + v + "' was not queried");
}

struct Explorer::SliceResult {
  std::vector<State> children;
  Rational terminated;
  Rational divergent;
  std::vector<Rational> expectation;
  bool any_terminal = false;
  Natural max_trace_index;
};

Explorer::Explorer(Program p, std::vector<Var> vars, ExploreOptions options)
    : program_(std::move(p)), options_(options) {
  for (auto& v : vars) {
    if (std::find(vars_.begin(), vars_.end(), v) == vars_.end()) vars_.push_back(std::move(v));
  }
  expectation_.assign(vars_.size(), Rational(0));
  level_.push_back(initial_state(program_));
}

bool Explorer::finished() const {
  if (cursor_ >= level_.size()) return true;
  return options_.max_depth && depth_ > *options_.max_depth;
}

Explorer::SliceResult Explorer::expand_slice(std::size_t begin, std::size_t end) const {
  SliceResult r;
  r.expectation.assign(vars_.size(), Rational(0));
  for (std::size_t k = begin; k < end; ++k) {
    const State& s = level_[k];
    if (s.terminated()) {
      r.terminated += s.prob;
      for (std::size_t i = 0; i < vars_.size(); ++i) r.expectation[i] += s.env.get(vars_[i]) * s.prob;
      Natural idx = h_inv(s.trace);
      if (!r.any_terminal || idx > r.max_trace_index) r.max_trace_index = idx;
      r.any_terminal = true;
      continue;
    }
    if (options_.certify_divergence &&
        certify_divergence(s, options_.certify_step_limit).verdict == Verdict::Certified) {
      r.divergent += s.prob;
      continue;
    }
    if (choice_headed(s.control)) {
      for (Dir d : {Dir::L, Dir::R}) {
        State child = step_prob(s, d);
        if (!child.zero_mass()) r.children.push_back(std::move(child));
      }
    } else {
      r.children.push_back(*step(s));
    }
  }
  return r;
}

void Explorer::absorb(SliceResult&& r) {
  terminated_ += r.terminated;
  divergent_ += r.divergent;
  for (std::size_t i = 0; i < expectation_.size(); ++i) expectation_[i] += r.expectation[i];
  if (r.any_terminal) {
    if (!any_terminal_ || r.max_trace_index > max_trace_index_) max_trace_index_ = r.max_trace_index;
    any_terminal_ = true;
    max_terminal_depth_ = depth_;
  }
  std::move(r.children.begin(), r.children.end(), std::back_inserter(next_));
}

void Explorer::roll_level() {
  level_ = std::move(next_);
  next_.clear();
  cursor_ = 0;
  ++depth_;
}

std::uint64_t Explorer::advance_level(std::uint64_t nodes) {
  if (finished() || nodes == 0) return 0;
  std::size_t count = std::min<std::uint64_t>(nodes, level_.size() - cursor_);
  std::size_t begin = cursor_;
  unsigned workers = std::max(1u, options_.workers);
  if (workers == 1 || count < 2 * static_cast<std::size_t>(workers)) {
    absorb(expand_slice(begin, begin + count));
  } else {
    std::vector<SliceResult> parts(workers);
    {
      std::vector<std::jthread> pool;
      std::size_t chunk = (count + workers - 1) / workers;
      for (unsigned w = 0; w < workers; ++w) {
        std::size_t lo = begin + std::min<std::size_t>(count, w * chunk);
        std::size_t hi = begin + std::min<std::size_t>(count, (w + 1) * chunk);
        pool.emplace_back([this, &parts, w, lo, hi] { parts[w] = expand_slice(lo, hi); });
      }
    }
    for (auto& part : parts) absorb(std::move(part));
  }
  cursor_ += count;
  expanded_ += count;
  if (cursor_ == level_.size()) roll_level();
  return count;
}

std::uint64_t Explorer::advance(std::uint64_t nodes) {
  std::uint64_t total = 0;
  while (total < nodes && !finished()) total += advance_level(nodes - total);
  return total;
}

BoundReport Explorer::report() const {
  BoundReport r;
  r.terminated_mass = terminated_;
  r.divergent_mass = divergent_;
  for (std::size_t k = cursor_; k < level_.size(); ++k) r.live_mass += level_[k].prob;
  for (const auto& s : next_) r.live_mass += s.prob;
  for (std::size_t i = 0; i < vars_.size(); ++i) r.expectation_mass.emplace_back(vars_[i], expectation_[i]);

  Coverage& c = r.budget_used;
  c.nodes_expanded = expanded_;
  if (depth_ > 0) c.complete_depth = depth_ - 1;
  c.exhausted = level_.empty();
  if (cursor_ == 0) {
    if (depth_ == 0) c.matched = SumCoverage{Natural(0), 0};
    else c.matched = SumCoverage{h_last_of_length(depth_ - 1), depth_ - 1};
  }
  c.max_trace_index = max_trace_index_;
  c.max_terminal_depth = max_terminal_depth_;
  return r;
}

BoundReport explore(const Program& p, const std::vector<Var>& vars, const ExploreOptions& options) {
  Explorer ex(p, vars, options);
  ex.advance(options.node_budget);
  return ex.report();
}

BoundReport explore(const Program& p, std::uint64_t node_budget, const std::vector<Var>& vars) {
  ExploreOptions options;
  options.node_budget = node_budget;
  return explore(p, vars, options);
}

namespace {

struct Hit {
  Natural y1;
  std::uint64_t y2 = 0;
  Rational sum;
};

struct SearchResult {
  std::optional<Hit> hit;
  Rational best;
};

// Grows the truncation within the budget until `accept` holds for the
// running partial sum of E_P(v).
SearchResult search_bounds(const Program& p, const Var& v, const Budget& budget,
                           unsigned workers, const std::function<bool(const Rational&)>& accept) {
  if (accept(Rational(0))) return {Hit{Natural(0), 0, Rational(0)}, Rational(0)};

  if (const auto* sb = std::get_if<SumBounds>(&budget)) {
    const State init = initial_state(p);
    Rational running;
    std::uint64_t deepest = 0;
    for (std::uint64_t i = 0;; ++i) {
      if (auto found = follow_word(init, h(to_natural(i)), sb->y2)) {
        running += found->first.env.get(v) * found->first.prob;
        deepest = std::max(deepest, found->second);
        if (accept(running)) return {Hit{to_natural(i), deepest, running}, running};
      }
      if (i == sb->y1) break;
    }
    return {std::nullopt, running};
  }

  const auto& nb = std::get<NodeBudget>(budget);
  ExploreOptions options;
  options.workers = workers;
  Explorer ex(p, {v}, options);
  std::uint64_t used = 0;
  Rational best;
  while (used < nb.nodes && !ex.finished()) {
    used += ex.advance_level(nb.nodes - used);
    BoundReport r = ex.report();
    best = r.expectation(v);
    if (accept(best)) {
      return {Hit{r.budget_used.max_trace_index, r.budget_used.max_terminal_depth, best}, best};
    }
  }
  return {std::nullopt, best};
}

}  // namespace

LexpVerdict lexp_semidecide(const Program& p, const Var& v, const Rational& q,
                            const Budget& budget, unsigned workers) {
  if (q < 0) throw Error("lexp_semidecide expects q >= 0");
  auto res = search_bounds(p, v, budget, workers, [&](const Rational& s) { return s > q; });
  if (res.hit) return LexpWitness{res.hit->y1, res.hit->y2, res.hit->sum};
  return LexpUnknown{budget, res.best};
}

UexpVerdict uexp_refute(const Program& p, const Var& v, const Rational& q, const Rational& delta,
                        const Budget& budget, unsigned workers) {
  if (delta <= 0) throw DeltaNonPositiveError("delta must be positive, got " + to_string(delta));
  const Rational bar = q - delta;
  auto res = search_bounds(p, v, budget, workers, [&](const Rational& s) { return s >= bar; });
  if (res.hit) return UexpRefuted{res.hit->y1, res.hit->y2, res.hit->sum};
  return UexpNotRefuted{budget, res.best};
}

}  // namespace pgcl
