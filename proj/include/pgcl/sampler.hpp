#pragma once

// Seeded Monte-Carlo execution, used as a statistical cross-check of the
// exact explorer.
//
// Random bits come from a counter-based SplitMix64 construction
// ("splitmix64-counter/v1"): draw t (0-based) of run r (0-based) under seed S
// is
//     key  = mix64(S + (r + 1) * G)
//     draw = mix64(key + (t + 1) * G)
// with G = 0x9e3779b97f4a7c15 and mix64 the SplitMix64 finaliser, all
// arithmetic mod 2^64. A choice with probability p goes left iff
// draw / 2^64 < p, compared exactly.

#include <cstdint>
#include <string_view>

#include "pgcl/semantics.hpp"

namespace pgcl {

inline constexpr std::string_view kRngAlgorithm = "splitmix64-counter/v1";

std::uint64_t mix64(std::uint64_t z);

/// Source of 64-bit draws for resolving choices.
class DrawSource {
 public:
  virtual ~DrawSource() = default;
  virtual std::uint64_t next() = 0;
};

/// The stream for run `run_index` under `seed`.
class CounterStream final : public DrawSource {
 public:
  CounterStream(std::uint64_t seed, std::uint64_t run_index);
  std::uint64_t next() override;

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// True iff draw / 2^64 < p.
bool draw_goes_left(std::uint64_t draw, const Rational& p);

struct SampleConfig {
  std::uint64_t n = 1000;
  std::uint64_t seed = 0;
  std::uint64_t fuel = 10000;
  unsigned workers = 1;
};

struct SampleRun {
  bool terminated = false;
  Valuation env;
  std::uint64_t steps = 0;
};

/// Executes from eta_0, resolving each choice with one draw; stops at
/// termination or after `fuel` inferences. Throws Error if fuel is 0.
SampleRun sample_run(const Program& p, DrawSource& draws, std::uint64_t fuel);

struct Estimate {
  double mean = 0;
  double ci_halfwidth = 0;  // 95%, normal approximation
  double timeout_fraction = 0;
  std::uint64_t n = 0;
};

/// Mean of v over all runs, a run that runs out of fuel counting as 0.
Estimate estimate_expectation(const Program& p, const Var& v, const SampleConfig& cfg);
/// Fraction of runs that terminate within the fuel.
Estimate estimate_termination(const Program& p, const SampleConfig& cfg);

}  // namespace pgcl
