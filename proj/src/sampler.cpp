#include "pgcl/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>
#include <vector>

namespace pgcl {

namespace {

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

struct Moments {
  Rational sum;
  Rational sum_sq;
  std::uint64_t timeouts = 0;
};

// Runs [lo, hi) accumulated exactly, so the split across workers does not
// change the result.
Moments sample_slice(const Program& p, const SampleConfig& cfg, std::uint64_t lo, std::uint64_t hi,
                     const std::function<Rational(const SampleRun&)>& value) {
  Moments m;
  for (std::uint64_t r = lo; r < hi; ++r) {
    CounterStream draws(cfg.seed, r);
    SampleRun run = sample_run(p, draws, cfg.fuel);
    if (!run.terminated) ++m.timeouts;
    Rational x = value(run);
    m.sum += x;
    m.sum_sq += x * x;
  }
  return m;
}

Estimate estimate(const Program& p, const SampleConfig& cfg,
                  const std::function<Rational(const SampleRun&)>& value) {
  if (cfg.n == 0) throw Error("sample count must be at least 1");
  if (cfg.fuel == 0) throw Error("fuel must be at least 1");
  unsigned workers = std::max(1u, cfg.workers);
  std::vector<Moments> parts(workers);
  if (workers == 1) {
    parts[0] = sample_slice(p, cfg, 0, cfg.n, value);
  } else {
    std::vector<std::jthread> pool;
    std::uint64_t chunk = (cfg.n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      std::uint64_t lo = std::min(cfg.n, w * chunk);
      std::uint64_t hi = std::min(cfg.n, (w + 1) * chunk);
      pool.emplace_back([&, w, lo, hi] { parts[w] = sample_slice(p, cfg, lo, hi, value); });
    }
  }
  Moments total;
  for (const auto& m : parts) {
    total.sum += m.sum;
    total.sum_sq += m.sum_sq;
    total.timeouts += m.timeouts;
  }
  const Rational n(to_natural(cfg.n));
  Rational mean = total.sum / n;
  Estimate e;
  e.n = cfg.n;
  e.mean = mean.get_d();
  e.timeout_fraction = static_cast<double>(total.timeouts) / static_cast<double>(cfg.n);
  if (cfg.n > 1) {
    Rational var = (total.sum_sq - n * mean * mean) / (n - 1);
    e.ci_halfwidth = 1.96 * std::sqrt(std::max(0.0, var.get_d()) / static_cast<double>(cfg.n));
  }
  return e;
}

}  // namespace

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

CounterStream::CounterStream(std::uint64_t seed, std::uint64_t run_index)
    : key_(mix64(seed + (run_index + 1) * kGamma)) {}

std::uint64_t CounterStream::next() {
  ++counter_;
  return mix64(key_ + counter_ * kGamma);
}

bool draw_goes_left(std::uint64_t draw, const Rational& p) {
  // draw / 2^64 < num / den  <=>  draw * den < num * 2^64
  Natural lhs = to_natural(draw) * p.get_den();
  Natural rhs = p.get_num();
  rhs <<= 64;
  return lhs < rhs;
}

SampleRun sample_run(const Program& p, DrawSource& draws, std::uint64_t fuel) {
  if (fuel == 0) throw Error("fuel must be at least 1");
  State cur = initial_state(p);
  std::uint64_t steps = 0;
  while (!cur.terminated() && steps < fuel) {
    if (choice_headed(cur.control)) {
      // The head choice's probability is needed before resolving it.
      const Program* node = &cur.control;
      while (const auto* s = std::get_if<Stmt::Seq>(&(*node)->node)) node = &s->first;
      const auto& c = std::get<Stmt::Choice>((*node)->node);
      cur = step_prob(cur, draw_goes_left(draws.next(), c.prob) ? Dir::L : Dir::R);
    } else {
      cur = *step(cur);
    }
    ++steps;
  }
  return {cur.terminated(), cur.env, steps};
}

Estimate estimate_expectation(const Program& p, const Var& v, const SampleConfig& cfg) {
  return estimate(p, cfg, [&v](const SampleRun& r) {
    return r.terminated ? r.env.get(v) : Rational(0);
  });
}

Estimate estimate_termination(const Program& p, const SampleConfig& cfg) {
  return estimate(p, cfg, [](const SampleRun& r) { return Rational(r.terminated ? 1 : 0); });
}

}  // namespace pgcl
