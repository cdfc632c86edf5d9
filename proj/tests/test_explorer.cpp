#include <doctest.h>

#include "oracles.hpp"
#include "pgcl/printer.hpp"

using namespace pgcl;

namespace {

const Program& fair() {
  static Program p = parse(oracle::kFair);
  return p;
}
const Program& geo() {
  static Program p = parse(oracle::kGeo);
  return p;
}
const Program& diverge() {
  static Program p = parse(oracle::kDiverge);
  return p;
}

// Closed forms for GEO truncated at i <= k.
Rational geo_mass(long k) { return 1 - pow2(-(k + 1)); }
Rational geo_mean(long k) {
  Rational s = 0;
  for (long i = 0; i <= k; ++i) s += Rational(i) * pow2(-(i + 1));
  return s;
}

void check_conservation(const BoundReport& r) {
  CHECK(r.terminated_mass + r.live_mass + r.divergent_mass == 1);
}

}  // namespace

TEST_CASE("double sums on FAIR") {
  CHECK(expected_partial(fair(), "x", 1, 2) == make_rational(1, 2));
  CHECK(expected_partial(fair(), "x", 0, 0) == 0);
  CHECK(termination_partial(fair(), 2, 2) == 1);
  CHECK(termination_partial(fair(), 1, 2) == make_rational(1, 2));
  CHECK(termination_partial(fair(), 2, 1) == 0);
}

TEST_CASE("double sums on DIVERGE stay 0") {
  for (std::uint64_t y : {0u, 3u, 40u}) {
    CHECK(termination_partial(diverge(), y, y) == 0);
    CHECK(expected_partial(diverge(), "x", y, y) == 0);
  }
}

TEST_CASE("double sums on GEO against the geometric series") {
  // i = k terminates after 6k + 6 inferences on a word of length k + 1.
  for (long k : {0l, 1l, 5l, 10l}) {
    std::uint64_t y1 = to_u64(h_last_of_length(k + 1));
    std::uint64_t y2 = 6 * k + 6;
    CHECK(termination_partial(geo(), y1, y2) == geo_mass(k));
    CHECK(expected_partial(geo(), "i", y1, y2) == geo_mean(k));
  }
  CHECK(expected_partial(geo(), "i", to_u64(h_last_of_length(11)), 66) >= 1 - Rational(12) * pow2(-11));
}

TEST_CASE("double_sum agrees with the literal run() oracle") {
  oracle::RandomPrograms gen(31);
  std::vector<Program> programs{fair(), geo(), diverge()};
  for (int n = 0; n < 25; ++n) programs.push_back(gen.program(3));
  for (const auto& p : programs) {
    INFO(pretty_print(p));
    for (auto [y1, y2] : {std::pair{0ul, 0ul}, {6ul, 5ul}, {30ul, 9ul}, {62ul, 12ul}}) {
      PartialSums s = double_sum(p, {"x", "y"}, y1, y2);
      CHECK(s.termination == oracle::literal_double_sum(p, std::nullopt, y1, y2));
      CHECK(s.expectation[0].second == oracle::literal_double_sum(p, "x", y1, y2));
      CHECK(s.expectation[1].second == oracle::literal_double_sum(p, "y", y1, y2));
    }
  }
}

TEST_CASE("explore examples") {
  BoundReport r = explore(fair(), 10, {"x"});
  CHECK(r.terminated_mass == 1);
  CHECK(r.live_mass == 0);
  CHECK(r.expectation("x") == make_rational(1, 2));
  CHECK(r.budget_used.exhausted);

  BoundReport d = explore(diverge(), 100, {});
  CHECK(d.terminated_mass == 0);
  CHECK(d.live_mass == 1);
  CHECK(d.budget_used.nodes_expanded == 100);

  ExploreOptions certify;
  certify.node_budget = 100;
  certify.certify_divergence = true;
  BoundReport dc = explore(diverge(), {}, certify);
  CHECK(dc.divergent_mass == 1);
  CHECK(dc.live_mass == 0);
  check_conservation(dc);

  ExploreOptions deep;
  deep.node_budget = 100000;
  deep.max_depth = 126;
  BoundReport g = explore(geo(), {"i"}, deep);
  CHECK(g.terminated_mass == geo_mass(20));
  CHECK(g.expectation("i") == geo_mean(20));
  check_conservation(g);
}

TEST_CASE("explore matches the double sum on level boundaries") {
  oracle::RandomPrograms gen(77);
  std::vector<Program> programs{fair(), geo(), diverge()};
  for (int n = 0; n < 20; ++n) programs.push_back(gen.program(3));
  for (const auto& p : programs) {
    for (std::uint64_t depth : {0u, 3u, 9u}) {
      ExploreOptions o;
      o.node_budget = 1u << 20;
      o.max_depth = depth;
      BoundReport r = explore(p, {"x"}, o);
      REQUIRE(r.budget_used.matched);
      const SumCoverage& m = *r.budget_used.matched;
      // A tree that runs out early is matched at the depth where it ended.
      CHECK(m.y2 <= depth);
      CHECK(m.y1 == h_last_of_length(m.y2));
      PartialSums s = double_sum(p, {"x"}, to_u64(m.y1), m.y2);
      CHECK(r.terminated_mass == s.termination);
      CHECK(r.expectation("x") == s.expectation[0].second);
      check_conservation(r);
    }
  }
}

TEST_CASE("incremental advance gives monotone reports") {
  oracle::RandomPrograms gen(3);
  for (int n = 0; n < 30; ++n) {
    Explorer e(gen.program(4), {"x", "y"});
    BoundReport prev = e.report();
    for (int round = 0; round < 20 && !e.finished(); ++round) {
      e.advance(7);
      BoundReport r = e.report();
      CHECK(r.terminated_mass >= prev.terminated_mass);
      CHECK(r.divergent_mass >= prev.divergent_mass);
      for (std::size_t k = 0; k < r.expectation_mass.size(); ++k) {
        CHECK(r.expectation_mass[k].second >= prev.expectation_mass[k].second);
      }
      check_conservation(r);
      prev = r;
    }
  }
}

TEST_CASE("worker count does not change the result") {
  oracle::RandomPrograms gen(11);
  for (int n = 0; n < 10; ++n) {
    Program p = gen.program(4);
    ExploreOptions a;
    a.node_budget = 3000;
    ExploreOptions b = a;
    b.workers = 8;
    BoundReport ra = explore(p, {"x"}, a);
    BoundReport rb = explore(p, {"x"}, b);
    CHECK(ra.terminated_mass == rb.terminated_mass);
    CHECK(ra.live_mass == rb.live_mass);
    CHECK(ra.expectation("x") == rb.expectation("x"));
    CHECK(ra.budget_used.nodes_expanded == rb.budget_used.nodes_expanded);
  }
}

TEST_CASE("certify_divergence") {
  DivergenceCertificate c = certify_divergence(initial_state(diverge()));
  CHECK(c.verdict == Verdict::Certified);
  CHECK(c.period == 3);
  State five{parse(oracle::kCountdown), {{"x", 5}}, 1, {}};
  CHECK(certify_divergence(five).verdict == Verdict::Unknown);
  CHECK(certify_divergence(initial_state(parse("while (0 = 0) { x := x + 1 }"))).verdict ==
        Verdict::Unknown);
  // A cycle reached only after a prefix.
  CHECK(certify_divergence(initial_state(parse("x := 3; while (x != 0) { x := x }"))).verdict ==
        Verdict::Certified);
}

TEST_CASE("lexp_semidecide") {
  LexpVerdict w = lexp_semidecide(fair(), "x", make_rational(1, 4), NodeBudget{10});
  REQUIRE(std::holds_alternative<LexpWitness>(w));
  CHECK(std::get<LexpWitness>(w).partial_sum == make_rational(1, 2));

  LexpVerdict ws = lexp_semidecide(fair(), "x", make_rational(1, 4), SumBounds{4, 4});
  REQUIRE(std::holds_alternative<LexpWitness>(ws));
  const auto& wit = std::get<LexpWitness>(ws);
  CHECK(expected_partial(fair(), "x", to_u64(wit.y1), wit.y2) > make_rational(1, 4));

  CHECK(std::holds_alternative<LexpUnknown>(lexp_semidecide(fair(), "x", make_rational(1, 2), NodeBudget{1000})));
  CHECK(std::holds_alternative<LexpUnknown>(lexp_semidecide(fair(), "x", make_rational(1, 2), SumBounds{200, 200})));
  CHECK(std::holds_alternative<LexpUnknown>(lexp_semidecide(diverge(), "x", 0, NodeBudget{1000})));

  // GEO has E[i] = 1; anything below is eventually witnessed.
  LexpVerdict g = lexp_semidecide(geo(), "i", make_rational(99, 100), NodeBudget{5000});
  REQUIRE(std::holds_alternative<LexpWitness>(g));
  const auto& gw = std::get<LexpWitness>(g);
  CHECK(gw.partial_sum > make_rational(99, 100));
  CHECK(expected_partial(geo(), "i", to_u64(gw.y1), gw.y2) >= gw.partial_sum);
}

TEST_CASE("uexp_refute") {
  CHECK(std::holds_alternative<UexpNotRefuted>(uexp_refute(fair(), "x", 1, make_rational(1, 2), SumBounds{0, 0})));
  UexpVerdict r = uexp_refute(fair(), "x", 1, make_rational(1, 2), SumBounds{2, 2});
  REQUIRE(std::holds_alternative<UexpRefuted>(r));
  CHECK(std::get<UexpRefuted>(r).partial_sum == make_rational(1, 2));

  UexpVerdict n = uexp_refute(fair(), "x", 1, make_rational(1, 4), SumBounds{100, 100});
  REQUIRE(std::holds_alternative<UexpNotRefuted>(n));
  CHECK(std::get<UexpNotRefuted>(n).best_sum == make_rational(1, 2));

  UexpVerdict d = uexp_refute(diverge(), "x", 2, 1, NodeBudget{500});
  REQUIRE(std::holds_alternative<UexpNotRefuted>(d));
  CHECK(std::get<UexpNotRefuted>(d).best_sum == 0);

  CHECK_THROWS_AS(uexp_refute(fair(), "x", 1, 0, NodeBudget{10}), DeltaNonPositiveError);
}
