#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "pgcl/printer.hpp"

using namespace pgcl;

namespace {

State state_of(const std::string& control, Valuation env = {}, Rational prob = 1,
               std::string trace = "") {
  return State{parse(control), std::move(env), std::move(prob), ChoiceString(trace)};
}

}  // namespace

TEST_CASE("eval_arith") {
  CHECK(eval_arith(parse_arith("x + 1"), {{"x", 0}}) == 1);
  CHECK(eval_arith(parse_arith("x - 1"), {{"x", make_rational(1, 2)}}) == make_rational(-1, 2));
  CHECK(eval_arith(parse_arith("5 div 2"), {}) == 2);
  CHECK(eval_arith(parse_arith("7 mod 3"), {}) == 1);
  CHECK(eval_arith(parse_arith("(7/2) mod 1"), {}) == make_rational(1, 2));
  CHECK(eval_arith(parse_arith("0 - 5 div 2"), {}) == -2);
  CHECK(eval_arith(parse_arith("(0 - 5) div 2"), {}) == -3);
  CHECK(eval_arith(parse_arith("x / 3"), {{"x", 2}}) == make_rational(2, 3));
  CHECK(eval_arith(parse_arith("x / 0"), {{"x", 2}}) == 0);
}

TEST_CASE("eval_bool") {
  CHECK(eval_bool(parse_bool("x = 0"), {}));
  CHECK(eval_bool(parse_bool("x != 0"), {{"x", 1}}));
  CHECK_FALSE(eval_bool(parse_bool("1 < 1/2"), {}));
  CHECK(eval_bool(parse_bool("!(x < 1) && (y <= 2 || z = 9)"), {{"x", 1}, {"y", 2}}));
}

TEST_CASE("valuations drop zero entries") {
  Valuation v;
  v.set("x", 0);
  CHECK(v == Valuation{});
  CHECK_THROWS_AS(v.set("x", -1), Error);
}

TEST_CASE("deterministic steps") {
  CHECK(*step(state_of("x := 5 - 6")) == State{done(), {{"x", 0}}, 1, {}});
  CHECK_FALSE(step(State{done(), {{"x", 2}}, make_rational(1, 2), ChoiceString("L")}));
  CHECK(*step(state_of(oracle::kDiverge)) == state_of("x := x; while (x = 0) { x := x }"));
  CHECK(*step(state_of("while (x != 0) { x := 1 }")) == State{done(), {}, 1, {}});
  // concat1 then concat2
  State s1 = *step(state_of("x := 1; y := 2"));
  CHECK(s1 == State{seq(done(), parse("y := 2")), {{"x", 1}}, 1, {}});
  CHECK(*step(s1) == State{parse("y := 2"), {{"x", 1}}, 1, {}});
  CHECK_THROWS_AS(step(state_of(oracle::kFair)), ChoiceHeadedError);
}

TEST_CASE("choice steps") {
  State s = state_of(oracle::kFair);
  CHECK(step_prob(s, Dir::L) == state_of("x := 1", {}, make_rational(1, 2), "L"));
  CHECK(step_prob(s, Dir::R) == state_of("x := 0", {}, make_rational(1, 2), "R"));
  State z = step_prob(state_of("{x := 1} [1] {x := 0}"), Dir::R);
  CHECK(z == state_of("x := 0", {}, 0, "R"));
  CHECK(z.zero_mass());
  CHECK_THROWS_AS(step_prob(state_of("x := 1"), Dir::L), NotChoiceHeadedError);
  // A choice nested in the head of a sequence is still choice-headed.
  CHECK(choice_headed(parse("{x := 1} [1/2] {x := 0}; y := 1")));
  CHECK_FALSE(choice_headed(parse("y := 1; {x := 1} [1/2] {x := 0}")));
}

TEST_CASE("run") {
  State fair = state_of(oracle::kFair);
  CHECK(*run(fair, 2, ChoiceString("L")) == State{done(), {{"x", 1}}, make_rational(1, 2), ChoiceString("L")});
  CHECK_FALSE(run(state_of("x := 1"), 5, {}));
  CHECK_FALSE(run(fair, 2, {}));
  CHECK_FALSE(run(fair, 1, ChoiceString("LL")));
  CHECK(*run(fair, 0, {}) == fair);
  CHECK(*run(fair, 1, ChoiceString("R")) == state_of("x := 0", {}, make_rational(1, 2), "R"));
}

TEST_CASE("alpha and weight") {
  StepOutcome t = State{done(), {{"x", 1}}, make_rational(1, 2), ChoiceString("L")};
  CHECK(alpha(t) == make_rational(1, 2));
  CHECK(alpha(state_of("x := 1")) == 0);
  CHECK(alpha(std::nullopt) == 0);
  CHECK(weight(t, "x") == make_rational(1, 2));
  StepOutcome t2 = State{done(), {{"x", 3}}, make_rational(1, 4), ChoiceString("LR")};
  CHECK(weight(t2, "y") == 0);
  CHECK(weight(std::nullopt, "x") == 0);
}

TEST_CASE("h enumerates words in length-lex order") {
  CHECK(h(0).str().empty());
  CHECK(h(3).str() == "LL");
  CHECK(h_inv(ChoiceString("LR")) == 4);
  auto words = oracle::words_up_to(12);
  for (std::size_t n = 0; n < words.size(); ++n) {
    REQUIRE(h(Natural(static_cast<unsigned long>(n))).str() == words[n]);
  }
  for (unsigned long n = 0; n < (1ul << 16); ++n) {
    REQUIRE(h_inv(h(Natural(n))) == n);
  }
  for (std::uint64_t len = 0; len < 12; ++len) {
    Natural last = h_last_of_length(len);
    CHECK(h(last).size() == len);
    CHECK(h(last + 1).size() == len + 1);
  }
}

TEST_CASE("traces grow by one letter per choice and probabilities match") {
  oracle::RandomPrograms gen(99);
  std::mt19937_64 rng(5);
  for (int n = 0; n < 200; ++n) {
    State s = initial_state(gen.program(4));
    Rational expected_prob = 1;
    for (int k = 0; k < 60 && !s.terminated(); ++k) {
      if (choice_headed(s.control)) {
        const auto& c = std::get<Stmt::Choice>([&]() -> const Stmt& {
          Program head = s.control;
          while (const auto* sq = std::get_if<Stmt::Seq>(&head->node)) head = sq->first;
          return *head;
        }().node);
        Dir d = rng() % 2 ? Dir::L : Dir::R;
        expected_prob *= d == Dir::L ? c.prob : 1 - c.prob;
        std::size_t before = s.trace.size();
        s = step_prob(s, d);
        CHECK(s.trace.size() == before + 1);
      } else {
        std::size_t before = s.trace.size();
        s = *step(s);
        CHECK(s.trace.size() == before);
      }
      CHECK(s.prob == expected_prob);
      for (const auto& [name, value] : s.env.entries()) CHECK(value > 0);
    }
  }
}

TEST_CASE("step is a function of the state") {
  oracle::RandomPrograms gen(7, false);
  for (int n = 0; n < 100; ++n) {
    Program p = gen.program(4);
    State a = initial_state(p);
    State b = initial_state(parse(pretty_print(p)));
    for (int k = 0; k < 50 && !a.terminated(); ++k) {
      a = *step(a);
      b = *step(b);
      REQUIRE(a == b);
    }
  }
}
