#include <doctest.h>

#include "oracles.hpp"
#include "pgcl/parser.hpp"
#include "pgcl/printer.hpp"
#include "pgcl/semantics.hpp"

using namespace pgcl;

TEST_CASE("parse builds the expected trees") {
  CHECK(equal(parse("x := 1"), assign("x", lit(1))));
  CHECK(equal(parse("{x := 1} [1/2] {x := 0}"),
              choice(assign("x", lit(1)), make_rational(1, 2), assign("x", lit(0)))));
  CHECK(equal(parse("x := 1; y := 2; z := 3"),
              seq({assign("x", lit(1)), assign("y", lit(2)), assign("z", lit(3))})));
  CHECK(equal(parse("while (x != 0) { x := x - 1 }"),
              loop(compare(CmpOp::Ne, var("x"), lit(0)), assign("x", var("x") - lit(1)))));
}

TEST_CASE("choice probabilities outside [0, 1] are rejected") {
  CHECK_THROWS_AS(parse("{x := 1} [3/2] {x := 0}"), ProbabilityRangeError);
  CHECK_THROWS_AS(choice(assign("x", lit(1)), Rational(-1), assign("x", lit(0))),
                  ProbabilityRangeError);
  CHECK_NOTHROW(parse("{x := 1} [0] {x := 0}"));
  CHECK_NOTHROW(parse("{x := 1} [1] {x := 0}"));
}

TEST_CASE("syntax errors carry a position") {
  try {
    parse("x := 1;\ny := ");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse("x = 1"), SyntaxError);
  CHECK_THROWS_AS(parse("while x { x := 0 }"), SyntaxError);
  CHECK_THROWS_AS(parse("{x := 1} [1/2]"), SyntaxError);
  CHECK_THROWS_AS(parse("while := 1"), SyntaxError);
  CHECK_THROWS_AS(parse(""), SyntaxError);
}

TEST_CASE("surface variants") {
  CHECK(equal(parse_bool("x > 1"), compare(CmpOp::Lt, lit(1), var("x"))));
  CHECK(equal(parse_bool("x >= 1"), compare(CmpOp::Le, lit(1), var("x"))));
  CHECK(equal(parse_bool("x ≠ 1"), parse_bool("x != 1")));
  CHECK(equal(parse_bool("x == 1"), parse_bool("x = 1")));
  CHECK(equal(parse_arith("x − 1"), parse_arith("x - 1")));
  CHECK(equal(parse_arith("0.5"), lit(make_rational(1, 2))));
  CHECK(equal(parse("# comment\nx := 1; # trailing\n"), parse("x := 1")));
  CHECK(equal(parse("{x := 1; y := 2}"), parse("x := 1; y := 2")));
}

TEST_CASE("pretty_print examples") {
  CHECK(pretty_print(assign("x", lit(1))) == "x := 1");
  CHECK(pretty_print(choice(assign("x", lit(1)), make_rational(1, 2), assign("x", lit(0)))) ==
        "{x := 1} [1/2] {x := 0}");
  CHECK(pretty_print(loop(compare(CmpOp::Ne, var("x"), lit(0)), assign("x", var("x") - lit(1)))) ==
        "while (x != 0) { x := x - 1 }");
  CHECK(to_string(parse_arith("(x + y) * z - (a - b)")) == "(x + y) * z - (a - b)");
  CHECK(to_string(parse_arith("x / (1/2)")) == "x / (1/2)");
  CHECK(to_string(parse_bool("!(x < 1) || y = 0 && z != 2")) == "!(x < 1) || y = 0 && z != 2");
  CHECK(pretty_print(done()) == "↓");
}

TEST_CASE("round trip over random trees") {
  oracle::RandomPrograms gen(1234);
  for (int n = 0; n < 500; ++n) {
    Program p = gen.program(4);
    for (Layout layout : {Layout::SingleLine, Layout::Indented}) {
      std::string text = pretty_print(p, layout);
      Program back = parse(text);
      INFO(text);
      CHECK(equal(back, p));
      CHECK(hash_value(back) == hash_value(p));
    }
  }
}

TEST_CASE("left-nested sequences survive printing") {
  Program p = seq(seq(assign("x", lit(1)), assign("y", lit(2))), assign("z", lit(3)));
  CHECK(equal(parse(pretty_print(p)), p));
  CHECK_FALSE(equal(parse(pretty_print(p)), parse("x := 1; y := 2; z := 3")));
}

TEST_CASE("is_ordinary") {
  CHECK(is_ordinary(parse("x := 1")));
  CHECK_FALSE(is_ordinary(parse(oracle::kFair)));
  CHECK_FALSE(is_ordinary(parse("while (x != 0) { x := x - 1; {x := 1} [1/2] {x := 0} }")));
  CHECK(count_choices(parse(oracle::kGeo)) == 2);
}

TEST_CASE("vars_of lists first occurrences") {
  CHECK(vars_of(parse("x := y + 1")) == std::vector<Var>{"x", "y"});
  CHECK(vars_of(parse("x := x")) == std::vector<Var>{"x"});
  CHECK(vars_of(parse(oracle::kGeo)) == std::vector<Var>{"i", "c"});
  CHECK(vars_of(parse("while (b < a) { c := d }")) == std::vector<Var>{"b", "a", "c", "d"});
}

TEST_CASE("fresh names avoid everything taken") {
  NameSupply names({"__t0", "__t1", "x"});
  Var a = names.fresh("t");
  Var b = names.fresh("t");
  CHECK(a == "__t2");
  CHECK(b == "__t3");
  CHECK(is_reserved_name(a));
  CHECK_FALSE(is_reserved_name("x"));
  CHECK(is_valid_var_name("x_1"));
  CHECK_FALSE(is_valid_var_name("1x"));
  CHECK_FALSE(is_valid_var_name("mod"));
}

TEST_CASE("if/else and skip behave like their intended meaning") {
  Program p = parse("if (x = 0) { y := 1 } else { y := 2 }; skip");
  CHECK(is_ordinary(p));
  auto end = oracle::run_deterministic(initial_state(p), 100);
  REQUIRE(end);
  CHECK(end->env.get("y") == 1);

  Program q = parse("x := 3; if (x = 0) { y := 1 } else if (x = 3) { y := 5 } else { y := 2 }");
  auto end2 = oracle::run_deterministic(initial_state(q), 200);
  REQUIRE(end2);
  CHECK(end2->env.get("y") == 5);

  // Each if-site owns a flag that does not collide with user names.
  Program r = parse("__t0 := 7; if (x = 0) { y := 1 }; if (y = 1) { z := 1 }");
  auto names = vars_of(r);
  CHECK(std::count(names.begin(), names.end(), "__t0") == 1);
  auto end3 = oracle::run_deterministic(initial_state(r), 200);
  REQUIRE(end3);
  CHECK(end3->env.get("__t0") == 7);
  CHECK(end3->env.get("z") == 1);
}

TEST_CASE("example programs parse") {
  for (const auto& text : oracle::hand_written_corpus()) {
    INFO(text);
    CHECK_NOTHROW(parse(text));
  }
}
