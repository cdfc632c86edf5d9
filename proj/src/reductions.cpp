#include "pgcl/reductions.hpp"

#include <algorithm>
#include <cstdio>

#include "pgcl/printer.hpp"

namespace pgcl {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool occurs(const std::vector<Var>& vars, std::string_view v) {
  return std::find(vars.begin(), vars.end(), v) != vars.end();
}

// "v" unless Q already uses it, then v1, v2, ...
Var target_name(const std::vector<Var>& taken) {
  if (!occurs(taken, "v")) return "v";
  for (int k = 1;; ++k) {
    Var candidate = "v" + std::to_string(k);
    if (!occurs(taken, candidate)) return candidate;
  }
}

void require_ordinary(const Program& q) {
  if (!is_ordinary(q)) {
    throw NotOrdinaryError("input program contains a probabilistic choice");
  }
}

// The unit added before every assignment (and in assignment-free loop bodies):
//   __cnt := __cnt + 1; if (__cnt > budget) {__abort := 1}
Program tick(const Var& budget, NameSupply& names) {
  Var cnt(kCounterVar);
  return seq(assign(cnt, var(cnt) + lit(1)),
             make_if(compare(CmpOp::Lt, var(budget), var(cnt)), assign(Var(kAbortVar), lit(1)),
                     make_skip(), names));
}

Program instrument(const Program& p, const Var& budget, NameSupply& names) {
  return std::visit(
      overloaded{
          [&](const Stmt::Assign&) { return seq(tick(budget, names), p); },
          [&](const Stmt::Seq& s) {
            Program first = instrument(s.first, budget, names);
            return seq(first, instrument(s.second, budget, names));
          },
          [&](const Stmt::While& w) {
            Program body = instrument(w.body, budget, names);
            if (!always_assigns(w.body)) body = seq(tick(budget, names), body);
            Bool live = compare(CmpOp::Eq, var(Var(kAbortVar)), lit(0));
            return loop(conj(w.guard, live), body);
          },
          [&](const Stmt::Choice&) -> Program {
            throw NotOrdinaryError("cannot instrument a probabilistic choice");
          },
          [&](const Stmt::Done&) -> Program { throw Error("cannot instrument a terminated program"); },
      },
      p->node);
}

}  // namespace

std::string to_string(ReductionKind kind) {
  switch (kind) {
    case ReductionKind::UhToUexp: return "uh_to_uexp";
    case ReductionKind::AstToExp: return "ast_to_exp";
    case ReductionKind::UhToAst: return "uh_to_ast";
  }
  return "unknown";
}

ReductionKind parse_reduction_kind(std::string_view text) {
  if (text == "uh_to_uexp" || text == "uh2uexp") return ReductionKind::UhToUexp;
  if (text == "ast_to_exp" || text == "ast2exp") return ReductionKind::AstToExp;
  if (text == "uh_to_ast" || text == "uh2ast") return ReductionKind::UhToAst;
  throw Error("unknown reduction kind '" + std::string(text) + "'");
}

std::string source_hash(const Program& p) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : pretty_print(p)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buf;
}

Program geometric_generator(const Var& counter, const Var& coin) {
  auto flip = [&] { return choice(assign(coin, lit(0)), make_rational(1, 2), assign(coin, lit(1))); };
  return seq({
      assign(counter, lit(0)),
      flip(),
      loop(compare(CmpOp::Ne, var(coin), lit(0)),
           seq(assign(counter, var(counter) + lit(1)), flip())),
  });
}

Program gen_decoder_program(const InputCodec& codec, const Var& index, NameSupply& names) {
  if (occurs(codec.vars, index)) {
    throw Error("decoder index '" + index + "' is one of the codec variables");
  }
  names.reserve(codec.vars);
  names.reserve(index);
  if (codec.vars.empty()) return make_skip();

  // x := f^m(0) with f(q) = 1 / (2 floor(q) - q + 1), the Calkin-Wilf successor
  // (f(0) = 1 starts the sequence).
  auto calkin_wilf = [&](const Var& x, const Var& m) {
    Var k = names.fresh("k");
    Arith floor_x = binary(ArithOp::IntDiv, var(x), lit(1));
    Arith next = binary(ArithOp::Div, lit(1), lit(2) * floor_x - var(x) + lit(1));
    return seq({
        assign(x, lit(0)),
        assign(k, lit(0)),
        loop(compare(CmpOp::Lt, var(k), var(m)),
             seq(assign(x, next), assign(k, var(k) + lit(1)))),
    });
  };

  Var rest = names.fresh("n");
  std::vector<Program> parts{assign(rest, var(index))};
  for (std::size_t j = 0; j + 1 < codec.vars.size(); ++j) {
    // Cantor unpairing: w = largest with w(w+1)/2 <= n, b = n - w(w+1)/2, a = w - b.
    Var w = names.fresh("w");
    Var a = names.fresh("a");
    Var b = names.fresh("b");
    auto tri = [](Arith x) { return binary(ArithOp::IntDiv, x * (x + lit(1)), lit(2)); };
    parts.push_back(assign(w, lit(0)));
    parts.push_back(loop(compare(CmpOp::Le, tri(var(w) + lit(1)), var(rest)),
                         assign(w, var(w) + lit(1))));
    parts.push_back(assign(b, var(rest) - tri(var(w))));
    parts.push_back(assign(a, var(w) - var(b)));
    parts.push_back(calkin_wilf(codec.vars[j], a));
    parts.push_back(assign(rest, var(b)));
  }
  parts.push_back(calkin_wilf(codec.vars.back(), rest));
  return seq(parts);
}

Program gen_decoder_program(const InputCodec& codec, const Var& index) {
  NameSupply names;
  return gen_decoder_program(codec, index, names);
}

bool always_assigns(const Program& p) {
  return std::visit(
      overloaded{
          [](const Stmt::Assign&) { return true; },
          [](const Stmt::Seq& s) { return always_assigns(s.first) || always_assigns(s.second); },
          [](const Stmt::Choice& c) { return always_assigns(c.left) && always_assigns(c.right); },
          [](const Stmt::While&) { return false; },
          [](const Stmt::Done&) { return false; },
      },
      p->node);
}

Program instrument_exact_steps(const Program& q, const Var& budget, NameSupply& names) {
  require_ordinary(q);
  auto used = vars_of(q);
  for (std::string_view reserved : {kCounterVar, kAbortVar, kFlagVar}) {
    if (occurs(used, reserved)) {
      throw ReservedVarClashError("input program uses reserved variable '" + std::string(reserved) + "'");
    }
  }
  if (occurs(used, budget) || budget == kCounterVar || budget == kAbortVar || budget == kFlagVar) {
    throw ReservedVarClashError("budget variable '" + budget + "' clashes with the program");
  }
  names.reserve(used);
  names.reserve(budget);
  for (std::string_view reserved : {kCounterVar, kAbortVar, kFlagVar}) names.reserve(Var(reserved));

  Var flag(kFlagVar);
  Bool exact = conj(compare(CmpOp::Eq, var(Var(kAbortVar)), lit(0)),
                    compare(CmpOp::Eq, var(Var(kCounterVar)), var(budget)));
  Program body = instrument(q, budget, names);
  return seq({body, assign(flag, lit(0)), make_if(exact, assign(flag, lit(1)), make_skip(), names)});
}

Program instrument_exact_steps(const Program& q, const Var& budget) {
  NameSupply names;
  return instrument_exact_steps(q, budget, names);
}

ReductionOutput reduce_ast_to_exp(const Program& q) {
  Var v = target_name(vars_of(q));
  Program p = seq(assign(v, lit(0)), seq(q, assign(v, lit(1))));
  return {p, v, Rational(1), ReductionKind::AstToExp, source_hash(q)};
}

ReductionOutput reduce_uh_to_ast(const Program& q) {
  require_ordinary(q);
  NameSupply names(vars_of(q));
  Var i = names.fresh("i");
  Var coin = names.fresh("c");
  InputCodec codec = InputCodec::for_program(q);
  Program p = seq({geometric_generator(i, coin), gen_decoder_program(codec, i, names), q});
  return {p, std::nullopt, std::nullopt, ReductionKind::UhToAst, source_hash(q)};
}

ReductionOutput reduce_uh_to_uexp(const Program& q) {
  require_ordinary(q);
  auto used = vars_of(q);
  Var v = target_name(used);
  NameSupply names(used);
  names.reserve(v);
  for (std::string_view reserved : {kCounterVar, kAbortVar, kFlagVar}) names.reserve(Var(reserved));
  Var i = names.fresh("i");
  Var s = names.fresh("s");
  Var coin = names.fresh("c");
  Var pow = names.fresh("pow");
  Var k = names.fresh("k");
  InputCodec codec = InputCodec::for_program(q);

  Program decoder = gen_decoder_program(codec, i, names);
  Program timed = instrument_exact_steps(q, s, names);
  Program power = seq({
      assign(pow, lit(1)),
      assign(k, lit(0)),
      loop(compare(CmpOp::Lt, var(k), var(s) + lit(1)),
           seq(assign(pow, var(pow) * lit(2)), assign(k, var(k) + lit(1)))),
  });
  Program p = seq({
      geometric_generator(i, coin),
      geometric_generator(s, coin),
      assign(v, lit(0)),
      decoder,
      timed,
      power,
      assign(v, var(Var(kFlagVar)) * var(pow)),
  });
  return {p, v, Rational(1), ReductionKind::UhToUexp, source_hash(q)};
}

ReductionOutput reduce(ReductionKind kind, const Program& q) {
  switch (kind) {
    case ReductionKind::UhToUexp: return reduce_uh_to_uexp(q);
    case ReductionKind::AstToExp: return reduce_ast_to_exp(q);
    case ReductionKind::UhToAst: return reduce_uh_to_ast(q);
  }
  throw Error("unknown reduction kind");
}

}  // namespace pgcl
