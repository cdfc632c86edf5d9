#include "pgcl/semantics.hpp"

#include "pgcl/printer.hpp"

namespace pgcl {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// One deterministic inference on the control part; updates env in place.
Program step_control(const Program& p, Valuation& env) {
  return std::visit(
      overloaded{
          [&](const Stmt::Assign& a) -> Program {
            Rational value = eval_arith(a.value, env);
            env.set(a.target, value < 0 ? Rational(0) : value);
            return done();
          },
          [&](const Stmt::Seq& s) -> Program {
            if (is_done(s.first)) return s.second;
            return seq(step_control(s.first, env), s.second);
          },
          [&](const Stmt::While& w) -> Program {
            if (eval_bool(w.guard, env)) return seq(w.body, p);
            return done();
          },
          [&](const Stmt::Choice&) -> Program {
            throw ChoiceHeadedError("next inference is a probabilistic choice: " +
                                    pretty_print(p));
          },
          [&](const Stmt::Done&) -> Program {
            throw Error("no inference applies to a terminated program");
          },
      },
      p->node);
}

// Replaces the head choice by the selected branch; reports its factor.
Program resolve_head(const Program& p, Dir d, Rational& factor) {
  if (const auto* c = std::get_if<Stmt::Choice>(&p->node)) {
    factor = d == Dir::L ? c->prob : Rational(1 - c->prob);
    return d == Dir::L ? c->left : c->right;
  }
  if (const auto* s = std::get_if<Stmt::Seq>(&p->node)) {
    if (!is_done(s->first)) return seq(resolve_head(s->first, d, factor), s->second);
  }
  throw NotChoiceHeadedError("next inference is not a probabilistic choice");
}

}  // namespace

Valuation::Valuation(std::initializer_list<std::pair<const Var, Rational>> init) {
  for (const auto& [k, v] : init) set(k, v);
}

Rational Valuation::get(const Var& v) const {
  auto it = entries_.find(v);
  return it == entries_.end() ? Rational(0) : it->second;
}

void Valuation::set(const Var& v, const Rational& value) {
  if (value < 0) throw Error("valuation entries are nonnegative (" + v + ")");
  if (value == 0) entries_.erase(v);
  else entries_[v] = value;
}

ChoiceString::ChoiceString(std::string_view letters) : letters_(letters) {
  for (char c : letters_) {
    if (c != 'L' && c != 'R') throw Error("choice strings use only L and R");
  }
}

ChoiceString operator+(const ChoiceString& a, const ChoiceString& b) {
  ChoiceString out = a;
  for (std::size_t i = 0; i < b.size(); ++i) out.push_back(b[i]);
  return out;
}

bool operator==(const State& a, const State& b) {
  return a.prob == b.prob && a.trace == b.trace && a.env == b.env &&
         equal(a.control, b.control);
}

State initial_state(const Program& p) { return State{p, Valuation{}, Rational(1), {}}; }

Rational eval_arith(const Arith& e, const Valuation& env) {
  return std::visit(
      overloaded{
          [](const ArithExpr::Literal& l) { return l.value; },
          [&](const ArithExpr::Variable& v) { return env.get(v.name); },
          [&](const ArithExpr::Binary& b) -> Rational {
            Rational x = eval_arith(b.lhs, env);
            Rational y = eval_arith(b.rhs, env);
            switch (b.op) {
              case ArithOp::Add: return x + y;
              case ArithOp::Sub: return x - y;
              case ArithOp::Mul: return x * y;
              case ArithOp::Div: return y == 0 ? Rational(0) : Rational(x / y);
              case ArithOp::IntDiv: return y == 0 ? Rational(0) : floor_of(x / y);
              case ArithOp::Mod: return y == 0 ? Rational(0) : Rational(x - y * floor_of(x / y));
            }
            return Rational(0);
          },
      },
      e->node);
}

bool eval_bool(const Bool& b, const Valuation& env) {
  return std::visit(
      overloaded{
          [&](const BoolExpr::Compare& c) {
            Rational x = eval_arith(c.lhs, env);
            Rational y = eval_arith(c.rhs, env);
            switch (c.op) {
              case CmpOp::Lt: return x < y;
              case CmpOp::Le: return x <= y;
              case CmpOp::Eq: return x == y;
              case CmpOp::Ne: return x != y;
            }
            return false;
          },
          [&](const BoolExpr::Binary& x) {
            if (x.op == BoolOp::And) return eval_bool(x.lhs, env) && eval_bool(x.rhs, env);
            return eval_bool(x.lhs, env) || eval_bool(x.rhs, env);
          },
          [&](const BoolExpr::Not& n) { return !eval_bool(n.operand, env); },
      },
      b->node);
}

bool choice_headed(const Program& control) {
  const Program* p = &control;
  while (const auto* s = std::get_if<Stmt::Seq>(&(*p)->node)) {
    if (is_done(s->first)) return false;
    p = &s->first;
  }
  return is_choice(*p);
}

StepOutcome step(const State& s) {
  if (s.terminated()) return std::nullopt;
  State next{nullptr, s.env, s.prob, s.trace};
  next.control = step_control(s.control, next.env);
  return next;
}

State step_prob(const State& s, Dir d) {
  Rational factor;
  Program control = resolve_head(s.control, d, factor);
  State next{control, s.env, s.prob * factor, s.trace};
  next.trace.push_back(d);
  return next;
}

StepOutcome run(const State& s, std::uint64_t k, const ChoiceString& w) {
  State cur = s;
  std::size_t used = 0;
  for (std::uint64_t i = 0; i < k; ++i) {
    if (cur.terminated()) return std::nullopt;
    if (choice_headed(cur.control)) {
      if (used == w.size()) return std::nullopt;
      cur = step_prob(cur, w[used++]);
    } else {
      cur = *step(cur);
    }
  }
  if (used != w.size()) return std::nullopt;
  return cur;
}

Rational alpha(const StepOutcome& o) {
  if (o && o->terminated()) return o->prob;
  return 0;
}

Rational weight(const StepOutcome& o, const Var& v) {
  if (o && o->terminated()) return o->env.get(v) * o->prob;
  return 0;
}

ChoiceString h(const Natural& n) {
  if (n < 0) throw Error("h is defined on naturals");
  Natural m = n + 1;
  std::size_t len = mpz_sizeinbase(m.get_mpz_t(), 2) - 1;
  ChoiceString out;
  // Bits of m below the leading one spell the word, 0 = L, 1 = R.
  for (std::size_t i = len; i-- > 0;) {
    out.push_back(mpz_tstbit(m.get_mpz_t(), i) ? Dir::R : Dir::L);
  }
  return out;
}

Natural h_inv(const ChoiceString& w) {
  Natural m = 1;
  for (std::size_t i = 0; i < w.size(); ++i) {
    m <<= 1;
    if (w[i] == Dir::R) m += 1;
  }
  return m - 1;
}

Natural h_last_of_length(std::uint64_t len) {
  Natural p = 1;
  p <<= static_cast<mp_bitcnt_t>(len + 1);
  return p - 2;
}

}  // namespace pgcl
