#include "pgcl/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace pgcl {

namespace {

constexpr std::string_view kKeywords[] = {"while", "if", "else", "skip", "div", "mod"};

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void hash_combine(std::size_t& seed, std::size_t v) {
  seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

std::size_t hash_rational(const Rational& q) {
  return std::hash<std::string>{}(q.get_str());
}

std::size_t hash_value(const Arith& e) {
  return std::visit(
      overloaded{
          [](const ArithExpr::Literal& l) { return hash_rational(l.value); },
          [](const ArithExpr::Variable& v) { return std::hash<std::string>{}(v.name); },
          [](const ArithExpr::Binary& b) {
            std::size_t h = static_cast<std::size_t>(b.op) + 17;
            hash_combine(h, hash_value(b.lhs));
            hash_combine(h, hash_value(b.rhs));
            return h;
          },
      },
      e->node);
}

std::size_t hash_value(const Bool& e) {
  return std::visit(
      overloaded{
          [](const BoolExpr::Compare& c) {
            std::size_t h = static_cast<std::size_t>(c.op) + 31;
            hash_combine(h, hash_value(c.lhs));
            hash_combine(h, hash_value(c.rhs));
            return h;
          },
          [](const BoolExpr::Binary& b) {
            std::size_t h = static_cast<std::size_t>(b.op) + 47;
            hash_combine(h, hash_value(b.lhs));
            hash_combine(h, hash_value(b.rhs));
            return h;
          },
          [](const BoolExpr::Not& n) {
            std::size_t h = 59;
            hash_combine(h, hash_value(n.operand));
            return h;
          },
      },
      e->node);
}

void push_unique(std::vector<Var>& out, const Var& v) {
  if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
}

}  // namespace

bool is_valid_var_name(std::string_view name) {
  if (name.empty()) return false;
  auto first = static_cast<unsigned char>(name.front());
  if (!std::isalpha(first) && first != '_') return false;
  for (char c : name) {
    auto u = static_cast<unsigned char>(c);
    if (!std::isalnum(u) && u != '_') return false;
  }
  return std::find(std::begin(kKeywords), std::end(kKeywords), name) == std::end(kKeywords);
}

bool is_reserved_name(std::string_view name) { return name.starts_with("__"); }

Arith lit(const Rational& value) {
  if (value < 0) throw Error("literals are nonnegative");
  return std::make_shared<const ArithExpr>(ArithExpr{ArithExpr::Literal{value}});
}
Arith lit(long value) { return lit(Rational(value)); }
Arith var(Var name) {
  return std::make_shared<const ArithExpr>(ArithExpr{ArithExpr::Variable{std::move(name)}});
}
Arith binary(ArithOp op, Arith lhs, Arith rhs) {
  return std::make_shared<const ArithExpr>(
      ArithExpr{ArithExpr::Binary{op, std::move(lhs), std::move(rhs)}});
}
Arith operator+(Arith a, Arith b) { return binary(ArithOp::Add, std::move(a), std::move(b)); }
Arith operator-(Arith a, Arith b) { return binary(ArithOp::Sub, std::move(a), std::move(b)); }
Arith operator*(Arith a, Arith b) { return binary(ArithOp::Mul, std::move(a), std::move(b)); }

Bool compare(CmpOp op, Arith lhs, Arith rhs) {
  return std::make_shared<const BoolExpr>(
      BoolExpr{BoolExpr::Compare{op, std::move(lhs), std::move(rhs)}});
}
Bool conj(Bool lhs, Bool rhs) {
  return std::make_shared<const BoolExpr>(
      BoolExpr{BoolExpr::Binary{BoolOp::And, std::move(lhs), std::move(rhs)}});
}
Bool disj(Bool lhs, Bool rhs) {
  return std::make_shared<const BoolExpr>(
      BoolExpr{BoolExpr::Binary{BoolOp::Or, std::move(lhs), std::move(rhs)}});
}
Bool negate(Bool operand) {
  return std::make_shared<const BoolExpr>(BoolExpr{BoolExpr::Not{std::move(operand)}});
}

Program assign(Var target, Arith value) {
  return std::make_shared<const Stmt>(Stmt{Stmt::Assign{std::move(target), std::move(value)}});
}
Program seq(Program first, Program second) {
  return std::make_shared<const Stmt>(Stmt{Stmt::Seq{std::move(first), std::move(second)}});
}
Program seq(const std::vector<Program>& parts) {
  if (parts.empty()) throw Error("empty statement sequence");
  Program out = parts.back();
  for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it) out = seq(*it, out);
  return out;
}
Program choice(Program left, const Rational& prob, Program right) {
  if (prob < 0 || prob > 1) {
    throw ProbabilityRangeError("choice probability " + to_string(prob) + " outside [0, 1]");
  }
  return std::make_shared<const Stmt>(Stmt{Stmt::Choice{std::move(left), prob, std::move(right)}});
}
Program loop(Bool guard, Program body) {
  return std::make_shared<const Stmt>(Stmt{Stmt::While{std::move(guard), std::move(body)}});
}
const Program& done() {
  static const Program marker = std::make_shared<const Stmt>(Stmt{Stmt::Done{}});
  return marker;
}

bool is_done(const Program& p) { return std::holds_alternative<Stmt::Done>(p->node); }
bool is_assign(const Program& p) { return std::holds_alternative<Stmt::Assign>(p->node); }
bool is_seq(const Program& p) { return std::holds_alternative<Stmt::Seq>(p->node); }
bool is_choice(const Program& p) { return std::holds_alternative<Stmt::Choice>(p->node); }
bool is_while(const Program& p) { return std::holds_alternative<Stmt::While>(p->node); }

bool equal(const Arith& a, const Arith& b) {
  if (a == b) return true;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      overloaded{
          [&](const ArithExpr::Literal& l) {
            return l.value == std::get<ArithExpr::Literal>(b->node).value;
          },
          [&](const ArithExpr::Variable& v) {
            return v.name == std::get<ArithExpr::Variable>(b->node).name;
          },
          [&](const ArithExpr::Binary& x) {
            const auto& y = std::get<ArithExpr::Binary>(b->node);
            return x.op == y.op && equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
          },
      },
      a->node);
}

bool equal(const Bool& a, const Bool& b) {
  if (a == b) return true;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      overloaded{
          [&](const BoolExpr::Compare& x) {
            const auto& y = std::get<BoolExpr::Compare>(b->node);
            return x.op == y.op && equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
          },
          [&](const BoolExpr::Binary& x) {
            const auto& y = std::get<BoolExpr::Binary>(b->node);
            return x.op == y.op && equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
          },
          [&](const BoolExpr::Not& x) {
            return equal(x.operand, std::get<BoolExpr::Not>(b->node).operand);
          },
      },
      a->node);
}

bool equal(const Program& a, const Program& b) {
  if (a == b) return true;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      overloaded{
          [&](const Stmt::Assign& x) {
            const auto& y = std::get<Stmt::Assign>(b->node);
            return x.target == y.target && equal(x.value, y.value);
          },
          [&](const Stmt::Seq& x) {
            const auto& y = std::get<Stmt::Seq>(b->node);
            return equal(x.first, y.first) && equal(x.second, y.second);
          },
          [&](const Stmt::Choice& x) {
            const auto& y = std::get<Stmt::Choice>(b->node);
            return x.prob == y.prob && equal(x.left, y.left) && equal(x.right, y.right);
          },
          [&](const Stmt::While& x) {
            const auto& y = std::get<Stmt::While>(b->node);
            return equal(x.guard, y.guard) && equal(x.body, y.body);
          },
          [](const Stmt::Done&) { return true; },
      },
      a->node);
}

std::size_t hash_value(const Program& p) {
  return std::visit(
      overloaded{
          [](const Stmt::Assign& a) {
            std::size_t h = std::hash<std::string>{}(a.target);
            hash_combine(h, hash_value(a.value));
            return h;
          },
          [](const Stmt::Seq& s) {
            std::size_t h = 3;
            hash_combine(h, hash_value(s.first));
            hash_combine(h, hash_value(s.second));
            return h;
          },
          [](const Stmt::Choice& c) {
            std::size_t h = hash_rational(c.prob);
            hash_combine(h, hash_value(c.left));
            hash_combine(h, hash_value(c.right));
            return h;
          },
          [](const Stmt::While& w) {
            std::size_t h = 5;
            hash_combine(h, hash_value(w.guard));
            hash_combine(h, hash_value(w.body));
            return h;
          },
          [](const Stmt::Done&) { return std::size_t{7}; },
      },
      p->node);
}

bool is_ordinary(const Program& p) { return count_choices(p) == 0; }

std::size_t count_choices(const Program& p) {
  return std::visit(
      overloaded{
          [](const Stmt::Assign&) { return std::size_t{0}; },
          [](const Stmt::Seq& s) { return count_choices(s.first) + count_choices(s.second); },
          [](const Stmt::Choice& c) {
            return 1 + count_choices(c.left) + count_choices(c.right);
          },
          [](const Stmt::While& w) { return count_choices(w.body); },
          [](const Stmt::Done&) { return std::size_t{0}; },
      },
      p->node);
}

void collect_vars(const Arith& e, std::vector<Var>& out) {
  std::visit(overloaded{
                 [](const ArithExpr::Literal&) {},
                 [&](const ArithExpr::Variable& v) { push_unique(out, v.name); },
                 [&](const ArithExpr::Binary& b) {
                   collect_vars(b.lhs, out);
                   collect_vars(b.rhs, out);
                 },
             },
             e->node);
}

void collect_vars(const Bool& b, std::vector<Var>& out) {
  std::visit(overloaded{
                 [&](const BoolExpr::Compare& c) {
                   collect_vars(c.lhs, out);
                   collect_vars(c.rhs, out);
                 },
                 [&](const BoolExpr::Binary& x) {
                   collect_vars(x.lhs, out);
                   collect_vars(x.rhs, out);
                 },
                 [&](const BoolExpr::Not& n) { collect_vars(n.operand, out); },
             },
             b->node);
}

namespace {

void collect_vars(const Program& p, std::vector<Var>& out) {
  std::visit(overloaded{
                 [&](const Stmt::Assign& a) {
                   push_unique(out, a.target);
                   pgcl::collect_vars(a.value, out);
                 },
                 [&](const Stmt::Seq& s) {
                   collect_vars(s.first, out);
                   collect_vars(s.second, out);
                 },
                 [&](const Stmt::Choice& c) {
                   collect_vars(c.left, out);
                   collect_vars(c.right, out);
                 },
                 [&](const Stmt::While& w) {
                   pgcl::collect_vars(w.guard, out);
                   collect_vars(w.body, out);
                 },
                 [](const Stmt::Done&) {},
             },
             p->node);
}

}  // namespace

std::vector<Var> vars_of(const Program& p) {
  std::vector<Var> out;
  collect_vars(p, out);
  return out;
}

NameSupply::NameSupply(const std::vector<Var>& taken) { reserve(taken); }

void NameSupply::reserve(const Var& name) { taken_.insert(name); }

void NameSupply::reserve(const std::vector<Var>& names) {
  taken_.insert(names.begin(), names.end());
}

Var NameSupply::fresh(std::string_view stem) {
  for (std::size_t n = 0;; ++n) {
    Var candidate = "__" + std::string(stem) + std::to_string(n);
    if (taken_.insert(candidate).second) return candidate;
  }
}

Program make_skip() { return assign("__unit", lit(0)); }

Program make_if(const Bool& guard, Program then_branch, Program else_branch,
                NameSupply& names) {
  Var flag = names.fresh("t");
  auto unset = compare(CmpOp::Eq, var(flag), lit(0));
  auto mark = assign(flag, lit(1));
  return seq({
      assign(flag, lit(0)),
      loop(conj(guard, unset), seq(std::move(then_branch), mark)),
      loop(conj(negate(guard), unset), seq(std::move(else_branch), mark)),
  });
}

}  // namespace pgcl
