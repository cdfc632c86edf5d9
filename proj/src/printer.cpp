#include "pgcl/printer.hpp"

namespace pgcl {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

int precedence(ArithOp op) {
  return (op == ArithOp::Add || op == ArithOp::Sub) ? 1 : 2;
}

int precedence(const Arith& e) {
  if (const auto* b = std::get_if<ArithExpr::Binary>(&e->node)) return precedence(b->op);
  return 3;
}

const char* spelling(ArithOp op) {
  switch (op) {
    case ArithOp::Add: return " + ";
    case ArithOp::Sub: return " - ";
    case ArithOp::Mul: return " * ";
    case ArithOp::Div: return " / ";
    case ArithOp::IntDiv: return " div ";
    case ArithOp::Mod: return " mod ";
  }
  return " ? ";
}

const char* spelling(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return " < ";
    case CmpOp::Le: return " <= ";
    case CmpOp::Eq: return " = ";
    case CmpOp::Ne: return " != ";
  }
  return " ? ";
}

std::string literal_text(const Rational& q) {
  return q.get_den() == 1 ? q.get_num().get_str() : q.get_str();
}

// Fractional literals inside operators are wrapped so "x * (1/2)" reads well.
std::string operand(const Arith& e, bool parens) {
  if (const auto* l = std::get_if<ArithExpr::Literal>(&e->node)) {
    if (l->value.get_den() != 1) return "(" + literal_text(l->value) + ")";
  }
  std::string s = to_string(e);
  return parens ? "(" + s + ")" : s;
}

int precedence(const Bool& b) {
  if (const auto* x = std::get_if<BoolExpr::Binary>(&b->node)) {
    return x->op == BoolOp::Or ? 1 : 2;
  }
  return 3;
}

class StmtPrinter {
 public:
  explicit StmtPrinter(Layout layout) : layout_(layout) {}

  std::string print(const Program& p, int depth) {
    return std::visit(
        overloaded{
            [&](const Stmt::Assign& a) { return a.target + " := " + to_string(a.value); },
            [&](const Stmt::Seq& s) {
              std::string head = is_seq(s.first) ? braced(s.first, depth)
                                                 : print(s.first, depth);
              return head + ";" + separator(depth) + print(s.second, depth);
            },
            [&](const Stmt::Choice& c) {
              return braced(c.left, depth) + " [" + literal_text(c.prob) + "] " +
                     braced(c.right, depth);
            },
            [&](const Stmt::While& w) {
              return "while (" + to_string(w.guard) + ") " + body(w.body, depth);
            },
            [](const Stmt::Done&) { return std::string("↓"); },
        },
        p->node);
  }

 private:
  bool flat() const { return layout_ == Layout::SingleLine; }

  std::string indent(int depth) const { return std::string(2 * depth, ' '); }

  std::string separator(int depth) const {
    return flat() ? " " : "\n" + indent(depth);
  }

  // Choice branches and groups: "{x := 1}" stays on one line when simple.
  std::string braced(const Program& p, int depth) {
    if (flat() || !is_seq(p)) return "{" + print(p, depth) + "}";
    return "{\n" + indent(depth + 1) + print(p, depth + 1) + "\n" + indent(depth) + "}";
  }

  std::string body(const Program& p, int depth) {
    if (flat()) return "{ " + print(p, depth) + " }";
    return "{\n" + indent(depth + 1) + print(p, depth + 1) + "\n" + indent(depth) + "}";
  }

  Layout layout_;
};

}  // namespace

std::string to_string(const Arith& e) {
  return std::visit(
      overloaded{
          [](const ArithExpr::Literal& l) { return literal_text(l.value); },
          [](const ArithExpr::Variable& v) { return v.name; },
          [](const ArithExpr::Binary& b) {
            int p = precedence(b.op);
            return operand(b.lhs, precedence(b.lhs) < p) + spelling(b.op) +
                   operand(b.rhs, precedence(b.rhs) <= p);
          },
      },
      e->node);
}

std::string to_string(const Bool& b) {
  return std::visit(
      overloaded{
          [](const BoolExpr::Compare& c) {
            return to_string(c.lhs) + spelling(c.op) + to_string(c.rhs);
          },
          [](const BoolExpr::Binary& x) {
            int p = x.op == BoolOp::Or ? 1 : 2;
            auto side = [&](const Bool& s, bool parens) {
              return parens ? "(" + to_string(s) + ")" : to_string(s);
            };
            return side(x.lhs, precedence(x.lhs) < p) + (x.op == BoolOp::Or ? " || " : " && ") +
                   side(x.rhs, precedence(x.rhs) <= p);
          },
          [](const BoolExpr::Not& n) { return "!(" + to_string(n.operand) + ")"; },
      },
      b->node);
}

std::string pretty_print(const Program& p, Layout layout) {
  return StmtPrinter(layout).print(p, 0);
}

}  // namespace pgcl
