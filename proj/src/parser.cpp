#include "pgcl/parser.hpp"

#include <cctype>
#include <optional>
#include <vector>

namespace pgcl {

SyntaxError::SyntaxError(int line, int column, const std::string& message)
    : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

enum class Tok {
  Ident,
  Number,
  Assign,     // :=
  Semi,       // ;
  LBrace,
  RBrace,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Plus,
  Minus,
  Star,
  Slash,
  Div,
  Mod,
  Lt,
  Le,
  Gt,
  Ge,
  Eq,
  Ne,
  AndAnd,
  OrOr,
  Bang,
  While,
  If,
  Else,
  Skip,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

const char* describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::Assign: return "':='";
    case Tok::Semi: return "';'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Div: return "'div'";
    case Tok::Mod: return "'mod'";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::Ge: return "'>='";
    case Tok::Eq: return "'='";
    case Tok::Ne: return "'!='";
    case Tok::AndAnd: return "'&&'";
    case Tok::OrOr: return "'||'";
    case Tok::Bang: return "'!'";
    case Tok::While: return "'while'";
    case Tok::If: return "'if'";
    case Tok::Else: return "'else'";
    case Tok::Skip: return "'skip'";
    case Tok::End: return "end of input";
  }
  return "token";
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_blank();
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "", line_, col_});
        return out;
      }
      out.push_back(next());
    }
  }

 private:
  void skip_blank() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance(1);
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
      } else {
        return;
      }
    }
  }

  void advance(std::size_t n) {
    for (std::size_t k = 0; k < n && pos_ < src_.size(); ++k) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  bool starts(std::string_view s) const { return src_.substr(pos_).starts_with(s); }

  bool digit_at(std::size_t i) const {
    return i < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i]));
  }

  Token next() {
    int line = line_;
    int col = col_;
    auto make = [&](Tok kind, std::size_t len) {
      Token t{kind, std::string(src_.substr(pos_, len)), line, col};
      advance(len);
      return t;
    };
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t end = pos_;
      while (digit_at(end)) ++end;
      if (end < src_.size() && (src_[end] == '.' || src_[end] == '/') && digit_at(end + 1)) {
        ++end;
        while (digit_at(end)) ++end;
      }
      return make(Tok::Number, end - pos_);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_')) {
        ++end;
      }
      std::string_view word = src_.substr(pos_, end - pos_);
      Tok kind = Tok::Ident;
      if (word == "while") kind = Tok::While;
      else if (word == "if") kind = Tok::If;
      else if (word == "else") kind = Tok::Else;
      else if (word == "skip") kind = Tok::Skip;
      else if (word == "div") kind = Tok::Div;
      else if (word == "mod") kind = Tok::Mod;
      return make(kind, end - pos_);
    }
    // Multi-byte operators first.
    static constexpr std::pair<std::string_view, Tok> kOps[] = {
        {":=", Tok::Assign}, {"<=", Tok::Le},   {">=", Tok::Ge},     {"!=", Tok::Ne},
        {"==", Tok::Eq},     {"&&", Tok::AndAnd}, {"||", Tok::OrOr},
        {"≠", Tok::Ne}, {"≤", Tok::Le}, {"≥", Tok::Ge}, {"−", Tok::Minus},
        {";", Tok::Semi},    {"{", Tok::LBrace},  {"}", Tok::RBrace},  {"(", Tok::LParen},
        {")", Tok::RParen},  {"[", Tok::LBracket}, {"]", Tok::RBracket}, {"+", Tok::Plus},
        {"-", Tok::Minus},   {"*", Tok::Star},    {"/", Tok::Slash},   {"<", Tok::Lt},
        {">", Tok::Gt},      {"=", Tok::Eq},      {"!", Tok::Bang},
    };
    for (const auto& [spelling, kind] : kOps) {
      if (starts(spelling)) return make(kind, spelling.size());
    }
    throw SyntaxError(line, col, "unexpected character '" + std::string(1, c) + "'");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, NameSupply& names)
      : toks_(std::move(tokens)), names_(names) {}

  Program program() {
    Program p = sequence();
    expect(Tok::End);
    return p;
  }

  Arith arith_only() {
    Arith e = arith();
    expect(Tok::End);
    return e;
  }

  Bool bool_only() {
    Bool b = boolean();
    expect(Tok::End);
    return b;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at(Tok k) const { return peek().kind == k; }
  bool accept(Tok k) {
    if (!at(k)) return false;
    ++pos_;
    return true;
  }
  const Token& expect(Tok k) {
    if (!at(k)) fail(std::string("expected ") + describe(k) + ", found " + found());
    return toks_[pos_++];
  }
  std::string found() const {
    const Token& t = peek();
    if (t.kind == Tok::End) return describe(Tok::End);
    return "'" + t.text + "'";
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw SyntaxError(peek().line, peek().column, msg);
  }

  Program sequence() {
    std::vector<Program> parts{statement()};
    while (accept(Tok::Semi)) {
      if (at(Tok::RBrace) || at(Tok::End)) break;
      parts.push_back(statement());
    }
    return seq(parts);
  }

  Program block() {
    expect(Tok::LBrace);
    Program p = sequence();
    expect(Tok::RBrace);
    return p;
  }

  Program statement() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Ident: {
        ++pos_;
        expect(Tok::Assign);
        return assign(t.text, arith());
      }
      case Tok::Skip:
        ++pos_;
        return make_skip();
      case Tok::While: {
        ++pos_;
        expect(Tok::LParen);
        Bool guard = boolean();
        expect(Tok::RParen);
        return loop(guard, block());
      }
      case Tok::If:
        return if_statement();
      case Tok::LBrace: {
        Program left = block();
        if (!at(Tok::LBracket)) return left;
        ++pos_;
        const Token& num = peek();
        if (num.kind != Tok::Number) fail("expected probability literal, found " + found());
        ++pos_;
        Rational p = number_value(num);
        expect(Tok::RBracket);
        Program right = block();
        if (p < 0 || p > 1) {
          throw ProbabilityRangeError(std::to_string(num.line) + ":" +
                                      std::to_string(num.column) + ": probability " +
                                      num.text + " outside [0, 1]");
        }
        return choice(left, p, right);
      }
      default:
        fail("expected statement, found " + found());
    }
  }

  Program if_statement() {
    expect(Tok::If);
    expect(Tok::LParen);
    Bool guard = boolean();
    expect(Tok::RParen);
    Program then_branch = block();
    Program else_branch = make_skip();
    if (accept(Tok::Else)) else_branch = at(Tok::If) ? if_statement() : block();
    return make_if(guard, then_branch, else_branch, names_);
  }

  Rational number_value(const Token& t) const {
    try {
      return parse_rational(t.text);
    } catch (const Error& e) {
      throw SyntaxError(t.line, t.column, e.what());
    }
  }

  Arith arith() {
    Arith lhs = term();
    for (;;) {
      if (accept(Tok::Plus)) lhs = binary(ArithOp::Add, lhs, term());
      else if (accept(Tok::Minus)) lhs = binary(ArithOp::Sub, lhs, term());
      else return lhs;
    }
  }

  Arith term() {
    Arith lhs = factor();
    for (;;) {
      if (accept(Tok::Star)) lhs = binary(ArithOp::Mul, lhs, factor());
      else if (accept(Tok::Slash)) lhs = binary(ArithOp::Div, lhs, factor());
      else if (accept(Tok::Div)) lhs = binary(ArithOp::IntDiv, lhs, factor());
      else if (accept(Tok::Mod)) lhs = binary(ArithOp::Mod, lhs, factor());
      else return lhs;
    }
  }

  Arith factor() {
    const Token& t = peek();
    if (t.kind == Tok::Number) {
      ++pos_;
      return lit(number_value(t));
    }
    if (t.kind == Tok::Ident) {
      ++pos_;
      return var(t.text);
    }
    if (accept(Tok::LParen)) {
      Arith e = arith();
      expect(Tok::RParen);
      return e;
    }
    fail("expected expression, found " + found());
  }

  Bool boolean() {
    Bool lhs = conjunction();
    while (accept(Tok::OrOr)) lhs = disj(lhs, conjunction());
    return lhs;
  }

  Bool conjunction() {
    Bool lhs = unary();
    while (accept(Tok::AndAnd)) lhs = conj(lhs, unary());
    return lhs;
  }

  Bool unary() {
    if (accept(Tok::Bang)) return negate(unary());
    if (at(Tok::LParen)) {
      // "(x + 1) < 2" and "(x < 1 && y < 2)" both start with '('; try the
      // comparison reading first and fall back to a parenthesised formula.
      std::size_t mark = pos_;
      try {
        return comparison();
      } catch (const SyntaxError&) {
        pos_ = mark;
      }
      expect(Tok::LParen);
      Bool inner = boolean();
      expect(Tok::RParen);
      return inner;
    }
    return comparison();
  }

  Bool comparison() {
    Arith lhs = arith();
    Tok op = peek().kind;
    switch (op) {
      case Tok::Lt: ++pos_; return compare(CmpOp::Lt, lhs, arith());
      case Tok::Le: ++pos_; return compare(CmpOp::Le, lhs, arith());
      case Tok::Eq: ++pos_; return compare(CmpOp::Eq, lhs, arith());
      case Tok::Ne: ++pos_; return compare(CmpOp::Ne, lhs, arith());
      case Tok::Gt: ++pos_; return compare(CmpOp::Lt, arith(), lhs);
      case Tok::Ge: ++pos_; return compare(CmpOp::Le, arith(), lhs);
      default: fail("expected comparison operator, found " + found());
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  NameSupply& names_;
};

}  // namespace

Program parse(std::string_view text) {
  auto tokens = Lexer(text).run();
  NameSupply names;
  for (const auto& t : tokens) {
    if (t.kind == Tok::Ident) names.reserve(t.text);
  }
  return Parser(std::move(tokens), names).program();
}

Program parse(std::string_view text, NameSupply& names) {
  auto tokens = Lexer(text).run();
  for (const auto& t : tokens) {
    if (t.kind == Tok::Ident) names.reserve(t.text);
  }
  return Parser(std::move(tokens), names).program();
}

Arith parse_arith(std::string_view text) {
  NameSupply names;
  return Parser(Lexer(text).run(), names).arith_only();
}

Bool parse_bool(std::string_view text) {
  NameSupply names;
  return Parser(Lexer(text).run(), names).bool_only();
}

}  // namespace pgcl
