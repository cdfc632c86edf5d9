#include "pgcl/rational.hpp"

#include <cctype>

namespace pgcl {

Rational make_rational(const Natural& num, const Natural& den) {
  if (den == 0) throw Error("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  Rational out;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = text.substr(0, slash);
    auto den = text.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) {
      throw Error("malformed rational '" + std::string(text) + "'");
    }
    out = make_rational(Natural(std::string(num)), Natural(std::string(den)));
  } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
    auto whole = text.substr(0, dot);
    auto frac = text.substr(dot + 1);
    if (!all_digits(whole) || !all_digits(frac)) {
      throw Error("malformed decimal '" + std::string(text) + "'");
    }
    Natural scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    Natural num = Natural(std::string(whole)) * scale + Natural(std::string(frac));
    out = make_rational(num, scale);
  } else {
    if (!all_digits(text)) {
      throw Error("malformed number '" + std::string(text) + "'");
    }
    out = Rational(Natural(std::string(text)));
  }
  return negative ? Rational(-out) : out;
}

std::string to_decimal(const Rational& q, int digits) {
  Natural scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  Natural num = abs(q.get_num()) * scale;
  Natural scaled;
  mpz_tdiv_q(scaled.get_mpz_t(), num.get_mpz_t(), q.get_den().get_mpz_t());
  std::string s = scaled.get_str();
  if (s.size() <= static_cast<std::size_t>(digits)) {
    s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
  }
  std::string out = s.substr(0, s.size() - digits);
  if (digits > 0) out += "." + s.substr(s.size() - digits);
  return (q < 0 ? "-" : "") + out;
}

double to_double(const Rational& q) { return q.get_d(); }

Rational floor_of(const Rational& q) {
  Natural f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return Rational(f);
}

Rational pow2(long k) {
  Natural p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(k < 0 ? -k : k));
  return k < 0 ? make_rational(Natural(1), p) : Rational(p);
}

Natural to_natural(std::uint64_t v) {
  Natural n;
  mpz_import(n.get_mpz_t(), 1, -1, sizeof v, 0, 0, &v);
  return n;
}

bool fits_u64(const Natural& n) {
  return n >= 0 && mpz_sizeinbase(n.get_mpz_t(), 2) <= 64;
}

std::uint64_t to_u64(const Natural& n) {
  if (!fits_u64(n)) throw Error("natural out of 64-bit range: " + n.get_str());
  std::uint64_t v = 0;
  mpz_export(&v, nullptr, -1, sizeof v, 0, 0, n.get_mpz_t());
  return v;
}

}  // namespace pgcl
