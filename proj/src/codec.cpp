#include "pgcl/codec.hpp"

#include <algorithm>

namespace pgcl {

Natural cantor_pair(const Natural& a, const Natural& b) {
  if (a < 0 || b < 0) throw CodecError("cantor_pair is defined on naturals");
  Natural s = a + b;
  return s * (s + 1) / 2 + b;
}

std::pair<Natural, Natural> cantor_unpair(const Natural& n) {
  if (n < 0) throw CodecError("cantor_unpair is defined on naturals");
  Natural w;
  Natural disc = 8 * n + 1;
  mpz_sqrt(w.get_mpz_t(), disc.get_mpz_t());
  w = (w - 1) / 2;
  Natural b = n - w * (w + 1) / 2;
  return {w - b, b};
}

Rational nat_to_rat(const Natural& n) {
  if (n < 0) throw CodecError("nat_to_rat is defined on naturals");
  if (n == 0) return 0;
  // Path from the Calkin-Wilf root 1/1: bits of n below the leading one,
  // 0 = left child a/(a+b), 1 = right child (a+b)/b.
  Natural a = 1;
  Natural b = 1;
  for (std::size_t i = mpz_sizeinbase(n.get_mpz_t(), 2) - 1; i-- > 0;) {
    if (mpz_tstbit(n.get_mpz_t(), i)) a += b;
    else b += a;
  }
  return make_rational(a, b);
}

Natural rat_to_nat(const Rational& q) {
  if (q < 0) throw CodecError("rat_to_nat is defined on nonnegative rationals");
  if (q == 0) return 0;
  Natural a = q.get_num();
  Natural b = q.get_den();
  std::vector<bool> path;
  while (a != b) {
    if (a < b) {
      b -= a;
      path.push_back(false);
    } else {
      a -= b;
      path.push_back(true);
    }
  }
  Natural n = 1;
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    n <<= 1;
    if (*it) n += 1;
  }
  return n;
}

InputCodec InputCodec::for_program(const Program& q) {
  InputCodec codec;
  for (auto& v : vars_of(q)) {
    if (!is_reserved_name(v)) codec.vars.push_back(std::move(v));
  }
  return codec;
}

Valuation g_decode(const InputCodec& codec, const Natural& i) {
  if (i < 0) throw CodecError("g_decode is defined on naturals");
  Valuation env;
  if (codec.vars.empty()) return env;
  Natural rest = i;
  for (std::size_t k = 0; k + 1 < codec.vars.size(); ++k) {
    auto [head, tail] = cantor_unpair(rest);
    env.set(codec.vars[k], nat_to_rat(head));
    rest = tail;
  }
  env.set(codec.vars.back(), nat_to_rat(rest));
  return env;
}

Natural g_encode(const InputCodec& codec, const Valuation& env) {
  for (const auto& [name, value] : env.entries()) {
    if (std::find(codec.vars.begin(), codec.vars.end(), name) == codec.vars.end()) {
      throw CodecError("variable '" + name + "' is outside the codec");
    }
  }
  if (codec.vars.empty()) return 0;
  Natural n = rat_to_nat(env.get(codec.vars.back()));
  for (std::size_t k = codec.vars.size() - 1; k-- > 0;) {
    n = cantor_pair(rat_to_nat(env.get(codec.vars[k])), n);
  }
  return n;
}

}  // namespace pgcl
