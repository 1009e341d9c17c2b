#include "gapjohn/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>

#include "gapjohn/errors.hpp"

namespace gapjohn {

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

Integer parse_integer(std::string_view s) {
  if (!is_integer_literal(s)) {
    throw ParseError("malformed integer '" + std::string(s) + "'");
  }
  std::string text(s[0] == '+' ? s.substr(1) : s);
  return Integer(text, 10);
}

}  // namespace

Rational fraction(const Integer& num, const Integer& den) {
  if (den == 0) throw PreconditionError("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational parse_rational(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(text.substr(0, slash));
    Integer den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole[0] == '-';
    if (whole.empty() || whole == "-" || whole == "+") {
      whole = negative ? "-0" : "0";
    }
    if (frac.empty() || !is_integer_literal(frac) || frac[0] == '-' || frac[0] == '+') {
      throw ParseError("malformed decimal '" + std::string(text) + "'");
    }
    Integer w = parse_integer(whole);
    Integer f = parse_integer(frac);
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    Rational q(negative ? Integer(w * scale - f) : Integer(w * scale + f), scale);
    q.canonicalize();
    return q;
  }
  return Rational(parse_integer(text));
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_string(const Integer& z) { return z.get_str(); }

Integer floor(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Integer ceil(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Integer round_nearest(const Rational& q) { return floor(q + Rational(1, 2)); }

std::int64_t to_int64(const Integer& z) {
  if (!mpz_fits_slong_p(z.get_mpz_t())) {
    throw OverflowError("integer " + z.get_str() + " exceeds 64-bit range");
  }
  return static_cast<std::int64_t>(z.get_si());
}

std::int64_t floor_to_int64(const Rational& q) { return to_int64(floor(q)); }

Rational pow(const Rational& base, unsigned exponent) {
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), exponent);
  Rational r(num, den);
  r.canonicalize();
  return r;
}

namespace {

// floor(sqrt(q) * 2^bits)
Integer scaled_isqrt(const Rational& q, unsigned bits, bool* exact) {
  Integer shifted = q.get_num();
  mpz_mul_2exp(shifted.get_mpz_t(), shifted.get_mpz_t(), 2 * bits);
  Integer quotient;
  mpz_fdiv_q(quotient.get_mpz_t(), shifted.get_mpz_t(), q.get_den_mpz_t());
  Integer root;
  mpz_sqrt(root.get_mpz_t(), quotient.get_mpz_t());
  *exact = (root * root * q.get_den() == shifted);
  return root;
}

Rational over_power_of_two(const Integer& k, unsigned bits) {
  Integer den = 1;
  mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), bits);
  Rational r(k, den);
  r.canonicalize();
  return r;
}

}  // namespace

Rational sqrt_upper(const Rational& q, unsigned bits) {
  if (q < 0) throw PreconditionError("sqrt of negative rational");
  bool exact = false;
  Integer k = scaled_isqrt(q, bits, &exact);
  if (!exact) k += 1;
  return over_power_of_two(k, bits);
}

Rational sqrt_lower(const Rational& q, unsigned bits) {
  if (q < 0) throw PreconditionError("sqrt of negative rational");
  bool exact = false;
  return over_power_of_two(scaled_isqrt(q, bits, &exact), bits);
}

Rational rational_from_double(double x, unsigned bits) {
  if (!std::isfinite(x)) throw PreconditionError("non-finite floating value");
  double scaled = std::floor(std::ldexp(x, static_cast<int>(bits)));
  Integer k;
  mpz_set_d(k.get_mpz_t(), scaled);
  return over_power_of_two(k, bits);
}

}  // namespace gapjohn
