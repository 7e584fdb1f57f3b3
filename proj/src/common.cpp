#include "kolmolab/common.hpp"

#include <cmath>
#include <cstdio>

namespace kolmo {

namespace {

BigInt parse_integer(std::string_view text, std::string_view whole) {
  if (text.empty()) throw Error("parse", "malformed rational '" + std::string(whole) + "'");
  std::size_t i = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  if (i == text.size()) throw Error("parse", "malformed rational '" + std::string(whole) + "'");
  for (std::size_t j = i; j < text.size(); ++j) {
    if (text[j] < '0' || text[j] > '9')
      throw Error("parse", "malformed rational '" + std::string(whole) + "'");
  }
  std::string digits(text[0] == '+' ? text.substr(1) : text);
  return BigInt(digits, 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
    text.remove_suffix(1);
  const auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    BigInt num = parse_integer(text.substr(0, slash), text);
    BigInt den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw Error("parse", "zero denominator in '" + std::string(text) + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  const auto dot = text.find('.');
  if (dot != std::string_view::npos) {
    // Exact decimal: "0.125" -> 125/1000.
    const bool negative = text.front() == '-';
    std::string_view body = (negative || text.front() == '+') ? text.substr(1) : text;
    const auto body_dot = body.find('.');
    std::string_view frac = body.substr(body_dot + 1);
    std::string digits = std::string(body.substr(0, body_dot)) + std::string(frac);
    if (digits.empty()) throw Error("parse", "malformed rational '" + std::string(text) + "'");
    BigInt num = parse_integer(digits, text);
    if (negative) num = -num;
    BigInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  return Rational(parse_integer(text, text));
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

double log2_of(const BigInt& n) {
  if (sgn(n) <= 0) return -kInfinity;
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, n.get_mpz_t());
  return std::log2(mant) + static_cast<double>(exp);
}

double log2_of(const Rational& q) {
  if (sgn(q) == 0) return -kInfinity;
  if (sgn(q) < 0) throw Error("domain", "log of negative rational");
  return log2_of(BigInt(q.get_num())) - log2_of(BigInt(q.get_den()));
}

Rational pow2(long e) {
  BigInt p = 1;
  if (e >= 0) {
    mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
    return Rational(p);
  }
  mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(-e));
  return Rational(BigInt(1), p);
}

long ceil_log2_inverse(const Rational& p) {
  if (sgn(p) <= 0 || p > 1) throw Error("domain", "ceil_log2_inverse needs 0 < p <= 1, got " + to_string(p));
  // 2^-l <= p  <=>  den <= num * 2^l.
  const BigInt& num = p.get_num();
  const BigInt& den = p.get_den();
  long l = static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2)) -
           static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2)) - 1;
  if (l < 0) l = 0;
  BigInt shifted;
  for (;; ++l) {
    mpz_mul_2exp(shifted.get_mpz_t(), num.get_mpz_t(), static_cast<mp_bitcnt_t>(l));
    if (shifted >= den) return l;
  }
}

bool is_inverse_power_of_two(const Rational& p) {
  if (sgn(p) <= 0 || p.get_num() != 1) return false;
  return mpz_popcount(p.get_den().get_mpz_t()) == 1;
}

bool is_bit_string(std::string_view s) {
  for (char c : s)
    if (c != '0' && c != '1') return false;
  return true;
}

BitString to_bits(const BigInt& v, std::size_t width) {
  BitString out(width, '0');
  for (std::size_t i = 0; i < width; ++i) {
    if (mpz_tstbit(v.get_mpz_t(), width - 1 - i)) out[i] = '1';
  }
  return out;
}

BigInt from_bits(std::string_view bits) {
  BigInt v = 0;
  for (char c : bits) {
    v <<= 1;
    if (c == '1') v += 1;
  }
  return v;
}

std::string format_bits(Bits b) {
  if (std::isinf(b)) return b > 0 ? "inf" : "-inf";
  if (std::isnan(b)) return "nan";
  if (b == 0) b = 0;  // no "-0.000000000"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", b);
  std::string s(buf);
  if (s == "-0.000000000") s = "0.000000000";
  return s;
}

}  // namespace kolmo
