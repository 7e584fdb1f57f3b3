#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kolmo {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Information quantities in bits. Logarithms of rationals are irrational in
/// general, so these are floating point; exact tests use Rational instead.
using Bits = double;

inline constexpr Bits kInfinity = std::numeric_limits<Bits>::infinity();

/// Global tolerance for identities between logarithmic quantities.
inline constexpr Bits kBitsTolerance = 1e-9;

/// Binary strings are ASCII '0'/'1' so they can be dumped bit-exactly.
using BitString = std::string;

/// Error carrying a short machine-readable code next to the message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

/// log2 of a positive big integer, accurate for numbers far beyond double range.
double log2_of(const BigInt& n);
/// log2 of a positive rational; -inf for zero.
double log2_of(const Rational& q);

/// 2^e for any integer e.
Rational pow2(long e);

/// Smallest integer l >= 0 with 2^-l <= p, i.e. ceil(log2(1/p)), computed
/// exactly. Requires 0 < p <= 1.
long ceil_log2_inverse(const Rational& p);

/// True iff p = 2^-k for some integer k >= 0.
bool is_inverse_power_of_two(const Rational& p);

bool is_bit_string(std::string_view s);

/// Binary representation of v padded to exactly `width` bits.
BitString to_bits(const BigInt& v, std::size_t width);
BigInt from_bits(std::string_view bits);

/// Fixed 9-decimal rendering used by every CSV/CLI output ("inf" for +inf).
std::string format_bits(Bits b);

}  // namespace kolmo
