#pragma once

// Universal codes: the binomial type-class code, two-part codes over finite
// families of sequential sources, and redundancy measurement.

#include "kolmolab/coding.hpp"
#include "kolmolab/common.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace kolmo::unicode {

// --- binomial code -------------------------------------------------------

/// Lexicographic rank of x among the strings of its length with the same
/// number of zeros.
BigInt type_class_rank(std::string_view x);
BitString type_class_unrank(std::size_t n, std::size_t zeros, const BigInt& rank);

/// ceil(log2 C(n, zeros)); 0 when the class has one element.
std::size_t type_class_index_bits(std::size_t n, std::size_t zeros);

/// encode_natural(n) . encode_natural(n0) . rank in type_class_index_bits.
BitString binomial_encode(std::string_view x);
std::size_t binomial_length(std::size_t n, std::size_t zeros);
BitString binomial_decode(coding::BitReader& in);
BitString binomial_decode(std::string_view code);

// --- sequential sources --------------------------------------------------

struct Source {
  enum class Kind { Bernoulli, Markov1 };
  Kind kind = Kind::Bernoulli;
  Rational theta;    // Bernoulli: P(1)
  Rational initial;  // Markov1: P(first bit = 1)
  Rational after0;   // Markov1: P(1 | previous 0)
  Rational after1;   // Markov1: P(1 | previous 1)

  static Source bernoulli(const Rational& theta);
  static Source markov1(const Rational& initial, const Rational& after0, const Rational& after1);

  /// f^{(n)}(x) with n = |x|; f(empty) = 1.
  Rational mass(std::string_view x) const;
  std::string describe() const;
};

struct SourceFamily {
  std::vector<Source> members;  // index k is members[k-1]
};

/// Bernoulli sources theta = j/den for j = 1..den-1.
SourceFamily bernoulli_grid(unsigned den = 10);

/// Lines `bernoulli <theta>` or `markov1 <initial> <after0> <after1>`.
SourceFamily read_family(std::istream& in);
SourceFamily read_family_file(const std::string& path);

/// sum_y f^{(n+1)}(xy) = f^{(n)}(x) for every x of length n.
bool compatible(const Source& s, std::size_t n);

/// ceil(log2 1/f(x)); nullopt when f(x) = 0.
std::optional<long> shannon_fano_length(const Source& s, std::string_view x);

/// Shannon-Fano codeword of x under f^{(n)}: order strings by decreasing
/// probability, ties lexicographic, and truncate the cumulative mass below
/// x to ceil(log2 1/f(x)) bits. Bernoulli sources run in closed form;
/// other sources enumerate and need n <= 16.
BitString shannon_fano_codeword(const Source& s, std::string_view x);
BitString shannon_fano_decode(const Source& s, std::size_t n, coding::BitReader& in);

struct TwoPartChoice {
  std::size_t k = 0;       // 1-based
  std::size_t length = 0;  // |enc(n)| + |enc(k)| + ceil(log 1/f_k(x))
};

/// k* minimizing ceil(log 1/f_k(x)) + |encode_natural(k)|, least k on ties.
TwoPartChoice universal_two_part(const SourceFamily& family, std::string_view x);

BitString two_part_encode(const SourceFamily& family, std::string_view x);
BitString two_part_decode(const SourceFamily& family, coding::BitReader& in);

// --- redundancy ----------------------------------------------------------

struct RedundancyRow {
  std::string label;
  std::size_t n = 0;
  std::size_t length = 0;                  // L-tilde
  std::vector<std::optional<long>> per_k;  // L_k
  long best = 0;                           // min_k L_k
  long redundancy = 0;                     // L-tilde - min_k L_k
  bool bound_holds = true;                 // L-tilde <= L_k + |enc(k)| + |enc(n)| for all k
};

struct UCodeReport {
  std::vector<RedundancyRow> rows;
  bool all_bounds_hold = true;
  double mean_redundancy = 0;
};

UCodeReport redundancy_report(const SourceFamily& family, const std::vector<std::pair<std::string, BitString>>& corpus);

struct ExpectedRow {
  std::size_t k = 0, n = 0;
  Bits entropy = 0;
  Bits expected_length = 0;
  Bits upper = 0;  // H + |enc(k)| + |enc(n)| + 1
  bool holds = false;
};

/// Exact expectations under every member for strings of length n <= 14.
std::vector<ExpectedRow> expected_redundancy(const SourceFamily& family, std::size_t n);

// --- corpora and files ---------------------------------------------------

/// n bits, each 1 with probability p, from a seeded 64-bit Mersenne twister
/// with exact integer thresholds.
BitString sample_bernoulli(const Rational& p, std::size_t n, std::uint64_t seed);

/// 4-byte little-endian bit count, then the bits packed MSB first.
void write_bitstream(std::ostream& out, std::string_view bits);
BitString read_bitstream(std::istream& in);

}  // namespace kolmo::unicode
