#pragma once

// Prefix-code machinery: Kraft inequality, canonical codes from lengths,
// Shannon-Fano codes, the standard self-delimiting code for naturals and
// generic two-part codes.

#include "kolmolab/common.hpp"
#include "kolmolab/dist.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kolmo::coding {

/// One-way reader over an ASCII bit string.
class BitReader {
 public:
  explicit BitReader(std::string_view bits) : bits_(bits) {}

  bool at_end() const { return pos_ >= bits_.size(); }
  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return bits_.size() - pos_; }
  std::string_view consumed() const { return bits_.substr(0, pos_); }
  std::string_view rest() const { return bits_.substr(pos_); }

  /// Throws Error("decode") naming the consumed prefix when the stream is exhausted.
  char read();
  BitString read(std::size_t count);

 private:
  std::string_view bits_;
  std::size_t pos_ = 0;
};

/// Multiset of codeword lengths, canonicalized ascending.
class Lengths {
 public:
  Lengths() = default;
  explicit Lengths(std::vector<int> lengths);

  const std::vector<int>& values() const { return values_; }
  bool empty() const { return values_.empty(); }
  std::size_t size() const { return values_.size(); }

 private:
  std::vector<int> values_;
};

enum class KraftStatus { Violates, Satisfies, Complete };

struct KraftResult {
  Rational sum;
  KraftStatus status;
};

/// Sum of 2^-l over the multiset, exactly. Throws on empty input.
KraftResult kraft_check(const Lengths& lengths);
KraftResult kraft_check(std::span<const int> lengths);

std::string to_string(KraftStatus status);

/// Codeword table over an ordered alphabet. Construction verifies
/// prefix-freeness, so every instance satisfies Kraft.
class PrefixCode {
 public:
  PrefixCode(std::vector<std::string> alphabet, std::vector<BitString> codewords);

  const std::vector<std::string>& alphabet() const { return alphabet_; }
  const std::vector<BitString>& codewords() const { return codewords_; }
  const Rational& kraft_sum() const { return kraft_sum_; }
  std::vector<int> lengths() const;

  const BitString& encode(std::string_view symbol) const;
  BitString encode_sequence(std::span<const std::string> symbols) const;

  /// Reads exactly one codeword from the stream.
  const std::string& decode(BitReader& reader) const;
  std::vector<std::string> decode_all(std::string_view bits) const;

  /// Expected codeword length under a distribution on the same alphabet.
  Rational expected_length(const Dist& dist) const;

 private:
  std::vector<std::string> alphabet_;
  std::vector<BitString> codewords_;
  Rational kraft_sum_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::map<BitString, std::size_t, std::less<>> by_codeword_;
  std::size_t max_length_ = 0;
};

/// True iff no element is a proper prefix of another (duplicates count as
/// violations). O(k log k) via sorting.
bool is_prefix_free(std::vector<BitString> words);

/// Canonical code: lengths are scanned ascending and each receives the
/// lexicographically least codeword still available. Symbols are "0","1",...
/// in ascending-length order. Throws when Kraft is violated.
PrefixCode code_from_lengths(const Lengths& lengths);

/// Same assignment rule, keeping the caller's symbols. Symbols with equal
/// lengths keep their input order.
PrefixCode code_from_lengths(std::span<const std::string> symbols, std::span<const int> lengths);

/// Shannon-Fano code: symbols ordered by decreasing probability (ties keep
/// input order), symbol r gets the first ceil(log 1/p_r) bits of the binary
/// expansion of the cumulative probability P_r of the symbols before it.
PrefixCode shannon_fano(const Dist& dist);

/// ceil(log 1/p) for every outcome, exact.
std::vector<int> shannon_fano_lengths(const Dist& dist);

// --- naturals -----------------------------------------------------------

/// Natural <-> string correspondence: 0 <-> "", 1 <-> "0", 2 <-> "1",
/// 3 <-> "00", ... (n corresponds to the binary expansion of n+1 without its
/// leading 1).
BitString natural_to_string(std::uint64_t n);
std::uint64_t string_to_natural(std::string_view s);

/// Length of the string corresponding to n: floor(log2(n+1)).
std::size_t natural_string_length(std::uint64_t n);

/// bar(x) = 1^{l(x)} 0 x.
BitString self_delimit(std::string_view x);

/// Standard prefix code for naturals: bar(l(x)) x with x the string for n.
BitString encode_natural(std::uint64_t n);
std::size_t encoded_natural_length(std::uint64_t n);

struct DecodedNatural {
  std::uint64_t value;
  std::size_t consumed;
};

std::uint64_t decode_natural(BitReader& reader);
DecodedNatural decode_natural(std::string_view bits);

// --- two-part codes ------------------------------------------------------

/// A member of a code family: returns the codeword of x, or nothing when the
/// code does not cover x.
struct FamilyCode {
  std::string name;
  std::function<std::optional<BitString>(std::string_view)> encode;
};

struct TwoPartCodeword {
  std::size_t index;   // 1-based k*
  BitString codeword;  // encode_natural(k*) . E_k*(x)
  std::size_t length;
};

/// Picks the member minimizing |encode_natural(k)| + L_k(x), least k on ties.
TwoPartCodeword two_part_encode(std::span<const FamilyCode> family, std::string_view x);

}  // namespace kolmo::coding
