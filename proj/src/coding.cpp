#include "kolmolab/coding.hpp"

#include <algorithm>
#include <numeric>

namespace kolmo::coding {

char BitReader::read() {
  if (pos_ >= bits_.size())
    throw Error("decode", "stream ended after consumed prefix '" + std::string(consumed()) + "'");
  const char c = bits_[pos_++];
  if (c != '0' && c != '1')
    throw Error("decode", "non-bit character after consumed prefix '" + std::string(bits_.substr(0, pos_ - 1)) + "'");
  return c;
}

BitString BitReader::read(std::size_t count) {
  BitString out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(read());
  return out;
}

Lengths::Lengths(std::vector<int> lengths) : values_(std::move(lengths)) {
  for (int l : values_)
    if (l < 1) throw Error("lengths", "code lengths must be >= 1, got " + std::to_string(l));
  std::sort(values_.begin(), values_.end());
}

KraftResult kraft_check(std::span<const int> lengths) {
  if (lengths.empty()) throw Error("kraft", "no lengths");
  Rational sum = 0;
  for (int l : lengths) {
    if (l < 0) throw Error("lengths", "negative code length");
    sum += pow2(-l);
  }
  KraftStatus status = sum == 1 ? KraftStatus::Complete : (sum < 1 ? KraftStatus::Satisfies : KraftStatus::Violates);
  return {sum, status};
}

KraftResult kraft_check(const Lengths& lengths) { return kraft_check(std::span<const int>(lengths.values())); }

std::string to_string(KraftStatus status) {
  switch (status) {
    case KraftStatus::Violates: return "Violates";
    case KraftStatus::Satisfies: return "Satisfies";
    case KraftStatus::Complete: return "Complete";
  }
  return "?";
}

bool is_prefix_free(std::vector<BitString> words) {
  std::sort(words.begin(), words.end());
  // In sorted order, a word that is a prefix of others sits directly before
  // one of its extensions.
  for (std::size_t i = 1; i < words.size(); ++i) {
    const auto& a = words[i - 1];
    const auto& b = words[i];
    if (b.size() >= a.size() && b.compare(0, a.size(), a) == 0) return false;
  }
  return true;
}

PrefixCode::PrefixCode(std::vector<std::string> alphabet, std::vector<BitString> codewords)
    : alphabet_(std::move(alphabet)), codewords_(std::move(codewords)) {
  if (alphabet_.size() != codewords_.size()) throw Error("code", "alphabet/codeword count mismatch");
  if (alphabet_.empty()) throw Error("code", "empty alphabet");
  for (std::size_t i = 0; i < alphabet_.size(); ++i) {
    if (!is_bit_string(codewords_[i]) || codewords_[i].empty())
      throw Error("code", "codeword for '" + alphabet_[i] + "' is not a nonempty bit string");
    if (!index_.emplace(alphabet_[i], i).second) throw Error("code", "duplicate symbol '" + alphabet_[i] + "'");
    by_codeword_.emplace(codewords_[i], i);
    kraft_sum_ += pow2(-static_cast<long>(codewords_[i].size()));
    max_length_ = std::max(max_length_, codewords_[i].size());
  }
  if (!is_prefix_free(codewords_)) throw Error("code", "codeword set is not prefix-free");
}

std::vector<int> PrefixCode::lengths() const {
  std::vector<int> out;
  out.reserve(codewords_.size());
  for (const auto& w : codewords_) out.push_back(static_cast<int>(w.size()));
  return out;
}

const BitString& PrefixCode::encode(std::string_view symbol) const {
  const auto it = index_.find(symbol);
  if (it == index_.end()) throw Error("encode", "symbol '" + std::string(symbol) + "' not in alphabet");
  return codewords_[it->second];
}

BitString PrefixCode::encode_sequence(std::span<const std::string> symbols) const {
  BitString out;
  for (const auto& s : symbols) out += encode(s);
  return out;
}

const std::string& PrefixCode::decode(BitReader& reader) const {
  BitString acc;
  while (acc.size() < max_length_) {
    acc.push_back(reader.read());
    const auto it = by_codeword_.find(acc);
    if (it != by_codeword_.end()) return alphabet_[it->second];
  }
  throw Error("decode", "no codeword matches prefix '" + acc + "'");
}

std::vector<std::string> PrefixCode::decode_all(std::string_view bits) const {
  BitReader reader(bits);
  std::vector<std::string> out;
  while (!reader.at_end()) out.push_back(decode(reader));
  return out;
}

Rational PrefixCode::expected_length(const Dist& dist) const {
  Rational total = 0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (sgn(dist.probs()[i]) == 0) continue;
    total += dist.probs()[i] * static_cast<long>(encode(dist.outcomes()[i]).size());
  }
  return total;
}

PrefixCode code_from_lengths(std::span<const std::string> symbols, std::span<const int> lengths) {
  if (symbols.size() != lengths.size()) throw Error("code", "symbol/length count mismatch");
  const auto kraft = kraft_check(lengths);
  if (kraft.status == KraftStatus::Violates)
    throw Error("kraft", "lengths violate Kraft: sum = " + kolmo::to_string(kraft.sum));
  std::vector<std::size_t> order(lengths.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return lengths[a] < lengths[b]; });

  std::vector<BitString> words(lengths.size());
  BigInt next = 0;
  int prev = 0;
  for (auto i : order) {
    const int l = lengths[i];
    if (l < 1) throw Error("lengths", "code lengths must be >= 1");
    next <<= (l - prev);
    prev = l;
    words[i] = to_bits(next, static_cast<std::size_t>(l));
    ++next;
  }
  return PrefixCode(std::vector<std::string>(symbols.begin(), symbols.end()), std::move(words));
}

PrefixCode code_from_lengths(const Lengths& lengths) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < lengths.size(); ++i) names.push_back(std::to_string(i));
  return code_from_lengths(names, lengths.values());
}

std::vector<int> shannon_fano_lengths(const Dist& dist) {
  std::vector<int> out;
  for (const auto& p : dist.probs()) {
    if (sgn(p) == 0) throw Error("shannon-fano", "zero-probability symbol has no Shannon-Fano codeword");
    out.push_back(static_cast<int>(ceil_log2_inverse(p)));
  }
  return out;
}

PrefixCode shannon_fano(const Dist& dist) {
  const auto lens = shannon_fano_lengths(dist);
  std::vector<std::size_t> order(dist.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](auto a, auto b) { return dist.probs()[a] > dist.probs()[b]; });

  std::vector<BitString> words(dist.size());
  Rational cumulative = 0;
  for (auto r : order) {
    // Truncate the binary expansion of P_r to l bits: floor(P_r * 2^l).
    const int l = lens[r];
    const Rational scaled = cumulative * pow2(l);
    const BigInt truncated = scaled.get_num() / scaled.get_den();
    // A dyadic singleton (p = 1) would give l = 0; emit one bit instead.
    words[r] = l == 0 ? BitString("0") : to_bits(truncated, static_cast<std::size_t>(l));
    cumulative += dist.probs()[r];
  }
  return PrefixCode(dist.outcomes(), std::move(words));
}

BitString natural_to_string(std::uint64_t n) {
  if (n == std::numeric_limits<std::uint64_t>::max()) throw Error("natural", "natural out of range");
  const std::uint64_t v = n + 1;
  int width = 63;
  while (width >= 0 && !((v >> width) & 1U)) --width;
  BitString s;
  for (int b = width - 1; b >= 0; --b) s.push_back(((v >> b) & 1U) ? '1' : '0');
  return s;
}

std::uint64_t string_to_natural(std::string_view s) {
  if (s.size() > 63) throw Error("natural", "string too long for a 64-bit natural");
  std::uint64_t v = 1;
  for (char c : s) v = (v << 1) | (c == '1' ? 1U : 0U);
  return v - 1;
}

std::size_t natural_string_length(std::uint64_t n) { return natural_to_string(n).size(); }

BitString self_delimit(std::string_view x) {
  BitString out(x.size(), '1');
  out.push_back('0');
  out.append(x);
  return out;
}

BitString encode_natural(std::uint64_t n) {
  const BitString x = natural_to_string(n);
  return self_delimit(natural_to_string(x.size())) + x;
}

std::size_t encoded_natural_length(std::uint64_t n) {
  const std::size_t lx = natural_string_length(n);
  return 2 * natural_string_length(lx) + 1 + lx;
}

std::uint64_t decode_natural(BitReader& reader) {
  std::size_t ones = 0;
  while (reader.read() == '1') {
    if (++ones > 6) throw Error("decode", "natural length field too long at consumed prefix '" +
                                              std::string(reader.consumed()) + "'");
  }
  const BitString len_string = reader.read(ones);
  const std::uint64_t len = string_to_natural(len_string);
  if (len > 63) throw Error("decode", "natural too long at consumed prefix '" + std::string(reader.consumed()) + "'");
  return string_to_natural(reader.read(static_cast<std::size_t>(len)));
}

DecodedNatural decode_natural(std::string_view bits) {
  BitReader reader(bits);
  const auto v = decode_natural(reader);
  return {v, reader.position()};
}

TwoPartCodeword two_part_encode(std::span<const FamilyCode> family, std::string_view x) {
  std::optional<TwoPartCodeword> best;
  for (std::size_t k = 1; k <= family.size(); ++k) {
    const auto word = family[k - 1].encode(x);
    if (!word) continue;
    const std::size_t total = encoded_natural_length(k) + word->size();
    if (!best || total < best->length) best = TwoPartCodeword{k, encode_natural(k) + *word, total};
  }
  if (!best) throw Error("two-part", "no code in the family covers '" + std::string(x) + "'");
  return *best;
}

}  // namespace kolmo::coding
