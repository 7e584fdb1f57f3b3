#include "kolmolab/unicode.hpp"

#include "kolmolab/measures.hpp"
#include "kolmolab/toyvm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace kolmo::unicode {

namespace {

std::size_t zeros_of(std::string_view x) { return static_cast<std::size_t>(std::count(x.begin(), x.end(), '0')); }

BigInt binomial(std::size_t n, std::size_t k) {
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

Rational power(const Rational& b, std::size_t e) {
  Rational r;
  mpz_pow_ui(r.get_num_mpz_t(), b.get_num_mpz_t(), e);
  mpz_pow_ui(r.get_den_mpz_t(), b.get_den_mpz_t(), e);
  return r;
}

void check_prob(const Rational& p, const char* what) {
  if (p < 0 || p > 1) throw Error("family", std::string(what) + " outside [0,1]");
}

// floor(q * 2^l) as an l-bit string.
BitString truncate(const Rational& q, long l) {
  BigInt num = q.get_num();
  mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), static_cast<mp_bitcnt_t>(l));
  BigInt v = num / q.get_den();
  return to_bits(v, static_cast<std::size_t>(l));
}

// Bernoulli classes (number of ones) in decreasing probability order.
std::vector<std::size_t> class_order(const Rational& theta, std::size_t n) {
  std::vector<std::size_t> order(n + 1);
  for (std::size_t i = 0; i <= n; ++i) order[i] = theta < Rational(1, 2) ? i : n - i;
  return order;
}

struct Ranked {
  std::vector<BitString> xs;
  std::vector<Rational> cumulative;  // mass strictly before xs[i]
  std::vector<Rational> mass;
};

Ranked rank_all(const Source& s, std::size_t n) {
  if (n > 16) throw Error("budget", "Shannon-Fano codes for this source need n <= 16");
  Ranked r;
  auto xs = toyvm::all_strings(n, n);
  std::vector<Rational> p;
  for (const auto& x : xs) p.push_back(s.mass(x));
  std::vector<std::size_t> idx(xs.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return p[a] > p[b]; });
  Rational acc = 0;
  for (auto i : idx) {
    r.xs.push_back(xs[i]);
    r.mass.push_back(p[i]);
    r.cumulative.push_back(acc);
    acc += p[i];
  }
  return r;
}

}  // namespace

// --- binomial code -------------------------------------------------------

BigInt type_class_rank(std::string_view x) {
  if (!is_bit_string(x)) throw Error("usage", "input is not a bit string");
  std::size_t z = zeros_of(x);
  BigInt c = binomial(x.size(), z), rank = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const std::size_t r = x.size() - i;
    const BigInt c0 = z == 0 ? BigInt(0) : BigInt(c * static_cast<unsigned long>(z) / static_cast<unsigned long>(r));
    if (x[i] == '1') {
      rank += c0;
      c -= c0;
    } else {
      c = c0;
      --z;
    }
  }
  return rank;
}

BitString type_class_unrank(std::size_t n, std::size_t zeros, const BigInt& rank) {
  if (zeros > n) throw Error("decode", "zero count exceeds length");
  BigInt c = binomial(n, zeros), rem = rank;
  if (rem < 0 || rem >= c) throw Error("decode", "type-class index out of range");
  BitString x;
  x.reserve(n);
  std::size_t z = zeros;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = n - i;
    const BigInt c0 = z == 0 ? BigInt(0) : BigInt(c * static_cast<unsigned long>(z) / static_cast<unsigned long>(r));
    if (rem < c0) {
      x += '0';
      c = c0;
      --z;
    } else {
      x += '1';
      rem -= c0;
      c -= c0;
    }
  }
  return x;
}

std::size_t type_class_index_bits(std::size_t n, std::size_t zeros) {
  const BigInt c = binomial(n, zeros);
  if (c <= 1) return 0;
  const BigInt top = c - 1;
  return mpz_sizeinbase(top.get_mpz_t(), 2);
}

BitString binomial_encode(std::string_view x) {
  const auto z = zeros_of(x);
  return coding::encode_natural(x.size()) + coding::encode_natural(z) +
         to_bits(type_class_rank(x), type_class_index_bits(x.size(), z));
}

std::size_t binomial_length(std::size_t n, std::size_t zeros) {
  return coding::encoded_natural_length(n) + coding::encoded_natural_length(zeros) + type_class_index_bits(n, zeros);
}

BitString binomial_decode(coding::BitReader& in) {
  const auto n = coding::decode_natural(in);
  const auto z = coding::decode_natural(in);
  if (z > n) throw Error("decode", "zero count exceeds length");
  const auto bits = type_class_index_bits(n, z);
  return type_class_unrank(n, z, from_bits(in.read(bits)));
}

BitString binomial_decode(std::string_view code) {
  coding::BitReader in(code);
  auto x = binomial_decode(in);
  if (!in.at_end()) throw Error("decode", "trailing bits after binomial codeword");
  return x;
}

// --- sources -------------------------------------------------------------

Source Source::bernoulli(const Rational& theta) {
  check_prob(theta, "theta");
  Source s;
  s.theta = theta;
  return s;
}

Source Source::markov1(const Rational& initial, const Rational& after0, const Rational& after1) {
  check_prob(initial, "initial probability");
  check_prob(after0, "transition probability");
  check_prob(after1, "transition probability");
  Source s;
  s.kind = Kind::Markov1;
  s.initial = initial;
  s.after0 = after0;
  s.after1 = after1;
  return s;
}

Rational Source::mass(std::string_view x) const {
  if (kind == Kind::Bernoulli) {
    const auto z = zeros_of(x);
    return power(theta, x.size() - z) * power(Rational(1 - theta), z);
  }
  Rational p = 1;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Rational& one = i == 0 ? initial : (x[i - 1] == '1' ? after1 : after0);
    p *= x[i] == '1' ? one : Rational(1 - one);
    if (sgn(p) == 0) break;
  }
  return p;
}

std::string Source::describe() const {
  if (kind == Kind::Bernoulli) return "bernoulli " + to_string(theta);
  return "markov1 " + to_string(initial) + " " + to_string(after0) + " " + to_string(after1);
}

SourceFamily bernoulli_grid(unsigned den) {
  if (den < 2) throw Error("usage", "grid denominator must be at least 2");
  SourceFamily f;
  for (unsigned j = 1; j < den; ++j) {
    Rational t(j, den);
    t.canonicalize();
    f.members.push_back(Source::bernoulli(t));
  }
  return f;
}

SourceFamily read_family(std::istream& in) {
  SourceFamily f;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ss(line);
    std::string kind;
    if (!(ss >> kind)) continue;
    std::vector<Rational> params;
    for (std::string tok; ss >> tok;) params.push_back(parse_rational(tok));
    const auto where = "line " + std::to_string(lineno) + ": ";
    if (kind == "bernoulli" && params.size() == 1)
      f.members.push_back(Source::bernoulli(params[0]));
    else if (kind == "markov1" && params.size() == 3)
      f.members.push_back(Source::markov1(params[0], params[1], params[2]));
    else
      throw Error("parse", where + "expected 'bernoulli <p>' or 'markov1 <init> <p1|0> <p1|1>'");
  }
  if (f.members.empty()) throw Error("parse", "family has no sources");
  return f;
}

SourceFamily read_family_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io", "cannot open '" + path + "'");
  return read_family(in);
}

bool compatible(const Source& s, std::size_t n) {
  Rational total = 0;
  for (const auto& x : toyvm::all_strings(n, n)) {
    const Rational p = s.mass(x);
    total += p;
    if (s.mass(x + "0") + s.mass(x + "1") != p) return false;
  }
  return total == 1;
}

std::optional<long> shannon_fano_length(const Source& s, std::string_view x) {
  const Rational p = s.mass(x);
  if (sgn(p) == 0) return std::nullopt;
  return ceil_log2_inverse(p);
}

BitString shannon_fano_codeword(const Source& s, std::string_view x) {
  if (!is_bit_string(x)) throw Error("usage", "input is not a bit string");
  const Rational p = s.mass(x);
  if (sgn(p) == 0) throw Error("encode", "string has probability zero under " + s.describe());
  const long l = ceil_log2_inverse(p);
  const std::size_t n = x.size();
  if (s.kind == Source::Kind::Bernoulli) {
    if (s.theta == Rational(1, 2)) return BitString(x);
    if (sgn(s.theta) == 0 || s.theta == 1) return "";
    const std::size_t ones = n - zeros_of(x);
    Rational before = 0;
    for (auto k : class_order(s.theta, n)) {
      if (k == ones) break;
      before += Rational(binomial(n, k)) * power(s.theta, k) * power(Rational(1 - s.theta), n - k);
    }
    before += Rational(type_class_rank(x)) * p;
    return truncate(before, l);
  }
  const auto r = rank_all(s, n);
  const auto i = static_cast<std::size_t>(std::find(r.xs.begin(), r.xs.end(), x) - r.xs.begin());
  return truncate(r.cumulative[i], l);
}

BitString shannon_fano_decode(const Source& s, std::size_t n, coding::BitReader& in) {
  if (s.kind == Source::Kind::Bernoulli) {
    if (s.theta == Rational(1, 2)) return in.read(n);
    if (sgn(s.theta) == 0) return BitString(n, '0');
    if (s.theta == 1) return BitString(n, '1');
    const auto rest = in.rest();
    Rational before = 0;
    for (auto k : class_order(s.theta, n)) {
      const Rational pk = power(s.theta, k) * power(Rational(1 - s.theta), n - k);
      const BigInt size = binomial(n, k);
      const long l = ceil_log2_inverse(pk);
      if (static_cast<std::size_t>(l) <= rest.size()) {
        // Least rank r with (before + r pk) 2^l >= v, then check it floors to v.
        const Rational v = Rational(from_bits(rest.substr(0, static_cast<std::size_t>(l)))) / pow2(l);
        Rational need = (v - before) / pk;
        BigInt r = sgn(need) <= 0 ? BigInt(0) : BigInt(need.get_num() / need.get_den());
        if (sgn(need) > 0 && Rational(r) < need) r += 1;
        if (r < size && truncate(Rational(before + Rational(r) * pk), l) == rest.substr(0, static_cast<std::size_t>(l))) {
          in.read(static_cast<std::size_t>(l));
          return type_class_unrank(n, n - k, r);
        }
      }
      before += Rational(size) * pk;
    }
    throw Error("decode", "no Shannon-Fano codeword matches the stream");
  }
  const auto r = rank_all(s, n);
  const auto rest = in.rest();
  for (std::size_t i = 0; i < r.xs.size(); ++i) {
    if (sgn(r.mass[i]) == 0) continue;
    const auto w = truncate(r.cumulative[i], ceil_log2_inverse(r.mass[i]));
    if (rest.substr(0, w.size()) == w) {
      in.read(w.size());
      return r.xs[i];
    }
  }
  throw Error("decode", "no Shannon-Fano codeword matches the stream");
}

TwoPartChoice universal_two_part(const SourceFamily& family, std::string_view x) {
  if (family.members.empty()) throw Error("usage", "empty family");
  std::optional<TwoPartChoice> best;
  for (std::size_t k = 1; k <= family.members.size(); ++k) {
    const auto l = shannon_fano_length(family.members[k - 1], x);
    if (!l) continue;
    const std::size_t total =
        coding::encoded_natural_length(x.size()) + coding::encoded_natural_length(k) + static_cast<std::size_t>(*l);
    if (!best || total < best->length) best = TwoPartChoice{k, total};
  }
  if (!best) throw Error("encode", "string is impossible under every source in the family");
  return *best;
}

BitString two_part_encode(const SourceFamily& family, std::string_view x) {
  const auto choice = universal_two_part(family, x);
  return coding::encode_natural(x.size()) + coding::encode_natural(choice.k) +
         shannon_fano_codeword(family.members[choice.k - 1], x);
}

BitString two_part_decode(const SourceFamily& family, coding::BitReader& in) {
  const auto n = coding::decode_natural(in);
  const auto k = coding::decode_natural(in);
  if (k == 0 || k > family.members.size()) throw Error("decode", "source index out of range");
  return shannon_fano_decode(family.members[k - 1], n, in);
}

// --- redundancy ----------------------------------------------------------

UCodeReport redundancy_report(const SourceFamily& family,
                              const std::vector<std::pair<std::string, BitString>>& corpus) {
  if (corpus.empty()) throw Error("usage", "empty corpus");
  UCodeReport rep;
  double sum = 0;
  for (const auto& [label, x] : corpus) {
    RedundancyRow row;
    row.label = label;
    row.n = x.size();
    row.length = universal_two_part(family, x).length;
    row.best = std::numeric_limits<long>::max();
    const auto ln = coding::encoded_natural_length(x.size());
    for (std::size_t k = 1; k <= family.members.size(); ++k) {
      const auto l = shannon_fano_length(family.members[k - 1], x);
      row.per_k.push_back(l);
      if (!l) continue;
      row.best = std::min(row.best, *l);
      if (row.length > static_cast<std::size_t>(*l) + coding::encoded_natural_length(k) + ln) row.bound_holds = false;
    }
    row.redundancy = static_cast<long>(row.length) - row.best;
    rep.all_bounds_hold = rep.all_bounds_hold && row.bound_holds;
    sum += static_cast<double>(row.redundancy);
    rep.rows.push_back(std::move(row));
  }
  rep.mean_redundancy = sum / static_cast<double>(rep.rows.size());
  return rep;
}

std::vector<ExpectedRow> expected_redundancy(const SourceFamily& family, std::size_t n) {
  if (n > 14) throw Error("budget", "expected redundancy limited to n <= 14");
  const auto xs = toyvm::all_strings(n, n);
  std::vector<std::size_t> lengths;
  std::vector<bool> codable;
  for (const auto& x : xs) {
    bool any = false;
    for (const auto& s : family.members) any |= sgn(s.mass(x)) != 0;
    codable.push_back(any);
    lengths.push_back(any ? universal_two_part(family, x).length : 0);
  }
  std::vector<ExpectedRow> rows;
  for (std::size_t k = 1; k <= family.members.size(); ++k) {
    ExpectedRow row;
    row.k = k;
    row.n = n;
    std::vector<Rational> probs;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const Rational p = family.members[k - 1].mass(xs[i]);
      probs.push_back(p);
      if (sgn(p) != 0) row.expected_length += p.get_d() * static_cast<double>(lengths[i]);
    }
    row.entropy = measures::entropy(std::span<const Rational>(probs));
    row.upper = row.entropy + static_cast<double>(coding::encoded_natural_length(k) + coding::encoded_natural_length(n)) + 1;
    row.holds = row.entropy <= row.expected_length + kBitsTolerance && row.expected_length <= row.upper + kBitsTolerance;
    rows.push_back(row);
  }
  return rows;
}

// --- corpora and files ---------------------------------------------------

BitString sample_bernoulli(const Rational& p, std::size_t n, std::uint64_t seed) {
  check_prob(p, "p");
  if (!p.get_den().fits_ulong_p()) throw Error("usage", "sampling probability denominator too large");
  const std::uint64_t den = p.get_den().get_ui(), num = p.get_num().get_ui();
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % den;
  std::mt19937_64 gen(seed);
  BitString x;
  x.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t v;
    do v = gen();
    while (v >= limit);
    x += v % den < num ? '1' : '0';
  }
  return x;
}

void write_bitstream(std::ostream& out, std::string_view bits) {
  if (!is_bit_string(bits)) throw Error("usage", "not a bit string");
  if (bits.size() > 0xFFFFFFFFu) throw Error("usage", "bitstream longer than 2^32 - 1 bits");
  const auto count = static_cast<std::uint32_t>(bits.size());
  for (int i = 0; i < 4; ++i) out.put(static_cast<char>(count >> (8 * i) & 0xFF));
  for (std::size_t i = 0; i < bits.size(); i += 8) {
    unsigned char byte = 0;
    for (std::size_t j = 0; j < 8; ++j)
      if (i + j < bits.size() && bits[i + j] == '1') byte |= static_cast<unsigned char>(0x80u >> j);
    out.put(static_cast<char>(byte));
  }
}

BitString read_bitstream(std::istream& in) {
  unsigned char header[4];
  if (!in.read(reinterpret_cast<char*>(header), 4)) throw Error("decode", "bitstream header truncated");
  const std::uint32_t count = header[0] | header[1] << 8 | header[2] << 16 | static_cast<std::uint32_t>(header[3]) << 24;
  BitString bits;
  bits.reserve(count);
  for (std::uint32_t i = 0; i < count; i += 8) {
    const int c = in.get();
    if (c == EOF) throw Error("decode", "bitstream body truncated");
    for (std::uint32_t j = 0; j < 8 && i + j < count; ++j) bits += (c & (0x80 >> j)) ? '1' : '0';
  }
  return bits;
}

}  // namespace kolmo::unicode
