#include "doctest.h"
#include "oracle.hpp"

#include "kolmolab/unicode.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

using namespace kolmo;
using namespace kolmo::unicode;
using oracle::q;

namespace {

Rational oracle_mass(const Source& s, const std::string& x) {
  Rational m = 1;
  for (std::size_t i = 0; i < x.size(); ++i) {
    Rational p1;
    if (s.kind == Source::Kind::Bernoulli) p1 = s.theta;
    else if (i == 0) p1 = s.initial;
    else p1 = x[i - 1] == '0' ? s.after0 : s.after1;
    m *= x[i] == '1' ? p1 : Rational(1 - p1);
  }
  return m;
}

// Sort by decreasing mass, ties lexicographic, truncate the mass before x.
std::string oracle_sf(const Source& s, const std::string& x) {
  auto xs = oracle::strings_of_length(x.size());
  std::stable_sort(xs.begin(), xs.end(),
                   [&](const std::string& a, const std::string& b) { return oracle_mass(s, a) > oracle_mass(s, b); });
  Rational before = 0;
  for (const auto& y : xs) {
    if (y == x) break;
    before += oracle_mass(s, y);
  }
  const long l = oracle::ceil_log_inv(oracle_mass(s, x));
  BigInt scaled = before.get_num() << static_cast<mp_bitcnt_t>(l);
  scaled /= before.get_den();
  std::string out;
  for (long i = l - 1; i >= 0; --i) out += mpz_tstbit(scaled.get_mpz_t(), static_cast<mp_bitcnt_t>(i)) ? '1' : '0';
  return out;
}

std::string random_bits(std::mt19937_64& rng, std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s += rng() & 1 ? '1' : '0';
  return s;
}

std::size_t oracle_index_bits(unsigned long n, unsigned long k) {
  const BigInt c = oracle::choose(n, k);
  std::size_t b = 0;
  BigInt p = 1;
  while (p < c) {
    p <<= 1;
    ++b;
  }
  return b;
}

}  // namespace

TEST_SUITE("unicode") {
  TEST_CASE("binomial code lengths") {
    CHECK(type_class_index_bits(64, 64) == 0);
    CHECK(binomial_encode(std::string(64, '0')).size() ==
          oracle::natural_length(64) + oracle::natural_length(64));
    CHECK(type_class_index_bits(10, 3) == 7);  // C(10,3) = 120
    CHECK(binomial_length(10, 3) == oracle::natural_length(10) + oracle::natural_length(3) + 7);
    const double bound = 1000 * oracle::h2(0.1);
    const std::size_t idx = type_class_index_bits(1000, 100);
    CHECK(idx <= bound);
    CHECK(idx >= bound - 15);
    for (unsigned long n = 0; n <= 40; ++n)
      for (unsigned long k = 0; k <= n; ++k) CHECK(type_class_index_bits(n, k) == oracle_index_bits(n, k));
  }

  TEST_CASE("type-class ranks are lexicographic") {
    for (std::size_t n = 0; n <= 8; ++n)
      for (std::size_t z = 0; z <= n; ++z) {
        BigInt r = 0;
        for (const auto& x : oracle::strings_of_length(n)) {
          if (n - oracle::ones(x) != z) continue;
          CHECK(type_class_rank(x) == r);
          CHECK(type_class_unrank(n, z, r) == x);
          r += 1;
        }
        CHECK(r == oracle::choose(n, z));
      }
  }

  TEST_CASE("binomial streams round trip") {
    std::mt19937_64 rng(11);
    std::string stream;
    std::vector<std::string> xs;
    for (int i = 0; i < 50; ++i) {
      xs.push_back(random_bits(rng, rng() % 70));
      stream += binomial_encode(xs.back());
    }
    coding::BitReader in(stream);
    for (const auto& x : xs) CHECK(binomial_decode(in) == x);
    CHECK(in.at_end());
    CHECK_THROWS_AS(binomial_decode(std::string_view("0")), Error);
  }

  TEST_CASE("sources are compatible") {
    for (const auto& s : bernoulli_grid(10).members)
      for (std::size_t n = 0; n <= 6; ++n) CHECK(compatible(s, n));
    const auto mk = Source::markov1(q(1, 3), q(1, 4), q(5, 7));
    for (std::size_t n = 0; n <= 6; ++n) CHECK(compatible(mk, n));
    for (const auto& x : oracle::strings_of_length(5)) CHECK(mk.mass(x) == oracle_mass(mk, x));
    CHECK_THROWS_AS(Source::bernoulli(q(3, 2)), Error);
  }

  TEST_CASE("Shannon-Fano codewords match the sorted cumulative reference") {
    const std::vector<Source> sources{Source::bernoulli(q(1, 3)), Source::bernoulli(q(7, 10)),
                                      Source::bernoulli(q(1, 2)), Source::markov1(q(1, 2), q(1, 5), q(3, 4))};
    for (const auto& s : sources)
      for (std::size_t n = 1; n <= 7; ++n) {
        std::string stream;
        const auto xs = oracle::strings_of_length(n);
        for (const auto& x : xs) {
          const auto w = shannon_fano_codeword(s, x);
          CHECK(w == oracle_sf(s, x));
          CHECK(static_cast<long>(w.size()) == *shannon_fano_length(s, x));
          stream += w;
        }
        coding::BitReader in(stream);
        for (const auto& x : xs) CHECK(shannon_fano_decode(s, n, in) == x);
        CHECK(in.at_end());
      }
  }

  TEST_CASE("Shannon-Fano round trip on long Bernoulli strings") {
    const auto s = Source::bernoulli(q(1, 10));
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i) {
      const auto x = sample_bernoulli(q(1, 10), 200, rng());
      const auto w = shannon_fano_codeword(s, x);
      coding::BitReader in(w);
      CHECK(shannon_fano_decode(s, x.size(), in) == x);
      CHECK(static_cast<long>(w.size()) == oracle::ceil_log_inv(oracle_mass(s, x)));
    }
  }

  TEST_CASE("two-part choice is the exhaustive minimum") {
    const auto fam = bernoulli_grid(10);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 100; ++i) {
      const auto x = random_bits(rng, 1 + rng() % 40);
      std::size_t bestk = 0, best = 0;
      for (std::size_t k = 1; k <= fam.members.size(); ++k) {
        const auto total = oracle::natural_length(x.size()) + oracle::natural_length(k) +
                           static_cast<std::size_t>(oracle::ceil_log_inv(oracle_mass(fam.members[k - 1], x)));
        if (bestk == 0 || total < best) {
          bestk = k;
          best = total;
        }
      }
      const auto c = universal_two_part(fam, x);
      CHECK(c.k == bestk);
      CHECK(c.length == best);
      const auto code = two_part_encode(fam, x);
      CHECK(code.size() == best);
      coding::BitReader in(code);
      CHECK(two_part_decode(fam, in) == x);
      CHECK(in.at_end());
    }
    SourceFamily one{{Source::bernoulli(q(1, 4))}};
    CHECK(universal_two_part(one, "0101").k == 1);
    SourceFamily point{{Source::bernoulli(Rational(0))}};
    CHECK_THROWS_AS(universal_two_part(point, "1"), Error);
  }

  TEST_CASE("redundancy rows respect the bound") {
    const auto fam = bernoulli_grid(10);
    std::vector<std::pair<std::string, BitString>> corpus{
        {"zeros", std::string(64, '0')}, {"alt", "0101010101010101"}, {"random", sample_bernoulli(q(1, 2), 64, 7)}};
    const auto rep = redundancy_report(fam, corpus);
    CHECK(rep.all_bounds_hold);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const auto& r = rep.rows[i];
      const auto& x = corpus[i].second;
      CHECK(r.length == two_part_encode(fam, x).size());
      long best = -1;
      for (std::size_t k = 1; k <= fam.members.size(); ++k) {
        const long lk = oracle::ceil_log_inv(oracle_mass(fam.members[k - 1], x));
        REQUIRE(r.per_k[k - 1]);
        CHECK(*r.per_k[k - 1] == lk);
        CHECK(r.length <= lk + oracle::natural_length(k) + oracle::natural_length(x.size()));
        if (best < 0 || lk < best) best = lk;
      }
      CHECK(r.best == best);
      CHECK(r.redundancy == static_cast<long>(r.length) - best);
    }
  }

  TEST_CASE("expected lengths sit between entropy and the redundancy bound") {
    const auto fam = bernoulli_grid(4);
    for (std::size_t n : {4u, 8u}) {
      const auto rows = expected_redundancy(fam, n);
      REQUIRE(rows.size() == fam.members.size());
      for (const auto& r : rows) {
        const double theta = r.k / 4.0;
        CHECK(std::abs(r.entropy - n * oracle::h2(theta)) <= 1e-9);
        double el = 0;
        for (const auto& x : oracle::strings_of_length(n))
          el += oracle_mass(fam.members[r.k - 1], x).get_d() * two_part_encode(fam, x).size();
        CHECK(std::abs(r.expected_length - el) <= 1e-9);
        CHECK(r.expected_length >= r.entropy - 1e-9);
        CHECK(r.holds);
        CHECK(std::abs(r.upper - (r.entropy + oracle::natural_length(r.k) + oracle::natural_length(n) + 1)) <= 1e-9);
      }
    }
  }

  TEST_CASE("family files") {
    std::istringstream in("# sources\nbernoulli 1/3\nmarkov1 1/2 1/4 3/4\n");
    const auto fam = read_family(in);
    REQUIRE(fam.members.size() == 2);
    CHECK(fam.members[0].theta == q(1, 3));
    CHECK(fam.members[1].kind == Source::Kind::Markov1);
    CHECK(fam.members[1].after1 == q(3, 4));
    std::istringstream bad("geometric 1/2\n");
    CHECK_THROWS_AS(read_family(bad), Error);
    std::istringstream empty("");
    CHECK_THROWS_AS(read_family(empty), Error);
  }

  TEST_CASE("sampling and bitstreams") {
    CHECK(sample_bernoulli(q(1, 3), 500, 42) == sample_bernoulli(q(1, 3), 500, 42));
    CHECK(sample_bernoulli(q(1, 3), 500, 42) != sample_bernoulli(q(1, 3), 500, 43));
    CHECK(sample_bernoulli(Rational(0), 10, 1) == std::string(10, '0'));
    CHECK(sample_bernoulli(Rational(1), 10, 1) == std::string(10, '1'));
    const auto x = sample_bernoulli(q(1, 10), 10000, 9);
    CHECK(std::abs(static_cast<double>(oracle::ones(x)) - 1000) <= 120);
    for (std::size_t n : {0u, 1u, 7u, 8u, 9u, 1001u}) {
      const auto bits = sample_bernoulli(q(1, 2), n, n);
      std::stringstream buf;
      write_bitstream(buf, bits);
      CHECK(buf.str().size() == 4 + (n + 7) / 8);
      CHECK(read_bitstream(buf) == bits);
    }
    std::stringstream truncated(std::string("\x10\x00\x00\x00\x01", 5));
    CHECK_THROWS_AS(read_bitstream(truncated), Error);
  }
}
