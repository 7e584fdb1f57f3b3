#include "doctest.h"
#include "oracle.hpp"

#include "kolmolab/measures.hpp"
#include "kolmolab/slack.hpp"
#include "kolmolab/toyvm.hpp"

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

using namespace kolmo;
using namespace kolmo::toyvm;

namespace {

struct RefEntry {
  int khat = 0;
  BitString first;
  Rational mhat = 0;
};

// Runs every program of length <= L and aggregates the halting ones.
std::map<BitString, RefEntry> reference_table(int L, const std::string& cond, std::vector<BitString>* halting) {
  std::map<BitString, RefEntry> out;
  for (int l = 0; l <= L; ++l)
    for (const auto& p : oracle::strings_of_length(static_cast<std::size_t>(l))) {
      const auto r = run(p, cond, 1000);
      if (r.outcome != Outcome::Halt) continue;
      if (halting) halting->push_back(p);
      if (r.output.size() > kMaxTableOutput) continue;
      auto [it, fresh] = out.try_emplace(r.output);
      if (fresh) {
        it->second.khat = l;
        it->second.first = p;
      }
      it->second.mhat += pow2(-l);
    }
  return out;
}

std::string serialized(const ComplexityOracle& o) {
  std::ostringstream ss;
  write_oracle(ss, o);
  return ss.str();
}

}  // namespace

TEST_SUITE("toyvm") {
  TEST_CASE("instruction encoding by hand") {
    CHECK(gamma_code(1) == "1");
    CHECK(gamma_code(3) == "011");
    CHECK(gamma_code(6) == "00110");
    CHECK(copy_program() == "11100");
    CHECK(program(op::emit("101")) == "10" "011" "101" "0");
    CHECK(program(op::repeat(3, op::emit("01"))) == "110" "011" "10" "010" "01" "0" "0");
    for (std::uint64_t k = 1; k < 200; ++k) CHECK(gamma_length(k) == oracle::gamma_length(k));
    for (std::size_t n = 1; n < 40; ++n) {
      CHECK(literal_program_length(n) == program(op::emit(BitString(n, '1'))).size());
      CHECK(literal_overhead(n) == 3 + oracle::gamma_length(n));
    }
  }

  TEST_CASE("run semantics") {
    auto r = run(copy_program(), "1011", 100);
    CHECK(r.outcome == Outcome::Halt);
    CHECK(r.output == "1011");
    CHECK(r.consumed == copy_program().size());

    CHECK(run("", "", 10).outcome == Outcome::ReadPastEnd);
    CHECK(run("1", "", 10).outcome == Outcome::ReadPastEnd);
    CHECK(run(program(op::emit("1")), "", 1).outcome == Outcome::OutOfTime);
    CHECK(run(copy_program() + "0", "1", 100).outcome == Outcome::Trailing);

    r = run(program(op::repeat(3, op::emit("01"))), "", 1000);
    CHECK(r.outcome == Outcome::Halt);
    CHECK(r.output == "010101");

    // EXEC runs the condition as a program
    r = run(program(op::exec() + op::emit("0")), program(op::emit("11")), 1000);
    CHECK(r.outcome == Outcome::Halt);
    CHECK(r.output == "110");
    CHECK(run(program(op::exec()), "1", 1000).outcome == Outcome::Fault);
  }

  TEST_CASE("halting programs are prefix-free and satisfy Kraft exactly") {
    std::vector<BitString> halting;
    reference_table(13, "10", &halting);
    std::set<BitString> set(halting.begin(), halting.end());
    Rational kraft = 0;
    for (const auto& p : halting) {
      kraft += pow2(-static_cast<long>(p.size()));
      for (std::size_t k = 0; k < p.size(); ++k) CHECK_FALSE(set.count(p.substr(0, k)));
    }
    CHECK(kraft <= 1);

    BuildOptions opt;
    opt.verify_prefix_free = true;
    const auto o = build_oracle(Machine{1000, 13}, {"10"}, opt);
    CHECK(o.table("10").prefix_free.value_or(false));
    CHECK(o.table("10").halting_programs == halting.size());
    CHECK(o.table("10").kraft_sum() == kraft);
  }

  TEST_CASE("oracle tables match direct enumeration") {
    for (const std::string cond : {"", "1011", "0"}) {
      const auto ref = reference_table(12, cond, nullptr);
      const auto o = build_oracle(Machine{1000, 12}, {cond});
      const auto& t = o.table(cond);
      CHECK(t.entries.size() == ref.size());
      for (const auto& [x, e] : ref) {
        CHECK(o.khat_cond(x, cond) == e.khat);
        CHECK(o.mhat_cond(x, cond) == e.mhat);
        CHECK(to_bits(BigInt(static_cast<unsigned long>(t.find(x)->first_program)), static_cast<std::size_t>(e.khat)) == e.first);
      }
      if (cond.empty())
        for (const auto& [x, e] : ref) CHECK(o.star(x) == e.first);
    }
  }

  TEST_CASE("complexity bounds on the table") {
    const int L = 18;
    std::vector<std::string> conds;
    for (const auto& c : all_strings(0, 4)) conds.push_back(c);
    const auto o = build_oracle(Machine{1000, L}, conds);
    Rational total = 0;
    for (const auto& x : o.table().sorted_outputs()) {
      const int k = o.khat_at(x);
      CHECK(o.mhat(x) >= pow2(-k));
      total += o.mhat(x);
    }
    CHECK(total <= 1);
    // the literal program EMIT(x) HALT
    for (std::size_t n = 1; n + 3 + oracle::gamma_length(n) <= L; ++n)
      for (const auto& x : oracle::strings_of_length(n)) {
        REQUIRE(o.khat(x).has_value());
        CHECK(*o.khat(x) <= static_cast<int>(n + 3 + oracle::gamma_length(n)));
      }
    // the COPY program
    for (const auto& c : conds) {
      CHECK(*o.khat_cond(c, c) <= static_cast<int>(copy_program().size()));
      CHECK(o.khat_cond(c, "") == o.khat(c));
    }
    // REPEAT gamma(16) [EMIT 0] END HALT = 3 + 9 + 4 + 1 + 1 bits, against 28 literal bits
    CHECK(program(op::repeat(16, op::emit("0"))).size() == 18);
    CHECK(o.khat("0000000000000000").value() == 18);
    CHECK_THROWS_AS(o.khat_cond_at("0", "111111"), Error);
  }

  TEST_CASE("counting bound") {
    const auto o = build_oracle(Machine{1000, 20}, {});
    for (std::size_t n = 1; n <= 8; ++n) {
      const auto rows = counting_bound(o, n);
      for (const auto& r : rows) {
        std::uint64_t count = 0;
        for (const auto& x : oracle::strings_of_length(n)) {
          const auto k = o.khat(x);
          if (k && *k <= static_cast<long>(n) - static_cast<long>(r.m)) ++count;
        }
        CHECK(r.count == count);
        CHECK(r.below_counting_bound == (count < (std::uint64_t{1} << (n - r.m + 1))));
        CHECK(r.below_counting_bound);
      }
    }
  }

  TEST_CASE("budget guard fires before enumeration") {
    try {
      build_oracle(Machine{1000, kMaxEnumerableLength + 1}, {});
      FAIL("infeasible budget accepted");
    } catch (const Error& e) {
      CHECK(e.code() == "budget");
    }
  }

  TEST_CASE("rebuilds are identical across thread counts and persistence") {
    const std::vector<std::string> conds{"", "0", "01", "1011", "11100"};
    BuildOptions one, many;
    many.threads = 3;
    const auto a = build_oracle(Machine{1000, 16}, conds, one);
    const auto b = build_oracle(Machine{1000, 16}, {"1011", "01", "11100", "0"}, many);
    CHECK(serialized(a) == serialized(b));
    std::istringstream in(serialized(a));
    const auto back = read_oracle(in);
    CHECK(serialized(back) == serialized(a));
    std::istringstream junk("not an oracle");
    CHECK_THROWS_AS(read_oracle(junk), Error);
  }

  TEST_CASE("algorithmic mutual information") {
    const auto U = all_strings(0, 4);
    const auto o = slack_oracle(Machine{1000, 20}, {Identity::Symmetry}, U);
    for (const auto& x : U) {
      // EXEC HALT reproduces x from x*
      CHECK(o.khat_cond_at(x, o.star(x)) <= 5);
      CHECK(alg_mutual_info(o, x, x) >= o.khat_at(x) - 5);
      CHECK(alg_mutual_info(o, x, "") == 0);
    }
    for (const auto& x : all_strings(4, 4))
      for (const auto& y : all_strings(4, 4))
        if (x != y) CHECK(alg_mutual_info(o, x, y) == 0);
    CHECK_THROWS_AS(alg_mutual_info(o, "0", "0101010101010101"), Error);
  }

  TEST_CASE("slack experiments") {
    const auto U = all_strings(0, 4);
    const Machine m{1000, 24};
    const auto o = slack_oracle(m, {Identity::Additivity, Identity::NaiveAdditivity, Identity::DetNonIncrease,
                                    Identity::RandNonIncrease},
                                U);
    const auto add = slack_experiment(o, Identity::Additivity, U);
    CHECK(add.instances.size() == U.size() * U.size());
    CHECK(std::isfinite(add.max_gap));
    CHECK(std::isfinite(add.min_gap));
    for (const auto& i : add.instances) CHECK(add.max_gap_by_length.at(i.n) >= i.gap);

    // x* carries at least what x does, so the naive form never exceeds the starred one
    const auto naive = slack_experiment(o, Identity::NaiveAdditivity, U);
    REQUIRE(naive.instances.size() == add.instances.size());
    for (std::size_t i = 0; i < naive.instances.size(); ++i) CHECK(naive.instances[i].gap <= add.instances[i].gap);

    const auto det = slack_experiment(o, Identity::DetNonIncrease, U);
    const auto& id = processors().front();
    const int kq = o.khat(id.program).value_or(static_cast<int>(id.program.size()));
    for (const auto& i : det.instances)
      if (i.label.rfind(id.name + ",", 0) == 0) CHECK(i.gap == -kq);

    const auto rnd = slack_experiment(o, Identity::RandNonIncrease, U);
    // recompute one instance with exact weights
    const BitString x = "01", y = "0110";
    Rational expect = 0;
    const int ixy = o.khat_at(x) - o.khat_cond_at(x, o.star(y));
    (void)ixy;
    const int i_yx = o.khat_at(y) - o.khat_cond_at(y, o.star(x));
    for (const auto& z : U) {
      const int i_yz = o.khat_at(y) - o.khat_cond_at(y, o.star(z));
      expect += o.mhat_cond(z, o.star(x)) * pow2(i_yz - i_yx);
    }
    bool found = false;
    for (const auto& i : rnd.instances)
      if (i.label == "01,0110") {
        found = true;
        CHECK(std::abs(i.gap - expect.get_d()) <= 1e-12);
      }
    CHECK(found);
    CHECK(std::isfinite(rnd.max_gap));
  }

  TEST_CASE("coding theorem gap is nonnegative and bounded") {
    const auto o = build_oracle(Machine{1000, 20}, {});
    const auto rep = slack_experiment(o, Identity::CodingTheorem, all_strings(0, 6));
    CHECK(rep.min_gap >= 0);
    CHECK(std::isfinite(rep.max_gap));
  }

  TEST_CASE("expected complexity sandwich on dyadic distributions") {
    const auto o = build_oracle(Machine{1000, 20}, {});
    const auto U = all_strings(0, 6);
    std::mt19937_64 gen(31);
    for (int t = 0; t < 40; ++t) {
      std::set<BitString> chosen;
      const std::size_t k = 1 + gen() % 8;
      while (chosen.size() < k) chosen.insert(U[gen() % U.size()]);
      std::vector<std::string> xs(chosen.begin(), chosen.end());
      std::vector<Rational> p;
      Rational left = 1;
      for (std::size_t i = 0; i + 1 < k; ++i) {
        left /= 2;
        p.push_back(left);
      }
      p.push_back(left);
      const Dist f(xs, p);
      const auto e = expected_complexity(o, f);
      double ek = 0;
      for (std::size_t i = 0; i < k; ++i) ek += p[i].get_d() * o.khat_at(xs[i]);
      CHECK(std::abs(e.expected_khat - ek) <= 1e-12);
      CHECK(std::abs(e.entropy - oracle::entropy_q(p)) <= kBitsTolerance);
      CHECK(e.gap >= -kBitsTolerance);
      // khat(x) <= |x| + 8 for |x| <= 6, and every outcome's index costs more than |x| bits
      CHECK(e.gap <= e.model_cost + 8 + kBitsTolerance);
      CHECK(e.model_cost == dyadic_model_code(f).size());
    }
    for (const auto& x : all_strings(1, 6)) {
      const auto e = expected_complexity(o, Dist({x}, {Rational(1)}));
      CHECK(e.gap == o.khat_at(x));
    }
    CHECK_THROWS_AS(dyadic_model_code(Dist({"0", "1", "00"}, {oracle::q(1, 3), oracle::q(1, 3), oracle::q(1, 3)})), Error);
  }
}
