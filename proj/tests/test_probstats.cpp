#include "doctest.h"
#include "oracle.hpp"

#include "kolmolab/probstats.hpp"

#include <cmath>
#include <map>

using namespace kolmo;
using namespace kolmo::probstats;
using oracle::q;

namespace {

Rational bern(const Rational& t, const std::string& x) {
  Rational r = 1;
  for (char c : x) r *= c == '1' ? t : Rational(1 - t);
  return r;
}

// f_theta(x | S(x) = S(x)) by direct summation.
Rational conditional(const Rational& t, const std::string& x, const Statistic& s) {
  Rational block = 0;
  for (const auto& y : oracle::strings_of_length(x.size()))
    if (s.value(y) == s.value(x)) block += bern(t, y);
  return bern(t, x) / block;
}

double mi(const std::vector<Rational>& prior, const std::vector<Rational>& grid, std::size_t n,
          const std::function<std::string(const std::string&)>& stat) {
  std::map<std::string, double> ps;
  std::vector<std::map<std::string, double>> joint(grid.size());
  for (std::size_t t = 0; t < grid.size(); ++t)
    for (const auto& x : oracle::strings_of_length(n)) {
      const double v = Rational(prior[t] * bern(grid[t], x)).get_d();
      joint[t][stat(x)] += v;
      ps[stat(x)] += v;
    }
  double i = 0;
  for (std::size_t t = 0; t < grid.size(); ++t)
    for (const auto& [s, v] : joint[t])
      if (v > 0) i += v * std::log2(v / (prior[t].get_d() * ps[s]));
  return i;
}

}  // namespace

TEST_SUITE("probstats") {
  TEST_CASE("count of ones is sufficient with conditional 1/C(n,s)") {
    const auto fam = bernoulli(4, small_grid());
    const auto ones = ones_statistic();
    CHECK(check_sufficiency_exact(fam, ones).sufficient);
    for (const auto& t : fam.theta_grid)
      for (const auto& x : oracle::strings_of_length(4)) {
        Rational c(1);
        c /= oracle::choose(4, oracle::ones(x));
        CHECK(conditional(t, x, ones) == c);
      }
  }

  TEST_CASE("pairs statistic is not sufficient and the witness checks out") {
    const auto fam = bernoulli(4, small_grid());
    const auto pairs = pairs_statistic();
    const auto res = check_sufficiency_exact(fam, pairs);
    CHECK_FALSE(res.sufficient);
    REQUIRE(res.witness);
    const auto& w = *res.witness;
    CHECK(pairs.value(w.x) == w.s);
    CHECK(w.theta1 != w.theta2);
    CHECK(conditional(w.theta1, w.x, pairs) == w.conditional1);
    CHECK(conditional(w.theta2, w.x, pairs) == w.conditional2);
    CHECK(w.conditional1 != w.conditional2);
  }

  TEST_CASE("combined statistics stay sufficient") {
    const auto fam = bernoulli(5, default_grid());
    for (const auto& u : {pairs_statistic(), singleton_statistic(), full_statistic()})
      CHECK(check_sufficiency_exact(fam, combined(ones_statistic(), u)).sufficient);
    CHECK(check_sufficiency_exact(fam, singleton_statistic()).sufficient);
    CHECK_FALSE(check_sufficiency_exact(fam, full_statistic()).sufficient);
    CHECK_THROWS_AS(check_sufficiency_exact(bernoulli(3, {q(1, 2)}), ones_statistic()), Error);
    CHECK_THROWS_AS(statistic_by_name("median"), Error);
  }

  TEST_CASE("expectation formulation") {
    const auto fam = bernoulli(4, small_grid());
    const auto ok = check_sufficiency_expectation(fam, ones_statistic());
    CHECK(ok.sufficient);
    for (auto g : ok.gaps) CHECK(std::abs(g) <= kBitsTolerance);

    const auto pairs = pairs_statistic();
    const auto bad = check_sufficiency_expectation(fam, pairs);
    CHECK_FALSE(bad.sufficient);
    // recompute against the pooled conditional
    for (std::size_t t = 0; t < fam.theta_grid.size(); ++t) {
      double gap = 0;
      for (const auto& x : oracle::strings_of_length(4)) {
        Rational g = 0;
        for (const auto& u : fam.theta_grid) g += conditional(u, x, pairs);
        g /= 3;
        const Rational c = conditional(fam.theta_grid[t], x, pairs);
        gap += bern(fam.theta_grid[t], x).get_d() * std::log2(Rational(c / g).get_d());
      }
      CHECK(std::abs(bad.gaps[t] - gap) <= 1e-12);
      CHECK(bad.gaps[t] >= -kBitsTolerance);
    }
  }

  TEST_CASE("mutual information formulation") {
    const auto fam = bernoulli(4, small_grid());
    const auto priors = standard_priors(3);
    CHECK(priors.size() == 1 + 3 + 2);
    const auto ones = sufficiency_via_mi(fam, ones_statistic(), priors);
    CHECK(ones.sufficient);
    CHECK_FALSE(ones.strict_drop);
    const auto pairs = sufficiency_via_mi(fam, pairs_statistic(), priors);
    CHECK_FALSE(pairs.sufficient);
    CHECK(pairs.strict_drop);
    REQUIRE(pairs.rows.front().prior == "uniform");
    CHECK(pairs.rows.front().i_theta_x > pairs.rows.front().i_theta_s + 1e-6);
    for (std::size_t p = 0; p < priors.size(); ++p) {
      const auto ix = mi(priors[p].weights, fam.theta_grid, 4, [](const std::string& x) { return x; });
      const auto is = mi(priors[p].weights, fam.theta_grid, 4, [](const std::string& x) {
        return pairs_statistic().value(x);
      });
      CHECK(std::abs(pairs.rows[p].i_theta_x - ix) <= 1e-12);
      CHECK(std::abs(pairs.rows[p].i_theta_s - is) <= 1e-12);
      CHECK(pairs.rows[p].i_theta_s <= pairs.rows[p].i_theta_x + kBitsTolerance);
      if (priors[p].name.rfind("point", 0) == 0) {
        CHECK(std::abs(pairs.rows[p].i_theta_x) <= kBitsTolerance);
        CHECK(std::abs(pairs.rows[p].i_theta_s) <= kBitsTolerance);
      }
    }
  }

  TEST_CASE("three formulations agree") {
    for (std::size_t n = 2; n <= 6; ++n) {
      const auto fam = bernoulli(n, default_grid());
      for (const auto& name : {"ones", "pairs", "singleton", "full", "ones+pairs"}) {
        const auto s = statistic_by_name(name);
        const bool a = check_sufficiency_exact(fam, s).sufficient;
        CHECK(a == check_sufficiency_expectation(fam, s).sufficient);
        CHECK(a == sufficiency_via_mi(fam, s, standard_priors(fam.theta_grid.size())).sufficient);
      }
    }
  }

  TEST_CASE("sequential statistics") {
    const auto seq = level_sets(ones_statistic());
    for (std::size_t n = 1; n <= 6; ++n) CHECK_NOTHROW(check_sequential(seq, n));
    CHECK(seq.model_code("0110") == oracle::encode_natural(4) + oracle::encode_natural(2));
    CHECK(seq.set_of("011").size() == 3);

    SequentialStatistic broken{"broken", [](std::string_view x) { return std::vector<BitString>{BitString(x.size(), '0')}; },
                               [](std::string_view) { return BitString(); }};
    try {
      check_sequential(broken, 2);
      FAIL("broken statistic accepted");
    } catch (const Error& e) {
      CHECK(e.code() == "def7");
      CHECK(std::string(e.what()).find("(2)") != std::string::npos);
    }
    SequentialStatistic overlap{"overlap",
                                [](std::string_view x) {
                                  std::vector<BitString> s{BitString(x)};
                                  if (x != BitString(x.size(), '0')) s.push_back(BitString(x.size(), '0'));
                                  return s;
                                },
                                [](std::string_view) { return BitString(); }};
    try {
      check_sequential(overlap, 2);
      FAIL("overlapping sets accepted");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("(3)") != std::string::npos);
    }
  }

  TEST_CASE("near-sufficiency gaps") {
    const auto grid = default_grid();
    for (const auto& r : near_sufficiency_gap(grid, level_sets(ones_statistic()), 2, 10)) CHECK(r.gap <= 1e-9);
    bool nonzero = false;
    for (const auto& r : near_sufficiency_gap(grid, level_sets(pairs_statistic()), 2, 6)) {
      CHECK(std::isfinite(r.gap));
      nonzero = nonzero || r.gap > 1e-6;
    }
    CHECK(nonzero);
    for (const auto& r : near_sufficiency_gap(grid, level_sets(full_statistic()), 1, 8)) {
      const double t = r.theta.get_d();
      CHECK(std::abs(r.gap - (static_cast<double>(r.n) - static_cast<double>(r.n) * oracle::h2(t))) <= 1e-9);
    }
  }

  TEST_CASE("algorithmic and probabilistic sufficiency on the toy oracle") {
    const auto o = toyvm::build_oracle(toyvm::Machine{1000, 18}, {});
    const std::vector<Rational> half{q(1, 2)};
    const auto types = wiske_experiment(level_sets(ones_statistic()), half, o, 1, 8);
    for (const auto& r : types) {
      CHECK(r.holds);
      CHECK(std::abs(r.gap_ii) <= 1e-9);
      CHECK(r.c_theta >= -kBitsTolerance);
      // gap (i) by direct evaluation
      double worst = -1e9;
      for (const auto& x : oracle::strings_of_length(r.n)) {
        const auto k = oracle::ones(x);
        const double cost = static_cast<double>(oracle::natural_length(r.n) + oracle::natural_length(k));
        worst = std::max(worst, cost + std::log2(oracle::choose(r.n, k).get_d()) - o.khat_at(x));
      }
      CHECK(std::abs(r.gap_i - worst) <= 1e-12);
    }

    const std::vector<Rational> grid{q(1, 5), q(1, 2), q(4, 5)};
    for (const auto& r : wiske_experiment(level_sets(singleton_statistic()), grid, o, 1, 6)) {
      CHECK(std::abs(r.gap_ii) <= 1e-12);
      CHECK(r.holds);
    }
    for (const auto& r : wiske_experiment(level_sets(full_statistic()), grid, o, 1, 6)) {
      const double n = static_cast<double>(r.n);
      CHECK(std::abs(r.gap_ii - (n - n * oracle::h2(r.theta.get_d()))) <= 1e-9);
      CHECK(r.holds);
    }
    const auto single = wiske_experiment(level_sets(singleton_statistic()), grid, o, 6, 6);
    const auto full = wiske_experiment(level_sets(full_statistic()), grid, o, 6, 6);
    CHECK(single.front().gap_i > full.front().gap_i);
  }
}
