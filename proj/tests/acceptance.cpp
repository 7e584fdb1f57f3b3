#include "oracle.hpp"

#include "kolmolab/algstats.hpp"
#include "kolmolab/coding.hpp"
#include "kolmolab/measures.hpp"
#include "kolmolab/probstats.hpp"
#include "kolmolab/ratedist.hpp"
#include "kolmolab/slack.hpp"
#include "kolmolab/toyvm.hpp"
#include "kolmolab/unicode.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>

using namespace kolmo;
using oracle::q;

namespace {

struct Verdict {
  bool pass = true;
  std::string value;
  std::string tolerance;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;  // 0: no runtime bound
  std::function<Verdict()> body;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt2(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::vector<std::string> symbols(std::size_t k) {
  std::vector<std::string> s;
  for (std::size_t i = 0; i < k; ++i) s.push_back("s" + std::to_string(i));
  return s;
}

std::vector<Rational> random_probs(std::mt19937_64& rng, std::size_t k, unsigned max_weight, bool allow_zero = false) {
  std::vector<unsigned long> w(k);
  unsigned long total = 0;
  while (total == 0) {
    total = 0;
    for (auto& v : w) {
      v = (allow_zero ? 0 : 1) + rng() % max_weight;
      total += v;
    }
  }
  std::vector<Rational> p;
  for (auto v : w) p.push_back(q(static_cast<long>(v), static_cast<long>(total)));
  return p;
}

// Split a random leaf until k leaves remain: a complete dyadic distribution.
std::vector<Rational> random_dyadic(std::mt19937_64& rng, std::size_t k) {
  std::vector<Rational> p{Rational(1)};
  while (p.size() < k) {
    const std::size_t i = rng() % p.size();
    p[i] /= 2;
    p.push_back(p[i]);
  }
  return p;
}

// --- 1 -------------------------------------------------------------------

Verdict noiseless_coding() {
  std::mt19937_64 rng(1);
  std::size_t bad = 0, dyadic = 0;
  double worst_upper = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t k = 2 + rng() % 63;
    const auto p = t % 5 == 0 ? random_dyadic(rng, k) : random_probs(rng, k, 1000);
    const Dist f(symbols(k), p);
    const auto code = coding::shannon_fano(f);
    const auto lens = coding::shannon_fano_lengths(f);
    Rational L = 0;
    bool all_tight = true, ok = coding::is_prefix_free(code.codewords());
    for (std::size_t i = 0; i < k; ++i) {
      const long l = lens[i];
      L += p[i] * l;
      ok = ok && static_cast<long>(code.encode(f.outcomes()[i]).size()) == l;
      // per symbol: log 1/p <= l < log 1/p + 1, i.e. 2^{l-1} p < 1 <= 2^l p
      const Rational scaled = p[i] * pow2(l);
      ok = ok && scaled >= 1 && scaled < 2;
      all_tight = all_tight && scaled == 1;
    }
    ok = ok && L == code.expected_length(f);
    // equality on the left exactly on the dyadic cases
    ok = ok && all_tight == f.is_dyadic();
    dyadic += all_tight;
    const double H = measures::entropy(f);
    ok = ok && (all_tight ? std::abs(L.get_d() - H) <= 1e-12 : L.get_d() > H);
    worst_upper = std::max(worst_upper, L.get_d() - H);
    bad += !ok;
  }
  return {bad == 0 && worst_upper < 1 && dyadic >= 200,
          fmt("failures=%.0f", static_cast<double>(bad)) + fmt(" dyadic=%.0f", static_cast<double>(dyadic)) +
              fmt(" max(L-H)=%.6f", worst_upper),
          "exact"};
}

// --- 2 -------------------------------------------------------------------

Verdict kraft_round_trip() {
  std::mt19937_64 rng(2);
  std::size_t bad = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t k = 1 + rng() % 64;
    std::vector<int> lens;
    for (const auto& p : random_dyadic(rng, k)) lens.push_back(std::max(1L, oracle::ceil_log_inv(p)));
    if (rng() & 1)
      for (auto& l : lens) l += static_cast<int>(rng() % 3);
    Rational sum = 0;
    for (int l : lens) sum += pow2(-l);
    const auto code = coding::code_from_lengths(coding::Lengths(lens));
    auto got = code.lengths();
    std::sort(got.begin(), got.end());
    std::sort(lens.begin(), lens.end());
    bool ok = got == lens && coding::is_prefix_free(code.codewords()) && code.kraft_sum() == sum && sum <= 1;
    std::vector<std::string> msg;
    for (int i = 0; i < 100; ++i) msg.push_back(code.alphabet()[rng() % k]);
    ok = ok && code.decode_all(code.encode_sequence(msg)) == msg;
    bad += !ok;
  }
  return {bad == 0, fmt("failures=%.0f of 1000", static_cast<double>(bad)), "exact"};
}

// --- 3 -------------------------------------------------------------------

void compositions(unsigned total, std::size_t parts, std::vector<unsigned>& cur,
                  const std::function<void(const std::vector<unsigned>&)>& fn) {
  if (cur.size() + 1 == parts) {
    cur.push_back(total);
    fn(cur);
    cur.pop_back();
    return;
  }
  for (unsigned v = 0; v <= total; ++v) {
    cur.push_back(v);
    compositions(total - v, parts, cur, fn);
    cur.pop_back();
  }
}

Verdict entropy_axioms() {
  const std::vector<Rational> a{q(1, 2), q(1, 3), q(1, 6)}, b{q(1, 2), q(1, 2)}, c{q(2, 3), q(1, 3)};
  const double grouping = std::abs(measures::entropy(a) - measures::entropy(b) - 0.5 * measures::entropy(c));
  std::size_t grids = 0, bad = 0;
  const unsigned den = 12;
  for (std::size_t k = 1; k <= 4; ++k) {
    std::vector<unsigned> cur;
    compositions(den, k, cur, [&](const std::vector<unsigned>& w) {
      std::vector<Rational> p;
      for (auto v : w) p.push_back(q(v, den));
      const double h = measures::entropy(p);
      const bool uniform = std::all_of(w.begin(), w.end(), [&](unsigned v) { return v == w.front(); });
      const bool point = std::count(w.begin(), w.end(), 0u) == static_cast<long>(k) - 1;
      const double logk = std::log2(static_cast<double>(k));
      bool ok = h >= -1e-12 && h <= logk + 1e-12;
      ok = ok && ((std::abs(h - logk) <= 1e-12) == uniform);
      ok = ok && ((h <= 1e-12) == point);
      ++grids;
      bad += !ok;
    });
  }
  return {grouping <= 1e-9 && bad == 0,
          fmt("grouping |diff|=%.3g", grouping) + fmt(" grid points=%.0f", static_cast<double>(grids)) +
              fmt(" failures=%.0f", static_cast<double>(bad)),
          "1e-9 bits (grouping), exact (grids)"};
}

// --- 4 -------------------------------------------------------------------

Verdict information_inequality() {
  std::mt19937_64 rng(4);
  std::size_t bad = 0, maps = 0, independent = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t k = 2 + rng() % 5;
    const auto fp = random_probs(rng, k, 6, true), gp = random_probs(rng, k, 6);
    const Dist f(symbols(k), fp), g(symbols(k), gp);
    const double kl = measures::kl_divergence(f, g);
    bad += !(kl >= 0 && ((kl == 0) == (fp == gp)));
    bad += measures::kl_divergence(g, g) != 0;
  }
  for (int t = 0; t < 100; ++t) {
    const std::size_t nx = 2 + rng() % 3, ny = 1 + rng() % 4;
    JointDist j;
    if (t % 4 == 0) {
      j = JointDist::product(Dist(symbols(nx), random_probs(rng, nx, 5)), Dist(symbols(ny), random_probs(rng, ny, 5)));
    } else {
      const auto p = random_probs(rng, nx * ny, 5, true);
      std::vector<std::vector<Rational>> m(nx, std::vector<Rational>(ny));
      for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t y = 0; y < ny; ++y) m[x][y] = p[x * ny + y];
      j = JointDist(symbols(nx), symbols(ny), m);
    }
    const double mi = measures::mutual_info(j);
    const bool ind = j.is_independent();
    independent += ind;
    bad += !(mi >= -1e-12 && (ind == (mi <= 1e-12)));
    const auto prod = JointDist::product(j.marginal_x(), j.marginal_y()).flattened();
    bad += std::abs(measures::kl_divergence(j.flattened(), prod) - mi) > 1e-9;
    // every T: Y -> Y
    std::size_t total = 1;
    for (std::size_t i = 0; i < ny; ++i) total *= ny;
    for (std::size_t code = 0; code < total; ++code) {
      std::map<std::string, std::string> T;
      std::size_t c = code;
      for (std::size_t y = 0; y < ny; ++y) {
        T[j.y_alphabet()[y]] = "t" + std::to_string(c % ny);
        c /= ny;
      }
      const auto r = measures::data_processing_check(j, T);
      bad += !(r.holds && r.rhs <= r.lhs + 1e-12);
      ++maps;
    }
  }
  return {bad == 0 && independent > 0,
          fmt("failures=%.0f", static_cast<double>(bad)) + fmt(" maps=%.0f", static_cast<double>(maps)) +
              fmt(" independent joints=%.0f", static_cast<double>(independent)),
          "exact"};
}

// --- 5 -------------------------------------------------------------------

Verdict negative_individual_info() {
  Verdict v;
  v.tolerance = "1e-9 bits";
  double worst = 0;
  for (const long inv : {10L, 100L}) {
    const Rational e = q(1, inv);
    const JointDist j({"0", "1"}, {"0", "1"}, {{Rational(0), e / 2}, {Rational(1 - e), e / 2}});
    const double got = measures::individual_info(j, "1");
    const double eps = e.get_d();
    const double closed = oracle::h2(eps) + eps - 1;
    worst = std::max(worst, std::abs(got - closed));
    v.pass = v.pass && got < 0 && std::abs(got - closed) <= 1e-9;
    v.value += fmt2("eps=%g: I(Y=1:X)=%.6f", eps, got) + fmt(" closed form=%.6f; ", closed);
  }
  v.value += fmt("max |diff|=%.6f", worst);
  return v;
}

// --- 6 -------------------------------------------------------------------

Verdict toy_machine_soundness() {
  std::vector<std::string> conds;
  for (const auto& c : toyvm::all_strings(0, 6)) conds.push_back(c);
  toyvm::BuildOptions opt;
  opt.verify_prefix_free = true;
  const auto o = toyvm::build_oracle(toyvm::Machine{1000, 20}, conds, opt);
  std::size_t bad = 0, rows = 0, halving_form = 0;
  Rational worst = 0;
  for (const auto& c : conds) {
    const auto& t = o.table(c);
    bad += !(t.prefix_free && *t.prefix_free);
    bad += !(t.kraft_sum() <= 1);
    worst = std::max(worst, t.kraft_sum());
  }
  for (std::size_t n = 1; n <= 6; ++n)
    for (const auto& r : toyvm::counting_bound(o, n)) {
      ++rows;
      bad += !r.below_literal_bound;
      halving_form += r.below_counting_bound;
    }
  return {bad == 0,
          fmt("tables=%.0f", static_cast<double>(conds.size())) + fmt(" max kraft=%.6f", worst.get_d()) +
              fmt(" counting rows=%.0f", static_cast<double>(rows)) +
              fmt(" (count < 2^{n-m+1} on %.0f)", static_cast<double>(halving_form)) +
              fmt(" failures=%.0f", static_cast<double>(bad)),
          "exact"};
}

// --- 7 -------------------------------------------------------------------

Verdict expected_complexity_sandwich() {
  const auto o = toyvm::build_oracle(toyvm::Machine{1000, 20}, {});
  // EMIT-literal overhead bounds khat(x) - |x| for |x| <= 6
  const double constant = static_cast<double>(toyvm::literal_overhead(6));
  const auto U = toyvm::all_strings(0, 6);
  std::mt19937_64 rng(7);
  std::size_t bad = 0;
  double lo = kInfinity, hi = -kInfinity;
  for (int t = 0; t < 20; ++t) {
    const std::size_t k = 2 + rng() % 15;
    std::set<BitString> chosen;
    while (chosen.size() < k) chosen.insert(U[rng() % U.size()]);
    const Dist f(std::vector<std::string>(chosen.begin(), chosen.end()), random_dyadic(rng, k));
    const auto e = toyvm::expected_complexity(o, f);
    lo = std::min(lo, e.gap);
    hi = std::max(hi, e.gap - static_cast<double>(e.model_cost));
    bad += !(e.gap >= -kBitsTolerance && std::isfinite(e.gap) &&
             e.gap <= static_cast<double>(e.model_cost) + constant + kBitsTolerance);
  }
  // point masses: the gap equals khat(x) and so grows with it
  std::vector<std::pair<int, double>> points;
  for (const auto& x : toyvm::all_strings(1, 6)) {
    const auto e = toyvm::expected_complexity(o, Dist({x}, {Rational(1)}));
    points.emplace_back(o.khat_at(x), e.gap);
    bad += e.gap != o.khat_at(x);
  }
  std::sort(points.begin(), points.end());
  for (std::size_t i = 1; i < points.size(); ++i) bad += points[i].second < points[i - 1].second;
  return {bad == 0,
          fmt("min gap=%.4f", lo) + fmt(" max(gap - model cost)=%.4f", hi) + fmt(" machine constant=%.0f", constant) +
              fmt2(" point-mass gap %.0f..%.0f", points.front().second, points.back().second),
          "gap >= -1e-9, gap <= model cost + constant"};
}

// --- 8 -------------------------------------------------------------------

Verdict bernoulli_sufficiency() {
  using namespace probstats;
  std::size_t bad = 0, witnesses = 0, instances = 0;
  const auto grid = default_grid();
  const auto priors = standard_priors(grid.size());
  const std::vector<Statistic> stats{ones_statistic(), pairs_statistic(), singleton_statistic(), full_statistic()};
  for (std::size_t n = 1; n <= 8; ++n) {
    const auto fam = bernoulli(n, grid);
    for (const auto& s : stats) {
      const auto ex = check_sufficiency_exact(fam, s);
      const auto ev = check_sufficiency_expectation(fam, s);
      const auto mi = sufficiency_via_mi(fam, s, priors);
      ++instances;
      bad += !(ex.sufficient == ev.sufficient && ev.sufficient == mi.sufficient);
      if (s.name == "ones") bad += !ex.sufficient;
      if (s.name == "pairs" && n >= 2) {
        bad += ex.sufficient || !ex.witness;
        if (ex.witness) {
          ++witnesses;
          const auto& w = *ex.witness;
          bad += w.conditional1 == w.conditional2;
        }
      }
    }
  }
  return {bad == 0,
          fmt("instances=%.0f", static_cast<double>(instances)) +
              fmt(" pairs witnesses=%.0f", static_cast<double>(witnesses)) + fmt(" failures=%.0f", static_cast<double>(bad)),
          "exact (expectation and MI paths 1e-9)"};
}

// --- 9 -------------------------------------------------------------------

Verdict rate_distortion_closed_forms() {
  using namespace ratedist;
  std::size_t bad = 0, triples = 0, cells = 0;
  double worst_sf = 0;
  for (int j = 1; j <= 5; ++j) {
    const Rational p = q(j, 10);
    const double h = oracle::h2(j / 10.0);
    for (int k = 0; k <= 20; ++k) {
      const double R = 0.05 * k;
      const auto pt = shannon_fano_rd_rate(p, R);
      worst_sf = std::max({worst_sf, std::abs(pt.oracle - pt.D), std::abs(pt.D - std::max(0.0, h - R))});
    }
  }
  bad += worst_sf > 1e-6;

  for (std::size_t n = 1; n <= 4; ++n)
    for (std::size_t m = 1; m <= 2; ++m)
      for (unsigned long R = 0; R <= n; ++R) {
        const Rational want(static_cast<unsigned long>(n) - R);
        ++cells;
        std::optional<Rational> got;
        if (n == 1) got = brute_force_D(set_instance(1), m, Rational(R)).D;
        else if (n == 2 && m == 1) got = brute_force_D(set_instance(2), 1, Rational(R)).D;
        else if (n == 2 && R <= 1) got = brute_force_D(set_instance(2, true), 2, Rational(R)).D;
        else {
          const auto s = set_distortion_D(n, m, Rational(R));
          bad += !s.witness_verified;
          got = s.exact;
        }
        bad += !(got && *got == want);
      }

  std::vector<Rational> rates;
  for (int j = 0; j <= 6; ++j) rates.push_back(q(j, 6));
  auto subadditive = [&](const RDInstance& inst, std::size_t max_m) {
    for (const auto& R : rates) {
      std::vector<Rational> D{Rational(0)};
      for (std::size_t m = 1; m <= max_m; ++m) D.push_back(*brute_force_D(inst, m, R).D);
      for (std::size_t a = 1; a <= max_m; ++a)
        for (std::size_t b = a; a + b <= max_m; ++b) {
          ++triples;
          const unsigned long ua = a, ub = b;
          bad += !((ua + ub) * D[a + b] <= ua * D[a] + ub * D[b]);
        }
    }
  };
  for (const auto& p : {q(1, 2), q(1, 3), q(1, 5)}) subadditive(hamming_instance(p), 3);
  subadditive(set_instance(1), 2);
  return {bad == 0,
          fmt("SF max |diff|=%.3g", worst_sf) + fmt(" n-R cells=%.0f", static_cast<double>(cells)) +
              fmt(" subadditivity triples=%.0f", static_cast<double>(triples)) +
              fmt(" failures=%.0f", static_cast<double>(bad)),
          "1e-6 bits (SF), exact (n-R, subadditivity)"};
}

// --- 10 ------------------------------------------------------------------

ratedist::RDInstance ternary_instance() {
  std::istringstream in(
      "p a 1/2\np b 1/3\np c 1/6\ny a\ny b\ny c\n"
      "d a a 0\nd a b 1\nd a c 1\nd b a 1\nd b b 0\nd b c 1\nd c a 1\nd c b 1\nd c c 0\n");
  return ratedist::read_instance(in);
}

Verdict blahut_arimoto_checks() {
  using namespace ratedist;
  const std::vector<std::pair<RDInstance, std::size_t>> desk{{hamming_instance(q(1, 3)), 3}, {ternary_instance(), 2}};
  std::size_t bad = 0;
  double corner = 0, zero = 0, gap = -kInfinity, min_gap = kInfinity;
  for (const auto& [inst, max_m] : desk) {
    corner = std::max(corner, std::abs(blahut_arimoto(inst, min_distortion(inst)).R - measures::entropy(inst.source)));
    zero = std::max(zero, blahut_arimoto(inst, max_distortion(inst)).R);
    for (int i = 1; i < 10; ++i) bad += !blahut_arimoto(inst, max_distortion(inst) * i / 10).monotone;
    for (double s : {0.5, 1.0, 2.0, 4.0, 8.0}) bad += !blahut_arimoto_slope(inst, s).monotone;
    for (std::size_t m = 1; m <= max_m; ++m)
      for (const auto& R : {q(1, 3), q(1, 2), q(2, 3), Rational(1)}) {
        const auto d = brute_force_D(inst, m, R).D->get_d();
        const double g = R.get_d() - blahut_arimoto(inst, d).R;
        gap = std::max(gap, g);
        min_gap = std::min(min_gap, g);
      }
  }
  const bool pass = bad == 0 && corner <= 1e-6 && zero <= 1e-6 && min_gap >= -1e-6;
  return {pass,
          fmt("lossless corner |diff|=%.3g", corner) + fmt(" zero-rate R=%.3g", zero) +
              fmt2(" R - R_I(D_m(R)) in [%.4f, %.4f]", min_gap, gap) + fmt(" failures=%.0f", static_cast<double>(bad)),
          "1e-6 bits"};
}

// --- 11 ------------------------------------------------------------------

std::string expstruct_csv(const ratedist::ExpStructReport& r) {
  std::ostringstream out;
  out.precision(17);
  out << "R,expected_h,d_star,shift,right_holds\n";
  for (const auto& row : r.rows)
    out << row.R.get_str() << ',' << row.expected_h << ',' << row.d_star << ',' << row.shift << ','
        << row.right_holds << '\n';
  out << "b," << r.b << "\nc," << r.c << '\n';
  return out.str();
}

Verdict structure_function_sandwich() {
  const std::size_t n = 8;
  const auto masks = algstats::make_family("masks");
  const auto U = oracle::strings_of_length(n);
  std::vector<Rational> grid;
  for (unsigned long R = 0; R <= n; ++R) grid.emplace_back(R);
  const auto rep = ratedist::expected_structfn_experiment(*masks, Dist::uniform(U), 1, grid);
  const auto again = ratedist::expected_structfn_experiment(*masks, Dist::uniform(U), 1, grid);
  std::size_t bad = expstruct_csv(rep) != expstruct_csv(again);
  const double band = rep.c + rep.b * std::log2(static_cast<double>(n));
  for (const auto& row : rep.rows) {
    bad += !row.right_holds;
    bad += row.d_star != static_cast<double>(n) - row.R.get_d();
    bad += !(row.shift >= 0 && row.shift <= band + 1e-9);
  }
  const auto o = toyvm::build_oracle(toyvm::Machine{1000, 20}, {});
  const algstats::OracleSource src(o);
  const Bits cdec = algstats::c_decode(*masks, n);
  std::size_t checked = 0;
  for (const auto& x : U) {
    const auto curve = algstats::structure_functions(x, *masks, src, false);
    for (const auto& s : curve.samples) {
      ++checked;
      bad += !(s.lambda >= o.khat_at(x) - cdec);
    }
  }
  long max_shift = 0;
  for (const auto& row : rep.rows) max_shift = std::max(max_shift, row.shift);
  return {bad == 0,
          fmt("b=%.0f", rep.b) + fmt(" c=%.4f", rep.c) + fmt(" max shift=%.0f", static_cast<double>(max_shift)) +
              fmt(" c_decode=%.0f", cdec) + fmt(" lambda checks=%.0f", static_cast<double>(checked)) +
              fmt(" failures=%.0f", static_cast<double>(bad)),
          "exact, byte-identical rerun"};
}

// --- 12 ------------------------------------------------------------------

Verdict universal_coding() {
  using namespace unicode;
  std::mt19937_64 rng(12);
  std::size_t bad = 0;
  for (int t = 0; t < 10000; ++t) {
    const auto x = sample_bernoulli(q(static_cast<long>(rng() % 17), 16), rng() % 257, rng());
    bad += binomial_decode(binomial_encode(x)) != x;
  }
  const auto fam = bernoulli_grid(10);
  std::vector<std::pair<std::string, BitString>> corpus;
  for (int t = 0; t < 200; ++t)
    corpus.emplace_back(std::to_string(t), sample_bernoulli(q(static_cast<long>(1 + rng() % 9), 10), 1 + rng() % 300, rng()));
  const auto rep = redundancy_report(fam, corpus);
  bad += !rep.all_bounds_hold;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& r = rep.rows[i];
    const std::size_t n = corpus[i].second.size();
    for (std::size_t k = 1; k <= fam.members.size(); ++k)
      bad += !(r.per_k[k - 1] && static_cast<long>(r.length) <= *r.per_k[k - 1] +
                                    static_cast<long>(oracle::natural_length(k) + oracle::natural_length(n)));
  }
  const std::size_t len = 10000;
  const auto x = sample_bernoulli(q(1, 5), len, 42);
  const double per_symbol = static_cast<double>(binomial_encode(x).size()) / len;
  const double gap = std::abs(per_symbol - oracle::h2(0.2));
  return {bad == 0 && gap <= 0.02,
          fmt("round-trip/bound failures=%.0f", static_cast<double>(bad)) +
              fmt2(" per-symbol=%.5f H(0.2)=%.5f", per_symbol, oracle::h2(0.2)) + fmt(" gap=%.5f", gap),
          "exact (round trip, bound), 0.02 bits/symbol"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "noiseless coding sandwich", 5, noiseless_coding},
      {2, "Kraft round trip", 5, kraft_round_trip},
      {3, "entropy axioms", 0, entropy_axioms},
      {4, "information inequality and data processing", 30, information_inequality},
      {5, "negative individual information", 0, negative_individual_info},
      {6, "toy machine soundness", 120, toy_machine_soundness},
      {7, "expected complexity sandwich", 0, expected_complexity_sandwich},
      {8, "Bernoulli sufficiency", 0, bernoulli_sufficiency},
      {9, "rate-distortion closed forms", 120, rate_distortion_closed_forms},
      {10, "Blahut-Arimoto", 0, blahut_arimoto_checks},
      {11, "structure function sandwich", 0, structure_function_sandwich},
      {12, "universal coding", 30, universal_coding},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.body();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what(), "-"};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.time_limit_s == 0 || secs < c.time_limit_s;
    const bool pass = v.pass && in_time;
    failed += !pass;
    std::string limit = c.time_limit_s == 0 ? "" : fmt(" < %.0f s", c.time_limit_s);
    std::printf("%s %2d %s: %s | tol %s | %.2f s%s\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(), v.value.c_str(),
                v.tolerance.c_str(), secs, limit.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
