#include "kolmolab/probstats.hpp"

#include "kolmolab/coding.hpp"
#include "kolmolab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace kolmo::probstats {

namespace {

std::size_t count_ones(std::string_view x) { return static_cast<std::size_t>(std::count(x.begin(), x.end(), '1')); }

Rational power(const Rational& base, std::size_t e) {
  Rational r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= base;
  return r;
}

// Strings of {0,1}^n grouped by statistic value, values in first-seen
// (lexicographic by least element) order.
struct Blocks {
  std::vector<BitString> xs;
  std::vector<std::size_t> block_of;
  std::vector<std::string> values;
};

Blocks blocks(std::size_t n, const Statistic& s) {
  Blocks b;
  b.xs = toyvm::all_strings(n, n);
  std::map<std::string, std::size_t> index;
  for (const auto& x : b.xs) {
    const auto v = s.value(x);
    auto [it, fresh] = index.try_emplace(v, b.values.size());
    if (fresh) b.values.push_back(v);
    b.block_of.push_back(it->second);
  }
  return b;
}

// f_theta(x | S(x)) for every x.
std::vector<Rational> conditionals(const ParamFamily& f, const Rational& theta, const Blocks& b) {
  std::vector<Rational> mass(b.xs.size());
  std::vector<Rational> block_mass(b.values.size(), Rational(0));
  for (std::size_t i = 0; i < b.xs.size(); ++i) {
    mass[i] = f.mass(theta, b.xs[i]);
    block_mass[b.block_of[i]] += mass[i];
  }
  for (std::size_t i = 0; i < b.xs.size(); ++i) mass[i] /= block_mass[b.block_of[i]];
  return mass;
}

void check_grid(const ParamFamily& f) {
  if (f.theta_grid.size() < 2) throw Error("grid", "sufficiency checks need at least two parameters");
}

}  // namespace

Rational ParamFamily::mass(const Rational& theta, std::string_view x) const {
  if (x.size() != n) throw Error("family", "string length differs from family n");
  const auto k = count_ones(x);
  return power(theta, k) * power(Rational(1 - theta), n - k);
}

Dist ParamFamily::dist(const Rational& theta) const {
  auto xs = toyvm::all_strings(n, n);
  std::vector<Rational> p;
  p.reserve(xs.size());
  for (const auto& x : xs) p.push_back(mass(theta, x));
  return Dist(std::move(xs), std::move(p));
}

ParamFamily bernoulli(std::size_t n, std::vector<Rational> grid) {
  for (const auto& t : grid)
    if (t < 0 || t > 1) throw Error("family", "Bernoulli parameter outside [0,1]");
  return ParamFamily{n, std::move(grid)};
}

std::vector<Rational> default_grid() {
  std::vector<Rational> g;
  for (int j = 2; j <= 8; ++j) g.emplace_back(j, 10);
  for (auto& t : g) t.canonicalize();
  return g;
}

std::vector<Rational> small_grid() { return {Rational(1, 3), Rational(1, 2), Rational(2, 3)}; }

Statistic ones_statistic() {
  return {"ones", [](std::string_view x) { return std::to_string(count_ones(x)); }};
}

Statistic pairs_statistic() {
  return {"pairs", [](std::string_view x) {
            std::size_t c = 0;
            for (std::size_t i = 0; i + 1 < x.size(); ++i) c += x[i] == '1' && x[i + 1] == '1';
            return std::to_string(c);
          }};
}

Statistic singleton_statistic() {
  return {"singleton", [](std::string_view x) { return std::string(x); }};
}

Statistic full_statistic() {
  return {"full", [](std::string_view) { return std::string(); }};
}

Statistic combined(const Statistic& s, const Statistic& u) {
  return {s.name + "+" + u.name, [s, u](std::string_view x) { return s.value(x) + "|" + u.value(x); }};
}

Statistic statistic_by_name(std::string_view name) {
  if (name == "ones") return ones_statistic();
  if (name == "pairs") return pairs_statistic();
  if (name == "singleton") return singleton_statistic();
  if (name == "full") return full_statistic();
  if (name == "ones+pairs") return combined(ones_statistic(), pairs_statistic());
  throw Error("usage", "unknown statistic '" + std::string(name) + "'");
}

ExactResult check_sufficiency_exact(const ParamFamily& family, const Statistic& s) {
  check_grid(family);
  const auto b = blocks(family.n, s);
  const auto& grid = family.theta_grid;
  const auto first = conditionals(family, grid[0], b);
  for (std::size_t t = 1; t < grid.size(); ++t) {
    const auto other = conditionals(family, grid[t], b);
    for (std::size_t i = 0; i < b.xs.size(); ++i)
      if (other[i] != first[i])
        return {false, Witness{grid[0], grid[t], b.values[b.block_of[i]], b.xs[i], first[i], other[i]}};
  }
  return {true, std::nullopt};
}

ExpectationResult check_sufficiency_expectation(const ParamFamily& family, const Statistic& s) {
  check_grid(family);
  const auto b = blocks(family.n, s);
  std::vector<std::vector<Rational>> cond;
  for (const auto& t : family.theta_grid) cond.push_back(conditionals(family, t, b));
  std::vector<Rational> pooled(b.xs.size(), Rational(0));
  for (const auto& c : cond)
    for (std::size_t i = 0; i < c.size(); ++i) pooled[i] += c[i];
  for (auto& g : pooled) g /= static_cast<unsigned long>(cond.size());

  ExpectationResult res{{}, true};
  for (std::size_t t = 0; t < family.theta_grid.size(); ++t) {
    Bits gap = 0;
    for (std::size_t i = 0; i < b.xs.size(); ++i) {
      const Rational f = family.mass(family.theta_grid[t], b.xs[i]);
      if (sgn(f) == 0) continue;
      gap += f.get_d() * log2_of(Rational(cond[t][i] / pooled[i]));
    }
    res.gaps.push_back(gap);
    if (std::abs(gap) > kBitsTolerance) res.sufficient = false;
  }
  return res;
}

std::vector<Prior> standard_priors(std::size_t k) {
  std::vector<Prior> out;
  out.push_back({"uniform", std::vector<Rational>(k, Rational(1, static_cast<unsigned long>(k)))});
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<Rational> w(k, Rational(0));
    w[i] = 1;
    out.push_back({"point-" + std::to_string(i), w});
  }
  for (std::size_t i = 0; i + 1 < k; ++i) {
    std::vector<Rational> w(k, Rational(0));
    w[i] = w[i + 1] = Rational(1, 2);
    out.push_back({"adjacent-" + std::to_string(i), w});
  }
  return out;
}

MIResult sufficiency_via_mi(const ParamFamily& family, const Statistic& s, const std::vector<Prior>& priors) {
  const auto b = blocks(family.n, s);
  const auto& grid = family.theta_grid;
  std::vector<std::string> thetas;
  for (const auto& t : grid) thetas.push_back(to_string(t));

  MIResult res{{}, true, false};
  for (const auto& prior : priors) {
    if (prior.weights.size() != grid.size()) throw Error("prior", "prior size differs from grid size");
    std::vector<std::vector<Rational>> joint_x(grid.size(), std::vector<Rational>(b.xs.size()));
    std::vector<std::vector<Rational>> joint_s(grid.size(), std::vector<Rational>(b.values.size(), Rational(0)));
    for (std::size_t t = 0; t < grid.size(); ++t)
      for (std::size_t i = 0; i < b.xs.size(); ++i) {
        joint_x[t][i] = prior.weights[t] * family.mass(grid[t], b.xs[i]);
        joint_s[t][b.block_of[i]] += joint_x[t][i];
      }
    const Bits ix = measures::mutual_info(JointDist(thetas, b.xs, std::move(joint_x)));
    const Bits is = measures::mutual_info(JointDist(thetas, b.values, std::move(joint_s)));
    res.rows.push_back({prior.name, ix, is});
    if (std::abs(ix - is) > kBitsTolerance) res.sufficient = false;
    if (ix > is + 1e-6) res.strict_drop = true;
  }
  return res;
}

SequentialStatistic level_sets(const Statistic& s) {
  auto set_of = [s](std::string_view x) {
    const auto v = s.value(x);
    std::vector<BitString> out;
    for (auto& y : toyvm::all_strings(x.size(), x.size()))
      if (s.value(y) == v) out.push_back(std::move(y));
    return out;
  };
  auto model_code = [s](std::string_view x) {
    const auto b = blocks(x.size(), s);
    const auto v = s.value(x);
    const auto idx = static_cast<std::size_t>(std::find(b.values.begin(), b.values.end(), v) - b.values.begin());
    return coding::encode_natural(x.size()) + coding::encode_natural(idx);
  };
  return {s.name, set_of, model_code};
}

void check_sequential(const SequentialStatistic& s, std::size_t n) {
  std::map<BitString, std::vector<BitString>> sets;
  for (const auto& x : toyvm::all_strings(n, n)) {
    auto sx = s.set_of(x);
    std::sort(sx.begin(), sx.end());
    for (const auto& y : sx)
      if (y.size() != n) throw Error("def7", "condition (1) fails: S(" + x + ") has an element of another length");
    if (!std::binary_search(sx.begin(), sx.end(), x)) throw Error("def7", "condition (2) fails: " + x + " not in S(x)");
    sets.emplace(x, std::move(sx));
  }
  for (const auto& [x, sx] : sets)
    for (const auto& y : sx)
      if (sets.at(y) != sx) throw Error("def7", "condition (3) fails: S(" + x + ") and S(" + y + ") overlap but differ");
}

std::vector<NearRow> near_sufficiency_gap(const std::vector<Rational>& grid, const SequentialStatistic& s,
                                          std::size_t n_lo, std::size_t n_hi) {
  std::vector<NearRow> rows;
  for (std::size_t n = n_lo; n <= n_hi; ++n) {
    check_sequential(s, n);
    const auto family = bernoulli(n, grid);
    const auto xs = toyvm::all_strings(n, n);
    std::vector<std::vector<BitString>> sets;
    for (const auto& x : xs) sets.push_back(s.set_of(x));
    for (const auto& theta : grid) {
      Bits gap = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const Rational f = family.mass(theta, xs[i]);
        if (sgn(f) == 0) continue;
        Rational block = 0;
        for (const auto& y : sets[i]) block += family.mass(theta, y);
        const Rational cond = f / block;
        // log 1/f(x|S) - log |S(x)|
        gap += f.get_d() * (-log2_of(cond) - std::log2(static_cast<double>(sets[i].size())));
      }
      rows.push_back({n, theta, std::abs(gap)});
    }
  }
  return rows;
}

std::vector<WiskeRow> wiske_experiment(const SequentialStatistic& s, const std::vector<Rational>& grid,
                                       const toyvm::ComplexityOracle& oracle, std::size_t n_lo, std::size_t n_hi) {
  std::vector<WiskeRow> rows;
  for (std::size_t n = n_lo; n <= n_hi; ++n) {
    check_sequential(s, n);
    const auto family = bernoulli(n, grid);
    const auto xs = toyvm::all_strings(n, n);
    std::vector<std::vector<BitString>> sets;
    std::vector<int> k;
    Bits gap_i = -kInfinity;
    for (const auto& x : xs) {
      sets.push_back(s.set_of(x));
      k.push_back(oracle.khat_at(x));
      gap_i = std::max(gap_i, static_cast<Bits>(s.model_code(x).size()) +
                                  std::log2(static_cast<double>(sets.back().size())) - k.back());
    }
    for (const auto& theta : grid) {
      Bits e_log_size = 0, e_log_cond = 0, e_k = 0;
      std::vector<Rational> probs;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const Rational f = family.mass(theta, xs[i]);
        probs.push_back(f);
        if (sgn(f) == 0) continue;
        Rational block = 0;
        for (const auto& y : sets[i]) block += family.mass(theta, y);
        const double p = f.get_d();
        e_log_size += p * std::log2(static_cast<double>(sets[i].size()));
        e_log_cond += p * -log2_of(Rational(f / block));
        e_k += p * k[i];
      }
      const Bits h = measures::entropy(std::span<const Rational>(probs));
      WiskeRow r{n, theta, gap_i, e_log_size - e_log_cond, e_k - h, false};
      r.holds = r.gap_ii <= r.gap_i + r.c_theta + kBitsTolerance;
      rows.push_back(r);
    }
  }
  return rows;
}

}  // namespace kolmo::probstats
