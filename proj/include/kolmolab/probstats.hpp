#pragma once

// Probabilistic sufficient statistics over a finite parameter grid: exact,
// expectation and mutual-information formulations, sequential statistics,
// near-sufficiency gaps, and the bridge to algorithmic sufficiency.

#include "kolmolab/common.hpp"
#include "kolmolab/dist.hpp"
#include "kolmolab/toyvm.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace kolmo::probstats {

/// Bernoulli product family f_theta(x) = theta^{#1}(1-theta)^{#0} on {0,1}^n.
struct ParamFamily {
  std::size_t n = 0;
  std::vector<Rational> theta_grid;

  Rational mass(const Rational& theta, std::string_view x) const;
  /// f_theta^{(n)} as a Dist over {0,1}^n in lexicographic order.
  Dist dist(const Rational& theta) const;
};

ParamFamily bernoulli(std::size_t n, std::vector<Rational> grid);

/// {1/5, 3/10, ..., 4/5}.
std::vector<Rational> default_grid();
/// {1/3, 1/2, 2/3}.
std::vector<Rational> small_grid();

struct Statistic {
  std::string name;
  std::function<std::string(std::string_view)> value;
};

Statistic ones_statistic();
/// Number of 1s followed by a 1.
Statistic pairs_statistic();
Statistic singleton_statistic();
Statistic full_statistic();
/// V(x) = (S(x), U(x)).
Statistic combined(const Statistic& s, const Statistic& u);
Statistic statistic_by_name(std::string_view name);

struct Witness {
  Rational theta1, theta2;
  std::string s;
  BitString x;
  Rational conditional1, conditional2;
};

struct ExactResult {
  bool sufficient;
  std::optional<Witness> witness;
};

/// f_theta(x|s) identical across the grid for every x.
ExactResult check_sufficiency_exact(const ParamFamily& family, const Statistic& s);

struct ExpectationResult {
  std::vector<Bits> gaps;  // per theta
  bool sufficient;         // all gaps <= 1e-9
};

/// Per theta, sum_x f_theta(x) [log 1/f_theta(x|S(x)) - log 1/g(x|S(x))]
/// with g the grid-pooled conditional (uniform average over the grid).
ExpectationResult check_sufficiency_expectation(const ParamFamily& family, const Statistic& s);

struct Prior {
  std::string name;
  std::vector<Rational> weights;  // over the theta grid
};

/// Uniform, every point mass, and uniform on every pair of adjacent points.
std::vector<Prior> standard_priors(std::size_t grid_size);

struct MIRow {
  std::string prior;
  Bits i_theta_x;
  Bits i_theta_s;
};

struct MIResult {
  std::vector<MIRow> rows;
  bool sufficient;  // |I(T;X) - I(T;S)| <= 1e-9 for every prior
  bool strict_drop;  // some prior has I(T;X) > I(T;S) + 1e-6
};

MIResult sufficiency_via_mi(const ParamFamily& family, const Statistic& s, const std::vector<Prior>& priors);

// --- sequential statistics ----------------------------------------------

/// x -> S(x), a set of strings of length l(x), with a model code standing in
/// for K(S(x)).
struct SequentialStatistic {
  std::string name;
  std::function<std::vector<BitString>(std::string_view)> set_of;
  std::function<BitString(std::string_view)> model_code;
};

/// Level sets of a statistic. The model code is encode_natural(n) followed
/// by encode_natural of the block index, blocks ordered by least element.
SequentialStatistic level_sets(const Statistic& s);

/// Checks S(x) within {0,1}^n, x in S(x), and that the sets partition
/// {0,1}^n; throws Error("def7") naming the failed condition.
void check_sequential(const SequentialStatistic& s, std::size_t n);

struct NearRow {
  std::size_t n;
  Rational theta;
  Bits gap;  // |expectation gap| with g uniform on S(x)
};

std::vector<NearRow> near_sufficiency_gap(const std::vector<Rational>& grid, const SequentialStatistic& s,
                                          std::size_t n_lo, std::size_t n_hi);

struct WiskeRow {
  std::size_t n;
  Rational theta;
  Bits gap_i;    // max_x [cost(S(x)) + log|S(x)| - khat(x)]
  Bits gap_ii;   // E log|S(x)| - E log 1/f(x|S(x))
  Bits c_theta;  // E khat - H(f_theta^{(n)})
  bool holds;    // gap_ii <= gap_i + c_theta
};

std::vector<WiskeRow> wiske_experiment(const SequentialStatistic& s, const std::vector<Rational>& grid,
                                       const toyvm::ComplexityOracle& oracle, std::size_t n_lo, std::size_t n_hi);

}  // namespace kolmo::probstats
