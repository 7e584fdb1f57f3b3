#pragma once

// Algorithmic statistics over explicit finite-set model families: randomness
// deficiency, typicality, optimality, sufficient statistics and the structure
// functions h_x, lambda_x, beta_x. K(S) is replaced by the length of an
// explicit prefix model code; K(x) and K(x|S) come from a ComplexitySource.

#include "kolmolab/common.hpp"
#include "kolmolab/dist.hpp"
#include "kolmolab/toyvm.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace kolmo::algstats {

/// Finite set of equal-length strings plus its model code.
struct FiniteSetModel {
  std::string family;
  BitString model_code;
  std::size_t n = 0;
  std::vector<BitString> elements;  // sorted lexicographically

  std::size_t model_cost() const { return model_code.size(); }
  std::size_t size() const { return elements.size(); }
  Bits log_size() const;
  bool contains(std::string_view x) const;
  /// Canonical listing: the elements concatenated in lexicographic order.
  BitString listing() const;
};

/// Enumerable family of models for strings of length n. Every family
/// contains the full set {0,1}^n. Model codes start with encode_natural(n),
/// then "0" for the full set or "1" followed by a family-specific payload,
/// so they are prefix-free for each family.
class ModelFamily {
 public:
  virtual ~ModelFamily() = default;
  virtual std::string name() const = 0;
  virtual std::string description() const = 0;
  virtual std::vector<FiniteSetModel> models(std::size_t n) const = 0;
  virtual FiniteSetModel decode(std::string_view code) const = 0;
  /// Models containing x, in enumeration order.
  virtual std::vector<FiniteSetModel> containing(std::string_view x) const;
};

inline constexpr std::size_t kMaxFamilyLength = 14;

/// full, singletons, masks, typeclass, evenpattern, hamming, zeromask.
std::unique_ptr<ModelFamily> make_family(std::string_view name);
std::vector<std::string> family_names();

/// Source of (surrogate) complexities.
class ComplexitySource {
 public:
  virtual ~ComplexitySource() = default;
  virtual Bits complexity(std::string_view x) const = 0;
  /// K(x | S) with S given literally.
  virtual Bits conditional(std::string_view x, const FiniteSetModel& s) const = 0;
};

/// K from the toy oracle; K(x|S) = khat_cond(x, listing of S), so the oracle
/// must have been built with those listings as conditions.
class OracleSource : public ComplexitySource {
 public:
  explicit OracleSource(const toyvm::ComplexityOracle& oracle) : oracle_(oracle) {}
  Bits complexity(std::string_view x) const override;
  Bits conditional(std::string_view x, const FiniteSetModel& s) const override;

 private:
  const toyvm::ComplexityOracle& oracle_;
};

/// Listings of every model containing x, for building a suitable oracle.
std::vector<std::string> model_conditions(const ModelFamily& family, std::string_view x);

/// delta(x|S) = log|S| - K(x|S); +inf when x is not in S.
Bits randomness_deficiency(std::string_view x, const FiniteSetModel& s, const ComplexitySource& src);

bool is_typical(std::string_view x, const FiniteSetModel& s, const ComplexitySource& src, Bits beta);

/// model_cost(S) + log|S| <= K(x) + c, for x in S.
bool is_optimal(std::string_view x, const FiniteSetModel& s, const ComplexitySource& src, Bits c);

struct CurveSample {
  long R;
  Bits h;       // +inf when unreachable
  Bits lambda;  // +inf when unreachable
  Bits beta;    // +inf when unreachable; NaN when not computed
  std::optional<std::size_t> h_witness;  // index into StructureCurve::models
  std::optional<std::size_t> lambda_witness;
  std::optional<std::size_t> beta_witness;
};

struct StructureCurve {
  BitString x;
  std::vector<FiniteSetModel> models;  // candidates containing x
  std::vector<CurveSample> samples;    // R = 0 .. r_max
};

/// Exact minima over the family on the integer grid 0..r_max (default:
/// n + the largest model-code overhead). beta needs K(x|S) for every
/// candidate and is skipped unless with_beta.
StructureCurve structure_functions(std::string_view x, const ModelFamily& family, const ComplexitySource& src,
                                   bool with_beta = true, std::optional<long> r_max = std::nullopt);

long default_r_max(const ModelFamily& family, std::size_t n);

struct SufficiencyResult {
  std::optional<FiniteSetModel> model;  // empty: not found
  Bits best_two_part;                   // min over candidates of cost + log|S|
};

/// Least-cost optimal set at slack c, ties by enumeration order.
SufficiencyResult minimal_sufficient_statistic(std::string_view x, const ModelFamily& family,
                                               const ComplexitySource& src, Bits c);

/// Uniform probability model on S.
Dist set_to_prob(const FiniteSetModel& s);

/// S = {y : f(y) > 2^{-m-1}} with m = floor(log 1/f(x)).
FiniteSetModel prob_to_set(const Dist& f, std::string_view x);

/// Two-part decoder overhead for the family at length n: the literal
/// program bound n + literal_overhead(n) minus the least two-part length
/// the family offers. Then lambda_x(R) >= khat(x) - c_decode for all x.
Bits c_decode(const ModelFamily& family, std::size_t n);

/// E_f h_x(R) on the grid; +inf where some supported x is unreachable.
std::vector<Bits> expected_h(const ModelFamily& family, const Dist& f, long r_max);

/// lambda_x(model_cost(S)) <= Lambda(S) for every h-witness S.
bool witness_transfer_holds(const StructureCurve& curve);

}  // namespace kolmo::algstats
