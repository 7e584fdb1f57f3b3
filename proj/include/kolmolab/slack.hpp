#pragma once

// Measured slack of the complexity identities on the toy machine.

#include "kolmolab/dist.hpp"
#include "kolmolab/toyvm.hpp"

#include <map>
#include <string>
#include <vector>

namespace kolmo::toyvm {

enum class Identity {
  Additivity,       // K(x,y) - K(x) - K(y|x*)
  NaiveAdditivity,  // K(x,y) - K(x) - K(y|x)
  Triangle,         // K(x|y*) - K(z|y*) - K(x|z*)
  DetNonIncrease,   // I(z:y) - I(x:y) - K(q), z = q(x*)
  RandNonIncrease,  // sum_z m(z|x*) 2^{I(z:y) - I(x:y)}
  Symmetry,         // |I(x:y) - I(y:x)|
  CodingTheorem,    // K(x) - log 1/m(x)
};

std::string to_string(Identity id);
Identity parse_identity(std::string_view name);
const std::vector<Identity>& all_identities();

struct SlackInstance {
  std::string label;
  std::size_t n;  // length of the leading string
  Bits gap;
};

struct SlackReport {
  std::string identity;
  std::vector<SlackInstance> instances;
  Bits max_gap = -kInfinity;
  Bits min_gap = kInfinity;
  std::map<std::size_t, Bits> max_gap_by_length;

  void add(std::string label, std::size_t n, Bits gap);
};

/// I(x:y) = K(x) - K(x | y*). Throws when y has no program or y* was not
/// built as a condition.
Bits alg_mutual_info(const ComplexityOracle& oracle, std::string_view x, std::string_view y);

/// A deterministic processing program q, run with x* on the condition tape.
struct Processor {
  std::string name;
  BitString program;
};

/// identity (EXEC), duplicate, append-0, prepend-1.
const std::vector<Processor>& processors();

/// Condition strings an experiment needs, given an unconditional oracle.
std::vector<std::string> slack_conditions(const ComplexityOracle& base, Identity id,
                                          const std::vector<BitString>& universe);

/// Builds an oracle holding every condition the listed identities need.
ComplexityOracle slack_oracle(const Machine& machine, const std::vector<Identity>& ids,
                              const std::vector<BitString>& universe, const BuildOptions& options = {});

/// Signed gaps over the universe. For RandNonIncrease the instance value is
/// the m(.|x*)-expectation of 2^{increase}, with z ranging over the universe.
SlackReport slack_experiment(const ComplexityOracle& oracle, Identity id, const std::vector<BitString>& universe);

// --- counting and expectation ------------------------------------------------

struct CountingRow {
  std::size_t n;
  std::size_t m;
  std::uint64_t count;  // strings of length n with khat <= n - m
  std::uint64_t total;  // 2^n
  bool below_counting_bound;  // count < 2^{n-m+1}, i.e. fraction < 2^{1-m}
  bool below_literal_bound;   // fraction < 2^{m-n+1}
};

std::vector<CountingRow> counting_bound(const ComplexityOracle& oracle, std::size_t n);

/// Prefix model code for a dyadic distribution over bit strings: the support
/// size, then per outcome (in order) its index and log 1/p, all as
/// self-delimiting naturals.
BitString dyadic_model_code(const Dist& f);

struct ExpectedComplexity {
  Bits expected_khat;
  Bits entropy;
  Bits gap;  // expected_khat - entropy
  std::size_t model_cost;
};

ExpectedComplexity expected_complexity(const ComplexityOracle& oracle, const Dist& f);

}  // namespace kolmo::toyvm
