#pragma once

#include "kolmolab/common.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace kolmo {

/// Finite probability mass function with exact rational weights.
/// Invariants: weights >= 0, sum exactly 1, outcomes distinct and nonempty.
class Dist {
 public:
  Dist() = default;
  Dist(std::vector<std::string> outcomes, std::vector<Rational> probs);

  static Dist uniform(std::vector<std::string> outcomes);

  const std::vector<std::string>& outcomes() const { return outcomes_; }
  const std::vector<Rational>& probs() const { return probs_; }
  std::size_t size() const { return outcomes_.size(); }

  /// Probability of a symbol; zero when absent.
  Rational prob(std::string_view symbol) const;
  std::size_t index_of(std::string_view symbol) const;  // npos when absent

  /// True iff every nonzero probability is 2^-k.
  bool is_dyadic() const;

 private:
  std::vector<std::string> outcomes_;
  std::vector<Rational> probs_;
};

/// Joint mass f(x,y) over explicit alphabets; rows indexed by x.
class JointDist {
 public:
  JointDist() = default;
  JointDist(std::vector<std::string> x_alphabet, std::vector<std::string> y_alphabet,
            std::vector<std::vector<Rational>> mass);

  /// Product of two marginals.
  static JointDist product(const Dist& fx, const Dist& fy);

  const std::vector<std::string>& x_alphabet() const { return x_; }
  const std::vector<std::string>& y_alphabet() const { return y_; }
  const Rational& mass(std::size_t xi, std::size_t yi) const { return mass_[xi][yi]; }
  const std::vector<std::vector<Rational>>& masses() const { return mass_; }

  Dist marginal_x() const;
  Dist marginal_y() const;
  JointDist transposed() const;

  /// Exact test f(x,y) = f1(x) f2(y) for all pairs.
  bool is_independent() const;

  /// The joint viewed as one distribution over pairs "x,y".
  Dist flattened() const;

 private:
  std::vector<std::string> x_, y_;
  std::vector<std::vector<Rational>> mass_;
};

/// `symbol<TAB>p/q` per line; blank lines and '#' comments skipped.
Dist read_dist(std::istream& in);
Dist read_dist_file(const std::string& path);
void write_dist(std::ostream& out, const Dist& d);

/// `x<TAB>y<TAB>p/q` per line; absent pairs have mass 0.
JointDist read_joint(std::istream& in);
JointDist read_joint_file(const std::string& path);
void write_joint(std::ostream& out, const JointDist& j);

}  // namespace kolmo
