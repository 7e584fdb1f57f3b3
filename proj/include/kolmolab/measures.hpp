#pragma once

// Shannon information measures over finite exact-rational distributions.
// Convention: 0 log 1/0 = 0 and log 1/0 = +inf.

#include "kolmolab/common.hpp"
#include "kolmolab/dist.hpp"

#include <functional>
#include <map>
#include <span>
#include <string>

namespace kolmo::measures {

Bits entropy(const Dist& dist);
Bits entropy(std::span<const Rational> probs);

/// H(X,Y).
Bits joint_entropy(const JointDist& j);

/// H(Y|X) = sum_x f1(x) H(Y|X=x).
Bits conditional_entropy(const JointDist& j);

/// H(Y | X = x) for the row of x; throws when P(X=x) = 0.
Bits conditional_entropy_given(const JointDist& j, std::size_t x_index);

/// D(f || g) over the union of both alphabets; +inf when f is not
/// absolutely continuous with respect to g.
Bits kl_divergence(const Dist& f, const Dist& g);

/// I(X;Y) evaluated as the double sum f(x,y) log f(x,y)/(f1(x) f2(y)).
Bits mutual_info(const JointDist& j);

/// I(Y=y : X) = H(X) - H(X | Y=y). May be negative.
Bits individual_info(const JointDist& j, std::string_view y);

/// Pushes Y through a deterministic map on the Y alphabet.
JointDist push_forward_y(const JointDist& j, const std::map<std::string, std::string>& t);

struct DataProcessingResult {
  Bits lhs;  // I(X;Y)
  Bits rhs;  // I(X;T(Y))
  bool holds;
};

DataProcessingResult data_processing_check(const JointDist& j, const std::map<std::string, std::string>& t);

/// Binary entropy H(p, 1-p) in floating point, for closed-form comparisons.
Bits binary_entropy(double p);

}  // namespace kolmo::measures
