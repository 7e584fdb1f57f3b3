#include "kolmolab/measures.hpp"

#include <cmath>
#include <set>

namespace kolmo::measures {

namespace {

// p log 1/p with p = 0 contributing nothing.
Bits plog(const Rational& p) {
  if (sgn(p) == 0) return 0.0;
  return -p.get_d() * log2_of(p);
}

}  // namespace

Bits entropy(std::span<const Rational> probs) {
  Bits h = 0;
  for (const auto& p : probs) h += plog(p);
  return h;
}

Bits entropy(const Dist& dist) { return entropy(std::span<const Rational>(dist.probs())); }

Bits joint_entropy(const JointDist& j) {
  Bits h = 0;
  for (const auto& row : j.masses())
    for (const auto& m : row) h += plog(m);
  return h;
}

Bits conditional_entropy_given(const JointDist& j, std::size_t x_index) {
  const auto& row = j.masses().at(x_index);
  Rational px = 0;
  for (const auto& m : row) px += m;
  if (sgn(px) == 0) throw Error("condition", "conditioning event has probability zero");
  Bits h = 0;
  for (const auto& m : row) h += plog(Rational(m / px));
  return h;
}

Bits conditional_entropy(const JointDist& j) {
  const Dist fx = j.marginal_x();
  Bits h = 0;
  for (std::size_t i = 0; i < fx.size(); ++i) {
    if (sgn(fx.probs()[i]) == 0) continue;
    h += fx.probs()[i].get_d() * conditional_entropy_given(j, i);
  }
  return h;
}

Bits kl_divergence(const Dist& f, const Dist& g) {
  Bits d = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Rational& p = f.probs()[i];
    if (sgn(p) == 0) continue;
    const Rational q = g.prob(f.outcomes()[i]);
    if (sgn(q) == 0) return kInfinity;
    d += p.get_d() * log2_of(Rational(p / q));
  }
  // Rounding can leave a tiny negative residue when f = g.
  return d < 0 && d > -kBitsTolerance ? 0.0 : d;
}

Bits mutual_info(const JointDist& j) {
  const Dist fx = j.marginal_x();
  const Dist fy = j.marginal_y();
  Bits total = 0;
  for (std::size_t a = 0; a < fx.size(); ++a)
    for (std::size_t b = 0; b < fy.size(); ++b) {
      const Rational& m = j.mass(a, b);
      if (sgn(m) == 0) continue;
      total += m.get_d() * log2_of(Rational(m / (fx.probs()[a] * fy.probs()[b])));
    }
  return total < 0 && total > -kBitsTolerance ? 0.0 : total;
}

Bits individual_info(const JointDist& j, std::string_view y) {
  const JointDist t = j.transposed();
  const Dist fy = t.marginal_x();
  const auto yi = fy.index_of(y);
  if (yi == std::string::npos) throw Error("condition", "symbol '" + std::string(y) + "' not in Y alphabet");
  if (sgn(fy.probs()[yi]) == 0) throw Error("condition", "P(Y=" + std::string(y) + ") = 0");
  return entropy(j.marginal_x()) - conditional_entropy_given(t, yi);
}

JointDist push_forward_y(const JointDist& j, const std::map<std::string, std::string>& t) {
  std::vector<std::string> images;
  std::map<std::string, std::size_t> image_index;
  std::vector<std::size_t> target(j.y_alphabet().size());
  for (std::size_t b = 0; b < j.y_alphabet().size(); ++b) {
    const auto it = t.find(j.y_alphabet()[b]);
    if (it == t.end()) throw Error("map", "map is not total: no image for '" + j.y_alphabet()[b] + "'");
    auto [pos, fresh] = image_index.try_emplace(it->second, images.size());
    if (fresh) images.push_back(it->second);
    target[b] = pos->second;
  }
  std::vector<std::vector<Rational>> mass(j.x_alphabet().size(), std::vector<Rational>(images.size(), Rational(0)));
  for (std::size_t a = 0; a < j.x_alphabet().size(); ++a)
    for (std::size_t b = 0; b < j.y_alphabet().size(); ++b) mass[a][target[b]] += j.mass(a, b);
  return JointDist(j.x_alphabet(), std::move(images), std::move(mass));
}

DataProcessingResult data_processing_check(const JointDist& j, const std::map<std::string, std::string>& t) {
  const Bits lhs = mutual_info(j);
  const Bits rhs = mutual_info(push_forward_y(j, t));
  return {lhs, rhs, lhs >= rhs - kBitsTolerance};
}

Bits binary_entropy(double p) {
  auto term = [](double q) { return q <= 0 ? 0.0 : -q * std::log2(q); };
  return term(p) + term(1 - p);
}

}  // namespace kolmo::measures
