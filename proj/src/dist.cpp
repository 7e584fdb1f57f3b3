#include "kolmolab/dist.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace kolmo {

Dist::Dist(std::vector<std::string> outcomes, std::vector<Rational> probs)
    : outcomes_(std::move(outcomes)), probs_(std::move(probs)) {
  if (outcomes_.empty()) throw Error("dist", "distribution has empty support");
  if (outcomes_.size() != probs_.size()) throw Error("dist", "outcome/probability count mismatch");
  std::set<std::string_view> seen;
  Rational total = 0;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    probs_[i].canonicalize();
    if (sgn(probs_[i]) < 0) throw Error("dist", "negative probability for '" + outcomes_[i] + "'");
    if (!seen.insert(outcomes_[i]).second) throw Error("dist", "duplicate outcome '" + outcomes_[i] + "'");
    total += probs_[i];
  }
  if (total != 1) throw Error("dist", "probabilities sum to " + to_string(total) + ", not 1");
}

Dist Dist::uniform(std::vector<std::string> outcomes) {
  const auto n = outcomes.size();
  if (n == 0) throw Error("dist", "distribution has empty support");
  std::vector<Rational> probs(n, Rational(1, static_cast<unsigned long>(n)));
  return Dist(std::move(outcomes), std::move(probs));
}

std::size_t Dist::index_of(std::string_view symbol) const {
  for (std::size_t i = 0; i < outcomes_.size(); ++i)
    if (outcomes_[i] == symbol) return i;
  return std::string::npos;
}

Rational Dist::prob(std::string_view symbol) const {
  const auto i = index_of(symbol);
  return i == std::string::npos ? Rational(0) : probs_[i];
}

bool Dist::is_dyadic() const {
  for (const auto& p : probs_)
    if (sgn(p) != 0 && !is_inverse_power_of_two(p)) return false;
  return true;
}

JointDist::JointDist(std::vector<std::string> x_alphabet, std::vector<std::string> y_alphabet,
                     std::vector<std::vector<Rational>> mass)
    : x_(std::move(x_alphabet)), y_(std::move(y_alphabet)), mass_(std::move(mass)) {
  if (x_.empty() || y_.empty()) throw Error("dist", "joint distribution needs nonempty alphabets");
  if (mass_.size() != x_.size()) throw Error("dist", "joint mass row count mismatch");
  Rational total = 0;
  for (auto& row : mass_) {
    if (row.size() != y_.size()) throw Error("dist", "joint mass column count mismatch");
    for (auto& m : row) {
      m.canonicalize();
      if (sgn(m) < 0) throw Error("dist", "negative joint mass");
      total += m;
    }
  }
  if (total != 1) throw Error("dist", "joint masses sum to " + to_string(total) + ", not 1");
}

JointDist JointDist::product(const Dist& fx, const Dist& fy) {
  std::vector<std::vector<Rational>> mass(fx.size(), std::vector<Rational>(fy.size()));
  for (std::size_t i = 0; i < fx.size(); ++i)
    for (std::size_t j = 0; j < fy.size(); ++j) mass[i][j] = fx.probs()[i] * fy.probs()[j];
  return JointDist(fx.outcomes(), fy.outcomes(), std::move(mass));
}

Dist JointDist::marginal_x() const {
  std::vector<Rational> p(x_.size(), Rational(0));
  for (std::size_t i = 0; i < x_.size(); ++i)
    for (std::size_t j = 0; j < y_.size(); ++j) p[i] += mass_[i][j];
  return Dist(x_, std::move(p));
}

Dist JointDist::marginal_y() const {
  std::vector<Rational> p(y_.size(), Rational(0));
  for (std::size_t i = 0; i < x_.size(); ++i)
    for (std::size_t j = 0; j < y_.size(); ++j) p[j] += mass_[i][j];
  return Dist(y_, std::move(p));
}

JointDist JointDist::transposed() const {
  std::vector<std::vector<Rational>> t(y_.size(), std::vector<Rational>(x_.size()));
  for (std::size_t i = 0; i < x_.size(); ++i)
    for (std::size_t j = 0; j < y_.size(); ++j) t[j][i] = mass_[i][j];
  return JointDist(y_, x_, std::move(t));
}

bool JointDist::is_independent() const {
  const Dist fx = marginal_x();
  const Dist fy = marginal_y();
  for (std::size_t i = 0; i < x_.size(); ++i)
    for (std::size_t j = 0; j < y_.size(); ++j)
      if (mass_[i][j] != fx.probs()[i] * fy.probs()[j]) return false;
  return true;
}

Dist JointDist::flattened() const {
  std::vector<std::string> names;
  std::vector<Rational> p;
  for (std::size_t i = 0; i < x_.size(); ++i)
    for (std::size_t j = 0; j < y_.size(); ++j) {
      names.push_back(x_[i] + "," + y_[j]);
      p.push_back(mass_[i][j]);
    }
  return Dist(std::move(names), std::move(p));
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, '\t')) fields.push_back(cur);
  return fields;
}

bool skippable(const std::string& line) {
  const auto p = line.find_first_not_of(" \t\r");
  return p == std::string::npos || line[p] == '#';
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io", "cannot open '" + path + "'");
  return in;
}

}  // namespace

Dist read_dist(std::istream& in) {
  std::vector<std::string> outcomes;
  std::vector<Rational> probs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skippable(line)) continue;
    const auto f = split_tabs(line);
    if (f.size() != 2)
      throw Error("parse", "line " + std::to_string(lineno) + ": expected symbol<TAB>p/q");
    outcomes.push_back(f[0]);
    probs.push_back(parse_rational(f[1]));
  }
  return Dist(std::move(outcomes), std::move(probs));
}

Dist read_dist_file(const std::string& path) {
  auto in = open_or_throw(path);
  return read_dist(in);
}

void write_dist(std::ostream& out, const Dist& d) {
  for (std::size_t i = 0; i < d.size(); ++i) out << d.outcomes()[i] << '\t' << to_string(d.probs()[i]) << '\n';
}

JointDist read_joint(std::istream& in) {
  std::vector<std::string> xs, ys;
  std::map<std::string, std::size_t> xi, yi;
  std::map<std::pair<std::size_t, std::size_t>, Rational> cells;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skippable(line)) continue;
    const auto f = split_tabs(line);
    if (f.size() != 3)
      throw Error("parse", "line " + std::to_string(lineno) + ": expected x<TAB>y<TAB>p/q");
    auto [itx, newx] = xi.try_emplace(f[0], xs.size());
    if (newx) xs.push_back(f[0]);
    auto [ity, newy] = yi.try_emplace(f[1], ys.size());
    if (newy) ys.push_back(f[1]);
    auto [cell, fresh] = cells.try_emplace({itx->second, ity->second}, parse_rational(f[2]));
    if (!fresh) throw Error("parse", "line " + std::to_string(lineno) + ": duplicate pair");
  }
  std::vector<std::vector<Rational>> mass(xs.size(), std::vector<Rational>(ys.size(), Rational(0)));
  for (const auto& [key, m] : cells) mass[key.first][key.second] = m;
  return JointDist(std::move(xs), std::move(ys), std::move(mass));
}

JointDist read_joint_file(const std::string& path) {
  auto in = open_or_throw(path);
  return read_joint(in);
}

void write_joint(std::ostream& out, const JointDist& j) {
  for (std::size_t a = 0; a < j.x_alphabet().size(); ++a)
    for (std::size_t b = 0; b < j.y_alphabet().size(); ++b)
      out << j.x_alphabet()[a] << '\t' << j.y_alphabet()[b] << '\t' << to_string(j.mass(a, b)) << '\n';
}

}  // namespace kolmo
