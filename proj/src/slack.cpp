#include "kolmolab/slack.hpp"

#include "kolmolab/coding.hpp"
#include "kolmolab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace kolmo::toyvm {

std::string to_string(Identity id) {
  switch (id) {
    case Identity::Additivity: return "additivity";
    case Identity::NaiveAdditivity: return "naive-additivity";
    case Identity::Triangle: return "triangle";
    case Identity::DetNonIncrease: return "det-nonincrease";
    case Identity::RandNonIncrease: return "rand-nonincrease";
    case Identity::Symmetry: return "symmetry";
    case Identity::CodingTheorem: return "coding-theorem";
  }
  return "?";
}

const std::vector<Identity>& all_identities() {
  static const std::vector<Identity> ids = {Identity::Additivity,      Identity::NaiveAdditivity,
                                            Identity::Triangle,        Identity::DetNonIncrease,
                                            Identity::RandNonIncrease, Identity::Symmetry,
                                            Identity::CodingTheorem};
  return ids;
}

Identity parse_identity(std::string_view name) {
  for (auto id : all_identities())
    if (to_string(id) == name) return id;
  throw Error("usage", "unknown identity '" + std::string(name) + "'");
}

void SlackReport::add(std::string label, std::size_t n, Bits gap) {
  instances.push_back({std::move(label), n, gap});
  max_gap = std::max(max_gap, gap);
  min_gap = std::min(min_gap, gap);
  auto [it, fresh] = max_gap_by_length.try_emplace(n, gap);
  if (!fresh) it->second = std::max(it->second, gap);
}

Bits alg_mutual_info(const ComplexityOracle& oracle, std::string_view x, std::string_view y) {
  return oracle.khat_at(x) - oracle.khat_cond_at(x, oracle.star(y));
}

const std::vector<Processor>& processors() {
  static const std::vector<Processor> qs = {
      {"identity", program(op::exec())},
      {"duplicate", program(op::exec() + op::exec())},
      {"append-0", program(op::exec() + op::emit("0"))},
      {"prepend-1", program(op::emit("1") + op::exec())},
  };
  return qs;
}

namespace {

std::optional<BitString> process(const ComplexityOracle& oracle, const Processor& q, std::string_view x) {
  const auto r = run(q.program, oracle.star(x), oracle.machine().step_budget);
  if (r.outcome != Outcome::Halt) return std::nullopt;
  return r.output;
}

std::string label(std::initializer_list<std::string_view> parts) {
  std::string s;
  for (auto p : parts) {
    if (!s.empty()) s += ',';
    s += p.empty() ? std::string_view("e") : p;
  }
  return s;
}

}  // namespace

std::vector<std::string> slack_conditions(const ComplexityOracle& base, Identity id,
                                          const std::vector<BitString>& universe) {
  std::set<std::string> out;
  auto add_star = [&](std::string_view x) {
    if (auto p = base.shortest_program(x)) out.insert(*p);
  };
  switch (id) {
    case Identity::NaiveAdditivity:
      for (const auto& x : universe) out.insert(x);
      break;
    case Identity::DetNonIncrease:
      for (const auto& x : universe) {
        add_star(x);
        for (const auto& q : processors()) {
          const auto p = base.shortest_program(x);
          if (!p) continue;
          const auto r = run(q.program, *p, base.machine().step_budget);
          if (r.outcome == Outcome::Halt) add_star(r.output);
        }
      }
      break;
    case Identity::CodingTheorem:
      break;
    default:
      for (const auto& x : universe) add_star(x);
  }
  return {out.begin(), out.end()};
}

ComplexityOracle slack_oracle(const Machine& machine, const std::vector<Identity>& ids,
                              const std::vector<BitString>& universe, const BuildOptions& options) {
  const auto base = build_oracle(machine, {}, options);
  std::set<std::string> conds;
  for (auto id : ids)
    for (auto& c : slack_conditions(base, id, universe)) conds.insert(std::move(c));
  return build_oracle(machine, {conds.begin(), conds.end()}, options);
}

SlackReport slack_experiment(const ComplexityOracle& o, Identity id, const std::vector<BitString>& universe) {
  SlackReport rep;
  rep.identity = to_string(id);
  switch (id) {
    case Identity::Additivity:
    case Identity::NaiveAdditivity:
      for (const auto& x : universe)
        for (const auto& y : universe) {
          const auto joint = o.khat(pair_string(x, y));
          if (!joint) throw Error("undefined", "pair <" + x + "," + y + "> has no program within budget");
          const auto cond = id == Identity::Additivity ? o.star(x) : x;
          const Bits gap = *joint - o.khat_at(x) - o.khat_cond_at(y, cond);
          rep.add(label({x, y}), x.size(), gap);
        }
      break;
    case Identity::Triangle:
      for (const auto& x : universe)
        for (const auto& y : universe) {
          const auto ys = o.star(y);
          const int kxy = o.khat_cond_at(x, ys);
          for (const auto& z : universe) {
            const Bits gap = kxy - o.khat_cond_at(z, ys) - o.khat_cond_at(x, o.star(z));
            rep.add(label({x, y, z}), x.size(), gap);
          }
        }
      break;
    case Identity::DetNonIncrease:
      // I(x:y) = K(y) - K(y|x*), the form the non-increase laws are stated in.
      for (const auto& q : processors()) {
        const auto kq = o.khat(q.program).value_or(static_cast<int>(q.program.size()));
        for (const auto& x : universe) {
          const auto z = process(o, q, x);
          if (!z) continue;
          for (const auto& y : universe) {
            const Bits izy = alg_mutual_info(o, y, *z);
            const Bits ixy = alg_mutual_info(o, y, x);
            rep.add(label({q.name, x, y}), x.size(), izy - ixy - kq);
          }
        }
      }
      break;
    case Identity::RandNonIncrease:
      for (const auto& x : universe) {
        const auto xs = o.star(x);
        for (const auto& y : universe) {
          const Bits ixy = alg_mutual_info(o, y, x);
          Bits expectation = 0;
          for (const auto& z : universe) {
            const Rational w = o.mhat_cond(z, xs);
            if (sgn(w) == 0) continue;
            expectation += w.get_d() * std::exp2(alg_mutual_info(o, y, z) - ixy);
          }
          rep.add(label({x, y}), x.size(), expectation);
        }
      }
      break;
    case Identity::Symmetry:
      for (const auto& x : universe)
        for (const auto& y : universe)
          rep.add(label({x, y}), x.size(), std::abs(alg_mutual_info(o, x, y) - alg_mutual_info(o, y, x)));
      break;
    case Identity::CodingTheorem:
      for (const auto& x : universe) {
        const Rational m = o.mhat(x);
        if (sgn(m) == 0) throw Error("undefined", "'" + x + "' has no program within budget");
        rep.add(label({x}), x.size(), o.khat_at(x) + log2_of(m));
      }
      break;
  }
  return rep;
}

std::vector<CountingRow> counting_bound(const ComplexityOracle& oracle, std::size_t n) {
  std::vector<int> ks;
  for (const auto& x : all_strings(n, n)) ks.push_back(oracle.khat(x).value_or(std::numeric_limits<int>::max()));
  std::vector<CountingRow> rows;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::size_t m = 0; m <= n; ++m) {
    const long limit = static_cast<long>(n) - static_cast<long>(m);
    const auto count = static_cast<std::uint64_t>(std::count_if(ks.begin(), ks.end(), [&](int k) { return k <= limit; }));
    CountingRow r{n, m, count, total, false, false};
    r.below_counting_bound = count < (std::uint64_t{1} << (n - m + 1));
    // count / 2^n < 2^{m-n+1}  <=>  count < 2^{m+1}
    r.below_literal_bound = count < (std::uint64_t{1} << (m + 1));
    rows.push_back(r);
  }
  return rows;
}

BitString dyadic_model_code(const Dist& f) {
  if (!f.is_dyadic()) throw Error("dist", "model code needs a dyadic distribution");
  BitString code = coding::encode_natural(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto& x = f.outcomes()[i];
    if (!is_bit_string(x)) throw Error("dist", "outcome '" + x + "' is not a bit string");
    code += coding::encode_natural(coding::string_to_natural(x));
    const auto& p = f.probs()[i];
    code += sgn(p) == 0 ? coding::encode_natural(0) : coding::encode_natural(1 + ceil_log2_inverse(p));
  }
  return code;
}

ExpectedComplexity expected_complexity(const ComplexityOracle& oracle, const Dist& f) {
  ExpectedComplexity e{0, measures::entropy(f), 0, dyadic_model_code(f).size()};
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (sgn(f.probs()[i]) == 0) continue;
    e.expected_khat += f.probs()[i].get_d() * oracle.khat_at(f.outcomes()[i]);
  }
  e.gap = e.expected_khat - e.entropy;
  return e;
}

}  // namespace kolmo::toyvm
