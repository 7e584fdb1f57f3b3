#include "kolmolab/selftest.hpp"

#include "kolmolab/algstats.hpp"
#include "kolmolab/coding.hpp"
#include "kolmolab/measures.hpp"
#include "kolmolab/probstats.hpp"
#include "kolmolab/ratedist.hpp"
#include "kolmolab/slack.hpp"
#include "kolmolab/toyvm.hpp"
#include "kolmolab/unicode.hpp"

#include <cmath>
#include <functional>
#include <random>

namespace kolmo {

namespace {

Dist random_dist(std::mt19937_64& gen, std::size_t k) {
  std::vector<std::string> xs;
  std::vector<BigInt> w;
  BigInt total = 0;
  for (std::size_t i = 0; i < k; ++i) {
    xs.push_back("s" + std::to_string(i));
    w.emplace_back(static_cast<unsigned long>(1 + gen() % 19));
    total += w.back();
  }
  if (total == 0) {
    w[0] = 1;
    total = 1;
  }
  std::vector<Rational> p;
  for (const auto& v : w) {
    Rational q(v, total);
    q.canonicalize();
    p.push_back(q);
  }
  return Dist(xs, p);
}

using Check = std::function<std::string()>;  // empty string = pass

}  // namespace

std::vector<PropertyResult> run_selftest(unsigned threads) {
  std::vector<std::pair<std::string, Check>> checks;

  checks.emplace_back("kraft-roundtrip", [] {
    std::mt19937_64 gen(1);
    for (int t = 0; t < 100; ++t) {
      std::vector<int> ls;
      Rational sum = 0;
      for (int i = 0; i < 12; ++i) {
        const int l = 1 + static_cast<int>(gen() % 8);
        if (sum + pow2(-l) > 1) continue;
        sum += pow2(-l);
        ls.push_back(l);
      }
      const auto code = coding::code_from_lengths(coding::Lengths(ls));
      if (!coding::is_prefix_free(code.codewords())) return std::string("code not prefix-free");
    }
    return std::string();
  });

  checks.emplace_back("noiseless-coding-sandwich", [] {
    std::mt19937_64 gen(2);
    for (int t = 0; t < 100; ++t) {
      const auto d = random_dist(gen, 2 + gen() % 10);
      const auto ls = coding::shannon_fano_lengths(d);
      double mean = 0;
      for (std::size_t i = 0; i < d.size(); ++i) mean += d.probs()[i].get_d() * ls[i];
      const double h = measures::entropy(d);
      if (mean < h - kBitsTolerance || mean > h + 1 + kBitsTolerance) return "sandwich fails: L=" + format_bits(mean);
    }
    return std::string();
  });

  checks.emplace_back("entropy-grouping", [] {
    const Bits lhs = measures::entropy(Dist({"a", "b", "c"}, {Rational(1, 2), Rational(1, 3), Rational(1, 6)}));
    const Bits rhs = 1 + 0.5 * measures::entropy(Dist({"b", "c"}, {Rational(2, 3), Rational(1, 3)}));
    return std::abs(lhs - rhs) <= kBitsTolerance ? std::string() : "grouping differs by " + format_bits(lhs - rhs);
  });

  checks.emplace_back("data-processing", [] {
    std::mt19937_64 gen(3);
    for (int t = 0; t < 20; ++t) {
      std::vector<std::vector<Rational>> m(3, std::vector<Rational>(3));
      BigInt total = 0;
      std::vector<unsigned long> w;
      for (int i = 0; i < 9; ++i) {
        w.push_back(1 + gen() % 9);
        total += w.back();
      }
      for (int i = 0; i < 9; ++i) {
        m[i / 3][i % 3] = Rational(BigInt(w[i]), total);
        m[i / 3][i % 3].canonicalize();
      }
      const JointDist j({"0", "1", "2"}, {"0", "1", "2"}, m);
      const auto r = measures::data_processing_check(j, {{"0", "a"}, {"1", "a"}, {"2", "b"}});
      if (!r.holds) return std::string("I(X;T(Y)) exceeds I(X;Y)");
    }
    return std::string();
  });

  checks.emplace_back("toy-machine-soundness", [threads] {
    toyvm::BuildOptions opt;
    opt.verify_prefix_free = true;
    opt.threads = threads;
    const auto o = toyvm::build_oracle(toyvm::Machine{1000, 14}, {}, opt);
    const auto& t = o.table();
    if (!t.prefix_free.value_or(false)) return std::string("halting programs not prefix-free");
    if (t.kraft_sum() > 1) return std::string("Kraft sum exceeds 1");
    const auto ref = toyvm::brute_force_table(toyvm::Machine{1000, 14}, "", toyvm::kMaxTableOutput);
    if (ref.halting_programs != t.halting_programs || ref.entries.size() != t.entries.size())
      return std::string("memoized enumeration disagrees with brute force");
    for (const auto& [x, e] : ref.entries) {
      const auto* f = t.find(x);
      if (!f || f->khat != e.khat || f->mhat_numerator != e.mhat_numerator) return "table entry differs for '" + x + "'";
    }
    return std::string();
  });

  checks.emplace_back("coding-theorem-lower", [] {
    const auto o = toyvm::build_oracle(toyvm::Machine{1000, 16}, {});
    for (const auto& x : o.table().sorted_outputs())
      if (o.khat_at(x) + log2_of(o.mhat(x)) < -kBitsTolerance) return "khat below log 1/mhat for '" + x + "'";
    return std::string();
  });

  checks.emplace_back("structure-function-shape", [] {
    const auto fam = algstats::make_family("masks");
    struct Zero : algstats::ComplexitySource {
      Bits complexity(std::string_view) const override { return 0; }
      Bits conditional(std::string_view, const algstats::FiniteSetModel&) const override { return 0; }
    } src;
    for (const auto& x : {std::string("00000000"), std::string("01101001")}) {
      const auto c = algstats::structure_functions(x, *fam, src, false);
      for (std::size_t r = 1; r < c.samples.size(); ++r)
        if (c.samples[r].h > c.samples[r - 1].h) return "h increases at R=" + std::to_string(r);
      if (!algstats::witness_transfer_holds(c)) return std::string("witness transfer fails");
    }
    return std::string();
  });

  checks.emplace_back("sufficiency-three-paths", [] {
    const auto fam = probstats::bernoulli(4, probstats::small_grid());
    for (const auto& s : {probstats::ones_statistic(), probstats::pairs_statistic()}) {
      const bool a = probstats::check_sufficiency_exact(fam, s).sufficient;
      const bool b = probstats::check_sufficiency_expectation(fam, s).sufficient;
      const bool c = probstats::sufficiency_via_mi(fam, s, probstats::standard_priors(3)).sufficient;
      if (a != b || b != c) return "formulations disagree for " + s.name;
    }
    return std::string();
  });

  checks.emplace_back("distortion-rate-set-instance", [] {
    for (std::size_t n = 1; n <= 2; ++n)
      for (std::size_t R = 0; R <= n; ++R) {
        const auto r = ratedist::brute_force_D(ratedist::set_instance(n), 1, Rational(static_cast<unsigned long>(R)));
        if (!r.D || *r.D != Rational(static_cast<unsigned long>(n - R))) return "D*(R) != n-R at n=" + std::to_string(n);
      }
    return std::string();
  });

  checks.emplace_back("blahut-arimoto-monotone", [] {
    const auto inst = ratedist::hamming_instance(Rational(1, 3));
    for (double s : {0.5, 1.0, 2.0, 4.0})
      if (!ratedist::blahut_arimoto_slope(inst, s).monotone) return "objective increased at slope " + format_bits(s);
    return std::string();
  });

  checks.emplace_back("binomial-roundtrip", [] {
    std::string stream;
    const auto xs = toyvm::all_strings(0, 8);
    for (const auto& x : xs) stream += unicode::binomial_encode(x);
    coding::BitReader in(stream);
    for (const auto& x : xs)
      if (unicode::binomial_decode(in) != x) return "round trip fails for '" + x + "'";
    return std::string();
  });

  checks.emplace_back("two-part-bound", [] {
    const auto fam = unicode::bernoulli_grid(10);
    std::vector<std::pair<std::string, BitString>> corpus;
    for (const auto& x : toyvm::all_strings(1, 8)) corpus.emplace_back(x, x);
    return unicode::redundancy_report(fam, corpus).all_bounds_hold ? std::string() : std::string("per-string bound fails");
  });

  std::vector<PropertyResult> out;
  for (const auto& [name, check] : checks) {
    try {
      const auto detail = check();
      out.push_back({name, detail.empty(), detail});
    } catch (const std::exception& e) {
      out.push_back({name, false, e.what()});
    }
  }
  return out;
}

}  // namespace kolmo
