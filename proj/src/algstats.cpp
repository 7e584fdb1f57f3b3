#include "kolmolab/algstats.hpp"

#include "kolmolab/coding.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>

namespace kolmo::algstats {

Bits FiniteSetModel::log_size() const { return std::log2(static_cast<double>(elements.size())); }

bool FiniteSetModel::contains(std::string_view x) const {
  return std::binary_search(elements.begin(), elements.end(), x, std::less<>());
}

BitString FiniteSetModel::listing() const {
  BitString s;
  s.reserve(elements.size() * n);
  for (const auto& e : elements) s += e;
  return s;
}

std::vector<FiniteSetModel> ModelFamily::containing(std::string_view x) const {
  std::vector<FiniteSetModel> out;
  for (auto& m : models(x.size()))
    if (m.contains(x)) out.push_back(std::move(m));
  return out;
}

namespace {

void check_length(std::size_t n) {
  if (n < 1 || n > kMaxFamilyLength)
    throw Error("budget", "model families are enumerated for 1 <= n <= " + std::to_string(kMaxFamilyLength));
}

std::size_t width_for(std::size_t n) { return static_cast<std::size_t>(std::bit_width(n)); }

std::vector<BitString> filtered(std::size_t n, const std::function<bool(const BitString&)>& keep) {
  std::vector<BitString> out;
  for (auto& s : toyvm::all_strings(n, n))
    if (keep(s)) out.push_back(std::move(s));
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t ones(std::string_view s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '1')); }

std::size_t distance(std::string_view a, std::string_view b) {
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

BitString fixed(std::uint64_t v, std::size_t width) { return to_bits(BigInt(static_cast<unsigned long>(v)), width); }

class BaseFamily : public ModelFamily {
 public:
  std::vector<FiniteSetModel> models(std::size_t n) const override {
    check_length(n);
    std::vector<FiniteSetModel> out;
    out.push_back(full(n));
    for (auto& p : payloads(n)) out.push_back(make(n, p));
    return out;
  }

  FiniteSetModel decode(std::string_view code) const override {
    coding::BitReader r(code);
    const auto n = coding::decode_natural(r);
    check_length(static_cast<std::size_t>(n));
    const auto tail = code.substr(r.position());
    if (tail == "0") return full(n);
    if (tail.empty() || tail[0] != '1') throw Error("decode", "malformed " + name() + " model code");
    const auto payload = tail.substr(1);
    if (!valid_payload(n, payload)) throw Error("decode", "malformed " + name() + " model code payload");
    return make(n, std::string(payload));
  }

 protected:
  virtual std::vector<BitString> payloads(std::size_t n) const = 0;
  virtual bool valid_payload(std::size_t n, std::string_view p) const = 0;
  virtual std::vector<BitString> elements(std::size_t n, std::string_view p) const = 0;

  FiniteSetModel full(std::size_t n) const {
    return {name(), coding::encode_natural(n) + "0", n, toyvm::all_strings(n, n)};
  }
  FiniteSetModel make(std::size_t n, const BitString& payload) const {
    return {name(), coding::encode_natural(n) + "1" + payload, n, elements(n, payload)};
  }
};

class FullFamily : public BaseFamily {
 public:
  std::string name() const override { return "full"; }
  std::string description() const override { return "only {0,1}^n"; }

 protected:
  std::vector<BitString> payloads(std::size_t) const override { return {}; }
  bool valid_payload(std::size_t, std::string_view) const override { return false; }
  std::vector<BitString> elements(std::size_t, std::string_view) const override { return {}; }
};

class SingletonFamily : public BaseFamily {
 public:
  std::string name() const override { return "singletons"; }
  std::string description() const override { return "{x} for every x; payload x"; }
  std::vector<FiniteSetModel> containing(std::string_view x) const override {
    check_length(x.size());
    return {full(x.size()), make(x.size(), BitString(x))};
  }

 protected:
  std::vector<BitString> payloads(std::size_t n) const override { return toyvm::all_strings(n, n); }
  bool valid_payload(std::size_t n, std::string_view p) const override { return p.size() == n && is_bit_string(p); }
  std::vector<BitString> elements(std::size_t, std::string_view p) const override { return {BitString(p)}; }
};

class MaskFamily : public BaseFamily {
 public:
  std::string name() const override { return "masks"; }
  std::string description() const override {
    return "A_R = strings sharing a fixed R-bit prefix, 1 <= R <= n; payload encode_natural(R) then the prefix";
  }

 protected:
  std::vector<BitString> payloads(std::size_t n) const override {
    std::vector<BitString> out;
    for (std::size_t R = 1; R <= n; ++R)
      for (const auto& p : toyvm::all_strings(R, R)) out.push_back(coding::encode_natural(R) + p);
    return out;
  }
  bool valid_payload(std::size_t n, std::string_view p) const override {
    try {
      const auto d = coding::decode_natural(p);
      return d.value >= 1 && d.value <= n && p.size() - d.consumed == d.value && is_bit_string(p);
    } catch (const Error&) {
      return false;
    }
  }
  std::vector<BitString> elements(std::size_t n, std::string_view p) const override {
    const auto d = coding::decode_natural(p);
    const auto prefix = p.substr(d.consumed);
    std::vector<BitString> out;
    for (const auto& tail : toyvm::all_strings(n - prefix.size(), n - prefix.size()))
      out.push_back(std::string(prefix) + tail);
    return out;
  }
};

class TypeClassFamily : public BaseFamily {
 public:
  std::string name() const override { return "typeclass"; }
  std::string description() const override { return "S_{n,k} = strings with k ones; payload k in bit_width(n) bits"; }

 protected:
  std::vector<BitString> payloads(std::size_t n) const override {
    std::vector<BitString> out;
    for (std::size_t k = 0; k <= n; ++k) out.push_back(fixed(k, width_for(n)));
    return out;
  }
  bool valid_payload(std::size_t n, std::string_view p) const override {
    return p.size() == width_for(n) && is_bit_string(p) && from_bits(p) <= static_cast<unsigned long>(n);
  }
  std::vector<BitString> elements(std::size_t n, std::string_view p) const override {
    const auto k = from_bits(p).get_ui();
    return filtered(n, [k](const BitString& s) { return ones(s) == k; });
  }
};

class EvenPatternFamily : public BaseFamily {
 public:
  std::string name() const override { return "evenpattern"; }
  std::string description() const override {
    return "strings whose odd positions (1st, 3rd, ...) equal a fixed pattern; payload the pattern";
  }

 protected:
  std::vector<BitString> payloads(std::size_t n) const override {
    const auto k = (n + 1) / 2;
    return toyvm::all_strings(k, k);
  }
  bool valid_payload(std::size_t n, std::string_view p) const override {
    return p.size() == (n + 1) / 2 && is_bit_string(p);
  }
  std::vector<BitString> elements(std::size_t n, std::string_view p) const override {
    const BitString pat(p);
    return filtered(n, [&pat](const BitString& s) {
      for (std::size_t i = 0; i < s.size(); i += 2)
        if (s[i] != pat[i / 2]) return false;
      return true;
    });
  }
};

class HammingFamily : public BaseFamily {
 public:
  std::string name() const override { return "hamming"; }
  std::string description() const override {
    return "Hamming balls B(c, r); payload the center c then r in bit_width(n) bits";
  }
  std::vector<FiniteSetModel> containing(std::string_view x) const override {
    const auto n = x.size();
    check_length(n);
    std::vector<FiniteSetModel> out{full(n)};
    for (const auto& c : toyvm::all_strings(n, n)) {
      const auto d = distance(c, x);
      for (std::size_t r = d; r <= n; ++r) out.push_back(make(n, c + fixed(r, width_for(n))));
    }
    return out;
  }

 protected:
  std::vector<BitString> payloads(std::size_t n) const override {
    std::vector<BitString> out;
    for (const auto& c : toyvm::all_strings(n, n))
      for (std::size_t r = 0; r <= n; ++r) out.push_back(c + fixed(r, width_for(n)));
    return out;
  }
  bool valid_payload(std::size_t n, std::string_view p) const override {
    return p.size() == n + width_for(n) && is_bit_string(p) && from_bits(p.substr(n)) <= static_cast<unsigned long>(n);
  }
  std::vector<BitString> elements(std::size_t n, std::string_view p) const override {
    const BitString c(p.substr(0, n));
    const auto r = from_bits(p.substr(n)).get_ui();
    return filtered(n, [&](const BitString& s) { return distance(s, c) <= r; });
  }
};

class ZeroMaskFamily : public BaseFamily {
 public:
  std::string name() const override { return "zeromask"; }
  std::string description() const override {
    return "S_y = strings with 0 wherever y has 0; payload y";
  }

 protected:
  std::vector<BitString> payloads(std::size_t n) const override { return toyvm::all_strings(n, n); }
  bool valid_payload(std::size_t n, std::string_view p) const override { return p.size() == n && is_bit_string(p); }
  std::vector<BitString> elements(std::size_t n, std::string_view p) const override {
    const BitString y(p);
    return filtered(n, [&y](const BitString& s) {
      for (std::size_t i = 0; i < s.size(); ++i)
        if (y[i] == '0' && s[i] == '1') return false;
      return true;
    });
  }
};

}  // namespace

std::unique_ptr<ModelFamily> make_family(std::string_view name) {
  if (name == "full") return std::make_unique<FullFamily>();
  if (name == "singletons") return std::make_unique<SingletonFamily>();
  if (name == "masks") return std::make_unique<MaskFamily>();
  if (name == "typeclass") return std::make_unique<TypeClassFamily>();
  if (name == "evenpattern") return std::make_unique<EvenPatternFamily>();
  if (name == "hamming") return std::make_unique<HammingFamily>();
  if (name == "zeromask") return std::make_unique<ZeroMaskFamily>();
  throw Error("usage", "unknown model family '" + std::string(name) + "'");
}

std::vector<std::string> family_names() {
  return {"full", "singletons", "masks", "typeclass", "evenpattern", "hamming", "zeromask"};
}

Bits OracleSource::complexity(std::string_view x) const { return oracle_.khat_at(x); }

Bits OracleSource::conditional(std::string_view x, const FiniteSetModel& s) const {
  return oracle_.khat_cond_at(x, s.listing());
}

std::vector<std::string> model_conditions(const ModelFamily& family, std::string_view x) {
  std::vector<std::string> out;
  for (const auto& m : family.containing(x)) out.push_back(m.listing());
  return out;
}

Bits randomness_deficiency(std::string_view x, const FiniteSetModel& s, const ComplexitySource& src) {
  if (!s.contains(x)) return kInfinity;
  return s.log_size() - src.conditional(x, s);
}

bool is_typical(std::string_view x, const FiniteSetModel& s, const ComplexitySource& src, Bits beta) {
  return s.contains(x) && randomness_deficiency(x, s, src) <= beta + kBitsTolerance;
}

bool is_optimal(std::string_view x, const FiniteSetModel& s, const ComplexitySource& src, Bits c) {
  return s.contains(x) && static_cast<Bits>(s.model_cost()) + s.log_size() <= src.complexity(x) + c + kBitsTolerance;
}

long default_r_max(const ModelFamily& family, std::size_t n) {
  std::size_t worst = 0;
  for (const auto& m : family.containing(BitString(n, '0'))) worst = std::max(worst, m.model_cost());
  return static_cast<long>(n + worst);
}

StructureCurve structure_functions(std::string_view x, const ModelFamily& family, const ComplexitySource& src,
                                   bool with_beta, std::optional<long> r_max) {
  StructureCurve curve;
  curve.x = std::string(x);
  curve.models = family.containing(x);
  const long top = r_max.value_or(default_r_max(family, x.size()));
  std::vector<Bits> deficiency;
  if (with_beta)
    for (const auto& m : curve.models) deficiency.push_back(randomness_deficiency(x, m, src));

  for (long R = 0; R <= top; ++R) {
    CurveSample s{R, kInfinity, kInfinity, with_beta ? kInfinity : std::nan(""), {}, {}, {}};
    for (std::size_t i = 0; i < curve.models.size(); ++i) {
      const auto& m = curve.models[i];
      if (static_cast<long>(m.model_cost()) > R) continue;
      const Bits log_size = m.log_size();
      if (log_size < s.h) {
        s.h = log_size;
        s.h_witness = i;
      }
      const Bits two_part = static_cast<Bits>(m.model_cost()) + log_size;
      if (two_part < s.lambda) {
        s.lambda = two_part;
        s.lambda_witness = i;
      }
      if (with_beta && deficiency[i] < s.beta) {
        s.beta = deficiency[i];
        s.beta_witness = i;
      }
    }
    curve.samples.push_back(s);
  }
  return curve;
}

SufficiencyResult minimal_sufficient_statistic(std::string_view x, const ModelFamily& family,
                                               const ComplexitySource& src, Bits c) {
  SufficiencyResult res{std::nullopt, kInfinity};
  for (const auto& m : family.containing(x)) {
    res.best_two_part = std::min(res.best_two_part, static_cast<Bits>(m.model_cost()) + m.log_size());
    if (!is_optimal(x, m, src, c)) continue;
    if (!res.model || m.model_cost() < res.model->model_cost()) res.model = m;
  }
  return res;
}

Dist set_to_prob(const FiniteSetModel& s) {
  if (s.elements.empty()) throw Error("model", "empty set has no uniform model");
  return Dist::uniform(s.elements);
}

FiniteSetModel prob_to_set(const Dist& f, std::string_view x) {
  const Rational fx = f.prob(x);
  if (sgn(fx) == 0) throw Error("model", "f(x) = 0 for x = '" + std::string(x) + "'");
  long m = ceil_log2_inverse(fx);
  if (!is_inverse_power_of_two(fx)) --m;  // floor(log 1/f(x))
  const Rational threshold = pow2(-m - 1);
  FiniteSetModel s{"threshold", {}, x.size(), {}};
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f.probs()[i] > threshold) s.elements.push_back(f.outcomes()[i]);
  std::sort(s.elements.begin(), s.elements.end());
  return s;
}

Bits c_decode(const ModelFamily& family, std::size_t n) {
  Bits best = kInfinity;
  for (const auto& m : family.models(n)) best = std::min(best, static_cast<Bits>(m.model_cost()) + m.log_size());
  return static_cast<Bits>(n + toyvm::literal_overhead(n)) - best;
}

std::vector<Bits> expected_h(const ModelFamily& family, const Dist& f, long r_max) {
  struct NoSource : ComplexitySource {
    Bits complexity(std::string_view) const override { return 0; }
    Bits conditional(std::string_view, const FiniteSetModel&) const override { return 0; }
  } none;
  std::vector<Bits> out(static_cast<std::size_t>(r_max) + 1, 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double p = f.probs()[i].get_d();
    if (p == 0) continue;
    const auto curve = structure_functions(f.outcomes()[i], family, none, false, r_max);
    for (std::size_t R = 0; R < out.size(); ++R) out[R] += std::isinf(curve.samples[R].h) ? kInfinity : p * curve.samples[R].h;
  }
  return out;
}

bool witness_transfer_holds(const StructureCurve& curve) {
  for (const auto& s : curve.samples) {
    if (!s.h_witness) continue;
    const auto& w = curve.models[*s.h_witness];
    const auto at = static_cast<std::size_t>(w.model_cost());
    if (at >= curve.samples.size()) continue;
    if (curve.samples[at].lambda > static_cast<Bits>(w.model_cost()) + w.log_size() + kBitsTolerance) return false;
  }
  return true;
}

}  // namespace kolmo::algstats
