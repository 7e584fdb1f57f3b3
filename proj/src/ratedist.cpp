#include "kolmolab/ratedist.hpp"

#include "kolmolab/measures.hpp"
#include "kolmolab/toyvm.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

namespace kolmo::ratedist {

namespace {

using i128 = __int128;
constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();

std::uint64_t ipow(std::uint64_t b, std::size_t e) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < e; ++i) {
    if (r > std::numeric_limits<std::uint64_t>::max() / std::max<std::uint64_t>(b, 1))
      throw Error("budget", "block alphabet too large");
    r *= b;
  }
  return r;
}

std::vector<std::size_t> digits(std::uint64_t v, std::size_t base, std::size_t m) {
  std::vector<std::size_t> d(m);
  for (std::size_t i = m; i-- > 0;) {
    d[i] = v % base;
    v /= base;
  }
  return d;
}

std::string tuple_label(const std::vector<std::string>& alphabet, std::uint64_t v, std::size_t m) {
  std::string s;
  for (auto i : digits(v, alphabet.size(), m)) {
    if (!s.empty()) s += ',';
    s += alphabet[i];
  }
  return s;
}

BigInt lcm_of_denominators(const std::vector<Rational>& qs) {
  BigInt l = 1;
  for (const auto& q : qs) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
  return l;
}

std::int64_t to_i64(const BigInt& v) {
  if (!v.fits_slong_p()) throw Error("budget", "distortion or probability scale overflows 64 bits");
  return v.get_si();
}

// Integer-scaled block tables: weight[b] / wden is P(x-bar), dist[b][c] / dden
// is the block distortion sum (before dividing by m).
struct BlockTables {
  std::uint64_t nx = 0, ny = 0;
  std::vector<std::int64_t> weight;
  std::vector<std::vector<std::int64_t>> dist;
  BigInt wden, dden;
};

BlockTables block_tables(const RDInstance& inst, std::size_t m) {
  BlockTables t;
  t.nx = ipow(inst.x_size(), m);
  t.ny = ipow(inst.y_size(), m);
  if (t.nx * t.ny > 50'000'000) throw Error("budget", "block distortion table too large");
  const BigInt lp = lcm_of_denominators(inst.source.probs());
  std::vector<Rational> finite;
  for (const auto& row : inst.d)
    for (const auto& v : row)
      if (v) finite.push_back(*v);
  const BigInt ld = lcm_of_denominators(finite);
  std::vector<std::int64_t> p(inst.x_size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = to_i64(BigInt(inst.source.probs()[i] * lp));
  std::vector<std::vector<std::int64_t>> d(inst.x_size(), std::vector<std::int64_t>(inst.y_size()));
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = 0; j < d[i].size(); ++j) d[i][j] = inst.d[i][j] ? to_i64(BigInt(*inst.d[i][j] * ld)) : kInf;

  t.wden = 1;
  for (std::size_t i = 0; i < m; ++i) t.wden *= lp;
  to_i64(t.wden);
  t.dden = ld;
  t.weight.resize(t.nx);
  t.dist.assign(t.nx, std::vector<std::int64_t>(t.ny));
  for (std::uint64_t b = 0; b < t.nx; ++b) {
    const auto xb = digits(b, inst.x_size(), m);
    std::int64_t w = 1;
    for (auto xi : xb) w *= p[xi];
    t.weight[b] = w;
    for (std::uint64_t c = 0; c < t.ny; ++c) {
      const auto yc = digits(c, inst.y_size(), m);
      std::int64_t s = 0;
      for (std::size_t i = 0; i < m; ++i) {
        const auto v = d[xb[i]][yc[i]];
        if (v == kInf) {
          s = kInf;
          break;
        }
        s += v;
      }
      t.dist[b][c] = s;
    }
  }
  return t;
}

Distortion scaled_value(i128 total, bool infinite, const BlockTables& t, std::size_t m) {
  if (infinite) return std::nullopt;
  const auto hi = static_cast<std::int64_t>(total >> 62);
  const auto lo = static_cast<std::int64_t>(total & ((i128(1) << 62) - 1));
  BigInt num = BigInt(hi) * (BigInt(1) << 62) + BigInt(lo);
  Rational r(num, t.wden * t.dden * static_cast<unsigned long>(m));
  r.canonicalize();
  return r;
}

BigInt binomial(std::uint64_t n, std::uint64_t k) {
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

}  // namespace

void RDInstance::validate() const {
  if (source.size() == 0 || ys.empty()) throw Error("instance", "empty alphabet");
  if (d.size() != x_size()) throw Error("instance", "distortion table has wrong row count");
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i].size() != y_size()) throw Error("instance", "distortion table has wrong column count");
    bool finite = false;
    for (const auto& v : d[i]) {
      if (v && *v < 0) throw Error("instance", "negative distortion");
      finite |= v.has_value();
    }
    if (!finite) throw Error("instance", "source symbol '" + source.outcomes()[i] + "' has no finite distortion");
  }
}

RDInstance hamming_instance(const Rational& p_one) {
  RDInstance inst{Dist({"0", "1"}, {Rational(1 - p_one), p_one}), {"0", "1"}, {}};
  inst.d = {{Rational(0), Rational(1)}, {Rational(1), Rational(0)}};
  inst.validate();
  return inst;
}

RDInstance set_instance(std::size_t n, bool subcubes_only) {
  if (n > 4) throw Error("budget", "set instance limited to n <= 4");
  const auto xs = toyvm::all_strings(n, n);
  const std::size_t N = xs.size();
  std::vector<std::vector<std::size_t>> sets;
  if (subcubes_only) {
    const auto patterns = ipow(3, n);
    for (std::uint64_t v = 0; v < patterns; ++v) {
      const auto pat = digits(v, 3, n);  // 0, 1, 2 = free
      std::vector<std::size_t> s;
      for (std::size_t i = 0; i < N; ++i) {
        bool ok = true;
        for (std::size_t j = 0; j < n && ok; ++j) ok = pat[j] == 2 || static_cast<std::size_t>(xs[i][j] - '0') == pat[j];
        if (ok) s.push_back(i);
      }
      sets.push_back(std::move(s));
    }
  } else {
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << N); ++mask) {
      if (std::popcount(static_cast<unsigned>(std::popcount(mask))) != 1) continue;
      std::vector<std::size_t> s;
      for (std::size_t i = 0; i < N; ++i)
        if (mask >> i & 1) s.push_back(i);
      sets.push_back(std::move(s));
    }
  }
  RDInstance inst{Dist::uniform(xs), {}, std::vector<std::vector<Distortion>>(N)};
  for (const auto& s : sets) {
    std::string label = "{";
    for (std::size_t k = 0; k < s.size(); ++k) label += (k ? "," : "") + xs[s[k]];
    inst.ys.push_back(label + "}");
    const Rational size_log = std::countr_zero(s.size());
    for (std::size_t i = 0; i < N; ++i)
      inst.d[i].push_back(std::binary_search(s.begin(), s.end(), i) ? Distortion(size_log) : std::nullopt);
  }
  inst.validate();
  return inst;
}

RDInstance read_instance(std::istream& in) {
  std::vector<std::string> xs, ys;
  std::vector<Rational> ps;
  std::map<std::pair<std::string, std::string>, Distortion> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag)) continue;
    auto fail = [&](const std::string& what) {
      return Error("parse", "line " + std::to_string(lineno) + ": " + what);
    };
    if (tag == "p") {
      std::string x, p;
      if (!(ss >> x >> p)) throw fail("expected 'p <x> <prob>'");
      xs.push_back(x);
      ps.push_back(parse_rational(p));
    } else if (tag == "y") {
      std::string y;
      if (!(ss >> y)) throw fail("expected 'y <sym>'");
      ys.push_back(y);
    } else if (tag == "d") {
      std::string x, y, v;
      if (!(ss >> x >> y >> v)) throw fail("expected 'd <x> <y> <value>'");
      entries[{x, y}] = v == "inf" ? Distortion() : Distortion(parse_rational(v));
    } else {
      throw fail("unknown record '" + tag + "'");
    }
  }
  RDInstance inst{Dist(xs, ps), ys, {}};
  for (const auto& x : xs) {
    std::vector<Distortion> row;
    for (const auto& y : ys) {
      auto it = entries.find({x, y});
      if (it == entries.end()) throw Error("parse", "missing distortion for (" + x + "," + y + ")");
      row.push_back(it->second);
    }
    inst.d.push_back(std::move(row));
  }
  inst.validate();
  return inst;
}

RDInstance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io", "cannot open '" + path + "'");
  return read_instance(in);
}

std::uint64_t max_codebook_size(std::size_t m, const Rational& R, std::uint64_t cap) {
  if (R < 0) throw Error("usage", "negative rate");
  Rational e = R * static_cast<unsigned long>(m);
  e.canonicalize();
  if (e >= 64) return cap;
  const BigInt limit = BigInt(1) << static_cast<mp_bitcnt_t>(e.get_num().get_ui());
  const unsigned long den = e.get_den().get_ui();
  // k <= 2^{num/den}  <=>  k^den <= 2^num
  auto fits = [&](std::uint64_t k) {
    BigInt p;
    mpz_pow_ui(p.get_mpz_t(), BigInt(static_cast<unsigned long>(k)).get_mpz_t(), den);
    return p <= limit;
  };
  std::uint64_t lo = 1, hi = cap;
  while (lo < hi) {
    const auto mid = lo + (hi - lo + 1) / 2;
    if (fits(mid))
      lo = mid;
    else
      hi = mid - 1;
  }
  return lo;
}

BruteResult brute_force_D(const RDInstance& inst, std::size_t m, const Rational& R) {
  if (m == 0) throw Error("usage", "block length must be positive");
  inst.validate();
  const auto t = block_tables(inst, m);
  const std::uint64_t K = max_codebook_size(m, R, t.ny);
  const BigInt count = binomial(t.ny, K);
  if (count > BigInt(static_cast<unsigned long>(kCodebookGuard)))
    throw Error("budget", "brute force needs " + count.get_str() + " codebooks (guard " +
                              std::to_string(kCodebookGuard) + ")");

  std::vector<std::uint64_t> relevant;
  for (std::uint64_t b = 0; b < t.nx; ++b)
    if (t.weight[b] != 0) relevant.push_back(b);

  BruteResult res;
  res.codebook_size = K;
  std::vector<std::uint64_t> combo(K), best;
  std::vector<std::vector<std::int64_t>> mins(K + 1, std::vector<std::int64_t>(relevant.size(), kInf));
  i128 best_total = 0;
  bool have = false, best_inf = true;

  // Depth-first over combinations in lexicographic order.
  auto rec = [&](auto&& self, std::size_t depth, std::uint64_t start) -> void {
    if (depth == K) {
      ++res.codebooks_evaluated;
      i128 total = 0;
      bool inf = false;
      for (std::size_t i = 0; i < relevant.size(); ++i) {
        const auto v = mins[K][i];
        if (v == kInf) {
          inf = true;
          break;
        }
        total += i128(t.weight[relevant[i]]) * v;
      }
      const bool better = !have || (best_inf && !inf) || (!inf && !best_inf && total < best_total);
      if (better) {
        have = true;
        best_inf = inf;
        best_total = total;
        best = combo;
      }
      return;
    }
    for (std::uint64_t c = start; c + (K - depth) <= t.ny; ++c) {
      combo[depth] = c;
      for (std::size_t i = 0; i < relevant.size(); ++i)
        mins[depth + 1][i] = std::min(mins[depth][i], t.dist[relevant[i]][c]);
      self(self, depth + 1, c + 1);
    }
  };
  rec(rec, 0, 0);
  res.D = scaled_value(best_total, best_inf, t, m);
  for (auto c : best) res.codebook.push_back(tuple_label(inst.ys, c, m));
  return res;
}

SetDistortionResult set_distortion_D(std::size_t n, std::size_t m, const Rational& R, std::uint64_t support) {
  if (m == 0) throw Error("usage", "block length must be positive");
  const std::uint64_t full = std::uint64_t{1} << n;
  if (support == 0) support = full;
  if (support > full) throw Error("usage", "support exceeds 2^n");
  const std::uint64_t N = ipow(support, m);
  const std::uint64_t K = max_codebook_size(m, R, N);
  SetDistortionResult res;
  res.pieces = K;

  auto cost = [](std::uint64_t s) { return s <= 1 ? 0.0 : static_cast<double>(s) * std::log2(static_cast<double>(s)); };
  // Balanced sizes are optimal by convexity; the exhaustive search over size
  // multisets confirms this on small supports.
  const std::uint64_t q = N / K, r = N % K;
  const double balanced = static_cast<double>(r) * cost(q + 1) + static_cast<double>(K - r) * cost(q);
  if (N <= 512) {
    std::vector<std::vector<double>> g(K + 1, std::vector<double>(N + 1, kInfinity));
    g[0][0] = 0;
    for (std::uint64_t k = 1; k <= K; ++k)
      for (std::uint64_t tot = 0; tot <= N; ++tot) {
        g[k][tot] = g[k - 1][tot];
        for (std::uint64_t s = 1; s <= tot; ++s) g[k][tot] = std::min(g[k][tot], cost(s) + g[k - 1][tot - s]);
      }
    if (std::abs(g[K][N] - balanced) > 1e-9 * std::max(1.0, balanced))
      throw Error("internal", "size-multiset search disagrees with the balanced partition");
  }
  res.D = balanced / (static_cast<double>(N) * static_cast<double>(m));
  if (r == 0 && std::has_single_bit(q)) {
    res.exact = Rational(std::countr_zero(q), static_cast<unsigned long>(m));
    res.exact->canonicalize();
  }

  const Rational mr = R * static_cast<unsigned long>(m);
  if (support == full && n <= 4 && mr.get_den() == 1 && res.exact) {
    const std::size_t fixed = std::min<std::size_t>(mr.get_num().get_ui(), n * m);
    // Codebook: every assignment of the first `fixed` block bits, the rest free.
    const auto inst = set_instance(n, true);
    std::map<std::string, std::size_t> index;
    for (std::size_t y = 0; y < inst.ys.size(); ++y) index[inst.ys[y]] = y;
    const auto xs = toyvm::all_strings(n, n);
    Rational total = 0;
    for (const auto& block : toyvm::all_strings(n * m, n * m)) {
      Rational d = 0;
      for (std::size_t i = 0; i < m; ++i) {
        std::string label = "{";
        bool first = true;
        for (const auto& x : xs) {
          bool in = true;
          for (std::size_t j = 0; j < n && in; ++j)
            if (i * n + j < fixed) in = x[j] == block[i * n + j];
          if (!in) continue;
          label += (first ? "" : ",") + x;
          first = false;
        }
        const auto y = index.at(label + "}");
        const auto xi = static_cast<std::size_t>(std::find(xs.begin(), xs.end(), block.substr(i * n, n)) - xs.begin());
        d += *inst.d[xi][y];
      }
      total += d;
    }
    total /= Rational(static_cast<unsigned long>(N) * m);
    res.witness_verified = total == *res.exact;
  }
  return res;
}

Bits min_distortion(const RDInstance& inst) {
  Bits total = 0;
  for (std::size_t x = 0; x < inst.x_size(); ++x) {
    Bits best = kInfinity;
    for (const auto& v : inst.d[x])
      if (v) best = std::min(best, v->get_d());
    total += inst.source.probs()[x].get_d() * best;
  }
  return total;
}

Bits max_distortion(const RDInstance& inst) {
  Bits best = kInfinity;
  for (std::size_t y = 0; y < inst.y_size(); ++y) {
    Bits s = 0;
    for (std::size_t x = 0; x < inst.x_size(); ++x) {
      const double p = inst.source.probs()[x].get_d();
      if (p == 0) continue;
      s = inst.d[x][y] ? s + p * inst.d[x][y]->get_d() : kInfinity;
    }
    best = std::min(best, s);
  }
  return best;
}

BAResult blahut_arimoto_slope(const RDInstance& inst, double s, const BAOptions& opt) {
  const std::size_t nx = inst.x_size(), ny = inst.y_size();
  std::vector<double> p(nx);
  for (std::size_t x = 0; x < nx; ++x) p[x] = inst.source.probs()[x].get_d();
  std::vector<std::vector<double>> kernel(nx, std::vector<double>(ny, 0.0)), dd(nx, std::vector<double>(ny, 0.0));
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) {
      dd[x][y] = inst.d[x][y] ? inst.d[x][y]->get_d() : kInfinity;
      kernel[x][y] = inst.d[x][y] ? std::exp2(-s * dd[x][y]) : 0.0;
    }

  BAResult res;
  res.slope = s;
  std::vector<double> q(ny, 1.0 / static_cast<double>(ny));
  std::vector<std::vector<double>> Q(nx, std::vector<double>(ny));
  double prev_F = kInfinity, prev_R = kInfinity, prev_D = kInfinity;
  for (int it = 1; it <= opt.max_iter; ++it) {
    for (std::size_t x = 0; x < nx; ++x) {
      double z = 0;
      for (std::size_t y = 0; y < ny; ++y) z += q[y] * kernel[x][y];
      if (z <= 0) {
        // Underflow: fall back to the least-distortion codewords.
        double best = kInfinity;
        for (std::size_t y = 0; y < ny; ++y) best = std::min(best, dd[x][y]);
        for (std::size_t y = 0; y < ny; ++y) Q[x][y] = dd[x][y] == best ? q[y] : 0.0;
        z = std::accumulate(Q[x].begin(), Q[x].end(), 0.0);
        for (auto& v : Q[x]) v /= z;
        continue;
      }
      for (std::size_t y = 0; y < ny; ++y) Q[x][y] = q[y] * kernel[x][y] / z;
    }
    std::fill(q.begin(), q.end(), 0.0);
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t y = 0; y < ny; ++y) q[y] += p[x] * Q[x][y];
    double R = 0, D = 0;
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t y = 0; y < ny; ++y) {
        if (p[x] == 0 || Q[x][y] == 0) continue;
        R += p[x] * Q[x][y] * std::log2(Q[x][y] / q[y]);
        D += p[x] * Q[x][y] * dd[x][y];
      }
    const double F = R + s * D;
    if (F > prev_F + 1e-12 * std::max(1.0, std::abs(prev_F))) res.monotone = false;
    res.R = std::max(R, 0.0);
    res.D = D;
    res.iterations = it;
    if (std::abs(R - prev_R) < opt.tol && std::abs(D - prev_D) < opt.tol) {
      res.channel = Q;
      return res;
    }
    prev_F = F;
    prev_R = R;
    prev_D = D;
  }
  throw Error("convergence", "no convergence after " + std::to_string(opt.max_iter) + " iterations at slope " +
                                 format_bits(s) + ", last R=" + format_bits(res.R) + " D=" + format_bits(res.D));
}

namespace {

constexpr double kSlopeHigh = 60.0;

BAResult zero_rate(const RDInstance& inst) {
  BAResult r;
  r.R = 0;
  r.D = max_distortion(inst);
  return r;
}

}  // namespace

BAResult blahut_arimoto(const RDInstance& inst, Bits target_D, const BAOptions& opt) {
  inst.validate();
  if (target_D >= max_distortion(inst)) return zero_rate(inst);
  auto hi = blahut_arimoto_slope(inst, kSlopeHigh, opt);
  if (target_D <= hi.D) return hi;
  double lo_s = 0, hi_s = kSlopeHigh;
  BAResult best = hi;
  for (int i = 0; i < 60; ++i) {
    const double mid = (lo_s + hi_s) / 2;
    auto r = blahut_arimoto_slope(inst, mid, opt);
    if (r.D > target_D) {
      lo_s = mid;
    } else {
      hi_s = mid;
      best = r;
    }
    if (std::abs(r.D - target_D) < opt.tol) return r;
  }
  return best;
}

BAResult blahut_arimoto_rate(const RDInstance& inst, Bits target_R, const BAOptions& opt) {
  inst.validate();
  if (target_R <= 0) return zero_rate(inst);
  auto hi = blahut_arimoto_slope(inst, kSlopeHigh, opt);
  if (target_R >= hi.R) return hi;
  double lo_s = 0, hi_s = kSlopeHigh;
  BAResult best = hi;
  for (int i = 0; i < 60; ++i) {
    const double mid = (lo_s + hi_s) / 2;
    auto r = blahut_arimoto_slope(inst, mid, opt);
    if (r.R < target_R) {
      lo_s = mid;
    } else {
      hi_s = mid;
      best = r;
    }
    if (std::abs(r.R - target_R) < opt.tol) return r;
  }
  return best;
}

namespace {

struct AlphaChannel {
  Bits info;     // I(X; Y_alpha)
  Bits residual; // H(X | Y_alpha)
};

AlphaChannel alpha_channel(const Rational& p, const Rational& alpha) {
  const Rational px[2] = {1 - p, p};
  std::vector<std::vector<Rational>> mass(2, std::vector<Rational>(2));
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) mass[x][y] = px[x] * (x == y ? alpha : Rational(1 - alpha));
  const JointDist j({"0", "1"}, {"0", "1"}, mass);
  return {measures::mutual_info(j), measures::conditional_entropy(j.transposed())};
}

// Least alpha in [0,1/2] with key(alpha) <= target, key decreasing in alpha.
Rational search_alpha(const Rational& p, Bits target, bool by_info) {
  auto key = [&](const Rational& a) {
    const auto c = alpha_channel(p, a);
    return by_info ? c.info : -c.residual;
  };
  const Rational half(1, 2);
  if (key(Rational(0)) <= target) return 0;
  if (key(half) > target) return half;
  Rational lo = 0, hi = half;
  for (int j = 1; j <= 200; ++j) {
    Rational a(j, 400);
    a.canonicalize();
    if (key(a) <= target) {
      hi = a;
      break;
    }
    lo = a;
  }
  for (int i = 0; i < 48; ++i) {
    const Rational mid = (lo + hi) / 2;
    if (key(mid) <= target)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

void check_p(const Rational& p) {
  if (p <= 0 || p >= 1) throw Error("usage", "p must lie strictly between 0 and 1");
}

}  // namespace

SFPoint shannon_fano_rd_rate(const Rational& p, Bits R) {
  check_p(p);
  const Bits h = measures::binary_entropy(p.get_d());
  SFPoint pt{R, std::max(0.0, h - R), 0, 0};
  pt.alpha = search_alpha(p, R, true);
  pt.oracle = alpha_channel(p, pt.alpha).residual;
  return pt;
}

SFPoint shannon_fano_rd_distortion(const Rational& p, Bits D) {
  check_p(p);
  const Bits h = measures::binary_entropy(p.get_d());
  SFPoint pt{std::max(0.0, h - D), D, 0, 0};
  pt.alpha = search_alpha(p, -D, false);
  pt.oracle = alpha_channel(p, pt.alpha).info;
  return pt;
}

SphereCheck check_spheres(const RDInstance& inst, std::size_t m, const std::vector<std::uint64_t>& codebook) {
  const auto t = block_tables(inst, m);
  SphereCheck res;
  // owner[b] = (radius, codeword position) of the least-radius sphere.
  std::vector<std::pair<std::int64_t, std::size_t>> owner(t.nx, {kInf, 0});
  std::vector<std::size_t> memberships(t.nx, 0);
  for (std::size_t k = 0; k < codebook.size(); ++k) {
    const auto c = codebook[k];
    if (c >= t.ny) throw Error("usage", "codeword index out of range");
    std::map<std::int64_t, std::vector<std::uint64_t>> spheres;
    for (std::uint64_t b = 0; b < t.nx; ++b)
      if (t.dist[b][c] != kInf) spheres[t.dist[b][c]].push_back(b);
    res.spheres += spheres.size();
    std::vector<int> seen(t.nx, 0);
    for (const auto& [radius, members] : spheres)
      for (auto b : members) {
        if (seen[b]++) res.radii_disjoint = false;
        if (radius < owner[b].first) owner[b] = {radius, k};
      }
  }
  // B'_k = blocks owned by codeword k; ownership is a function, so the B'
  // sets are disjoint exactly when each block is counted once.
  std::vector<std::vector<std::uint64_t>> parts(codebook.size());
  for (std::uint64_t b = 0; b < t.nx; ++b)
    if (owner[b].first != kInf) parts[owner[b].second].push_back(b);
  for (const auto& part : parts)
    for (auto b : part) ++memberships[b];
  for (std::uint64_t b = 0; b < t.nx; ++b) {
    bool reachable = false;
    for (auto c : codebook) reachable |= t.dist[b][c] != kInf;
    if (reachable) {
      ++res.covered;
      if (memberships[b] != 1) res.partition = false;
    } else if (memberships[b] != 0) {
      res.partition = false;
    }
  }
  return res;
}

ExpStructReport expected_structfn_experiment(const algstats::ModelFamily& family, const Dist& f, std::size_t m,
                                             const std::vector<Rational>& r_grid) {
  if (f.size() == 0) throw Error("usage", "empty source");
  const std::size_t n = f.outcomes()[0].size();
  if (m == 0 || n * m > algstats::kMaxFamilyLength) throw Error("budget", "block length exceeds family range");
  std::optional<Rational> level;
  std::uint64_t support = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.outcomes()[i].size() != n || !is_bit_string(f.outcomes()[i]))
      throw Error("usage", "source outcomes must be bit strings of one length");
    if (sgn(f.probs()[i]) == 0) continue;
    if (level && *level != f.probs()[i]) throw Error("source", "source must be uniform on its support");
    level = f.probs()[i];
    ++support;
  }

  std::vector<std::string> outcomes{""};
  std::vector<Rational> probs{Rational(1)};
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<std::string> no;
    std::vector<Rational> np;
    for (std::size_t a = 0; a < outcomes.size(); ++a)
      for (std::size_t b = 0; b < f.size(); ++b) {
        if (sgn(f.probs()[b]) == 0) continue;
        no.push_back(outcomes[a] + f.outcomes()[b]);
        np.push_back(probs[a] * f.probs()[b]);
      }
    outcomes = std::move(no);
    probs = std::move(np);
  }
  const Dist block(outcomes, probs);

  ExpStructReport rep;
  rep.n = n;
  rep.m = m;
  Rational top = 0;
  for (const auto& R : r_grid) top = std::max(top, R);
  const long base = algstats::default_r_max(family, n * m);
  const long r_max = base + static_cast<long>(std::ceil(Rational(top * static_cast<unsigned long>(m)).get_d()));
  const auto eh = algstats::expected_h(family, block, r_max);
  long max_shift = 0;
  for (const auto& R : r_grid) {
    const Rational mr = R * static_cast<unsigned long>(m);
    const long at = static_cast<long>(std::floor(mr.get_d()));
    ExpStructRow row{R, kInfinity, 0, -1, false};
    row.d_star = set_distortion_D(n, m, R, support).D;
    if (at <= r_max) row.expected_h = eh[static_cast<std::size_t>(at)] / static_cast<double>(m);
    row.right_holds = row.d_star <= row.expected_h + kBitsTolerance;
    for (long s = 0; at + s <= r_max; ++s)
      if (eh[static_cast<std::size_t>(at + s)] / static_cast<double>(m) <= row.d_star + kBitsTolerance) {
        row.shift = s;
        break;
      }
    max_shift = std::max(max_shift, row.shift);
    rep.rows.push_back(row);
  }
  rep.c = static_cast<double>(max_shift) - rep.b * std::log2(static_cast<double>(n * m));
  return rep;
}

}  // namespace kolmo::ratedist
