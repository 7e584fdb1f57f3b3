// kolmo: command-line front end for the kolmolab library.

#include "table.hpp"

#include "kolmolab/algstats.hpp"
#include "kolmolab/coding.hpp"
#include "kolmolab/measures.hpp"
#include "kolmolab/probstats.hpp"
#include "kolmolab/ratedist.hpp"
#include "kolmolab/selftest.hpp"
#include "kolmolab/slack.hpp"
#include "kolmolab/toyvm.hpp"
#include "kolmolab/unicode.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace kolmo;
using cli::Cell;
using cli::Table;

struct Global {
  std::string format = "csv";
  std::string out;
  unsigned threads = 1;
};

Global g;

cli::Format format() { return g.format == "json" ? cli::Format::Json : cli::Format::Csv; }

void emit(const Table& t) {
  if (g.out.empty()) {
    cli::write_table(std::cout, t, format());
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw Error("io", "cannot write '" + g.out + "'");
  cli::write_table(f, t, format());
}

std::vector<Rational> rationals(const std::vector<std::string>& tokens) {
  std::vector<Rational> out;
  for (const auto& t : tokens) out.push_back(parse_rational(t));
  return out;
}

std::vector<std::string> split_map_targets(std::size_t k) {
  std::vector<std::string> v;
  for (std::size_t i = 0; i < k; ++i) v.push_back("t" + std::to_string(i));
  return v;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> bit_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream ss(text);
  for (std::string line; std::getline(ss, line);) {
    std::string bits;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) bits += c;
    if (!is_bit_string(bits)) throw Error("parse", "input line is not a bit string");
    out.push_back(bits);
  }
  return out;
}

toyvm::BuildOptions build_options() {
  toyvm::BuildOptions o;
  o.threads = std::max(1u, g.threads);
  return o;
}

Cell bits_cell(Bits b) { return Cell(b); }

// --- coding ---------------------------------------------------------------

void add_coding(CLI::App& app) {
  {
    auto* sub = app.add_subcommand("kraft", "Kraft sum of a codeword-length multiset");
    auto lengths = std::make_shared<std::vector<int>>();
    sub->add_option("lengths", *lengths, "codeword lengths")->required();
    sub->callback([lengths] {
      const auto r = coding::kraft_check(coding::Lengths(*lengths));
      Table t{{"kraft_sum", "status"}, {}};
      t.add({to_string(r.sum), coding::to_string(r.status)});
      emit(t);
    });
  }
  {
    auto* sub = app.add_subcommand("code-from-lengths", "canonical prefix code for a length multiset");
    auto lengths = std::make_shared<std::vector<int>>();
    sub->add_option("lengths", *lengths, "codeword lengths")->required();
    sub->callback([lengths] {
      const auto code = coding::code_from_lengths(coding::Lengths(*lengths));
      Table t{{"symbol", "length", "codeword"}, {}};
      for (std::size_t i = 0; i < code.alphabet().size(); ++i)
        t.add({code.alphabet()[i], static_cast<long long>(code.codewords()[i].size()), code.codewords()[i]});
      emit(t);
    });
  }
  {
    auto* sub = app.add_subcommand("shannon-fano", "Shannon-Fano code of a distribution file");
    auto path = std::make_shared<std::string>();
    sub->add_option("dist", *path, "distribution file (symbol<TAB>p per line)")->required();
    sub->callback([path] {
      const auto d = read_dist_file(*path);
      const auto code = coding::shannon_fano(d);
      Table t{{"symbol", "p", "length", "codeword"}, {}};
      for (std::size_t i = 0; i < d.size(); ++i)
        t.add({d.outcomes()[i], to_string(d.probs()[i]), static_cast<long long>(code.codewords()[i].size()),
               code.codewords()[i]});
      emit(t);
    });
  }
  {
    auto* sub = app.add_subcommand("natural", "self-delimiting code for naturals");
    auto enc = std::make_shared<std::optional<std::uint64_t>>();
    auto dec = std::make_shared<std::optional<std::string>>();
    auto* e = sub->add_option("--encode", *enc, "natural to encode");
    auto* d = sub->add_option("--decode", *dec, "bit string to decode");
    e->excludes(d);
    sub->callback([enc, dec] {
      Table t{{"value", "codeword", "length"}, {}};
      if (*enc) {
        const auto c = coding::encode_natural(**enc);
        t.add({static_cast<long long>(**enc), c, static_cast<long long>(c.size())});
      } else if (*dec) {
        const auto r = coding::decode_natural(**dec);
        if (r.consumed != (*dec)->size()) throw Error("decode", "trailing bits after codeword");
        t.add({static_cast<long long>(r.value), **dec, static_cast<long long>(r.consumed)});
      } else {
        throw Error("usage", "natural needs --encode or --decode");
      }
      emit(t);
    });
  }
}

// --- measures -------------------------------------------------------------

void add_measures(CLI::App& app) {
  {
    auto* sub = app.add_subcommand("entropy", "entropy of a distribution in bits");
    auto path = std::make_shared<std::string>();
    sub->add_option("dist", *path, "distribution file")->required();
    sub->callback([path] {
      Table t{{"entropy"}, {}};
      t.add({bits_cell(measures::entropy(read_dist_file(*path)))});
      emit(t);
    });
  }
  {
    auto* sub = app.add_subcommand("mi", "mutual information of a joint distribution");
    auto path = std::make_shared<std::string>();
    sub->add_option("joint", *path, "joint file (x<TAB>y<TAB>p per line)")->required();
    sub->callback([path] {
      const auto j = read_joint_file(*path);
      Table t{{"H_X", "H_Y", "H_XY", "H_Y_given_X", "I_XY"}, {}};
      t.add({bits_cell(measures::entropy(j.marginal_x())), bits_cell(measures::entropy(j.marginal_y())),
             bits_cell(measures::joint_entropy(j)), bits_cell(measures::conditional_entropy(j)),
             bits_cell(measures::mutual_info(j))});
      emit(t);
    });
  }
  {
    auto* sub = app.add_subcommand("kl", "Kullback-Leibler divergence D(f||g)");
    auto f = std::make_shared<std::string>(), gpath = std::make_shared<std::string>();
    sub->add_option("f", *f, "distribution file f")->required();
    sub->add_option("g", *gpath, "distribution file g")->required();
    sub->callback([f, gpath] {
      Table t{{"kl"}, {}};
      t.add({bits_cell(measures::kl_divergence(read_dist_file(*f), read_dist_file(*gpath)))});
      emit(t);
    });
  }
  {
    auto* sub = app.add_subcommand("dpi", "data processing: I(X;T(Y)) <= I(X;Y) over every map T on Y");
    auto path = std::make_shared<std::string>();
    sub->add_option("joint", *path, "joint file")->required();
    sub->callback([path] {
      const auto j = read_joint_file(*path);
      const auto& ys = j.y_alphabet();
      if (ys.size() > 6) throw Error("budget", "exhaustive maps limited to |Y| <= 6");
      const auto targets = split_map_targets(ys.size());
      Table t{{"map", "I_XY", "I_XTY", "holds"}, {}};
      std::vector<std::size_t> img(ys.size(), 0);
      for (;;) {
        std::map<std::string, std::string> m;
        std::string label;
        for (std::size_t i = 0; i < ys.size(); ++i) {
          m[ys[i]] = targets[img[i]];
          label += (i ? ";" : "") + ys[i] + "->" + targets[img[i]];
        }
        const auto r = measures::data_processing_check(j, m);
        t.add({label, bits_cell(r.lhs), bits_cell(r.rhs), r.holds});
        std::size_t k = 0;
        while (k < img.size() && ++img[k] == ys.size()) img[k++] = 0;
        if (k == img.size()) break;
      }
      emit(t);
    });
  }
}

// --- toy machine ----------------------------------------------------------

struct MachineArgs {
  int L = 20;
  std::uint32_t T = 1000;
  toyvm::Machine machine() const {
    if (L < 1 || L > toyvm::kMaxEnumerableLength) throw Error("usage", "L must lie in 1..26");
    return toyvm::Machine{T, L};
  }
};

void machine_options(CLI::App* sub, MachineArgs& m) {
  sub->add_option("--L", m.L, "maximal program length")->capture_default_str();
  sub->add_option("--T", m.T, "step budget")->capture_default_str();
}

void add_toyvm(CLI::App& app) {
  auto* sub = app.add_subcommand("kolmo-table", "enumerate the toy machine and list khat / mhat");
  auto m = std::make_shared<MachineArgs>();
  auto conds = std::make_shared<std::vector<std::string>>();
  auto cond = std::make_shared<std::string>();
  auto mode = std::make_shared<std::string>("entries");
  auto max_len = std::make_shared<std::size_t>(8);
  auto counting_n = std::make_shared<std::size_t>(6);
  auto save = std::make_shared<std::string>();
  auto dist_path = std::make_shared<std::string>();
  machine_options(sub, *m);
  sub->add_option("--conditions", *conds, "extra conditions to enumerate")->delimiter(',');
  sub->add_option("--cond", *cond, "condition whose table is listed (default: empty)");
  sub->add_option("--mode", *mode, "entries | stats | counting | expected")
      ->check(CLI::IsMember({"entries", "stats", "counting", "expected"}))
      ->capture_default_str();
  sub->add_option("--max-len", *max_len, "entries: longest output listed")->capture_default_str();
  sub->add_option("--n", *counting_n, "counting: string length")->capture_default_str();
  sub->add_option("--dist", *dist_path, "expected: dyadic distribution file over bit strings");
  sub->add_option("--save", *save, "write the binary oracle to this file");
  sub->callback([=] {
    auto all = *conds;
    if (!cond->empty()) all.push_back(*cond);
    auto opt = build_options();
    opt.verify_prefix_free = *mode == "stats";
    const auto o = toyvm::cached_oracle(m->machine(), all, opt);
    if (!save->empty()) {
      std::ofstream f(*save, std::ios::binary);
      if (!f) throw Error("io", "cannot write '" + *save + "'");
      toyvm::write_oracle(f, o);
    }
    if (*mode == "entries") {
      Table t{{"x", "khat", "mhat", "shortest_program"}, {}};
      const auto& tab = o.table(*cond);
      for (const auto& x : tab.sorted_outputs()) {
        if (x.size() > *max_len) continue;
        t.add({x, static_cast<long long>(*o.khat_cond(x, *cond)), to_string(o.mhat_cond(x, *cond)),
               cond->empty() ? *o.shortest_program(x) : std::string()});
      }
      emit(t);
    } else if (*mode == "stats") {
      Table t{{"condition", "L", "T", "halting_programs", "kraft_sum", "prefix_free", "outputs"}, {}};
      for (const auto& c : o.conditions()) {
        const auto& tab = o.table(c);
        t.add({c, static_cast<long long>(m->L), static_cast<long long>(m->T),
               static_cast<long long>(tab.halting_programs), to_string(tab.kraft_sum()),
               tab.prefix_free.value_or(false), static_cast<long long>(tab.entries.size())});
      }
      emit(t);
    } else if (*mode == "counting") {
      Table t{{"n", "m", "count", "total", "below_counting_bound", "below_literal_bound"}, {}};
      for (const auto& r : toyvm::counting_bound(o, *counting_n))
        t.add({static_cast<long long>(r.n), static_cast<long long>(r.m), static_cast<long long>(r.count),
               static_cast<long long>(r.total), r.below_counting_bound, r.below_literal_bound});
      emit(t);
    } else {
      if (dist_path->empty()) throw Error("usage", "expected mode needs --dist");
      const auto e = toyvm::expected_complexity(o, read_dist_file(*dist_path));
      Table t{{"expected_khat", "entropy", "gap", "model_cost"}, {}};
      t.add({bits_cell(e.expected_khat), bits_cell(e.entropy), bits_cell(e.gap), static_cast<long long>(e.model_cost)});
      emit(t);
    }
  });

  auto* slack = app.add_subcommand("slack", "measured slack of the algorithmic identities");
  auto sm = std::make_shared<MachineArgs>();
  sm->L = 24;
  auto ids = std::make_shared<std::vector<std::string>>();
  auto n_max = std::make_shared<std::size_t>(3);
  auto instances = std::make_shared<bool>(false);
  machine_options(slack, *sm);
  slack->add_option("--identity", *ids, "identities (default: all)")->delimiter(',');
  slack->add_option("--n-max", *n_max, "universe: all strings of length <= n-max")->capture_default_str();
  slack->add_flag("--instances", *instances, "list every instance");
  slack->callback([=] {
    std::vector<toyvm::Identity> which;
    if (ids->empty())
      which = toyvm::all_identities();
    else
      for (const auto& s : *ids) which.push_back(toyvm::parse_identity(s));
    const auto universe = toyvm::all_strings(0, *n_max);
    const auto o = toyvm::slack_oracle(sm->machine(), which, universe, build_options());
    if (*instances) {
      Table t{{"identity", "instance", "n", "gap"}, {}};
      for (auto id : which)
        for (const auto& i : toyvm::slack_experiment(o, id, universe).instances)
          t.add({toyvm::to_string(id), i.label, static_cast<long long>(i.n), bits_cell(i.gap)});
      emit(t);
      return;
    }
    Table t{{"identity", "instances", "max_gap", "min_gap"}, {}};
    for (auto id : which) {
      const auto r = toyvm::slack_experiment(o, id, universe);
      t.add({r.identity, static_cast<long long>(r.instances.size()), bits_cell(r.max_gap), bits_cell(r.min_gap)});
    }
    emit(t);
  });
}

// --- statistics -----------------------------------------------------------

void add_algstats(CLI::App& app) {
  auto* sub = app.add_subcommand("structfn", "structure functions h, lambda, beta of a string");
  auto x = std::make_shared<std::string>();
  auto family = std::make_shared<std::string>("masks");
  auto m = std::make_shared<MachineArgs>();
  auto no_beta = std::make_shared<bool>(false);
  auto r_max = std::make_shared<std::optional<long>>();
  sub->add_option("--x", *x, "data string")->required();
  sub->add_option("--family", *family, "model family")->capture_default_str();
  machine_options(sub, *m);
  sub->add_option("--r-max", *r_max, "largest rate on the grid");
  sub->add_flag("--no-beta", *no_beta, "skip beta (no conditional tables)");
  sub->callback([=] {
    if (!is_bit_string(*x) || x->size() > algstats::kMaxFamilyLength)
      throw Error("usage", "x must be a bit string of length <= 14");
    const auto fam = algstats::make_family(*family);
    const auto conds = *no_beta ? std::vector<std::string>{} : algstats::model_conditions(*fam, *x);
    const auto o = toyvm::cached_oracle(m->machine(), conds, build_options());
    const algstats::OracleSource src(o);
    const auto curve = algstats::structure_functions(*x, *fam, src, !*no_beta, *r_max);
    Table t{{"R", "h", "lambda", "beta", "h_witness"}, {}};
    for (const auto& s : curve.samples)
      t.add({static_cast<long long>(s.R), bits_cell(s.h), bits_cell(s.lambda),
             *no_beta ? Cell(std::string()) : bits_cell(s.beta),
             s.h_witness ? curve.models[*s.h_witness].model_code : std::string()});
    emit(t);
  });
}

std::vector<Rational> grid_by_name(const std::string& name) {
  if (name == "default") return probstats::default_grid();
  if (name == "small") return probstats::small_grid();
  std::vector<std::string> tokens;
  std::stringstream ss(name);
  for (std::string tok; std::getline(ss, tok, ',');) tokens.push_back(tok);
  return rationals(tokens);
}

void add_probstats(CLI::App& app) {
  auto* sub = app.add_subcommand("suffstat", "sufficiency of a statistic for the Bernoulli family");
  auto family = std::make_shared<std::string>("bernoulli");
  auto stat = std::make_shared<std::string>("ones");
  auto n = std::make_shared<std::size_t>(4);
  auto grid = std::make_shared<std::string>("default");
  sub->add_option("--family", *family, "parametric family")->check(CLI::IsMember({"bernoulli"}))->capture_default_str();
  sub->add_option("--stat", *stat, "ones | pairs | singleton | full | ones+pairs")->capture_default_str();
  sub->add_option("--n", *n, "string length")->capture_default_str();
  sub->add_option("--grid", *grid, "default | small | comma-separated rationals")->capture_default_str();
  sub->callback([=] {
    if (*n > 14) throw Error("budget", "n limited to 14");
    const auto fam = probstats::bernoulli(*n, grid_by_name(*grid));
    const auto s = probstats::statistic_by_name(*stat);
    Table t{{"formulation", "item", "value_a", "value_b", "sufficient"}, {}};
    const auto exact = probstats::check_sufficiency_exact(fam, s);
    if (exact.witness) {
      const auto& w = *exact.witness;
      t.add({"exact", "witness x=" + w.x + " s=" + w.s, to_string(w.conditional1) + "@" + to_string(w.theta1),
             to_string(w.conditional2) + "@" + to_string(w.theta2), false});
    } else {
      t.add({"exact", "all", std::string(), std::string(), true});
    }
    const auto ex = probstats::check_sufficiency_expectation(fam, s);
    for (std::size_t i = 0; i < ex.gaps.size(); ++i)
      t.add({"expectation", "theta=" + to_string(fam.theta_grid[i]), bits_cell(ex.gaps[i]), std::string(),
             std::abs(ex.gaps[i]) <= kBitsTolerance});
    const auto mi = probstats::sufficiency_via_mi(fam, s, probstats::standard_priors(fam.theta_grid.size()));
    for (const auto& r : mi.rows)
      t.add({"mutual-information", "prior=" + r.prior, bits_cell(r.i_theta_x), bits_cell(r.i_theta_s),
             std::abs(r.i_theta_x - r.i_theta_s) <= kBitsTolerance});
    emit(t);
  });

  auto* w = app.add_subcommand("wiske", "algorithmic versus probabilistic sufficiency of a sequential statistic");
  auto wstat = std::make_shared<std::string>("ones");
  auto lo = std::make_shared<std::size_t>(1), hi = std::make_shared<std::size_t>(8);
  auto wgrid = std::make_shared<std::string>("1/2");
  auto m = std::make_shared<MachineArgs>();
  w->add_option("--stat", *wstat, "statistic whose level sets form S(x)")->capture_default_str();
  w->add_option("--n-lo", *lo, "smallest n")->capture_default_str();
  w->add_option("--n-hi", *hi, "largest n")->capture_default_str();
  w->add_option("--grid", *wgrid, "theta values")->capture_default_str();
  machine_options(w, *m);
  w->callback([=] {
    const auto s = probstats::level_sets(probstats::statistic_by_name(*wstat));
    const auto o = toyvm::cached_oracle(m->machine(), {}, build_options());
    Table t{{"n", "theta", "gap_i", "gap_ii", "c_theta", "holds"}, {}};
    for (const auto& r : probstats::wiske_experiment(s, grid_by_name(*wgrid), o, *lo, *hi))
      t.add({static_cast<long long>(r.n), to_string(r.theta), bits_cell(r.gap_i), bits_cell(r.gap_ii),
             bits_cell(r.c_theta), r.holds});
    emit(t);
  });
}

// --- rate distortion ------------------------------------------------------

void add_ratedist(CLI::App& app) {
  auto* rd = app.add_subcommand("rd", "rate-distortion computations");
  rd->require_subcommand(1);

  auto instance_of = [](const std::string& path, std::size_t set_n, bool subcubes) {
    if (!path.empty()) return ratedist::read_instance_file(path);
    if (set_n > 0) return ratedist::set_instance(set_n, subcubes);
    throw Error("usage", "need --instance or --set-n");
  };

  {
    auto* sub = rd->add_subcommand("brute", "exact D*_m(R) by codebook enumeration");
    auto path = std::make_shared<std::string>();
    auto set_n = std::make_shared<std::size_t>(0);
    auto subcubes = std::make_shared<bool>(false);
    auto m = std::make_shared<std::size_t>(1);
    auto rs = std::make_shared<std::vector<std::string>>();
    sub->add_option("--instance", *path, "instance file");
    sub->add_option("--set-n", *set_n, "finite-set distortion on {0,1}^n");
    sub->add_flag("--subcubes", *subcubes, "set instance: subcube codewords only");
    sub->add_option("--m", *m, "block length")->capture_default_str();
    sub->add_option("--R", *rs, "rates")->delimiter(',')->required();
    sub->callback([=] {
      const auto inst = instance_of(*path, *set_n, *subcubes);
      Table t{{"R", "D", "mechanism", "witness_size", "codebook"}, {}};
      for (const auto& R : rationals(*rs)) {
        const auto r = ratedist::brute_force_D(inst, *m, R);
        std::string cb;
        for (const auto& c : r.codebook) cb += (cb.empty() ? "" : " ") + c;
        t.add({to_string(R), r.D ? to_string(*r.D) : std::string("inf"), "brute-force m=" + std::to_string(*m),
               static_cast<long long>(r.codebook_size), cb});
      }
      emit(t);
    });
  }
  {
    auto* sub = rd->add_subcommand("ba", "Blahut-Arimoto rate-distortion point");
    auto path = std::make_shared<std::string>();
    auto ds = std::make_shared<std::vector<double>>();
    auto rs = std::make_shared<std::vector<double>>();
    auto tol = std::make_shared<double>(1e-9);
    sub->add_option("--instance", *path, "instance file")->required();
    sub->add_option("--D", *ds, "target distortions")->delimiter(',');
    sub->add_option("--R", *rs, "target rates")->delimiter(',');
    sub->add_option("--tol", *tol, "convergence tolerance in bits")->capture_default_str();
    sub->callback([=] {
      const auto inst = ratedist::read_instance_file(*path);
      ratedist::BAOptions opt;
      opt.tol = *tol;
      Table t{{"R", "D", "mechanism", "slope", "iterations", "monotone"}, {}};
      auto row = [&](const ratedist::BAResult& r) {
        t.add({bits_cell(r.R), bits_cell(r.D), "blahut-arimoto", bits_cell(r.slope),
               static_cast<long long>(r.iterations), r.monotone});
      };
      for (double D : *ds) row(ratedist::blahut_arimoto(inst, D, opt));
      for (double R : *rs) row(ratedist::blahut_arimoto_rate(inst, R, opt));
      if (ds->empty() && rs->empty()) throw Error("usage", "need --D or --R");
      emit(t);
    });
  }
  {
    auto* sub = rd->add_subcommand("sfbinary", "Shannon-Fano distortion on a binary source");
    auto p = std::make_shared<std::string>("1/2");
    auto rs = std::make_shared<std::vector<double>>();
    sub->add_option("--p", *p, "P(X=1)")->capture_default_str();
    sub->add_option("--R", *rs, "rates")->delimiter(',')->required();
    sub->callback([=] {
      Table t{{"R", "D", "mechanism", "oracle_D", "alpha"}, {}};
      for (double R : *rs) {
        const auto pt = ratedist::shannon_fano_rd_rate(parse_rational(*p), R);
        t.add({bits_cell(pt.R), bits_cell(pt.D), "closed-form", bits_cell(pt.oracle), bits_cell(pt.alpha.get_d())});
      }
      emit(t);
    });
  }
  {
    auto* sub = rd->add_subcommand("expstruct", "expected structure function against D*_m(R)");
    auto family = std::make_shared<std::string>("masks");
    auto n = std::make_shared<std::size_t>(8);
    auto m = std::make_shared<std::size_t>(1);
    auto source = std::make_shared<std::string>("uniform");
    auto rs = std::make_shared<std::vector<std::string>>();
    sub->add_option("--family", *family, "model family")->capture_default_str();
    sub->add_option("--n", *n, "outcome length")->capture_default_str();
    sub->add_option("--m", *m, "block length")->capture_default_str();
    sub->add_option("--source", *source, "uniform | point:<x> | file path")->capture_default_str();
    sub->add_option("--R", *rs, "rates (default 0..n)")->delimiter(',');
    sub->callback([=] {
      Dist f;
      if (*source == "uniform")
        f = Dist::uniform(toyvm::all_strings(*n, *n));
      else if (source->rfind("point:", 0) == 0)
        f = Dist({source->substr(6)}, {Rational(1)});
      else
        f = read_dist_file(*source);
      std::vector<Rational> grid = rationals(*rs);
      if (grid.empty())
        for (std::size_t R = 0; R <= *n; ++R) grid.emplace_back(static_cast<unsigned long>(R));
      const auto rep = ratedist::expected_structfn_experiment(*algstats::make_family(*family), f, *m, grid);
      Table t{{"R", "expected_h", "d_star", "shift", "right_holds", "b", "c"}, {}};
      for (const auto& r : rep.rows)
        t.add({to_string(r.R), bits_cell(r.expected_h), bits_cell(r.d_star), static_cast<long long>(r.shift),
               r.right_holds, bits_cell(rep.b), bits_cell(rep.c)});
      emit(t);
    });
  }
}

// --- universal codes ------------------------------------------------------

void add_unicode(CLI::App& app) {
  auto* uc = app.add_subcommand("ucode", "universal codes");
  uc->require_subcommand(1);
  auto family_of = [](const std::string& spec) {
    if (spec == "default") return unicode::bernoulli_grid(10);
    return unicode::read_family_file(spec);
  };

  {
    auto* sub = uc->add_subcommand("encode", "encode bit-string lines into a raw bitstream");
    auto family = std::make_shared<std::string>("binomial");
    auto in = std::make_shared<std::string>(), out = std::make_shared<std::string>();
    sub->add_option("--family", *family, "binomial | default | family spec file")->capture_default_str();
    sub->add_option("--in", *in, "text file, one bit string per line")->required();
    sub->add_option("--out", *out, "output bitstream")->required();
    sub->callback([=] {
      std::string stream;
      std::optional<unicode::SourceFamily> fam;
      if (*family != "binomial") fam = family_of(*family);
      const auto lines = bit_lines(read_text(*in));
      for (const auto& x : lines) stream += fam ? unicode::two_part_encode(*fam, x) : unicode::binomial_encode(x);
      std::ofstream f(*out, std::ios::binary);
      if (!f) throw Error("io", "cannot write '" + *out + "'");
      unicode::write_bitstream(f, stream);
      Table t{{"strings", "bits"}, {}};
      t.add({static_cast<long long>(lines.size()), static_cast<long long>(stream.size())});
      emit(t);
    });
  }
  {
    auto* sub = uc->add_subcommand("decode", "decode a raw bitstream into bit-string lines");
    auto family = std::make_shared<std::string>("binomial");
    auto in = std::make_shared<std::string>(), out = std::make_shared<std::string>();
    sub->add_option("--family", *family, "binomial | default | family spec file")->capture_default_str();
    sub->add_option("--in", *in, "input bitstream")->required();
    sub->add_option("--out", *out, "output text file (default stdout)");
    sub->callback([=] {
      std::ifstream f(*in, std::ios::binary);
      if (!f) throw Error("io", "cannot open '" + *in + "'");
      const auto bits = unicode::read_bitstream(f);
      std::optional<unicode::SourceFamily> fam;
      if (*family != "binomial") fam = family_of(*family);
      coding::BitReader r(bits);
      std::string text;
      while (!r.at_end()) text += (fam ? unicode::two_part_decode(*fam, r) : unicode::binomial_decode(r)) + "\n";
      if (out->empty()) {
        std::cout << text;
      } else {
        std::ofstream o(*out);
        if (!o) throw Error("io", "cannot write '" + *out + "'");
        o << text;
      }
    });
  }
  {
    auto* sub = uc->add_subcommand("report", "redundancy of the two-part universal code");
    auto family = std::make_shared<std::string>("default");
    auto corpus = std::make_shared<std::string>();
    auto gens = std::make_shared<std::vector<std::string>>();
    auto n = std::make_shared<std::size_t>(64);
    auto seed = std::make_shared<std::optional<std::uint64_t>>();
    sub->add_option("--family", *family, "default | family spec file")->capture_default_str();
    sub->add_option("--corpus", *corpus, "text file, one bit string per line");
    sub->add_option("--generate", *gens, "zeros | alternating | random")->delimiter(',');
    sub->add_option("--n", *n, "generated string length")->capture_default_str();
    sub->add_option("--seed", *seed, "seed for the random corpus");
    sub->callback([=] {
      const auto fam = family_of(*family);
      std::vector<std::pair<std::string, BitString>> strings;
      if (!corpus->empty()) {
        std::size_t i = 0;
        for (const auto& x : bit_lines(read_text(*corpus))) strings.emplace_back("line" + std::to_string(++i), x);
      }
      for (const auto& gname : *gens) {
        if (gname == "zeros") {
          strings.emplace_back("zeros", BitString(*n, '0'));
        } else if (gname == "alternating") {
          BitString x;
          for (std::size_t i = 0; i < *n; ++i) x += i % 2 ? '1' : '0';
          strings.emplace_back("alternating", x);
        } else if (gname == "random") {
          if (!*seed) throw Error("usage", "random corpus needs --seed");
          strings.emplace_back("random", unicode::sample_bernoulli(Rational(1, 2), *n, **seed));
        } else {
          throw Error("usage", "unknown corpus generator '" + gname + "'");
        }
      }
      if (strings.empty()) throw Error("usage", "need --corpus or --generate");
      const auto rep = unicode::redundancy_report(fam, strings);
      Table t{{"label", "n", "length", "best_L_k", "redundancy", "bound_holds", "binomial_length"}, {}};
      for (std::size_t k = 1; k <= fam.members.size(); ++k) t.columns.push_back("L" + std::to_string(k));
      for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const auto& r = rep.rows[i];
        std::vector<Cell> row{r.label, static_cast<long long>(r.n), static_cast<long long>(r.length),
                              static_cast<long long>(r.best), static_cast<long long>(r.redundancy), r.bound_holds,
                              static_cast<long long>(unicode::binomial_encode(strings[i].second).size())};
        for (const auto& l : r.per_k) row.push_back(l ? Cell(static_cast<long long>(*l)) : Cell(std::string("inf")));
        t.add(row);
      }
      emit(t);
    });
  }
}

void add_selftest(CLI::App& app) {
  auto* sub = app.add_subcommand("selftest", "run the invariant suite");
  sub->callback([] {
    const auto results = run_selftest(std::max(1u, g.threads));
    Table t{{"property", "pass", "detail"}, {}};
    bool ok = true;
    for (const auto& r : results) {
      t.add({r.property, r.pass, r.detail});
      ok = ok && r.pass;
    }
    emit(t);
    if (!ok) throw Error("selftest", "one or more properties failed");
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kolmo: Kolmogorov complexity and Shannon information laboratory"};
  app.require_subcommand(1);
  app.add_option("--format", g.format, "csv | json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--out", g.out, "write the result table to this file");
  app.add_option("--threads", g.threads, "worker threads for enumeration")->capture_default_str();
  app.fallthrough();

  add_coding(app);
  add_measures(app);
  add_toyvm(app);
  add_algstats(app);
  add_probstats(app);
  add_ratedist(app);
  add_unicode(app);
  add_selftest(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Error& e) {
    std::cerr << nlohmann::json{{"error", e.code()}, {"message", e.what()}}.dump() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", "internal"}, {"message", e.what()}}.dump() << '\n';
    return 3;
  }
  return 0;
}
