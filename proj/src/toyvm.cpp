#include "kolmolab/toyvm.hpp"

#include "kolmolab/coding.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

namespace kolmo::toyvm {

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Halt: return "Halt";
    case Outcome::OutOfTime: return "OutOfTime";
    case Outcome::ReadPastEnd: return "ReadPastEnd";
    case Outcome::Trailing: return "Trailing";
    case Outcome::Fault: return "Fault";
  }
  return "?";
}

// --- interpreter -------------------------------------------------------------

namespace {

struct Stop {
  Outcome outcome;
};

struct Node {
  enum Kind { Emit, Copy, Exec, Repeat } kind;
  BitString literal;
  std::uint64_t count = 0;
  std::vector<Node> body;
};

class Interpreter {
 public:
  Interpreter(std::string_view program, std::string_view condition, std::uint64_t budget)
      : prog_(program), cond_(condition), budget_(budget) {}

  RunResult execute() {
    try {
      for (;;) {
        auto item = parse_item();
        if (!item) {
          charge(1);
          return finish(pos_ == prog_.size() ? Outcome::Halt : Outcome::Trailing);
        }
        exec(*item);
      }
    } catch (const Stop& s) {
      return finish(s.outcome);
    }
  }

 private:
  RunResult finish(Outcome o) {
    if (o != Outcome::Halt) out_.clear();
    return {o, std::move(out_), steps_, pos_};
  }

  char bit() {
    if (pos_ >= prog_.size()) throw Stop{Outcome::ReadPastEnd};
    const char c = prog_[pos_++];
    if (c != '0' && c != '1') throw Stop{Outcome::Fault};
    return c;
  }

  std::uint64_t gamma() {
    int zeros = 0;
    while (bit() == '0')
      if (++zeros > 62) throw Stop{Outcome::Fault};
    std::uint64_t k = 1;
    for (int i = 0; i < zeros; ++i) k = (k << 1) | (bit() == '1' ? 1U : 0U);
    return k;
  }

  // Nothing for HALT/END.
  std::optional<Node> parse_item() {
    if (bit() == '0') return std::nullopt;
    Node n{};
    if (bit() == '0') {
      n.kind = Node::Emit;
      const auto k = gamma();
      for (std::uint64_t i = 0; i < k; ++i) n.literal.push_back(bit());
      return n;
    }
    if (bit() == '0') {
      n.kind = Node::Repeat;
      n.count = gamma();
      while (auto inner = parse_item()) n.body.push_back(std::move(*inner));
      return n;
    }
    n.kind = bit() == '0' ? Node::Copy : Node::Exec;
    return n;
  }

  void charge(std::uint64_t s) {
    steps_ += s;
    if (steps_ > budget_) throw Stop{Outcome::OutOfTime};
  }

  void exec(const Node& n) {
    switch (n.kind) {
      case Node::Emit:
        charge(1 + n.literal.size());
        out_ += n.literal;
        return;
      case Node::Copy:
        charge(1 + cond_.size());
        out_ += cond_;
        return;
      case Node::Exec: {
        charge(1);
        const auto inner = run(cond_, {}, budget_ - steps_);
        if (inner.outcome == Outcome::OutOfTime) throw Stop{Outcome::OutOfTime};
        if (inner.outcome != Outcome::Halt) throw Stop{Outcome::Fault};
        charge(inner.steps);
        out_ += inner.output;
        return;
      }
      case Node::Repeat:
        charge(1);
        for (std::uint64_t i = 0; i < n.count; ++i) {
          charge(1);
          for (const auto& item : n.body) exec(item);
        }
        return;
    }
  }

  std::string_view prog_;
  std::string_view cond_;
  std::uint64_t budget_;
  std::size_t pos_ = 0;
  std::uint64_t steps_ = 0;
  BitString out_;
};

}  // namespace

RunResult run(std::string_view program, std::string_view condition, std::uint64_t step_budget) {
  if (step_budget < 1) throw Error("budget", "step budget must be >= 1");
  return Interpreter(program, condition, step_budget).execute();
}

// --- program construction ----------------------------------------------------

BitString gamma_code(std::uint64_t k) {
  if (k == 0) throw Error("gamma", "gamma code is defined for k >= 1");
  int width = 63;
  while (!((k >> width) & 1U)) --width;
  BitString s(static_cast<std::size_t>(width), '0');
  for (int b = width; b >= 0; --b) s.push_back(((k >> b) & 1U) ? '1' : '0');
  return s;
}

std::size_t gamma_length(std::uint64_t k) {
  if (k == 0) throw Error("gamma", "gamma code is defined for k >= 1");
  std::size_t width = 0;
  while (k >> (width + 1)) ++width;
  return 2 * width + 1;
}

namespace op {
BitString emit(std::string_view literal) {
  if (literal.empty()) throw Error("program", "EMIT needs at least one literal bit");
  return "10" + gamma_code(literal.size()) + std::string(literal);
}
BitString copy() { return "1110"; }
BitString exec() { return "1111"; }
BitString repeat(std::uint64_t count, std::string_view body_items) {
  return "110" + gamma_code(count) + std::string(body_items) + "0";
}
BitString halt() { return "0"; }
}  // namespace op

BitString program(std::string_view items) { return std::string(items) + op::halt(); }

BitString copy_program() { return program(op::copy()); }

std::size_t literal_program_length(std::size_t n) { return n + literal_overhead(n); }

std::size_t literal_overhead(std::size_t n) { return 3 + gamma_length(n); }

BitString pair_string(std::string_view x, std::string_view y) {
  return coding::encode_natural(x.size()) + std::string(x) + std::string(y);
}

std::vector<BitString> all_strings(std::size_t lo, std::size_t hi) {
  std::vector<BitString> out;
  for (std::size_t n = lo; n <= hi; ++n)
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) out.push_back(to_bits(BigInt(static_cast<unsigned long>(v)), n));
  return out;
}

// --- tables ------------------------------------------------------------------

const TableEntry* ComplexityTable::find(std::string_view x) const {
  const auto it = entries.find(BitString(x));
  return it == entries.end() ? nullptr : &it->second;
}

Rational ComplexityTable::kraft_sum() const {
  Rational r(BigInt(static_cast<unsigned long>(kraft_numerator)));
  return r * pow2(-max_program_length);
}

std::vector<BitString> ComplexityTable::sorted_outputs() const {
  std::vector<BitString> out;
  out.reserve(entries.size());
  for (const auto& [x, e] : entries) out.push_back(x);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

namespace {

// A parsed fragment (item or item sequence) of a known bit length.
struct Frag {
  std::uint32_t bits;
  std::uint32_t steps;
  bool overflow;  // output longer than the cap; text dropped
  BitString out;
};

struct CondBehavior {
  bool copy_ok = false;
  std::uint32_t copy_steps = 0;
  bool exec_ok = false;
  std::uint32_t exec_steps = 0;
  BitString exec_out;

  std::string signature(std::string_view cond) const {
    std::string s = copy_ok ? "C" + std::string(cond) : "-";
    s += '|';
    if (exec_ok) s += "E" + std::to_string(exec_steps) + ":" + exec_out;
    else s += '-';
    return s;
  }
};

CondBehavior behavior(const Machine& m, std::string_view cond) {
  CondBehavior b;
  const std::uint64_t copy_steps = 1 + cond.size();
  if (copy_steps + 1 <= m.step_budget) {
    b.copy_ok = true;
    b.copy_steps = static_cast<std::uint32_t>(copy_steps);
  }
  if (!cond.empty()) {
    const auto r = run(cond, {}, m.step_budget);
    if (r.outcome == Outcome::Halt && r.steps + 2 <= m.step_budget) {
      b.exec_ok = true;
      b.exec_steps = static_cast<std::uint32_t>(1 + r.steps);
      b.exec_out = r.output;
    }
  }
  return b;
}

class Enumerator {
 public:
  Enumerator(const Machine& m, const CondBehavior& b, std::string_view cond, std::size_t cap)
      : m_(m), b_(b), cond_(cond), cap_(cap) {}

  ComplexityTable build(bool verify) {
    const int L = m_.max_program_length;
    const std::uint32_t T = m_.step_budget;
    ComplexityTable t;
    t.condition = std::string(cond_);
    t.max_program_length = L;
    t.halting_by_length.assign(static_cast<std::size_t>(L) + 1, 0);
    std::vector<std::uint64_t> keys;

    items_.assign(static_cast<std::size_t>(L) + 1, {});
    bodies_.assign(static_cast<std::size_t>(L) + 1, {});
    for (int l = 1; l <= L - 1; ++l) {
      make_items(l);
      if (l <= L - 4) make_bodies(l);
    }

    auto record = [&](int len, std::uint32_t bits, std::uint32_t steps, bool overflow, const BitString& out) {
      if (steps + 1 > T) return;
      ++t.halting_programs;
      ++t.halting_by_length[static_cast<std::size_t>(len)];
      const std::uint64_t weight = std::uint64_t{1} << (L - len);
      t.kraft_numerator += weight;
      if (verify) keys.push_back((std::uint64_t{bits} << (40 - len)) << 8 | static_cast<std::uint64_t>(len));
      if (overflow) return;
      auto [it, fresh] = t.entries.try_emplace(out, TableEntry{len, bits, 0});
      auto& e = it->second;
      if (!fresh && (len < e.khat || (len == e.khat && bits < e.first_program))) {
        e.khat = len;
        e.first_program = bits;
      }
      e.mhat_numerator += weight;
    };

    record(1, 0, 0, false, BitString());
    BitString joined;
    for (int l = 5; l <= L; ++l) {
      for (int l1 = 4; l1 <= l - 1; ++l1) {
        const auto& rest = bodies_[static_cast<std::size_t>(l - l1)];
        for (const auto& it : items_[static_cast<std::size_t>(l1)])
          for (const auto& r : rest) {
            const std::uint32_t steps = it.steps + r.steps;
            if (steps + 1 > T) continue;
            const std::uint32_t bits = (it.bits << (l - l1)) | r.bits;
            const bool overflow = it.overflow || r.overflow || it.out.size() + r.out.size() > cap_;
            if (!overflow) {
              joined.assign(it.out);
              joined += r.out;
            }
            record(l, bits, steps, overflow, joined);
          }
      }
    }

    if (verify) {
      std::sort(keys.begin(), keys.end());
      bool ok = true;
      for (std::size_t i = 1; i < keys.size() && ok; ++i) {
        const auto la = static_cast<int>(keys[i - 1] & 0xFF);
        const auto a = keys[i - 1] >> 8;
        const auto b = keys[i] >> 8;
        if ((a >> (40 - la)) == (b >> (40 - la))) ok = false;
      }
      t.prefix_free = ok;
    }
    return t;
  }

 private:
  Frag concat_out(std::uint32_t bits, std::uint64_t steps, const Frag& a, const Frag& b) const {
    Frag f{bits, static_cast<std::uint32_t>(steps), a.overflow || b.overflow, {}};
    if (!f.overflow && a.out.size() + b.out.size() > cap_) f.overflow = true;
    if (!f.overflow) f.out = a.out + b.out;
    return f;
  }

  void make_items(int l) {
    const std::uint32_t T = m_.step_budget;
    auto& dst = items_[static_cast<std::size_t>(l)];
    // EMIT k: 2 + |gamma(k)| + k bits.
    for (std::uint64_t k = 1; 2 + gamma_length(k) + k <= static_cast<std::size_t>(l); ++k) {
      if (2 + gamma_length(k) + k != static_cast<std::size_t>(l)) continue;
      if (1 + k + 1 > T) continue;
      const std::uint32_t head = (0b10u << gamma_length(k)) | static_cast<std::uint32_t>(k);
      const bool overflow = k > cap_;
      for (std::uint32_t lit = 0; lit < (1u << k); ++lit) {
        Frag f{(head << k) | lit, static_cast<std::uint32_t>(1 + k), overflow, {}};
        if (!overflow) f.out = to_bits(BigInt(lit), k);
        dst.push_back(std::move(f));
      }
    }
    if (l == 4) {
      if (b_.copy_ok) {
        Frag f{0b1110, b_.copy_steps, cond_.size() > cap_, {}};
        if (!f.overflow) f.out = cond_;
        dst.push_back(std::move(f));
      }
      if (b_.exec_ok) {
        Frag f{0b1111, b_.exec_steps, b_.exec_out.size() > cap_, {}};
        if (!f.overflow) f.out = b_.exec_out;
        dst.push_back(std::move(f));
      }
    }
    // REPEAT c: 3 + |gamma(c)| + body bits.
    for (std::uint64_t c = 1; 3 + gamma_length(c) + 1 <= static_cast<std::size_t>(l) && c + 1 < T; ++c) {
      const auto g = gamma_length(c);
      const int body_len = l - 3 - static_cast<int>(g);
      const std::uint32_t head = (0b110u << g) | static_cast<std::uint32_t>(c);
      for (const auto& body : bodies_[static_cast<std::size_t>(body_len)]) {
        const std::uint64_t steps = 1 + c * (1 + std::uint64_t{body.steps});
        if (steps + 1 > T) continue;
        Frag f{(head << body_len) | body.bits, static_cast<std::uint32_t>(steps), body.overflow, {}};
        if (!f.overflow && body.out.size() * c > cap_) f.overflow = true;
        if (!f.overflow) {
          f.out.reserve(body.out.size() * c);
          for (std::uint64_t i = 0; i < c; ++i) f.out += body.out;
        }
        dst.push_back(std::move(f));
      }
    }
  }

  void make_bodies(int l) {
    const std::uint32_t T = m_.step_budget;
    auto& dst = bodies_[static_cast<std::size_t>(l)];
    if (l == 1) {
      dst.push_back(Frag{0, 0, false, {}});
      return;
    }
    for (int l1 = 4; l1 <= l - 1; ++l1)
      for (const auto& it : items_[static_cast<std::size_t>(l1)])
        for (const auto& r : bodies_[static_cast<std::size_t>(l - l1)]) {
          const std::uint64_t steps = std::uint64_t{it.steps} + r.steps;
          if (steps + 1 > T) continue;
          dst.push_back(concat_out((it.bits << (l - l1)) | r.bits, steps, it, r));
        }
  }

  const Machine& m_;
  const CondBehavior& b_;
  std::string_view cond_;
  std::size_t cap_;
  std::vector<std::vector<Frag>> items_;
  std::vector<std::vector<Frag>> bodies_;
};

void check_machine(const Machine& m) {
  if (m.max_program_length < 1 || m.max_program_length > kMaxEnumerableLength)
    throw Error("budget", "L_max = " + std::to_string(m.max_program_length) + " outside the enumerable range 1.." +
                              std::to_string(kMaxEnumerableLength));
  if (m.step_budget < 1) throw Error("budget", "step budget must be >= 1");
}

}  // namespace

ComplexityOracle build_oracle(const Machine& machine, const std::vector<std::string>& conditions,
                              const BuildOptions& options) {
  check_machine(machine);
  if (options.output_cap > kMaxTableOutput)
    throw Error("budget", "output cap above " + std::to_string(kMaxTableOutput));
  for (const auto& c : conditions)
    if (!is_bit_string(c)) throw Error("condition", "condition '" + c + "' is not a bit string");

  std::set<std::string> conds(conditions.begin(), conditions.end());
  conds.insert(std::string());

  // Group conditions by behavior; one enumeration per group.
  std::map<std::string, std::vector<std::string>> groups;
  std::map<std::string, CondBehavior> behaviors;
  for (const auto& c : conds) {
    auto b = behavior(machine, c);
    const auto sig = b.signature(c);
    groups[sig].push_back(c);
    behaviors.emplace(sig, std::move(b));
  }
  std::vector<std::string> sigs;
  for (const auto& [sig, members] : groups) sigs.push_back(sig);

  std::vector<std::shared_ptr<const ComplexityTable>> built(sigs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < sigs.size();) {
      try {
        const auto& rep = groups.at(sigs[i]).front();
        Enumerator e(machine, behaviors.at(sigs[i]), rep, options.output_cap);
        built[i] = std::make_shared<const ComplexityTable>(e.build(options.verify_prefix_free));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned n_threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(sigs.size())));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  ComplexityOracle oracle;
  oracle.machine_ = machine;
  oracle.output_cap_ = options.output_cap;
  for (std::size_t i = 0; i < sigs.size(); ++i)
    for (const auto& c : groups.at(sigs[i])) oracle.tables_.emplace(c, built[i]);
  return oracle;
}

ComplexityTable brute_force_table(const Machine& machine, std::string_view condition, std::size_t output_cap) {
  check_machine(machine);
  const int L = machine.max_program_length;
  ComplexityTable t;
  t.condition = std::string(condition);
  t.max_program_length = L;
  t.halting_by_length.assign(static_cast<std::size_t>(L) + 1, 0);
  std::vector<BitString> halting;
  for (int l = 1; l <= L; ++l)
    for (std::uint32_t v = 0; v < (1u << l); ++v) {
      const BitString p = to_bits(BigInt(v), static_cast<std::size_t>(l));
      const auto r = run(p, condition, machine.step_budget);
      if (r.outcome != Outcome::Halt) continue;
      halting.push_back(p);
      ++t.halting_programs;
      ++t.halting_by_length[static_cast<std::size_t>(l)];
      const std::uint64_t weight = std::uint64_t{1} << (L - l);
      t.kraft_numerator += weight;
      if (r.output.size() > output_cap) continue;
      // Lengths ascend and values ascend within a length, so the first hit is x*.
      auto [it, fresh] = t.entries.try_emplace(r.output, TableEntry{l, v, 0});
      it->second.mhat_numerator += weight;
    }
  t.prefix_free = coding::is_prefix_free(std::move(halting));
  return t;
}

// --- oracle queries ----------------------------------------------------------

bool ComplexityOracle::has_condition(std::string_view c) const { return tables_.find(c) != tables_.end(); }

const ComplexityTable& ComplexityOracle::table(std::string_view c) const {
  const auto it = tables_.find(c);
  if (it == tables_.end()) throw Error("condition", "oracle was not built for condition '" + std::string(c) + "'");
  return *it->second;
}

std::vector<std::string> ComplexityOracle::conditions() const {
  std::vector<std::string> out;
  for (const auto& [c, t] : tables_) out.push_back(c);
  return out;
}

std::optional<int> ComplexityOracle::khat_cond(std::string_view x, std::string_view c) const {
  const auto* e = table(c).find(x);
  if (!e) return std::nullopt;
  return e->khat;
}

int ComplexityOracle::khat_cond_at(std::string_view x, std::string_view c) const {
  const auto k = khat_cond(x, c);
  if (!k)
    throw Error("undefined", "no program within budget outputs '" + std::string(x) + "' given '" + std::string(c) + "'");
  return *k;
}

Rational ComplexityOracle::mhat_cond(std::string_view x, std::string_view c) const {
  const auto& t = table(c);
  const auto* e = t.find(x);
  if (!e) return 0;
  return Rational(BigInt(static_cast<unsigned long>(e->mhat_numerator))) * pow2(-t.max_program_length);
}

std::optional<BitString> ComplexityOracle::shortest_program(std::string_view x) const {
  const auto* e = table({}).find(x);
  if (!e) return std::nullopt;
  return to_bits(BigInt(e->first_program), static_cast<std::size_t>(e->khat));
}

BitString ComplexityOracle::star(std::string_view x) const {
  auto p = shortest_program(x);
  if (!p) throw Error("undefined", "no program within budget outputs '" + std::string(x) + "'");
  return *p;
}

// --- persistence -------------------------------------------------------------

namespace {

constexpr char kMagic[8] = {'K', 'O', 'L', 'M', 'O', 'T', 'B', 'L'};
constexpr std::uint32_t kFormatVersion = 1;

void put_u64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b, 8);
}
void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b, 4);
}
void put_str(std::ostream& out, std::string_view s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::uint64_t get_u(std::istream& in, int bytes) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), bytes)) throw Error("table", "truncated table file");
  std::uint64_t v = 0;
  for (int i = bytes - 1; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}
std::uint32_t get_u32(std::istream& in) { return static_cast<std::uint32_t>(get_u(in, 4)); }
std::uint64_t get_u64(std::istream& in) { return get_u(in, 8); }
std::string get_str(std::istream& in) {
  const auto n = get_u32(in);
  if (n > (1u << 24)) throw Error("table", "corrupt string length in table file");
  std::string s(n, '\0');
  if (!in.read(s.data(), n)) throw Error("table", "truncated table file");
  return s;
}

}  // namespace

void write_oracle(std::ostream& out, const ComplexityOracle& oracle) {
  // Group conditions by shared table; order by first condition for determinism.
  std::vector<std::pair<const ComplexityTable*, std::vector<std::string>>> groups;
  for (const auto& c : oracle.conditions()) {
    const auto* t = &oracle.table(c);
    auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == t; });
    if (it == groups.end()) groups.push_back({t, {c}});
    else it->second.push_back(c);
  }
  out.write(kMagic, 8);
  put_u32(out, kFormatVersion);
  put_str(out, kMachineVersion);
  put_u32(out, oracle.machine().step_budget);
  put_u32(out, static_cast<std::uint32_t>(oracle.machine().max_program_length));
  put_u32(out, static_cast<std::uint32_t>(oracle.output_cap()));
  put_u32(out, static_cast<std::uint32_t>(groups.size()));
  for (const auto& [t, conds] : groups) {
    put_u32(out, static_cast<std::uint32_t>(conds.size()));
    for (const auto& c : conds) put_str(out, c);
    put_str(out, t->condition);
    put_u64(out, t->halting_programs);
    put_u64(out, t->kraft_numerator);
    put_u32(out, static_cast<std::uint32_t>(t->halting_by_length.size()));
    for (auto h : t->halting_by_length) put_u64(out, h);
    put_u32(out, t->prefix_free ? (*t->prefix_free ? 2 : 1) : 0);
    const auto xs = t->sorted_outputs();
    put_u64(out, xs.size());
    const std::uint64_t denominator = std::uint64_t{1} << t->max_program_length;
    for (const auto& x : xs) {
      const auto& e = t->entries.at(x);
      put_str(out, x);
      put_u32(out, static_cast<std::uint32_t>(e.khat));
      put_u32(out, e.first_program);
      put_u64(out, e.mhat_numerator);
      put_u64(out, denominator);
    }
  }
  if (!out) throw Error("io", "failed writing table");
}

ComplexityOracle read_oracle(std::istream& in) {
  char magic[8];
  if (!in.read(magic, 8) || !std::equal(magic, magic + 8, kMagic)) throw Error("table", "not a complexity table file");
  if (get_u32(in) != kFormatVersion) throw Error("table", "unsupported table format version");
  const auto tag = get_str(in);
  if (tag != kMachineVersion) throw Error("table", "table built for machine '" + tag + "', expected " + kMachineVersion);
  ComplexityOracle o;
  o.machine_.step_budget = get_u32(in);
  o.machine_.max_program_length = static_cast<int>(get_u32(in));
  check_machine(o.machine_);
  o.output_cap_ = get_u32(in);
  const auto n_groups = get_u32(in);
  for (std::uint32_t g = 0; g < n_groups; ++g) {
    std::vector<std::string> conds(get_u32(in));
    for (auto& c : conds) c = get_str(in);
    auto t = std::make_shared<ComplexityTable>();
    t->condition = get_str(in);
    t->max_program_length = o.machine_.max_program_length;
    t->halting_programs = get_u64(in);
    t->kraft_numerator = get_u64(in);
    t->halting_by_length.resize(get_u32(in));
    for (auto& h : t->halting_by_length) h = get_u64(in);
    const auto pf = get_u32(in);
    if (pf != 0) t->prefix_free = pf == 2;
    const auto n = get_u64(in);
    const std::uint64_t denominator = std::uint64_t{1} << t->max_program_length;
    for (std::uint64_t i = 0; i < n; ++i) {
      auto x = get_str(in);
      TableEntry e;
      e.khat = static_cast<int>(get_u32(in));
      e.first_program = get_u32(in);
      e.mhat_numerator = get_u64(in);
      if (get_u64(in) != denominator) throw Error("table", "inconsistent m-hat denominator");
      t->entries.emplace(std::move(x), e);
    }
    std::shared_ptr<const ComplexityTable> shared = std::move(t);
    for (const auto& c : conds) o.tables_.emplace(c, shared);
  }
  return o;
}

ComplexityOracle cached_oracle(const Machine& machine, const std::vector<std::string>& conditions,
                               const BuildOptions& options) {
  const char* dir = std::getenv("KOLMOLAB_CACHE");
  if (!dir || !*dir) return build_oracle(machine, conditions, options);

  std::set<std::string> conds(conditions.begin(), conditions.end());
  conds.insert(std::string());
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::string_view s) {
    for (unsigned char c : s) h = (h ^ c) * 1099511628211ULL;
    h = (h ^ 0xFF) * 1099511628211ULL;
  };
  mix(kMachineVersion);
  mix(std::to_string(machine.step_budget));
  mix(std::to_string(machine.max_program_length));
  mix(std::to_string(options.output_cap));
  mix(options.verify_prefix_free ? "v" : "-");
  for (const auto& c : conds) mix(c);
  std::ostringstream name;
  name << "oracle-" << std::hex << h << ".bin";
  const auto path = std::filesystem::path(dir) / name.str();

  if (std::ifstream in{path, std::ios::binary}) {
    try {
      auto o = read_oracle(in);
      if (o.machine().step_budget == machine.step_budget &&
          o.machine().max_program_length == machine.max_program_length &&
          std::all_of(conds.begin(), conds.end(), [&](const auto& c) { return o.has_condition(c); }))
        return o;
    } catch (const Error&) {
      // Stale or corrupt cache entry; rebuild below.
    }
  }
  auto o = build_oracle(machine, conditions, options);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (out) write_oracle(out, o);
  }
  std::filesystem::rename(tmp, path, ec);
  return o;
}

}  // namespace kolmo::toyvm
