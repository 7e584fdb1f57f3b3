#pragma once

// A deterministic, resource-bounded prefix machine and the complexity oracle
// obtained by exhaustively enumerating its programs.
//
// Program encoding (read once, left to right, never backing up):
//
//   0        HALT at top level / END of a REPEAT body
//   10 g b   EMIT: g = gamma(k), then k literal bits b appended to the output
//   110 g B  REPEAT: g = gamma(c), then a body B (items terminated by END),
//            executed c times after it has been read completely
//   1110     COPY: append the condition tape to the output
//   1111     EXEC: run the condition tape as a program (with an empty
//            condition) and append its output
//
// gamma(k), k >= 1, is the Elias gamma code: floor(log k) zeros, then k in
// binary. Top-level items execute as soon as they are read. A program halts
// only if HALT is reached having consumed exactly all of its bits, so the
// halting programs form a prefix-free set.
//
// Step costs: 1 per executed instruction (including HALT), 1 per output bit,
// 1 per REPEAT iteration; EXEC additionally pays the steps of the inner run.

#include "kolmolab/common.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace kolmo::toyvm {

inline constexpr const char* kMachineVersion = "accvm-1";
inline constexpr int kMaxEnumerableLength = 26;
inline constexpr std::size_t kMaxTableOutput = 64;

struct Machine {
  std::uint32_t step_budget = 1000;
  int max_program_length = 20;
};

enum class Outcome { Halt, OutOfTime, ReadPastEnd, Trailing, Fault };

std::string to_string(Outcome o);

struct RunResult {
  Outcome outcome;
  BitString output;
  std::uint64_t steps;
  std::size_t consumed;
};

/// Executes `program` with `condition` on the read-only auxiliary tape.
/// The empty program reads past its end.
RunResult run(std::string_view program, std::string_view condition, std::uint64_t step_budget);

// --- program construction ------------------------------------------------

BitString gamma_code(std::uint64_t k);
std::size_t gamma_length(std::uint64_t k);

namespace op {
BitString emit(std::string_view literal);
BitString copy();
BitString exec();
/// REPEAT with the given items as body; END is appended.
BitString repeat(std::uint64_t count, std::string_view body_items);
BitString halt();
}  // namespace op

/// Items followed by HALT.
BitString program(std::string_view items);

/// The one-item COPY program; outputs the condition.
BitString copy_program();

/// Length of the literal program EMIT(x) HALT, for x nonempty.
std::size_t literal_program_length(std::size_t n);

/// Overhead of the literal program over l(x): 3 + |gamma(n)|.
std::size_t literal_overhead(std::size_t n);

/// Self-delimiting pair encoding <x,y> = encode_natural(l(x)) x y.
BitString pair_string(std::string_view x, std::string_view y);

// --- complexity oracle -----------------------------------------------------

struct TableEntry {
  int khat = 0;                       // shortest halting program length
  std::uint32_t first_program = 0;    // its bits, first in lexicographic order
  std::uint64_t mhat_numerator = 0;   // sum of 2^(L_max - l(p)) over halting p
};

/// Everything enumerated for one condition.
struct ComplexityTable {
  std::string condition;
  int max_program_length = 0;
  std::unordered_map<BitString, TableEntry> entries;
  std::uint64_t halting_programs = 0;
  std::uint64_t kraft_numerator = 0;               // over 2^L_max
  std::vector<std::uint64_t> halting_by_length;    // index = program length
  std::optional<bool> prefix_free;                 // set when verification ran

  const TableEntry* find(std::string_view x) const;
  Rational kraft_sum() const;
  /// Output strings in (length, lexicographic) order.
  std::vector<BitString> sorted_outputs() const;
};

struct BuildOptions {
  /// Only outputs up to this many bits are recorded (halting statistics
  /// always cover every program).
  std::size_t output_cap = kMaxTableOutput;
  /// Collect every halting program and verify the set is prefix-free.
  bool verify_prefix_free = false;
  /// Worker threads for building independent condition tables.
  unsigned threads = 1;
};

class ComplexityOracle {
 public:
  ComplexityOracle() = default;

  const Machine& machine() const { return machine_; }
  std::size_t output_cap() const { return output_cap_; }

  bool has_condition(std::string_view c) const;
  const ComplexityTable& table(std::string_view c = {}) const;
  std::vector<std::string> conditions() const;

  /// Surrogate prefix complexity; nothing when no program within budget
  /// outputs x.
  std::optional<int> khat(std::string_view x) const { return khat_cond(x, {}); }
  std::optional<int> khat_cond(std::string_view x, std::string_view c) const;

  /// Throwing variants for callers that require a defined value.
  int khat_at(std::string_view x) const { return khat_cond_at(x, {}); }
  int khat_cond_at(std::string_view x, std::string_view c) const;

  Rational mhat(std::string_view x) const { return mhat_cond(x, {}); }
  Rational mhat_cond(std::string_view x, std::string_view c) const;

  /// x*: the lexicographically first shortest program for x (unconditional).
  std::optional<BitString> shortest_program(std::string_view x) const;
  BitString star(std::string_view x) const;

  friend ComplexityOracle build_oracle(const Machine&, const std::vector<std::string>&, const BuildOptions&);
  friend ComplexityOracle read_oracle(std::istream&);

 private:
  Machine machine_;
  std::size_t output_cap_ = kMaxTableOutput;
  std::map<std::string, std::shared_ptr<const ComplexityTable>, std::less<>> tables_;
};

/// Enumerates every program of length <= L_max under each condition (the
/// empty condition is always included). Conditions on which COPY and EXEC
/// behave identically share one table.
ComplexityOracle build_oracle(const Machine& machine, const std::vector<std::string>& conditions,
                              const BuildOptions& options = {});

/// Reference enumeration: runs `run` on every bit string of length <= L_max.
/// Exponentially slower; used to cross-check build_oracle.
ComplexityTable brute_force_table(const Machine& machine, std::string_view condition, std::size_t output_cap);

/// Versioned binary persistence.
void write_oracle(std::ostream& out, const ComplexityOracle& oracle);
ComplexityOracle read_oracle(std::istream& in);

/// Builds, or loads from $KOLMOLAB_CACHE when set, the oracle for the given
/// configuration.
ComplexityOracle cached_oracle(const Machine& machine, const std::vector<std::string>& conditions,
                               const BuildOptions& options = {});

/// Every bit string of length lo..hi in (length, lexicographic) order.
std::vector<BitString> all_strings(std::size_t lo, std::size_t hi);

}  // namespace kolmo::toyvm
