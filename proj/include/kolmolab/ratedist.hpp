#pragma once

// Rate-distortion: exact brute-force distortion-rate values for tiny block
// lengths, Blahut-Arimoto for the information rate-distortion function,
// the Shannon-Fano distortion closed forms, distortion spheres, and the
// expected structure function experiment.

#include "kolmolab/algstats.hpp"
#include "kolmolab/common.hpp"
#include "kolmolab/dist.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace kolmo::ratedist {

/// Distortion entries; nullopt is +inf.
using Distortion = std::optional<Rational>;

struct RDInstance {
  Dist source;                  // over the X alphabet
  std::vector<std::string> ys;  // codeword alphabet
  std::vector<std::vector<Distortion>> d;  // d[x][y]

  void validate() const;
  std::size_t x_size() const { return source.size(); }
  std::size_t y_size() const { return ys.size(); }
};

/// Binary source with Hamming distortion on {0,1}.
RDInstance hamming_instance(const Rational& p_one);

/// Uniform source on {0,1}^n, codewords the subsets of {0,1}^n whose size is
/// a power of two (or only the subcubes), d(x,S) = log|S| if x in S else inf.
RDInstance set_instance(std::size_t n, bool subcubes_only = false);

/// Lines: `p <x> <prob>`, `y <sym>`, `d <x> <y> <value|inf>`; every pair must
/// have a distortion.
RDInstance read_instance(std::istream& in);
RDInstance read_instance_file(const std::string& path);

/// Largest integer k with k <= 2^{mR}, capped at `cap`.
std::uint64_t max_codebook_size(std::size_t m, const Rational& R, std::uint64_t cap);

inline constexpr std::uint64_t kCodebookGuard = 10'000'000;

struct BruteResult {
  Distortion D;                          // per-symbol expected distortion
  std::vector<std::string> codebook;     // codewords as comma-joined tuples
  std::uint64_t codebook_size = 0;
  std::uint64_t codebooks_evaluated = 0;
};

/// Exact min over codebooks C in Y^m with |C| <= floor(2^{mR}); each block
/// is mapped to its least-distortion codeword, ties by least index.
BruteResult brute_force_D(const RDInstance& inst, std::size_t m, const Rational& R);

struct SetDistortionResult {
  Bits D;                     // min over partitions into <= K pieces
  std::optional<Rational> exact;  // set when every piece size is a power of two
  std::uint64_t pieces = 0;
  bool witness_verified = false;  // a subcube codebook attains D
};

/// D*_m(R) for the finite-set distortion under a source uniform on a
/// support of `support` strings of length n: exhaustive search over piece
/// size multisets of a partition of the block support into at most
/// floor(2^{mR}) pieces. When the support is all of {0,1}^n and mR is an
/// integer the balanced subcube codebook is built and evaluated.
SetDistortionResult set_distortion_D(std::size_t n, std::size_t m, const Rational& R,
                                     std::uint64_t support = 0);

struct BAOptions {
  double tol = 1e-9;
  int max_iter = 100000;
};

struct BAResult {
  Bits R = 0;
  Bits D = 0;
  double slope = 0;
  int iterations = 0;
  bool monotone = true;
  std::vector<std::vector<double>> channel;  // Q(y|x)
};

/// One Blahut-Arimoto run at fixed slope s from the uniform channel.
BAResult blahut_arimoto_slope(const RDInstance& inst, double s, const BAOptions& opt = {});

/// R^{(I)}(D) for a target distortion; D >= D_max gives R = 0.
BAResult blahut_arimoto(const RDInstance& inst, Bits target_D, const BAOptions& opt = {});

/// D^{(I)}(R) for a target rate.
BAResult blahut_arimoto_rate(const RDInstance& inst, Bits target_R, const BAOptions& opt = {});

/// sum_x p(x) min_y d(x,y).
Bits min_distortion(const RDInstance& inst);
/// min_y sum_x p(x) d(x,y).
Bits max_distortion(const RDInstance& inst);

struct SFPoint {
  Bits R;
  Bits D;
  Bits oracle;  // value of the queried quantity from the alpha-channel search
  Rational alpha;
};

/// D*(R) = max(0, H(p) - R) for the Shannon-Fano distortion on a binary
/// source, cross-checked against the channel Y_alpha.
SFPoint shannon_fano_rd_rate(const Rational& p, Bits R);
/// R*(D) = max(0, H(p) - D).
SFPoint shannon_fano_rd_distortion(const Rational& p, Bits D);

struct SphereCheck {
  bool radii_disjoint = true;  // spheres at one center never share elements
  bool partition = true;       // B' sets disjoint and cover every reachable block
  std::size_t spheres = 0;
  std::size_t covered = 0;
};

/// Builds every sphere B_y(r) around the codebook (codeword indices into Y^m)
/// and the canonical covering B' that assigns each block to its least-radius
/// sphere, ties by least codeword index.
SphereCheck check_spheres(const RDInstance& inst, std::size_t m, const std::vector<std::uint64_t>& codebook);

struct ExpStructRow {
  Rational R;
  Bits expected_h;  // E (1/m) h_{x-bar}(mR)
  Bits d_star;      // D*_m(R)
  long shift;       // least s with E (1/m) h(mR + s) <= D*_m(R); -1 if none
  bool right_holds; // D*_m(R) <= E (1/m) h(mR)
};

struct ExpStructReport {
  std::size_t n = 0, m = 0;
  std::vector<ExpStructRow> rows;
  double b = 2;
  double c = 0;  // max shift - b log2(mn)
};

/// Source f over {0,1}^n must be uniform on its support; blocks x-bar of m
/// outcomes are scored under the family at length mn.
ExpStructReport expected_structfn_experiment(const algstats::ModelFamily& family, const Dist& f, std::size_t m,
                                             const std::vector<Rational>& r_grid);

}  // namespace kolmo::ratedist
