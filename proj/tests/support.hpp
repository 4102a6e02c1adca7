#pragma once

#include <sys/wait.h>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cobstruct/abgroup.hpp"
#include "cobstruct/exactness.hpp"
#include "cobstruct/graded.hpp"
#include "cobstruct/int_matrix.hpp"

namespace testsupport {

using namespace cobstruct;

inline std::string source_path(const std::string& rel) { return std::string(COBSTRUCT_SOURCE_DIR) + "/" + rel; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

/// Runs the CLI binary with the given argument string.
inline CliResult run_cli(const std::string& args, const std::string& tag) {
  const std::string out_path = std::string(COBSTRUCT_BINARY_TMP) + "/" + tag + ".out";
  const std::string err_path = std::string(COBSTRUCT_BINARY_TMP) + "/" + tag + ".err";
  const std::string cmd = std::string("\"") + COBSTRUCT_CLI + "\" " + args + " >\"" + out_path + "\" 2>\"" +
                          err_path + "\"";
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_file(out_path);
  r.err = read_file(err_path);
  return r;
}

inline std::string tmp_path(const std::string& name) { return std::string(COBSTRUCT_BINARY_TMP) + "/" + name; }

// ---------------------------------------------------------------------------
// Random inputs

inline IntMatrix random_matrix(std::mt19937& rng, std::size_t rows, std::size_t cols, int bound) {
  std::uniform_int_distribution<int> entry(-bound, bound);
  IntMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = entry(rng);
  return m;
}

/// Product of random elementary operations: unimodular by construction.
inline IntMatrix random_unimodular(std::mt19937& rng, std::size_t n) {
  IntMatrix u = IntMatrix::identity(n);
  if (n < 2) return u;
  std::uniform_int_distribution<std::size_t> idx(0, n - 1);
  std::uniform_int_distribution<int> k(-2, 2);
  for (int step = 0; step < 6; ++step) {
    const std::size_t a = idx(rng), b = idx(rng);
    if (a == b) continue;
    u.add_row(a, b, k(rng));
  }
  return u;
}

inline FgAbGroup random_group(std::mt19937& rng) {
  static const int orders[] = {2, 3, 4, 6, 8, 9, 12};
  std::uniform_int_distribution<int> free_rank(0, 2), count(0, 3), pick(0, 6);
  std::vector<BigInt> cyc;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) cyc.emplace_back(orders[pick(rng)]);
  return direct_sum(FgAbGroup::free(static_cast<std::size_t>(free_rank(rng))), FgAbGroup::from_cyclic_orders(cyc));
}

inline FgAbGroup random_finite_group(std::mt19937& rng) {
  FgAbGroup g = random_group(rng);
  std::vector<BigInt> cyc(g.torsion().begin(), g.torsion().end());
  return FgAbGroup::from_cyclic_orders(cyc);
}

/// A random well-formed hom: images of generators chosen and then reduced by
/// the target's relations; torsion generators of order d go to d-torsion.
inline GroupHom random_hom(std::mt19937& rng, const FgAbGroup& source, const FgAbGroup& target) {
  std::uniform_int_distribution<int> entry(-3, 3);
  const std::size_t rows = target.generator_count(), cols = source.generator_count();
  IntMatrix m(rows, cols);
  for (std::size_t c = 0; c < cols; ++c) {
    const BigInt d = source.generator_order(c);
    for (std::size_t r = 0; r < rows; ++r) {
      const BigInt e = target.generator_order(r);
      BigInt x = entry(rng);
      if (d != 0) {
        // need d * x = 0 in Z/e (or in Z when e = 0): x a multiple of e / gcd(d, e)
        if (e == 0) {
          x = 0;
        } else {
          const BigInt g = boost::multiprecision::gcd(d, e);
          x *= e / g;
        }
      }
      m(r, c) = x;
    }
  }
  return GroupHom(source, target, m);
}

// ---------------------------------------------------------------------------
// Cellular chain complex of RP^n: C_k = Z for 0 <= k <= n, d_k = 1 + (-1)^k.

inline GradedGroup cellular_rp_homology(int n) {
  std::map<long long, FgAbGroup> out;
  const FgAbGroup z = FgAbGroup::free(1);
  auto boundary = [&](int k) { return GroupHom(z, z, IntMatrix{{k % 2 == 0 ? 2 : 0}}); };
  for (int k = 0; k <= n; ++k) {
    std::optional<GroupHom> in, outgoing;
    if (k + 1 <= n) in = boundary(k + 1);
    if (k >= 1) outgoing = boundary(k);
    FgAbGroup h = homology_at(z, in ? &*in : nullptr, outgoing ? &*outgoing : nullptr);
    if (!h.is_zero()) out[k] = h;
  }
  return GradedGroup(std::move(out));
}

// ---------------------------------------------------------------------------
// Brute-force oracle for exact sequences of Z/2-vector spaces: enumerates
// every tuple of linear maps (matrices over F_2), memoizing on the image of
// the previous map, which is all that exactness at the next term reads.

struct F2Map {
  std::uint32_t kernel = 0;  // set of source vectors (bit v) in the kernel
  std::uint32_t image = 0;   // set of target vectors in the image
};

/// All linear maps F_2^a -> F_2^b, summarized by kernel and image sets.
inline std::vector<F2Map> all_f2_maps(int a, int b) {
  std::vector<F2Map> out;
  const int entries = a * b;
  for (std::uint32_t bits = 0; bits < (1u << entries); ++bits) {
    // column c of the matrix is the b-bit value (bits >> (c*b)) & mask
    const std::uint32_t mask = (1u << b) - 1u;
    F2Map f;
    for (std::uint32_t v = 0; v < (1u << a); ++v) {
      std::uint32_t w = 0;
      for (int c = 0; c < a; ++c)
        if (v >> c & 1u) w ^= (bits >> (c * b)) & mask;
      if (w == 0) f.kernel |= 1u << v;
      f.image |= 1u << w;
    }
    out.push_back(f);
  }
  return out;
}

inline bool f2_sequence_realizable(const std::vector<int>& dims) {
  // reachable image sets of the map into term j
  std::vector<std::uint32_t> frontier;
  for (const auto& f : all_f2_maps(dims[0], dims[1])) frontier.push_back(f.image);
  std::sort(frontier.begin(), frontier.end());
  frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());
  for (std::size_t j = 1; j + 1 < dims.size(); ++j) {
    const auto maps = all_f2_maps(dims[j], dims[j + 1]);
    std::vector<std::uint32_t> next;
    for (std::uint32_t im : frontier)
      for (const auto& f : maps)
        if (f.kernel == im) next.push_back(f.image);
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    frontier = std::move(next);
    if (frontier.empty()) return false;
  }
  return true;
}

/// Exhaustive decision with unknown dimensions in [0, cap].
inline bool brute_force_feasible(const ExactSequenceProblem& p, int cap) {
  std::vector<std::string> unknowns;
  for (const auto& s : p.sequences)
    for (const auto& t : s.terms)
      if (!t.is_known() && std::find(unknowns.begin(), unknowns.end(), t.variable) == unknowns.end())
        unknowns.push_back(t.variable);
  std::vector<int> value(unknowns.size(), 0);
  for (;;) {
    bool all = true;
    for (const auto& s : p.sequences) {
      std::vector<int> dims;
      for (const auto& t : s.terms) {
        if (t.is_known()) {
          dims.push_back(static_cast<int>(*t.group.elementary_two_dimension()));
        } else {
          const auto i = std::find(unknowns.begin(), unknowns.end(), t.variable) - unknowns.begin();
          dims.push_back(value[static_cast<std::size_t>(i)]);
        }
      }
      if (!f2_sequence_realizable(dims)) {
        all = false;
        break;
      }
    }
    if (all) return true;
    std::size_t k = 0;
    while (k < value.size() && ++value[k] > cap) value[k++] = 0;
    if (k == value.size()) return false;
  }
}

inline ExactSequenceProblem random_problem(std::mt19937& rng) {
  std::uniform_int_distribution<int> nseq(1, 2), len(3, 6), dim(0, 3), coin(0, 3), var(0, 1);
  ExactSequenceProblem p;
  p.unknown_dim_cap = 3;
  const int n = nseq(rng);
  for (int s = 0; s < n; ++s) {
    ExactSequence seq;
    seq.name = "S" + std::to_string(s + 1);
    const int m = len(rng);
    for (int i = 0; i < m; ++i) {
      if (coin(rng) == 0)
        seq.terms.push_back(SequenceTerm::unknown(var(rng) ? "X" : "Y"));
      else
        seq.terms.push_back(SequenceTerm::known(FgAbGroup::elementary_two(static_cast<std::size_t>(dim(rng)))));
    }
    p.sequences.push_back(std::move(seq));
  }
  return p;
}

}  // namespace testsupport
