#pragma once

// Homological spectral sequence with E^1_{p,q} = H_q(S) on columns p in N*Z,
// differentials d^r of bidegree (-r, r-1), and abutment
// HF_n = (+)_{p+q=n} E^inf_{p,q}, 2-periodic in n.
//
// Pages are stored over a finite window of columns. An entry is "determined"
// when every differential that could ever touch it (judged from the E^1
// support) stays inside the window; a degree is "certified" when every E^1
// position on its antidiagonal is in the window and determined. Only
// certified degrees of the abutment are reported or constrained.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cobstruct/abgroup.hpp"
#include "cobstruct/errors.hpp"
#include "cobstruct/graded.hpp"

namespace cobstruct {

struct Bidegree {
  long long p = 0;
  long long q = 0;

  friend auto operator<=>(const Bidegree&, const Bidegree&) = default;
  std::string to_string() const { return "(" + std::to_string(p) + "," + std::to_string(q) + ")"; }
};

/// Columns [col_lo, col_hi] (multiples of the column step) and rows [0, row_hi].
struct PageWindow {
  long long col_lo = 0;
  long long col_hi = 0;
  int row_hi = 0;

  /// Columns p in {-k N, ..., k N}.
  static PageWindow symmetric(long long column_step, long long steps, int row_hi) {
    return {-steps * column_step, steps * column_step, row_hi};
  }
  friend bool operator==(const PageWindow&, const PageWindow&) = default;
};

struct BigradedPage {
  int page_index = 1;
  long long column_step = 2;
  PageWindow window;
  std::vector<bool> e1_support;            // rows carrying a nonzero E^1 entry
  std::map<Bidegree, FgAbGroup> entries;   // nonzero entries only

  const FgAbGroup& at(const Bidegree& pos) const {
    static const FgAbGroup kZero;
    auto it = entries.find(pos);
    return it == entries.end() ? kZero : it->second;
  }
  bool in_window(const Bidegree& pos) const {
    return pos.p >= window.col_lo && pos.p <= window.col_hi && pos.q >= 0 && pos.q <= window.row_hi;
  }
  bool supported_row(long long q) const {
    return q >= 0 && q <= window.row_hi && e1_support[static_cast<std::size_t>(q)];
  }

  friend bool operator==(const BigradedPage&, const BigradedPage&) = default;
};

inline Bidegree differential_target(const Bidegree& pos, long long r) { return {pos.p - r, pos.q + r - 1}; }
inline Bidegree differential_source(const Bidegree& pos, long long r) { return {pos.p + r, pos.q - r + 1}; }

/// d^r restricted to the window: source position -> map into differential_target(source, r).
struct DifferentialAssignment {
  int page_index = 1;
  std::map<Bidegree, GroupHom> maps;
};

inline bool composite_vanishes(const GroupHom& first, const GroupHom& second) {
  IntMatrix prod = second.matrix() * first.matrix();
  for (std::size_t i = 0; i < prod.rows(); ++i) {
    const BigInt e = second.target().generator_order(i);
    for (std::size_t j = 0; j < prod.cols(); ++j) {
      if (e.is_zero() ? !prod(i, j).is_zero() : !(prod(i, j) % e).is_zero()) return false;
    }
  }
  return true;
}

/// True when no d^r, at any page, can join `pos` to an E^1-nonzero entry outside the window.
inline bool position_determined(const BigradedPage& page, const Bidegree& pos) {
  const long long n = page.column_step;
  for (long long r = n; r - 1 <= page.window.row_hi; r += n) {
    const Bidegree out = differential_target(pos, r);
    if (page.supported_row(out.q) && out.p < page.window.col_lo) return false;
    const Bidegree in = differential_source(pos, r);
    if (page.supported_row(in.q) && in.p > page.window.col_hi) return false;
  }
  return true;
}

/// E^1-supported positions on the antidiagonal p + q = degree.
inline std::vector<Bidegree> antidiagonal(const BigradedPage& page, long long degree) {
  std::vector<Bidegree> out;
  for (long long q = 0; q <= page.window.row_hi; ++q) {
    if (!page.supported_row(q)) continue;
    const long long p = degree - q;
    if (p % page.column_step == 0) out.push_back({p, q});
  }
  return out;
}

inline bool degree_certified(const BigradedPage& page, long long degree) {
  for (const auto& pos : antidiagonal(page, degree))
    if (!page.in_window(pos) || !position_determined(page, pos)) return false;
  return true;
}

inline std::vector<long long> certified_degrees(const BigradedPage& page) {
  std::vector<long long> out;
  for (long long n = page.window.col_lo; n <= page.window.col_hi + page.window.row_hi; ++n)
    if (degree_certified(page, n)) out.push_back(n);
  return out;
}

/// E^1 page: H_q(S) on every column p in N*Z of the window.
inline BigradedPage build_e1(const GradedGroup& s_homology, long long column_step, const PageWindow& window) {
  if (column_step <= 0 || column_step % 2 != 0)
    throw ValidationError("build_e1: column step must be a positive even integer, got " +
                          std::to_string(column_step));
  if (window.col_lo % column_step != 0 || window.col_hi % column_step != 0 || window.col_lo > window.col_hi)
    throw ValidationError("build_e1: window columns must be ordered multiples of the column step");
  if (window.row_hi < 0) throw ValidationError("build_e1: negative row range");
  if (s_homology.period()) throw ValidationError("build_e1: homology of S cannot be periodic");
  for (const auto& [deg, g] : s_homology.entries())
    if (!g.is_zero() && (deg < 0 || deg > window.row_hi))
      throw ValidationError("build_e1: H_" + std::to_string(deg) + "(S) lies outside rows [0, " +
                            std::to_string(window.row_hi) + "]");
  if (s_homology.at(0).is_zero()) throw ValidationError("build_e1: H_0(S) vanishes; S must be nonempty");

  BigradedPage page;
  page.page_index = 1;
  page.column_step = column_step;
  page.window = window;
  page.e1_support.assign(static_cast<std::size_t>(window.row_hi) + 1, false);
  for (int q = 0; q <= window.row_hi; ++q) page.e1_support[q] = !s_homology.at(q).is_zero();
  for (long long p = window.col_lo; p <= window.col_hi; p += column_step)
    for (int q = 0; q <= window.row_hi; ++q)
      if (page.e1_support[q]) page.entries.emplace(Bidegree{p, q}, s_homology.at(q));

  for (long long n : {0LL, 1LL})
    if (!degree_certified(page, n))
      throw ValidationError("build_e1: window p in [" + std::to_string(window.col_lo) + ", " +
                            std::to_string(window.col_hi) + "] is too small to determine HF_" + std::to_string(n));
  return page;
}

/// Page r with r >= page_index such that some d^r joins two nonzero in-window
/// entries; pages page_index..r coincide. nullopt when the page is stable.
inline std::optional<int> trivial_pages(const BigradedPage& page) {
  const long long n = page.column_step;
  long long r = std::max<long long>(page.page_index, n);
  r = ((r + n - 1) / n) * n;
  for (; r - 1 <= page.window.row_hi; r += n) {
    for (const auto& [pos, g] : page.entries) {
      const Bidegree t = differential_target(pos, r);
      if (page.in_window(t) && !page.at(t).is_zero()) return static_cast<int>(r);
    }
  }
  return std::nullopt;
}

inline bool is_stable(const BigradedPage& page) { return !trivial_pages(page).has_value(); }

/// E^{r+1} from E^r and d^r: ker(outgoing) / im(incoming) at every position.
inline BigradedPage turn_page(const BigradedPage& page, const DifferentialAssignment& d) {
  if (d.page_index != page.page_index)
    throw ValidationError("turn_page: differential is for page " + std::to_string(d.page_index) + ", page is E^" +
                          std::to_string(page.page_index));
  const long long r = page.page_index;
  std::map<Bidegree, const GroupHom*> incoming;
  for (const auto& [src, h] : d.maps) {
    const Bidegree tgt = differential_target(src, r);
    if (!page.in_window(src) || !page.in_window(tgt))
      throw ValidationError("turn_page: d^" + std::to_string(r) + " at " + src.to_string() + " leaves the window");
    if (h.source() != page.at(src) || h.target() != page.at(tgt))
      throw ValidationError("turn_page: d^" + std::to_string(r) + " at " + src.to_string() +
                            " does not match the page entries");
    incoming[tgt] = &h;
  }
  for (const auto& [src, h] : d.maps) {
    auto in = incoming.find(src);
    if (in != incoming.end() && !composite_vanishes(*in->second, h))
      throw ValidationError("turn_page: d^" + std::to_string(r) + " o d^" + std::to_string(r) + " != 0 through " +
                            src.to_string());
  }

  BigradedPage next = page;
  next.page_index = page.page_index + 1;
  next.entries.clear();
  for (const auto& [pos, g] : page.entries) {
    auto out_it = d.maps.find(pos);
    auto in_it = incoming.find(pos);
    const GroupHom* out = out_it == d.maps.end() ? nullptr : &out_it->second;
    const GroupHom* in = in_it == incoming.end() ? nullptr : in_it->second;
    FgAbGroup h = (out || in) ? homology_at(g, in, out) : g;
    if (!h.is_zero()) next.entries.emplace(pos, std::move(h));
  }
  return next;
}

/// HF_n = (+)_{p+q=n} E^inf_{p,q} for every certified degree n (zeros stored).
inline GradedGroup abutment(const BigradedPage& e_infinity) {
  if (!is_stable(e_infinity))
    throw ValidationError("abutment: page E^" + std::to_string(e_infinity.page_index) +
                          " still carries possibly nonzero differentials");
  std::map<long long, FgAbGroup> out;
  for (long long n : certified_degrees(e_infinity)) {
    FgAbGroup acc;
    for (const auto& pos : antidiagonal(e_infinity, n)) acc = direct_sum(acc, e_infinity.at(pos));
    out[n] = std::move(acc);
  }
  return GradedGroup(std::move(out));
}

/// Pins HF_degree to a group (over the pair's own grading).
struct AbutmentConstraint {
  long long degree = 0;
  FgAbGroup group;
  friend bool operator==(const AbutmentConstraint&, const AbutmentConstraint&) = default;
};

struct FloerLeaf {
  GradedGroup hf;                                   // period 2: degrees 0 and 1
  GradedGroup certified;                            // abutment over certified degrees
  std::vector<DifferentialAssignment> differentials;
  BigradedPage e_infinity;
  std::vector<std::string> trace;
};

struct BranchTree {
  BigradedPage root;
  std::vector<FloerLeaf> leaves;
  bool bound_may_truncate = false;
  bool page_limit_hit = false;
  std::vector<std::string> notes;

  bool consistent() const { return !leaves.empty(); }
};

namespace detail {

struct Chain {
  std::vector<Bidegree> positions;  // positions[i] --d^r--> positions[i+1]
};

struct ChainOutcome {
  std::vector<GroupHom> maps;
  std::vector<FgAbGroup> entries;  // after turning; only positions flagged relevant are filled
};

struct ChainOutcomes {
  std::vector<ChainOutcome> outcomes;
  bool may_truncate = false;
};

inline std::vector<Chain> build_chains(const BigradedPage& page, long long r) {
  std::vector<Chain> chains;
  auto has_edge = [&](const Bidegree& a, const Bidegree& b) {
    return page.in_window(a) && page.in_window(b) && !page.at(a).is_zero() && !page.at(b).is_zero();
  };
  for (const auto& [pos, g] : page.entries) {
    if (has_edge(differential_source(pos, r), pos)) continue;
    if (!has_edge(pos, differential_target(pos, r))) continue;
    Chain c;
    Bidegree cur = pos;
    c.positions.push_back(cur);
    while (has_edge(cur, differential_target(cur, r))) {
      cur = differential_target(cur, r);
      c.positions.push_back(cur);
    }
    chains.push_back(std::move(c));
  }
  return chains;
}

/// All assignments of the chain's maps (d o d = 0), deduplicated by the
/// resulting groups at the relevant positions; first assignment found wins.
inline ChainOutcomes enumerate_chain(const std::vector<FgAbGroup>& groups, const std::vector<bool>& relevant,
                                     long long bound) {
  const std::size_t edges = groups.size() - 1;
  ChainOutcomes result;
  std::vector<std::vector<GroupHom>> candidates;
  for (std::size_t i = 0; i < edges; ++i) {
    auto e = hom_candidates(groups[i], groups[i + 1], bound);
    result.may_truncate = result.may_truncate || e.may_truncate;
    candidates.push_back(std::move(e.homs));
  }
  std::set<std::vector<FgAbGroup>> seen;
  std::vector<std::size_t> choice;
  choice.reserve(edges);

  auto finish = [&]() {
    std::vector<FgAbGroup> entries(groups.size());
    for (std::size_t j = 0; j < groups.size(); ++j) {
      if (!relevant[j]) continue;
      const GroupHom* in = j > 0 ? &candidates[j - 1][choice[j - 1]] : nullptr;
      const GroupHom* out = j < edges ? &candidates[j][choice[j]] : nullptr;
      entries[j] = homology_at(groups[j], in, out);
    }
    if (!seen.insert(entries).second) return;
    ChainOutcome o;
    for (std::size_t i = 0; i < edges; ++i) o.maps.push_back(candidates[i][choice[i]]);
    o.entries = std::move(entries);
    result.outcomes.push_back(std::move(o));
  };

  auto dfs = [&](auto&& self, std::size_t i) -> void {
    if (i == edges) {
      finish();
      return;
    }
    for (std::size_t k = 0; k < candidates[i].size(); ++k) {
      if (i > 0 && !composite_vanishes(candidates[i - 1][choice[i - 1]], candidates[i][k])) continue;
      choice.push_back(k);
      self(self, i + 1);
      choice.pop_back();
    }
  };
  dfs(dfs, 0);
  return result;
}

inline std::string page_label(int r, const Bidegree& pos, const FgAbGroup& g) {
  return "E^" + std::to_string(r) + pos.to_string() + " = " + g.to_string();
}

inline std::string describe_abutment(const GradedGroup& g) {
  std::string out;
  for (const auto& [d, grp] : g.entries()) out += (out.empty() ? "" : ", ") + ("HF_" + std::to_string(d) + " = " + grp.to_string());
  return out;
}

class FloerSolver {
 public:
  FloerSolver(std::vector<AbutmentConstraint> pins, long long bound) : pins_(std::move(pins)), bound_(bound) {}

  BranchTree solve(const BigradedPage& root) {
    tree_.root = root;
    std::vector<std::string> trace{
        "E^1: H_q(S) on columns p in " + std::to_string(root.column_step) + "Z, window p in [" +
        std::to_string(root.window.col_lo) + ", " + std::to_string(root.window.col_hi) + "], rows 0.." +
        std::to_string(root.window.row_hi) + ", entry bound " + std::to_string(bound_)};
    explore(root, {}, trace);

    std::sort(leaves_.begin(), leaves_.end(), [](const FloerLeaf& a, const FloerLeaf& b) {
      if (a.hf.at(0) != b.hf.at(0)) return a.hf.at(0) < b.hf.at(0);
      if (a.hf.at(1) != b.hf.at(1)) return a.hf.at(1) < b.hf.at(1);
      return a.trace < b.trace;
    });
    for (auto& leaf : leaves_) {
      const bool dup = std::any_of(tree_.leaves.begin(), tree_.leaves.end(),
                                   [&](const FloerLeaf& l) { return l.hf == leaf.hf; });
      if (!dup) tree_.leaves.push_back(std::move(leaf));
    }
    if (tree_.bound_may_truncate)
      tree_.notes.push_back("entry bound " + std::to_string(bound_) +
                            " may truncate the differential branches (free summands involved)");
    if (tree_.leaves.empty()) tree_.notes.push_back("no consistent spectral sequence under the entry bound");
    return std::move(tree_);
  }

 private:
  static constexpr std::size_t kPageLimit = 4096;

  // 2-periodicity and pins on the certified abutment of a stable page.
  std::optional<GradedGroup> periodic_abutment(const GradedGroup& certified, std::vector<std::string>& trace) const {
    auto folded = impose_periodicity(certified, 2);
    if (auto* conflict = std::get_if<PeriodicityConflict>(&folded)) {
      trace.push_back("rejected: HF_* = HF_{*+2} fails, " + conflict->to_string());
      return std::nullopt;
    }
    auto hf = std::get<GradedGroup>(std::move(folded));
    for (const auto& pin : pins_)
      if (hf.at(pin.degree) != pin.group) {
        trace.push_back("rejected: pinned HF_" + std::to_string(pin.degree) + " = " + pin.group.to_string());
        return std::nullopt;
      }
    return hf;
  }

  void record_leaf(const BigradedPage& stable, std::vector<DifferentialAssignment> history,
                   std::vector<std::string> trace) {
    GradedGroup certified = abutment(stable);
    trace.push_back("E^" + std::to_string(stable.page_index) + " = E^inf; certified abutment: " +
                    describe_abutment(certified));
    auto hf = periodic_abutment(certified, trace);
    if (!hf) return;
    trace.push_back("2-periodic: HF_even = " + hf->at(0).to_string() + ", HF_odd = " + hf->at(1).to_string());
    leaves_.push_back({std::move(*hf), std::move(certified), std::move(history), stable, std::move(trace)});
  }

  void explore(BigradedPage page, std::vector<DifferentialAssignment> history, std::vector<std::string> trace) {
    if (++pages_ > kPageLimit) {
      tree_.page_limit_hit = true;
      return;
    }
    auto first = trivial_pages(page);
    if (!first) {
      record_leaf(page, std::move(history), std::move(trace));
      return;
    }
    const int r = *first;
    if (r > page.page_index)
      trace.push_back("E^" + std::to_string(page.page_index) + " = E^" + std::to_string(r) +
                      ": no shorter differential joins nonzero entries");
    page.page_index = r;

    auto chains = build_chains(page, r);
    const bool final_page = is_last_page(page, r);
    std::set<long long> certified;
    for (long long n : certified_degrees(page)) certified.insert(n);

    std::vector<ChainOutcomes> outcomes;
    for (const auto& c : chains) {
      std::vector<FgAbGroup> groups;
      std::vector<bool> relevant;
      for (const auto& pos : c.positions) {
        groups.push_back(page.at(pos));
        relevant.push_back(!final_page || certified.count(pos.p + pos.q) > 0);
      }
      outcomes.push_back(cached_chain(groups, relevant));
      tree_.bound_may_truncate = tree_.bound_may_truncate || outcomes.back().may_truncate;
    }

    if (final_page) {
      combine_final(page, chains, outcomes, certified, std::move(history), std::move(trace));
      return;
    }

    // intermediate page: every combination of chain outcomes gives a next page
    std::vector<std::size_t> idx(chains.size(), 0);
    std::vector<BigradedPage> visited;
    for (;;) {
      DifferentialAssignment d = assignment_for(page, chains, outcomes, idx);
      BigradedPage next = turn_page(page, d);
      if (std::find(visited.begin(), visited.end(), next) == visited.end()) {
        visited.push_back(next);
        auto h = history;
        auto t = trace;
        describe_assignment(page, d, t);
        h.push_back(std::move(d));
        explore(std::move(next), std::move(h), std::move(t));
        if (tree_.page_limit_hit) return;
      }
      bool carry = true;
      for (std::size_t j = chains.size(); carry && j > 0;) {
        --j;
        if (++idx[j] < outcomes[j].outcomes.size())
          carry = false;
        else
          idx[j] = 0;
      }
      if (carry) break;
    }
  }

  // After d^r, no later differential joins two nonzero in-window entries.
  static bool is_last_page(const BigradedPage& page, long long r) {
    for (long long s = r + page.column_step; s - 1 <= page.window.row_hi; s += page.column_step)
      for (const auto& [pos, g] : page.entries) {
        const Bidegree t = differential_target(pos, s);
        if (page.in_window(t) && !page.at(t).is_zero()) return false;
      }
    return true;
  }

  const ChainOutcomes& cached_chain(const std::vector<FgAbGroup>& groups, const std::vector<bool>& relevant) {
    auto key = std::make_pair(groups, relevant);
    auto it = chain_cache_.find(key);
    if (it == chain_cache_.end()) it = chain_cache_.emplace(key, enumerate_chain(groups, relevant, bound_)).first;
    return it->second;
  }

  static DifferentialAssignment assignment_for(const BigradedPage& page, const std::vector<Chain>& chains,
                                               const std::vector<ChainOutcomes>& outcomes,
                                               const std::vector<std::size_t>& idx) {
    DifferentialAssignment d;
    d.page_index = page.page_index;
    for (std::size_t c = 0; c < chains.size(); ++c) {
      const auto& o = outcomes[c].outcomes[idx[c]];
      for (std::size_t e = 0; e < o.maps.size(); ++e)
        if (!o.maps[e].is_zero()) d.maps.emplace(chains[c].positions[e], o.maps[e]);
    }
    return d;
  }

  static void describe_assignment(const BigradedPage& page, const DifferentialAssignment& d,
                                  std::vector<std::string>& trace) {
    const int r = page.page_index;
    for (const auto& [src, h] : d.maps) {
      const Bidegree tgt = differential_target(src, r);
      trace.push_back("d^" + std::to_string(r) + ": " + page_label(r, src, page.at(src)) + " -> " +
                      page_label(r, tgt, page.at(tgt)) + ", " + describe_hom(h));
    }
    trace.push_back(d.maps.empty() ? "d^" + std::to_string(r) + " = 0"
                                   : "d^" + std::to_string(r) + " vanishes elsewhere");
  }

  // Final page: search for every (HF_even, HF_odd) pair some assignment realizes.
  void combine_final(const BigradedPage& page, const std::vector<Chain>& chains,
                     const std::vector<ChainOutcomes>& outcomes, const std::set<long long>& certified,
                     std::vector<DifferentialAssignment> history, std::vector<std::string> trace) {
    // where each certified position lives: chain index + slot, or fixed
    std::map<long long, FgAbGroup> fixed;
    std::map<long long, std::vector<std::pair<std::size_t, std::size_t>>> slots;
    std::set<Bidegree> on_chain;
    for (std::size_t c = 0; c < chains.size(); ++c)
      for (std::size_t s = 0; s < chains[c].positions.size(); ++s) {
        const auto& pos = chains[c].positions[s];
        on_chain.insert(pos);
        if (certified.count(pos.p + pos.q)) slots[pos.p + pos.q].emplace_back(c, s);
      }
    for (long long n : certified) {
      FgAbGroup acc;
      for (const auto& pos : antidiagonal(page, n))
        if (!on_chain.count(pos)) acc = direct_sum(acc, page.at(pos));
      fixed[n] = std::move(acc);
    }

    auto possible = [&](long long n) {
      std::set<FgAbGroup> values{fixed[n]};
      std::map<std::size_t, std::vector<std::size_t>> by_chain;
      for (auto [c, s] : slots[n]) by_chain[c].push_back(s);
      for (const auto& [c, ss] : by_chain) {
        std::set<FgAbGroup> contrib;
        for (const auto& o : outcomes[c].outcomes) {
          FgAbGroup acc;
          for (auto s : ss) acc = direct_sum(acc, o.entries[s]);
          contrib.insert(acc);
        }
        std::set<FgAbGroup> next;
        for (const auto& v : values)
          for (const auto& w : contrib) next.insert(direct_sum(v, w));
        values = std::move(next);
      }
      return values;
    };

    std::vector<std::size_t> relevant_chains;
    for (std::size_t c = 0; c < chains.size(); ++c) {
      bool touches = false;
      for (const auto& pos : chains[c].positions) touches = touches || certified.count(pos.p + pos.q) > 0;
      if (touches) relevant_chains.push_back(c);
    }

    for (const auto& even : possible(0))
      for (const auto& odd : possible(1)) {
        auto target = [&](long long n) -> const FgAbGroup& { return n % 2 == 0 ? even : odd; };
        bool pinned_ok = true;
        for (const auto& pin : pins_) pinned_ok = pinned_ok && target(pin.degree) == pin.group;
        if (!pinned_ok) continue;

        std::vector<std::size_t> choice(chains.size(), 0);
        if (!search(0, relevant_chains, outcomes, slots, fixed, target, choice)) continue;
        DifferentialAssignment d = assignment_for(page, chains, outcomes, choice);
        BigradedPage next = turn_page(page, d);
        auto h = history;
        auto t = trace;
        describe_assignment(page, d, t);
        h.push_back(std::move(d));
        record_leaf(next, std::move(h), std::move(t));
      }
  }

  template <class Target>
  bool search(std::size_t k, const std::vector<std::size_t>& order, const std::vector<ChainOutcomes>& outcomes,
              const std::map<long long, std::vector<std::pair<std::size_t, std::size_t>>>& slots,
              const std::map<long long, FgAbGroup>& fixed, const Target& target,
              std::vector<std::size_t>& choice) const {
    if (k == 0 && !consistent_partial(0, order, outcomes, slots, fixed, target, choice)) return false;
    if (k == order.size()) return true;
    const std::size_t c = order[k];
    for (std::size_t i = 0; i < outcomes[c].outcomes.size(); ++i) {
      choice[c] = i;
      if (consistent_partial(k + 1, order, outcomes, slots, fixed, target, choice) &&
          search(k + 1, order, outcomes, slots, fixed, target, choice))
        return true;
    }
    choice[c] = 0;
    return false;
  }

  // Degrees whose chains are all assigned must equal the target; the others
  // must still be able to grow into it.
  template <class Target>
  static bool consistent_partial(std::size_t assigned, const std::vector<std::size_t>& order,
                                 const std::vector<ChainOutcomes>& outcomes,
                                 const std::map<long long, std::vector<std::pair<std::size_t, std::size_t>>>& slots,
                                 const std::map<long long, FgAbGroup>& fixed, const Target& target,
                                 const std::vector<std::size_t>& choice) {
    std::vector<bool> done(outcomes.size(), false);
    for (std::size_t i = 0; i < assigned; ++i) done[order[i]] = true;
    for (const auto& [n, base] : fixed) {
      FgAbGroup acc = base;
      bool complete = true;
      auto it = slots.find(n);
      if (it != slots.end())
        for (auto [c, s] : it->second) {
          if (!done[c]) {
            complete = false;
            continue;
          }
          acc = direct_sum(acc, outcomes[c].outcomes[choice[c]].entries[s]);
        }
      if (complete ? acc != target(n) : !is_summand_of(acc, target(n))) return false;
    }
    return true;
  }

  std::vector<AbutmentConstraint> pins_;
  long long bound_;
  BranchTree tree_;
  std::vector<FloerLeaf> leaves_;
  std::size_t pages_ = 0;
  std::map<std::pair<std::vector<FgAbGroup>, std::vector<bool>>, ChainOutcomes> chain_cache_;
};

}  // namespace detail

/// Every Floer homology (in degrees 0, 1) some choice of differentials with
/// entries in [-entry_bound, entry_bound] produces, subject to 2-periodicity
/// of the certified abutment and the pinned degrees.
inline BranchTree solve_floer(const GradedGroup& s_homology, long long column_step,
                              const std::vector<AbutmentConstraint>& constraints, long long entry_bound,
                              const PageWindow& window) {
  if (entry_bound < 1) throw PreconditionError("solve_floer: entry bound must be >= 1");
  BigradedPage e1 = build_e1(s_homology, column_step, window);
  return detail::FloerSolver(constraints, entry_bound).solve(e1);
}

/// Default window: columns {-2N, ..., 2N}, rows up to the top degree of S.
inline PageWindow default_window(const GradedGroup& s_homology, long long column_step, long long steps = 2) {
  int top = 0;
  for (const auto& [d, g] : s_homology.entries())
    if (!g.is_zero()) top = std::max(top, static_cast<int>(d));
  return PageWindow::symmetric(column_step, steps, top);
}

}  // namespace cobstruct
