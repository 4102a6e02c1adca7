#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cobstruct/abgroup.hpp"
#include "cobstruct/errors.hpp"
#include "cobstruct/graded.hpp"
#include "cobstruct/topology.hpp"

namespace cobstruct {

/// One slot of an exact sequence: a known group or a named unknown.
struct SequenceTerm {
  enum class Kind { known, unknown };

  Kind kind = Kind::known;
  FgAbGroup group;       // known terms
  std::string variable;  // unknown terms; shared across sequences
  std::string label;     // display name, e.g. "HF_1(L2,L1)"

  static SequenceTerm known(FgAbGroup g, std::string label = {}) {
    SequenceTerm t;
    t.kind = Kind::known;
    t.group = std::move(g);
    t.label = std::move(label);
    return t;
  }
  static SequenceTerm unknown(std::string variable) {
    SequenceTerm t;
    t.kind = Kind::unknown;
    t.label = variable;
    t.variable = std::move(variable);
    return t;
  }

  bool is_known() const noexcept { return kind == Kind::known; }

  std::string display() const {
    if (!is_known()) return variable;
    if (label.empty()) return group.to_string();
    return label + " = " + group.to_string();
  }

  friend bool operator==(const SequenceTerm&, const SequenceTerm&) = default;
};

/// Terms t_0 -> t_1 -> ... -> t_{m-1}, exact at every interior term.
struct ExactSequence {
  std::string name;
  std::vector<SequenceTerm> terms;

  friend bool operator==(const ExactSequence&, const ExactSequence&) = default;
};

struct ExactSequenceProblem {
  std::vector<ExactSequence> sequences;
  /// Asserts every group is a Z/2-vector space; the solver only decides that fragment.
  bool elementary_two = true;
  /// Search bound on unknown dimensions; defaults to the total known dimension.
  std::optional<long long> unknown_dim_cap;
};

/// A bound on one solver variable, justified by a rule and earlier steps.
struct DeductionStep {
  enum class Rule { known_dimension, search_bound, constraint, case_assumption };
  enum class Bound { lower, upper };

  std::size_t id = 0;
  std::size_t variable = 0;
  Bound bound = Bound::lower;
  long long value = 0;
  Rule rule = Rule::constraint;
  std::size_t constraint = 0;  // Rule::constraint only
  std::vector<std::size_t> premises;
  std::string text;
};

/// Ordered deduction steps ending either in a contradiction on `variable`
/// (no cases) or in a case split over every value of `variable` allowed by
/// the two bounding steps, each case closed by its own sub-certificate.
/// An absent lower step means the implicit bound 0.
struct Certificate {
  struct Case;

  std::vector<DeductionStep> steps;
  std::size_t variable = 0;
  std::optional<std::size_t> lower_step;
  std::optional<std::size_t> upper_step;
  std::vector<Case> cases;
};

struct Certificate::Case {
  long long value = 0;
  Certificate proof;
};

struct FeasibilityWitness {
  std::map<std::string, long long> unknown_dims;
  std::vector<std::vector<long long>> ranks;  // ranks[s][i] = rank of t_i -> t_{i+1} in sequence s
};

struct FeasibilityVerdict {
  bool feasible = false;
  std::optional<FeasibilityWitness> witness;
  std::optional<Certificate> certificate;
};

namespace detail {

inline constexpr long long kUnbounded = std::numeric_limits<long long>::max();

/// Integer model of a problem: variables are term dimensions and map ranks.
struct ExactnessModel {
  enum class VarKind { known_dim, unknown_dim, rank };
  struct Variable {
    VarKind kind;
    std::string label;
    long long known = 0;  // known_dim only
  };
  /// kind sum: lhs[0] + lhs[1] = rhs.  kind le: lhs[0] <= rhs.
  struct Constraint {
    enum class Kind { sum, le } kind;
    std::vector<std::size_t> lhs;
    std::size_t rhs;
    std::string text;
  };

  std::vector<Variable> vars;
  std::vector<Constraint> constraints;
  std::vector<std::vector<std::size_t>> term_var;  // [sequence][term] -> dim variable
  std::vector<std::vector<std::size_t>> rank_var;  // [sequence][map] -> rank variable
  std::map<std::string, std::size_t> unknown_var;
  long long cap = 0;
};

inline long long term_dimension(const SequenceTerm& t) {
  auto d = t.group.elementary_two_dimension();
  if (!d)
    throw UnsupportedProblemError("known term " + t.display() +
                                  " is not a Z/2-vector space; rank counting is only decisive over Z/2");
  return static_cast<long long>(*d);
}

inline ExactnessModel build_model(const ExactSequenceProblem& problem) {
  if (!problem.elementary_two)
    throw UnsupportedProblemError(
        "exact sequences with general finitely generated unknowns are not supported; only Z/2-vector spaces");
  ExactnessModel m;
  long long known_total = 0;
  for (std::size_t s = 0; s < problem.sequences.size(); ++s) {
    const auto& seq = problem.sequences[s];
    if (seq.terms.size() < 3)
      throw ValidationError("exact sequence " + std::to_string(s) + " has " + std::to_string(seq.terms.size()) +
                            " terms; at least 3 are required");
    std::vector<std::size_t> dims;
    for (const auto& t : seq.terms) {
      if (t.is_known()) {
        const long long d = term_dimension(t);
        known_total += d;
        dims.push_back(m.vars.size());
        m.vars.push_back({ExactnessModel::VarKind::known_dim, "dim " + (t.label.empty() ? t.group.to_string() : t.label), d});
      } else {
        if (t.variable.empty()) throw ValidationError("unknown sequence term without a variable name");
        auto [it, inserted] = m.unknown_var.emplace(t.variable, m.vars.size());
        if (inserted) m.vars.push_back({ExactnessModel::VarKind::unknown_dim, "dim " + t.variable, 0});
        dims.push_back(it->second);
      }
    }
    m.term_var.push_back(dims);
  }
  m.cap = problem.unknown_dim_cap.value_or(known_total);
  if (m.cap < 0) throw ValidationError("unknown dimension cap must be >= 0");

  for (std::size_t s = 0; s < problem.sequences.size(); ++s) {
    const auto& seq = problem.sequences[s];
    const std::string where = seq.name.empty() ? "sequence " + std::to_string(s + 1) : seq.name;
    auto short_name = [&](std::size_t i) {
      const auto& t = seq.terms[i];
      return t.is_known() ? (t.label.empty() ? t.group.to_string() : t.label) : t.variable;
    };
    std::vector<std::size_t> ranks;
    for (std::size_t i = 0; i + 1 < seq.terms.size(); ++i) {
      ranks.push_back(m.vars.size());
      m.vars.push_back({ExactnessModel::VarKind::rank,
                        "rank(" + short_name(i) + " -> " + short_name(i + 1) + ") in " + where, 0});
    }
    for (std::size_t i = 0; i < ranks.size(); ++i) {
      m.constraints.push_back({ExactnessModel::Constraint::Kind::le,
                               {ranks[i]},
                               m.term_var[s][i],
                               "a map has rank at most the dimension of its source"});
      m.constraints.push_back({ExactnessModel::Constraint::Kind::le,
                               {ranks[i]},
                               m.term_var[s][i + 1],
                               "a map has rank at most the dimension of its target"});
    }
    for (std::size_t j = 1; j + 1 < seq.terms.size(); ++j)
      m.constraints.push_back({ExactnessModel::Constraint::Kind::sum,
                               {ranks[j - 1], ranks[j]},
                               m.term_var[s][j],
                               "exactness of " + where + " at " + short_name(j) + " (position " +
                                   std::to_string(j) + "): rank in + rank out = dim"});
    m.rank_var.push_back(std::move(ranks));
  }
  return m;
}

/// Current interval of every variable with the step that justifies each end.
struct BoundState {
  std::vector<long long> lo, hi;
  std::vector<std::optional<std::size_t>> lo_step, hi_step;
};

inline std::string bound_text(const ExactnessModel& m, std::size_t var, DeductionStep::Bound b, long long v) {
  return m.vars[var].label + (b == DeductionStep::Bound::lower ? " >= " : " <= ") + std::to_string(v);
}

/// The bound a constraint implies for `target`, reading the other variables'
/// bounds from `state`. Returns nullopt when nothing finite follows; fills
/// `premises` with the steps that were read.
inline std::optional<long long> implied_bound(const ExactnessModel::Constraint& c, std::size_t target,
                                              DeductionStep::Bound b, const BoundState& state,
                                              std::vector<std::size_t>& premises) {
  using B = DeductionStep::Bound;
  premises.clear();
  auto use_lo = [&](std::size_t v) {
    if (state.lo_step[v]) premises.push_back(*state.lo_step[v]);
    return state.lo[v];
  };
  auto use_hi = [&](std::size_t v) -> std::optional<long long> {
    if (state.hi[v] == kUnbounded) return std::nullopt;
    if (state.hi_step[v]) premises.push_back(*state.hi_step[v]);
    return state.hi[v];
  };
  if (c.kind == ExactnessModel::Constraint::Kind::le) {
    // lhs <= rhs
    if (target == c.lhs[0] && b == B::upper) return use_hi(c.rhs);
    if (target == c.rhs && b == B::lower) return use_lo(c.lhs[0]);
    return std::nullopt;
  }
  // a + b = c
  const std::size_t x = c.lhs[0], y = c.lhs[1];
  if (target == c.rhs) {
    if (b == B::lower) return use_lo(x) + use_lo(y);
    auto hx = use_hi(x);
    auto hy = use_hi(y);
    if (!hx || !hy) return std::nullopt;
    return *hx + *hy;
  }
  if (target != x && target != y) return std::nullopt;
  const std::size_t other = target == x ? y : x;
  if (b == B::upper) {
    auto hc = use_hi(c.rhs);
    if (!hc) return std::nullopt;
    return *hc - use_lo(other);
  }
  auto ho = use_hi(other);
  if (!ho) return std::nullopt;
  return use_lo(c.rhs) - *ho;
}

inline std::vector<std::size_t> constraint_vars(const ExactnessModel::Constraint& c) {
  std::vector<std::size_t> out = c.lhs;
  out.push_back(c.rhs);
  return out;
}

class ExactnessSolver {
 public:
  explicit ExactnessSolver(const ExactnessModel& model) : m_(model) {}

  FeasibilityVerdict solve() {
    BoundState state;
    const std::size_t n = m_.vars.size();
    state.lo.assign(n, 0);
    state.hi.assign(n, kUnbounded);
    state.lo_step.assign(n, std::nullopt);
    state.hi_step.assign(n, std::nullopt);
    std::vector<DeductionStep> steps;
    for (std::size_t v = 0; v < n; ++v) {
      const auto& var = m_.vars[v];
      if (var.kind == ExactnessModel::VarKind::known_dim) {
        record(state, steps, v, DeductionStep::Bound::lower, var.known, DeductionStep::Rule::known_dimension, 0, {},
               "known term");
        record(state, steps, v, DeductionStep::Bound::upper, var.known, DeductionStep::Rule::known_dimension, 0, {},
               "known term");
      } else if (var.kind == ExactnessModel::VarKind::unknown_dim) {
        record(state, steps, v, DeductionStep::Bound::upper, m_.cap, DeductionStep::Rule::search_bound, 0, {},
               "search bound on unknown dimensions");
      }
    }
    FeasibilityVerdict verdict;
    auto result = search(state, std::move(steps));
    if (result.witness) {
      verdict.feasible = true;
      verdict.witness = std::move(result.witness);
    } else {
      prune(*result.certificate);
      verdict.certificate = std::move(result.certificate);
    }
    return verdict;
  }

 private:
  struct SearchResult {
    std::optional<FeasibilityWitness> witness;
    std::optional<Certificate> certificate;
  };

  void record(BoundState& state, std::vector<DeductionStep>& steps, std::size_t var, DeductionStep::Bound b,
              long long value, DeductionStep::Rule rule, std::size_t constraint, std::vector<std::size_t> premises,
              const std::string& why) {
    DeductionStep s;
    s.id = next_id_++;
    s.variable = var;
    s.bound = b;
    s.value = value;
    s.rule = rule;
    s.constraint = constraint;
    s.premises = std::move(premises);
    s.text = bound_text(m_, var, b, value) + "  [" + why + "]";
    if (b == DeductionStep::Bound::lower) {
      state.lo[var] = value;
      state.lo_step[var] = s.id;
    } else {
      state.hi[var] = value;
      state.hi_step[var] = s.id;
    }
    steps.push_back(std::move(s));
  }

  static bool contradicts(const BoundState& st, std::size_t v) { return st.hi[v] != kUnbounded && st.lo[v] > st.hi[v]; }

  /// Tightens bounds to a fixpoint; returns the variable whose interval
  /// became empty, if any.
  std::optional<std::size_t> propagate(BoundState& state, std::vector<DeductionStep>& steps) {
    for (std::size_t v = 0; v < m_.vars.size(); ++v)
      if (contradicts(state, v)) return v;
    std::vector<std::size_t> premises;
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t ci = 0; ci < m_.constraints.size(); ++ci) {
        const auto& c = m_.constraints[ci];
        for (std::size_t v : constraint_vars(c)) {
          for (auto b : {DeductionStep::Bound::upper, DeductionStep::Bound::lower}) {
            auto value = implied_bound(c, v, b, state, premises);
            if (!value) continue;
            const bool tighter = b == DeductionStep::Bound::upper
                                     ? (state.hi[v] == kUnbounded || *value < state.hi[v])
                                     : *value > state.lo[v];
            if (!tighter) continue;
            record(state, steps, v, b, *value, DeductionStep::Rule::constraint, ci, premises, c.text);
            changed = true;
            if (contradicts(state, v)) return v;
          }
        }
      }
    }
    return std::nullopt;
  }

  SearchResult search(BoundState state, std::vector<DeductionStep> steps) {
    if (auto bad = propagate(state, steps)) {
      Certificate cert;
      cert.steps = std::move(steps);
      cert.variable = *bad;
      cert.lower_step = state.lo_step[*bad];
      cert.upper_step = state.hi_step[*bad];
      return {std::nullopt, std::move(cert)};
    }
    // branch on the first open variable: unknown dimensions before ranks
    std::optional<std::size_t> open;
    for (auto kind : {ExactnessModel::VarKind::unknown_dim, ExactnessModel::VarKind::rank}) {
      for (std::size_t v = 0; v < m_.vars.size() && !open; ++v)
        if (m_.vars[v].kind == kind && state.lo[v] != state.hi[v]) open = v;
      if (open) break;
    }
    if (!open) return {witness_from(state), std::nullopt};

    const std::size_t v = *open;
    Certificate cert;
    cert.variable = v;
    cert.lower_step = state.lo_step[v];
    cert.upper_step = state.hi_step[v];
    for (long long value = state.lo[v]; value <= state.hi[v]; ++value) {
      BoundState branch = state;
      std::vector<DeductionStep> case_steps;
      const std::string why = "case " + m_.vars[v].label + " = " + std::to_string(value);
      if (value != state.lo[v])
        record(branch, case_steps, v, DeductionStep::Bound::lower, value, DeductionStep::Rule::case_assumption, 0, {},
               why);
      if (value != state.hi[v])
        record(branch, case_steps, v, DeductionStep::Bound::upper, value, DeductionStep::Rule::case_assumption, 0, {},
               why);
      auto sub = search(std::move(branch), std::move(case_steps));
      if (sub.witness) return sub;
      cert.cases.push_back({value, std::move(*sub.certificate)});
    }
    cert.steps = std::move(steps);
    return {std::nullopt, std::move(cert)};
  }

  FeasibilityWitness witness_from(const BoundState& state) const {
    FeasibilityWitness w;
    for (const auto& [name, v] : m_.unknown_var) w.unknown_dims[name] = state.lo[v];
    for (const auto& ranks : m_.rank_var) {
      std::vector<long long> r;
      for (std::size_t v : ranks) r.push_back(state.lo[v]);
      w.ranks.push_back(std::move(r));
    }
    return w;
  }

  /// Drops steps that do not feed the conclusion; returns ids still needed
  /// from enclosing levels.
  static std::set<std::size_t> prune(Certificate& cert) {
    std::set<std::size_t> need;
    if (cert.lower_step) need.insert(*cert.lower_step);
    if (cert.upper_step) need.insert(*cert.upper_step);
    for (auto& c : cert.cases) {
      auto sub = prune(c.proof);
      need.insert(sub.begin(), sub.end());
    }
    std::vector<DeductionStep> kept;
    for (auto it = cert.steps.rbegin(); it != cert.steps.rend(); ++it) {
      if (!need.count(it->id)) continue;
      need.erase(it->id);
      need.insert(it->premises.begin(), it->premises.end());
      kept.push_back(std::move(*it));
    }
    std::reverse(kept.begin(), kept.end());
    cert.steps = std::move(kept);
    return need;
  }

  const ExactnessModel& m_;
  std::size_t next_id_ = 0;
};

inline bool verify_certificate_level(const ExactnessModel& m, const Certificate& cert,
                                     std::map<std::size_t, DeductionStep> env,
                                     const std::optional<std::pair<std::size_t, long long>>& assumption) {
  using B = DeductionStep::Bound;
  for (const auto& s : cert.steps) {
    if (env.count(s.id) || s.variable >= m.vars.size()) return false;
    const auto& var = m.vars[s.variable];
    switch (s.rule) {
      case DeductionStep::Rule::known_dimension:
        if (var.kind != ExactnessModel::VarKind::known_dim || s.value != var.known) return false;
        break;
      case DeductionStep::Rule::search_bound:
        if (var.kind != ExactnessModel::VarKind::unknown_dim || s.bound != B::upper || s.value != m.cap) return false;
        break;
      case DeductionStep::Rule::case_assumption:
        if (!assumption || assumption->first != s.variable || assumption->second != s.value) return false;
        break;
      case DeductionStep::Rule::constraint: {
        if (s.constraint >= m.constraints.size()) return false;
        // rebuild the bounds visible through the premises only
        BoundState view;
        const std::size_t n = m.vars.size();
        view.lo.assign(n, 0);
        view.hi.assign(n, kUnbounded);
        view.lo_step.assign(n, std::nullopt);
        view.hi_step.assign(n, std::nullopt);
        for (std::size_t p : s.premises) {
          auto it = env.find(p);
          if (it == env.end()) return false;
          const auto& ps = it->second;
          if (ps.bound == B::lower) {
            view.lo[ps.variable] = std::max(view.lo[ps.variable], ps.value);
          } else if (view.hi[ps.variable] == kUnbounded || ps.value < view.hi[ps.variable]) {
            view.hi[ps.variable] = ps.value;
          }
        }
        std::vector<std::size_t> ignored;
        auto implied = implied_bound(m.constraints[s.constraint], s.variable, s.bound, view, ignored);
        if (!implied) return false;
        if (s.bound == B::lower ? *implied < s.value : *implied > s.value) return false;
        break;
      }
    }
    env.emplace(s.id, s);
  }
  // bounds on the concluding variable
  long long lo = 0, hi = kUnbounded;
  if (cert.lower_step) {
    auto it = env.find(*cert.lower_step);
    if (it == env.end() || it->second.variable != cert.variable || it->second.bound != B::lower) return false;
    lo = it->second.value;
  }
  if (cert.upper_step) {
    auto it = env.find(*cert.upper_step);
    if (it == env.end() || it->second.variable != cert.variable || it->second.bound != B::upper) return false;
    hi = it->second.value;
  }
  if (cert.cases.empty()) return hi != kUnbounded && lo > hi;
  if (hi == kUnbounded || hi - lo + 1 != static_cast<long long>(cert.cases.size())) return false;
  for (std::size_t k = 0; k < cert.cases.size(); ++k) {
    const auto& c = cert.cases[k];
    if (c.value != lo + static_cast<long long>(k)) return false;
    if (!verify_certificate_level(m, c.proof, env, std::make_pair(cert.variable, c.value))) return false;
  }
  return true;
}

inline void render_certificate(const ExactnessModel& m, const Certificate& cert, const std::string& indent,
                               std::vector<std::string>& out) {
  for (const auto& s : cert.steps) {
    std::string line = indent + "(" + std::to_string(s.id) + ") " + s.text;
    if (!s.premises.empty()) {
      line += " from";
      for (std::size_t p : s.premises) line += " (" + std::to_string(p) + ")";
    }
    out.push_back(std::move(line));
  }
  const std::string& label = m.vars[cert.variable].label;
  if (cert.cases.empty()) {
    std::string lo = cert.lower_step ? "(" + std::to_string(*cert.lower_step) + ")" : "nonnegativity";
    std::string hi = cert.upper_step ? "(" + std::to_string(*cert.upper_step) + ")" : "?";
    out.push_back(indent + "contradiction: " + label + " has no admissible value, by " + lo + " and " + hi);
    return;
  }
  out.push_back(indent + "case split on " + label + ":");
  for (const auto& c : cert.cases) {
    out.push_back(indent + "  case " + label + " = " + std::to_string(c.value) + ":");
    render_certificate(m, c.proof, indent + "    ", out);
  }
}

}  // namespace detail

/// Decides whether Z/2-vector spaces and maps realizing every sequence exist.
/// Exact over the rank model: dimensions of unknowns and ranks of all maps,
/// with rank(in) + rank(out) = dim at each interior term.
inline FeasibilityVerdict check_feasibility(const ExactSequenceProblem& problem) {
  auto model = detail::build_model(problem);
  return detail::ExactnessSolver(model).solve();
}

/// Substitutes the witness into every constraint.
inline bool verify_witness(const ExactSequenceProblem& problem, const FeasibilityWitness& w) {
  auto model = detail::build_model(problem);
  if (w.ranks.size() != problem.sequences.size()) return false;
  auto dim_of = [&](const SequenceTerm& t) -> std::optional<long long> {
    if (t.is_known()) return detail::term_dimension(t);
    auto it = w.unknown_dims.find(t.variable);
    if (it == w.unknown_dims.end() || it->second < 0) return std::nullopt;
    return it->second;
  };
  for (std::size_t s = 0; s < problem.sequences.size(); ++s) {
    const auto& terms = problem.sequences[s].terms;
    const auto& r = w.ranks[s];
    if (r.size() + 1 != terms.size()) return false;
    std::vector<long long> dims;
    for (const auto& t : terms) {
      auto d = dim_of(t);
      if (!d) return false;
      dims.push_back(*d);
    }
    for (std::size_t i = 0; i < r.size(); ++i)
      if (r[i] < 0 || r[i] > dims[i] || r[i] > dims[i + 1]) return false;
    for (std::size_t j = 1; j + 1 < terms.size(); ++j)
      if (r[j - 1] + r[j] != dims[j]) return false;
  }
  return true;
}

/// Replays every step against the rank model of `problem`.
inline bool verify_certificate(const ExactSequenceProblem& problem, const Certificate& cert) {
  auto model = detail::build_model(problem);
  return detail::verify_certificate_level(model, cert, {}, std::nullopt);
}

/// Human-readable deduction chain.
inline std::vector<std::string> render_certificate(const ExactSequenceProblem& problem, const Certificate& cert,
                                                   const std::string& indent = "") {
  auto model = detail::build_model(problem);
  std::vector<std::string> out;
  detail::render_certificate(model, cert, indent, out);
  return out;
}

inline std::string render_witness(const ExactSequenceProblem& problem, const FeasibilityWitness& w) {
  std::string out;
  for (const auto& [name, d] : w.unknown_dims) out += (out.empty() ? "" : ", ") + ("dim " + name + " = " + std::to_string(d));
  for (std::size_t s = 0; s < w.ranks.size(); ++s) {
    const auto& seq = problem.sequences[s];
    out += std::string(out.empty() ? "" : "; ") + (seq.name.empty() ? "sequence " + std::to_string(s + 1) : seq.name) +
           " ranks [";
    for (std::size_t i = 0; i < w.ranks[s].size(); ++i) out += (i ? ", " : "") + std::to_string(w.ranks[s][i]);
    out += "]";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cobordism sequences

/// V: source ~> (first_end, second_end); the order of ends matters.
struct CobordismClaim {
  std::string source;
  std::string first_end;
  std::string second_end;
  bool spin = true;
  bool monotone = true;
  std::optional<long long> maslov;  // N_V, when known

  std::string label() const { return source + " ~> (" + first_end + ", " + second_end + ")"; }

  friend bool operator==(const CobordismClaim&, const CobordismClaim&) = default;
};

/// HF_0 and HF_1 of (probe, end) over the common grading; 2-periodicity
/// determines every other degree.
struct ProbeFloerGroups {
  FgAbGroup hf0;
  FgAbGroup hf1;

  friend bool operator==(const ProbeFloerGroups&, const ProbeFloerGroups&) = default;
};

/// Floer data of the probe against each end, keyed by end name.
using ProbeFloerTable = std::map<std::string, ProbeFloerGroups>;

namespace detail {

inline const LagrangianDescriptor& find_lagrangian(const std::map<std::string, LagrangianDescriptor>& lags,
                                                   const std::string& name) {
  auto it = lags.find(name);
  if (it == lags.end()) throw ValidationError("unknown Lagrangian '" + name + "'");
  return it->second;
}

inline std::string floer_label(long long degree, const std::string& a, const std::string& b) {
  return "HF_" + std::to_string(degree) + "(" + a + "," + b + ")";
}

}  // namespace detail

/// Throws AdmissibilityError naming the first violated hypothesis of the
/// long exact sequence of a cobordism.
inline void check_cobordism_admissibility(const LagrangianDescriptor& probe, const CobordismClaim& claim,
                                          const std::map<std::string, LagrangianDescriptor>& lags,
                                          const LaurentGrading& grading) {
  if (!probe.maslov || *probe.maslov <= 3)
    throw AdmissibilityError("N_K > 3", "probe " + probe.name + " has minimal Maslov number " +
                                            (probe.maslov ? std::to_string(*probe.maslov) : "unknown"));
  if (!claim.spin || !claim.monotone)
    throw AdmissibilityError("spin monotone cobordism", claim.label() + " is not declared spin and monotone");
  const auto& source = detail::find_lagrangian(lags, claim.source);
  const auto& e1 = detail::find_lagrangian(lags, claim.first_end);
  const auto& e2 = detail::find_lagrangian(lags, claim.second_end);
  for (const auto* l : {&probe, &source, &e1, &e2}) {
    if (!l->spin || !l->monotone)
      throw AdmissibilityError("monotone spin Lagrangians", l->name + " is not declared monotone and spin");
    if (l->ambient_dim != probe.ambient_dim)
      throw AdmissibilityError("equal monotonicity constants", l->name + " lives in CP^" +
                                                                   std::to_string(l->ambient_dim) + ", probe in CP^" +
                                                                   std::to_string(probe.ambient_dim));
  }
  // |deg T| must divide N_{K,L1}, N_{K,L2}, N_{K,L}, N_V. An undeclared Maslov
  // number is only known to be even, so then only |deg T| = 2 is safe.
  const long long step = grading.step();
  auto require = [&](const std::string& what, std::optional<long long> n) {
    if (!n) {
      if (step != 2)
        throw AdmissibilityError("common divisor", "|deg T| = " + std::to_string(step) + " must divide " + what +
                                                       ", which is only known to be even");
      return;
    }
    if (*n % step != 0)
      throw AdmissibilityError("common divisor", "|deg T| = " + std::to_string(step) + " does not divide " + what +
                                                     " = " + std::to_string(*n));
  };
  auto pair_number = [&](const LagrangianDescriptor& l) -> std::optional<long long> {
    if (!l.maslov) return std::nullopt;
    return std::gcd(*probe.maslov, *l.maslov);
  };
  require("N_{" + probe.name + "," + e1.name + "}", pair_number(e1));
  require("N_{" + probe.name + "," + e2.name + "}", pair_number(e2));
  require("N_{" + probe.name + "," + source.name + "}", pair_number(source));
  require("N_V of " + claim.label(), claim.maslov);
}

/// Five-term window of the long exact sequence of V: L ~> (E1, E2) probed by K,
/// folded to degrees {0, 1}:
///   HF_1(K,E2) -> HF_1(K,E1) -> HF_1(K,L) -> HF_0(K,E2) -> HF_0(K,E1).
inline ExactSequence build_cobordism_sequence(const LagrangianDescriptor& probe, const CobordismClaim& claim,
                                              const ProbeFloerTable& floer,
                                              const std::map<std::string, LagrangianDescriptor>& lags,
                                              const LaurentGrading& grading) {
  check_cobordism_admissibility(probe, claim, lags, grading);
  auto groups = [&](const std::string& end) -> const ProbeFloerGroups& {
    auto it = floer.find(end);
    if (it == floer.end())
      throw ValidationError("no Floer data for the pair (" + probe.name + ", " + end + ")");
    return it->second;
  };
  const auto& k = probe.name;
  const auto& g1 = groups(claim.first_end);
  const auto& g2 = groups(claim.second_end);
  ExactSequence seq;
  seq.name = claim.label();
  seq.terms = {
      SequenceTerm::known(g2.hf1, detail::floer_label(1, k, claim.second_end)),
      SequenceTerm::known(g1.hf1, detail::floer_label(1, k, claim.first_end)),
      SequenceTerm::unknown(detail::floer_label(1, k, claim.source)),
      SequenceTerm::known(g2.hf0, detail::floer_label(0, k, claim.second_end)),
      SequenceTerm::known(g1.hf0, detail::floer_label(0, k, claim.first_end)),
  };
  return seq;
}

/// One sequence per cobordism; cobordisms sharing a source share the unknown
/// HF_1(K, source).
inline ExactSequenceProblem build_cobordism_sequences(const LagrangianDescriptor& probe,
                                                      const std::vector<CobordismClaim>& cobordisms,
                                                      const ProbeFloerTable& floer,
                                                      const std::map<std::string, LagrangianDescriptor>& lags,
                                                      const LaurentGrading& grading) {
  ExactSequenceProblem problem;
  for (const auto& c : cobordisms) problem.sequences.push_back(build_cobordism_sequence(probe, c, floer, lags, grading));
  return problem;
}

/// One combination of Floer branches, e.g. one option per intersection pair.
struct FloerBranchCase {
  std::string description;
  ProbeFloerTable floer;
};

struct ClaimBranchResult {
  std::string description;
  ExactSequenceProblem problem;
  FeasibilityVerdict verdict;
};

struct ClaimReport {
  CobordismClaim claim;
  std::vector<CobordismClaim> assumed;  // cobordisms known to exist, checked jointly
  bool infeasible = false;
  std::vector<ClaimBranchResult> branches;
};

/// A claim is INFEASIBLE when, in every Floer branch, the sequences of the
/// claim together with those of the assumed cobordisms have no solution.
inline ClaimReport certify_nonexistence(const CobordismClaim& claim, const std::vector<CobordismClaim>& assumed,
                                        const std::vector<FloerBranchCase>& branches,
                                        const LagrangianDescriptor& probe,
                                        const std::map<std::string, LagrangianDescriptor>& lags,
                                        const LaurentGrading& grading) {
  if (branches.empty())
    throw ValidationError("no consistent spectral sequence under the entry bound for " + claim.label() +
                          "; raise the branch bound");
  ClaimReport report;
  report.claim = claim;
  for (const auto& a : assumed)
    if (!(a == claim) && std::find(report.assumed.begin(), report.assumed.end(), a) == report.assumed.end())
      report.assumed.push_back(a);
  std::vector<CobordismClaim> system = report.assumed;
  system.push_back(claim);
  report.infeasible = true;
  for (const auto& b : branches) {
    ClaimBranchResult r;
    r.description = b.description;
    r.problem = build_cobordism_sequences(probe, system, b.floer, lags, grading);
    r.verdict = check_feasibility(r.problem);
    if (r.verdict.feasible) report.infeasible = false;
    report.branches.push_back(std::move(r));
  }
  return report;
}

}  // namespace cobstruct
