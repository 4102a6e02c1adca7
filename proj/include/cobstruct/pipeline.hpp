#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "cobstruct/abgroup.hpp"
#include "cobstruct/errors.hpp"
#include "cobstruct/exactness.hpp"
#include "cobstruct/graded.hpp"
#include "cobstruct/scenario.hpp"
#include "cobstruct/spectra.hpp"
#include "cobstruct/topology.hpp"

namespace cobstruct {

struct SpaceHomologyRow {
  std::string name;
  std::string expression;
  GradedGroup homology;
};

struct SpinCheckRow {
  std::string pair;
  std::string surgery;
  bool passed = false;
  std::vector<std::string> lines;
};

struct HfBranch {
  GradedGroup native;                 // over deg T = -N, degrees {0, 1}
  std::optional<GradedGroup> folded;  // over the scenario grading
  std::vector<std::string> trace;
};

struct HfTable {
  std::string first;
  std::string second;
  std::string space;
  long long column_step = 0;
  PageWindow window;
  long long entry_bound = 0;
  std::vector<AbutmentConstraint> pins;
  std::vector<HfBranch> branches;
  bool may_truncate = false;
  std::vector<std::string> notes;

  std::string pair_label() const { return "(" + first + ", " + second + ")"; }
};

struct RunReport {
  std::string scenario_name;
  long long t_degree = -2;
  std::optional<std::string> probe;
  std::vector<std::string> admissibility;
  std::vector<SpaceHomologyRow> homology;
  std::vector<SpinCheckRow> spin_checks;
  std::vector<CobordismClaim> established;
  std::vector<HfTable> hf_tables;
  std::vector<ClaimReport> claims;

  bool any_infeasible() const {
    for (const auto& c : claims)
      if (c.infeasible) return true;
    return false;
  }
};

namespace detail {

/// Runs one pipeline stage, prefixing any diagnostic with the stage name
/// while keeping the error category (and named hypothesis).
template <typename F>
void run_stage(const std::string& stage, F&& body) {
  const std::string prefix = "stage " + stage + ": ";
  try {
    body();
  } catch (const AdmissibilityError& e) {
    throw AdmissibilityError(e.hypothesis(), prefix + e.detail());
  } catch (const ValidationError& e) {
    throw ValidationError(prefix + e.what());
  } catch (const UnsupportedProblemError& e) {
    throw UnsupportedProblemError(prefix + e.what());
  } catch (const PreconditionError& e) {
    throw PreconditionError(prefix + e.what());
  }
}

inline std::string homology_line(const GradedGroup& h) {
  std::string out;
  for (const auto& [d, g] : h.entries()) {
    if (g.is_zero()) continue;
    out += (out.empty() ? "" : ", ") + ("H_" + std::to_string(d) + " = " + g.to_string());
  }
  return out.empty() ? "0" : out;
}

inline std::string hf_pair_line(const GradedGroup& hf) {
  return "HF_0 = " + hf.at(0).to_string() + ", HF_1 = " + hf.at(1).to_string();
}

inline std::string z2_dims(const GradedGroup& c, int top) {
  std::string out;
  for (int k = 0; k <= top; ++k)
    out += (k ? ", " : "") + std::to_string(c.at(k).elementary_two_dimension().value_or(0));
  return "[" + out + "]";
}

inline const HfTable* find_table(const std::vector<HfTable>& tables, const std::string& a, const std::string& b) {
  for (const auto& t : tables)
    if ((t.first == a && t.second == b) || (t.first == b && t.second == a)) return &t;
  return nullptr;
}

inline std::string divisor_line(const LagrangianDescriptor& probe, const CobordismClaim& c,
                                const std::map<std::string, LagrangianDescriptor>& lags, const LaurentGrading& g) {
  auto pair = [&](const std::string& n) {
    const auto& l = lags.at(n);
    const std::string label = "N_{" + probe.name + "," + n + "}";
    if (!l.maslov) return label + " (even)";
    return label + " = " + std::to_string(std::gcd(*probe.maslov, *l.maslov));
  };
  return "|deg T| = " + std::to_string(g.step()) + " divides " + pair(c.first_end) + ", " + pair(c.second_end) +
         ", " + pair(c.source) + ", N_V" + (c.maslov ? " = " + std::to_string(*c.maslov) : std::string(" (even)"));
}

}  // namespace detail

/// Executes: admissibility -> homology -> spin -> floer (with coefficient
/// change) -> claims. Throws on the first failing stage, naming it.
inline RunReport run(const ObstructionScenario& sc) {
  RunReport report;
  report.scenario_name = sc.name;
  report.t_degree = sc.grading.t_degree();
  report.probe = sc.probe;
  const auto lags = sc.lagrangian_map();

  detail::run_stage("admissibility", [&] {
    report.admissibility.push_back("grading: deg T = " + std::to_string(sc.grading.t_degree()) + " is even");
    const auto tau = monotonicity_constant(sc.lagrangians.front().ambient_dim);
    report.admissibility.push_back("all Lagrangians lie in CP^" + std::to_string(sc.lagrangians.front().ambient_dim) +
                                   ": equal monotonicity constants tau = " + tau.to_string());
    for (const auto& x : sc.intersections) {
      const auto& a = sc.lagrangian(x.first);
      const auto& b = sc.lagrangian(x.second);
      for (const auto* l : {&a, &b})
        if (!l->spin || !l->monotone)
          throw AdmissibilityError("monotone spin Lagrangians",
                                   "intersection " + x.pair_label() + ": " + l->name + " is not monotone and spin");
      const long long n = pair_maslov(a, b);
      if (n <= 3)
        throw AdmissibilityError("N_{L1,L2} > 3", "intersection " + x.pair_label() + " has pair Maslov number " +
                                                      std::to_string(n));
      if (!x.clean || !x.connected)
        throw AdmissibilityError("clean connected intersection",
                                 "intersection " + x.pair_label() + " must be clean and connected");
      report.admissibility.push_back("intersection " + x.pair_label() + ": N = gcd(" + std::to_string(*a.maslov) +
                                     ", " + std::to_string(*b.maslov) + ") = " + std::to_string(n) +
                                     " > 3, clean, connected");
    }
    if (!sc.claims.empty()) {
      const auto& probe = sc.lagrangian(*sc.probe);
      for (const auto& c : sc.claims) {
        check_cobordism_admissibility(probe, c, lags, sc.grading);
        report.admissibility.push_back("claim " + c.label() + ": N_K = " + std::to_string(*probe.maslov) + " > 3; " +
                                       detail::divisor_line(probe, c, lags, sc.grading));
      }
    }
  });

  detail::run_stage("homology", [&] {
    for (const auto& [n, s] : sc.spaces) report.homology.push_back({n, s.to_string(), homology(s)});
    for (const auto& l : sc.lagrangians)
      if (l.space) report.homology.push_back({l.name, l.space->to_string(), homology(*l.space)});
  });

  detail::run_stage("spin", [&] {
    for (const auto& x : sc.intersections) {
      if (!x.surgery) continue;
      SpinCheckRow row;
      row.pair = x.pair_label();
      row.surgery = *x.surgery;
      const auto& l1 = sc.lagrangian(x.first);
      const auto& l2 = sc.lagrangian(x.second);
      for (const auto* l : {&l1, &l2})
        if (!l->space) throw ValidationError("spin check for " + x.pair_label() + " needs the space of " + l->name);
      const SpaceExpr& s = sc.spaces.at(x.space);
      const int top = 2;
      const auto c1 = z2_cohomology(*l1.space);
      const auto c2 = z2_cohomology(*l2.space);
      const auto cs = z2_cohomology(s);
      std::map<int, std::size_t> ranks = x.restriction_ranks;
      std::vector<std::string> why;
      for (int k : x.restriction_surjective_degrees) {
        if (ranks.count(k)) continue;
        ranks[k] = cs.at(k).elementary_two_dimension().value_or(0);
        why.push_back("rank i_1^* in degree " + std::to_string(k) + " = " + std::to_string(ranks[k]) +
                      " (declared surjective)");
      }
      if (!ranks.count(0) && x.connected) {
        ranks[0] = cs.at(0).elementary_two_dimension().value_or(0);
        why.push_back("rank i_1^* in degree 0 = " + std::to_string(ranks[0]) + " (S connected)");
      }
      for (const auto& [k, r] : x.restriction_ranks)
        why.push_back("rank i_1^* in degree " + std::to_string(k) + " = " + std::to_string(r) + " (declared)");
      row.lines.push_back("dim H^k(" + l1.name + "; Z/2), k = 0..2: " + detail::z2_dims(c1, top));
      row.lines.push_back("dim H^k(" + l2.name + "; Z/2), k = 0..2: " + detail::z2_dims(c2, top));
      row.lines.push_back("dim H^k(" + x.space + "; Z/2), k = 0..2: " + detail::z2_dims(cs, top));
      for (auto& w : why) row.lines.push_back(std::move(w));
      row.passed = mayer_vietoris_spin_check(c1, c2, cs, ranks);
      const std::string v = *x.surgery + " ~> (" + x.first + ", " + x.second + ")";
      if (row.passed) {
        row.lines.push_back("Mayer-Vietoris: i_1^* onto in degrees 0, 1, so (j_1^*, j_2^*) is injective on H^1, H^2;");
        row.lines.push_back("ends spin, so w_1(V) = w_2(V) = 0: V: " + v + " is a spin monotone cobordism");
        CobordismClaim est;
        est.source = *x.surgery;
        est.first_end = x.first;
        est.second_end = x.second;
        report.established.push_back(est);
      } else {
        row.lines.push_back("Mayer-Vietoris: restriction data does not force injectivity; V: " + v +
                            " is not known to be spin and is not used");
      }
      report.spin_checks.push_back(std::move(row));
    }
  });

  detail::run_stage("floer", [&] {
    for (const auto& x : sc.intersections) {
      HfTable t;
      t.first = x.first;
      t.second = x.second;
      t.space = x.space;
      t.column_step = pair_maslov(sc.lagrangian(x.first), sc.lagrangian(x.second));
      t.entry_bound = sc.solver.entry_bound;
      t.pins = x.pins;
      const GradedGroup h = homology(sc.spaces.at(x.space));
      t.window = default_window(h, t.column_step, sc.solver.window);
      BranchTree tree = solve_floer(h, t.column_step, x.pins, sc.solver.entry_bound, t.window);
      t.may_truncate = tree.bound_may_truncate || tree.page_limit_hit;
      t.notes = tree.notes;
      const LaurentGrading native(-t.column_step);
      const bool foldable = t.column_step % sc.grading.step() == 0;
      for (auto& leaf : tree.leaves) {
        HfBranch b;
        b.native = leaf.hf;
        if (foldable) b.folded = coefficient_change(leaf.hf, native, sc.grading);
        b.trace = std::move(leaf.trace);
        t.branches.push_back(std::move(b));
      }
      report.hf_tables.push_back(std::move(t));
    }
  });

  detail::run_stage("claims", [&] {
    if (sc.claims.empty()) return;
    const auto& probe = sc.lagrangian(*sc.probe);
    for (const auto& claim : sc.claims) {
      std::vector<CobordismClaim> assumed;
      for (const auto& e : report.established)
        if (e.source == claim.source) assumed.push_back(e);
      // ends in order of first appearance
      std::vector<std::string> ends;
      auto add_end = [&](const std::string& n) {
        if (std::find(ends.begin(), ends.end(), n) == ends.end()) ends.push_back(n);
      };
      for (const auto& a : assumed) {
        add_end(a.first_end);
        add_end(a.second_end);
      }
      add_end(claim.first_end);
      add_end(claim.second_end);
      std::vector<const HfTable*> tables;
      for (const auto& e : ends) {
        const HfTable* t = detail::find_table(report.hf_tables, probe.name, e);
        if (!t) throw ValidationError("no intersection data for the pair (" + probe.name + ", " + e + ")");
        if (t->branches.empty())
          throw ValidationError("no consistent spectral sequence under the entry bound for " + t->pair_label() +
                                "; raise --branch-bound");
        tables.push_back(t);
      }
      // product of the branch lists, first end varying slowest
      std::vector<FloerBranchCase> cases;
      std::vector<std::size_t> idx(ends.size(), 0);
      for (bool done = false; !done;) {
        FloerBranchCase c;
        for (std::size_t i = 0; i < ends.size(); ++i) {
          const auto& b = tables[i]->branches[idx[i]];
          c.floer[ends[i]] = {b.folded->at(0), b.folded->at(1)};
          c.description += std::string(i ? "; " : "") + "HF(" + probe.name + "," + ends[i] + ") option " +
                           std::to_string(idx[i] + 1) + "/" + std::to_string(tables[i]->branches.size()) + ": " +
                           detail::hf_pair_line(*b.folded);
        }
        cases.push_back(std::move(c));
        done = true;
        for (std::size_t k = ends.size(); k-- > 0;) {
          if (++idx[k] < tables[k]->branches.size()) {
            done = false;
            break;
          }
          idx[k] = 0;
        }
      }
      report.claims.push_back(certify_nonexistence(claim, assumed, cases, probe, lags, sc.grading));
    }
  });
  return report;
}

// ---------------------------------------------------------------------------
// Rendering

inline std::string verdict_word(const ClaimReport& c) { return c.infeasible ? "INFEASIBLE" : "NOT OBSTRUCTED"; }

inline std::string render_text(const RunReport& r) {
  std::vector<std::string> out;
  out.push_back("cobstruct report" + (r.scenario_name.empty() ? std::string() : ": " + r.scenario_name));
  out.push_back("grading: deg T = " + std::to_string(r.t_degree) +
                (r.probe ? ", probe K = " + *r.probe : std::string()));
  out.push_back("");
  out.push_back("== admissibility");
  for (const auto& l : r.admissibility) out.push_back("  ok: " + l);
  out.push_back("");
  out.push_back("== homology");
  for (const auto& h : r.homology)
    out.push_back("  " + h.name + " = " + h.expression + ": " + detail::homology_line(h.homology));
  if (!r.spin_checks.empty()) {
    out.push_back("");
    out.push_back("== spin");
    for (const auto& s : r.spin_checks) {
      out.push_back("  surgery " + s.surgery + " along " + s.pair + ": " + (s.passed ? "spin" : "inconclusive"));
      for (const auto& l : s.lines) out.push_back("    " + l);
    }
  }
  out.push_back("");
  out.push_back("== floer");
  for (const auto& t : r.hf_tables) {
    out.push_back("  pair " + t.pair_label() + " along " + t.space + ", N = " + std::to_string(t.column_step) +
                  ", columns [" + std::to_string(t.window.col_lo) + ", " + std::to_string(t.window.col_hi) +
                  "], entry bound " + std::to_string(t.entry_bound) + ": " + std::to_string(t.branches.size()) +
                  (t.branches.size() == 1 ? " branch" : " branches"));
    for (const auto& p : t.pins)
      out.push_back("    pinned: HF_" + std::to_string(p.degree) + " = " + p.group.to_string());
    for (const auto& n : t.notes) out.push_back("    note: " + n);
    for (std::size_t i = 0; i < t.branches.size(); ++i) {
      const auto& b = t.branches[i];
      std::string line = "    option " + std::to_string(i + 1) + ": deg T = " + std::to_string(-t.column_step) +
                         ": " + detail::hf_pair_line(b.native);
      if (b.folded) line += "; deg T = " + std::to_string(r.t_degree) + ": " + detail::hf_pair_line(*b.folded);
      out.push_back(line);
      for (const auto& l : b.trace) out.push_back("      " + l);
    }
  }
  if (!r.claims.empty()) {
    out.push_back("");
    out.push_back("== claims");
    for (const auto& c : r.claims) {
      out.push_back("  claim " + c.claim.label() + ": " + verdict_word(c));
      if (std::find(r.established.begin(), r.established.end(), c.claim) != r.established.end())
        out.push_back("    this is the surgery cobordism itself");
      for (const auto& a : c.assumed) out.push_back("    jointly with the surgery cobordism " + a.label());
      for (std::size_t i = 0; i < c.branches.size(); ++i) {
        const auto& b = c.branches[i];
        out.push_back("    case " + std::to_string(i + 1) + ": " + b.description);
        for (const auto& seq : b.problem.sequences) {
          std::string line = "      " + seq.name + ": ";
          for (std::size_t k = 0; k < seq.terms.size(); ++k) line += (k ? " -> " : "") + seq.terms[k].display();
          out.push_back(line);
        }
        if (b.verdict.feasible) {
          out.push_back("      feasible: " + render_witness(b.problem, *b.verdict.witness));
        } else {
          out.push_back("      infeasible:");
          for (auto& l : render_certificate(b.problem, *b.verdict.certificate, "        ")) out.push_back(l);
        }
      }
    }
  }
  out.push_back("");
  out.push_back("== verdicts");
  if (r.claims.empty()) out.push_back("  (no claims)");
  for (const auto& c : r.claims)
    out.push_back("  " + c.claim.label() + ": " + verdict_word(c) + " (" + std::to_string(c.branches.size()) +
                  (c.branches.size() == 1 ? " branch)" : " branches)"));
  std::string text;
  for (const auto& l : out) text += l + "\n";
  return text;
}

/// Branch tables and verdicts without derivations.
inline std::string render_summary(const RunReport& r) {
  std::string text = "cobstruct" + (r.scenario_name.empty() ? std::string() : ": " + r.scenario_name) + "\n";
  for (const auto& t : r.hf_tables) {
    text += "HF" + t.pair_label() + ", N = " + std::to_string(t.column_step) + ": " +
            std::to_string(t.branches.size()) + (t.branches.size() == 1 ? " branch\n" : " branches\n");
    for (std::size_t i = 0; i < t.branches.size(); ++i) {
      const auto& b = t.branches[i];
      text += "  option " + std::to_string(i + 1) + ": " + detail::hf_pair_line(b.folded ? *b.folded : b.native) +
              " (deg T = " + std::to_string(b.folded ? r.t_degree : -t.column_step) + ")\n";
    }
  }
  for (const auto& c : r.claims)
    text += c.claim.label() + ": " + verdict_word(c) + " (" + std::to_string(c.branches.size()) +
            (c.branches.size() == 1 ? " branch)\n" : " branches)\n");
  return text;
}

inline nlohmann::json report_json(const RunReport& r) {
  using nlohmann::json;
  json doc;
  doc["schema"] = 1;
  if (!r.scenario_name.empty()) doc["scenario"] = r.scenario_name;
  doc["grading"] = r.t_degree;
  json claims = json::array();
  for (const auto& c : r.claims) {
    json cases = json::array();
    for (const auto& b : c.branches) {
      json jb{{"description", b.description}, {"feasible", b.verdict.feasible}};
      if (b.verdict.feasible) {
        jb["witness"] = render_witness(b.problem, *b.verdict.witness);
      } else {
        jb["certificate"] = render_certificate(b.problem, *b.verdict.certificate);
      }
      cases.push_back(jb);
    }
    json assumed = json::array();
    for (const auto& a : c.assumed) assumed.push_back(a.label());
    claims.push_back({{"source", c.claim.source},
                      {"ends", {c.claim.first_end, c.claim.second_end}},
                      {"verdict", verdict_word(c)},
                      {"branches", c.branches.size()},
                      {"assumed", assumed},
                      {"cases", cases}});
  }
  doc["claims"] = claims;
  json tables = json::object();
  for (const auto& t : r.hf_tables) {
    json branches = json::array();
    for (const auto& b : t.branches) {
      json jb{{"native", {{"0", b.native.at(0).to_string()}, {"1", b.native.at(1).to_string()}}}};
      if (b.folded) jb["folded"] = {{"0", b.folded->at(0).to_string()}, {"1", b.folded->at(1).to_string()}};
      branches.push_back(jb);
    }
    tables[t.first + "," + t.second] = {{"column_step", t.column_step},
                                         {"entry_bound", t.entry_bound},
                                         {"may_truncate", t.may_truncate},
                                         {"branches", branches}};
  }
  doc["hf_tables"] = tables;
  json spin = json::array();
  for (const auto& s : r.spin_checks) spin.push_back({{"pair", s.pair}, {"surgery", s.surgery}, {"spin", s.passed}});
  doc["spin_checks"] = spin;
  return doc;
}

inline std::string render_json(const RunReport& r) { return report_json(r).dump(2) + "\n"; }

}  // namespace cobstruct
