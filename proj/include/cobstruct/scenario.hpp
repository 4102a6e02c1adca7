#pragma once

#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "cobstruct/abgroup.hpp"
#include "cobstruct/errors.hpp"
#include "cobstruct/exactness.hpp"
#include "cobstruct/graded.hpp"
#include "cobstruct/spectra.hpp"
#include "cobstruct/topology.hpp"

namespace cobstruct {

/// A clean intersection of two Lagrangians. `surgery`, when set, names the
/// Lagrangian L1 #_S L2 obtained by surgery, which comes with V: L ~> (L1, L2).
struct IntersectionSpec {
  std::string first;
  std::string second;
  bool clean = true;
  bool connected = true;
  std::string space;
  std::vector<int> restriction_surjective_degrees;  // degrees k with i_1^*: H^k(L1) -> H^k(S) onto
  std::map<int, std::size_t> restriction_ranks;     // explicit ranks of i_1^*
  std::optional<std::string> surgery;
  std::vector<AbutmentConstraint> pins;  // over deg T = -N_{first,second}

  std::string pair_label() const { return "(" + first + ", " + second + ")"; }
  bool joins(const std::string& a, const std::string& b) const {
    return (first == a && second == b) || (first == b && second == a);
  }

  friend bool operator==(const IntersectionSpec&, const IntersectionSpec&) = default;
};

struct SolverKnobs {
  long long entry_bound = 4;
  long long window = 2;  // column steps on each side of p = 0

  friend bool operator==(const SolverKnobs&, const SolverKnobs&) = default;
};

struct ObstructionScenario {
  std::string name;
  std::map<std::string, SpaceExpr> spaces;
  std::vector<LagrangianDescriptor> lagrangians;
  std::vector<IntersectionSpec> intersections;
  std::vector<CobordismClaim> claims;
  std::optional<std::string> probe;
  LaurentGrading grading{-2};
  SolverKnobs solver;

  const LagrangianDescriptor& lagrangian(const std::string& n) const {
    for (const auto& l : lagrangians)
      if (l.name == n) return l;
    throw ValidationError("unknown Lagrangian '" + n + "'");
  }
  std::map<std::string, LagrangianDescriptor> lagrangian_map() const {
    std::map<std::string, LagrangianDescriptor> out;
    for (const auto& l : lagrangians) out.emplace(l.name, l);
    return out;
  }

  friend bool operator==(const ObstructionScenario&, const ObstructionScenario&) = default;
};

// ---------------------------------------------------------------------------
// Group syntax: "0", or summands joined by " + ": "Z", "Z^k", "Z/n", "(Z/n)^k".

inline FgAbGroup parse_group(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  auto fail = [&](const std::string& why) -> FgAbGroup {
    throw ValidationError("cannot parse group '" + text + "': " + why);
  };
  if (s.empty()) return fail("empty");
  if (s == "0") return FgAbGroup::zero();
  std::size_t pos = 0;
  auto number = [&]() -> BigInt {
    const std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (start == pos) fail("expected a number at offset " + std::to_string(start));
    return BigInt(s.substr(start, pos - start));
  };
  auto small = [&](const BigInt& v) -> std::size_t {
    if (v > 1000000) fail("exponent too large");
    return v.convert_to<std::size_t>();
  };
  std::size_t free_rank = 0;
  std::vector<BigInt> orders;
  for (;;) {
    if (s.compare(pos, 3, "(Z/") == 0) {
      pos += 3;
      BigInt n = number();
      if (s.compare(pos, 2, ")^") != 0) fail("expected ')^' at offset " + std::to_string(pos));
      pos += 2;
      const std::size_t k = small(number());
      if (n < 2) fail("cyclic order must be >= 2");
      for (std::size_t i = 0; i < k; ++i) orders.push_back(n);
    } else if (s.compare(pos, 2, "Z/") == 0) {
      pos += 2;
      BigInt n = number();
      if (n < 2) fail("cyclic order must be >= 2");
      orders.push_back(n);
    } else if (s.compare(pos, 1, "Z") == 0) {
      ++pos;
      std::size_t k = 1;
      if (pos < s.size() && s[pos] == '^') {
        ++pos;
        k = small(number());
      }
      free_rank += k;
    } else if (s.compare(pos, 1, "0") == 0) {
      ++pos;
    } else {
      fail("unexpected input at offset " + std::to_string(pos));
    }
    if (pos == s.size()) break;
    if (s[pos] != '+') fail("expected '+' at offset " + std::to_string(pos));
    ++pos;
  }
  return direct_sum(FgAbGroup::free(free_rank), FgAbGroup::from_cyclic_orders(orders));
}

namespace detail {

using nlohmann::json;

[[noreturn]] inline void fail_at(const std::string& path, const std::string& message) {
  throw ValidationError(path + ": " + message);
}

inline const json& require(const json& obj, const std::string& key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) fail_at(path, "missing field '" + key + "'");
  return *it;
}

inline long long get_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail_at(path, "expected an integer");
  return v.get<long long>();
}

inline bool get_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) fail_at(path, "expected true or false");
  return v.get<bool>();
}

inline std::string get_string(const json& v, const std::string& path) {
  if (!v.is_string()) fail_at(path, "expected a string");
  return v.get<std::string>();
}

inline bool opt_bool(const json& obj, const std::string& key, bool fallback, const std::string& path) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : get_bool(*it, path + "." + key);
}

inline void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& path) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) fail_at(path, "unknown field '" + key + "'");
  }
}

inline FgAbGroup group_at(const json& v, const std::string& path) {
  try {
    return parse_group(get_string(v, path));
  } catch (const ValidationError& e) {
    if (std::string(e.what()).rfind(path, 0) == 0) throw;
    fail_at(path, e.what());
  }
}

/// Space syntax: {"sphere": n}, {"rp": n}, {"circle": true},
/// {"product": [a, b, ...]}, {"homology": {"k": group}, "dimension": n},
/// or a string naming an entry of "spaces".
inline SpaceExpr parse_space(const json& v, const std::map<std::string, SpaceExpr>& named, const std::string& path) {
  if (v.is_string()) {
    const auto name = v.get<std::string>();
    auto it = named.find(name);
    if (it == named.end()) fail_at(path, "dangling space name '" + name + "'");
    return it->second;
  }
  if (!v.is_object() || v.empty()) fail_at(path, "expected a space expression");
  try {
    if (v.contains("homology")) {
      reject_unknown_keys(v, {"homology", "dimension"}, path);
      const auto& h = v["homology"];
      if (!h.is_object()) fail_at(path + ".homology", "expected an object mapping degrees to groups");
      std::map<long long, FgAbGroup> groups;
      for (const auto& [deg, g] : h.items()) {
        long long d = 0;
        try {
          std::size_t used = 0;
          d = std::stoll(deg, &used);
          if (used != deg.size()) throw std::invalid_argument(deg);
        } catch (const std::logic_error&) {
          fail_at(path + ".homology", "degree '" + deg + "' is not an integer");
        }
        groups[d] = group_at(g, path + ".homology." + deg);
      }
      const long long dim = get_int(require(v, "dimension", path), path + ".dimension");
      return SpaceExpr::explicit_homology(GradedGroup(std::move(groups)), static_cast<int>(dim));
    }
    if (v.size() != 1) fail_at(path, "a space expression has exactly one constructor");
    const auto& [key, arg] = *v.items().begin();
    const std::string sub = path + "." + key;
    if (key == "sphere") return SpaceExpr::sphere(static_cast<int>(get_int(arg, sub)));
    if (key == "rp") return SpaceExpr::real_projective(static_cast<int>(get_int(arg, sub)));
    if (key == "circle") {
      if (!get_bool(arg, sub)) fail_at(sub, "write {\"circle\": true}");
      return SpaceExpr::circle();
    }
    if (key == "product") {
      if (!arg.is_array() || arg.size() < 2) fail_at(sub, "a product needs at least two factors");
      SpaceExpr acc = parse_space(arg[0], named, sub + "[0]");
      for (std::size_t i = 1; i < arg.size(); ++i)
        acc = SpaceExpr::product(std::move(acc), parse_space(arg[i], named, sub + "[" + std::to_string(i) + "]"));
      return acc;
    }
    fail_at(path, "unknown space constructor '" + key + "'");
  } catch (const ValidationError& e) {
    if (std::string(e.what()).rfind(path, 0) == 0) throw;
    fail_at(path, e.what());
  }
}

inline json space_to_json(const SpaceExpr& s) {
  using Kind = SpaceExpr::Kind;
  switch (s.kind()) {
    case Kind::sphere: return {{"sphere", s.dimension()}};
    case Kind::real_projective: return {{"rp", s.dimension()}};
    case Kind::circle: return {{"circle", true}};
    case Kind::product: return {{"product", json::array({space_to_json(s.factors()[0]), space_to_json(s.factors()[1])})}};
    case Kind::explicit_homology: {
      json h = json::object();
      for (const auto& [d, g] : s.explicit_groups().entries()) h[std::to_string(d)] = g.to_string();
      return {{"homology", h}, {"dimension", s.dimension()}};
    }
  }
  throw PreconditionError("space_to_json: unknown kind");
}

}  // namespace detail

/// Parses and validates a scenario; every diagnostic starts with a path
/// into the document ("$.lagrangians[1].maslov: ...").
inline ObstructionScenario parse_scenario(const std::string& text) {
  using detail::fail_at;
  using detail::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("$: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) fail_at("$", "expected a JSON object");
  detail::reject_unknown_keys(
      doc, {"schema", "name", "spaces", "lagrangians", "intersections", "claims", "probe", "grading", "solver"}, "$");
  if (detail::get_int(detail::require(doc, "schema", "$"), "$.schema") != 1)
    fail_at("$.schema", "unsupported schema version (expected 1)");

  ObstructionScenario sc;
  if (doc.contains("name")) sc.name = detail::get_string(doc["name"], "$.name");

  // grading first: everything downstream is graded by it
  {
    const long long g = detail::get_int(detail::require(doc, "grading", "$"), "$.grading");
    if (g % 2 != 0)
      throw AdmissibilityError("evenness", "$.grading: deg T = " + std::to_string(g) +
                                               " is odd, but minimal Maslov numbers of orientable Lagrangians are "
                                               "even, so deg T must be even");
    if (g > -2) fail_at("$.grading", "deg T = " + std::to_string(g) + " must be <= -2");
    sc.grading = LaurentGrading(g);
  }

  if (doc.contains("spaces")) {
    const auto& spaces = doc["spaces"];
    if (!spaces.is_object()) fail_at("$.spaces", "expected an object of named spaces");
    // named spaces may refer to earlier names (document order is not kept by
    // every JSON writer, so resolve repeatedly until a fixpoint)
    std::map<std::string, json> pending;
    for (const auto& [n, v] : spaces.items()) pending.emplace(n, v);
    while (!pending.empty()) {
      bool progress = false;
      for (auto it = pending.begin(); it != pending.end();) {
        try {
          sc.spaces.emplace(it->first, detail::parse_space(it->second, sc.spaces, "$.spaces." + it->first));
          it = pending.erase(it);
          progress = true;
        } catch (const ValidationError& e) {
          if (std::string(e.what()).find("dangling space name") == std::string::npos) throw;
          ++it;
        }
      }
      if (!progress) {
        const auto& [n, v] = *pending.begin();
        detail::parse_space(v, sc.spaces, "$.spaces." + n);  // rethrows the dangling-name diagnostic
      }
    }
  }

  const auto& lags = detail::require(doc, "lagrangians", "$");
  if (!lags.is_array()) fail_at("$.lagrangians", "expected an array");
  if (lags.empty()) fail_at("$.lagrangians", "no Lagrangians");
  std::set<std::string> names;
  for (std::size_t i = 0; i < lags.size(); ++i) {
    const std::string path = "$.lagrangians[" + std::to_string(i) + "]";
    const auto& l = lags[i];
    if (!l.is_object()) fail_at(path, "expected an object");
    detail::reject_unknown_keys(l, {"name", "space", "ambient", "maslov", "orientable", "spin", "monotone"}, path);
    LagrangianDescriptor d;
    d.name = detail::get_string(detail::require(l, "name", path), path + ".name");
    if (d.name.empty()) fail_at(path + ".name", "empty name");
    if (!names.insert(d.name).second) fail_at(path + ".name", "duplicate Lagrangian '" + d.name + "'");
    if (l.contains("space")) d.space = detail::parse_space(l["space"], sc.spaces, path + ".space");
    d.ambient_dim = static_cast<int>(detail::get_int(detail::require(l, "ambient", path), path + ".ambient"));
    if (l.contains("maslov")) d.maslov = detail::get_int(l["maslov"], path + ".maslov");
    d.orientable = detail::opt_bool(l, "orientable", true, path);
    d.spin = detail::opt_bool(l, "spin", true, path);
    d.monotone = detail::opt_bool(l, "monotone", true, path);
    try {
      d.validate();
    } catch (const ValidationError& e) {
      const std::string field = std::string(e.what()).find("Maslov") != std::string::npos ? ".maslov" : "";
      fail_at(path + field, e.what());
    }
    if (d.ambient_dim != (sc.lagrangians.empty() ? d.ambient_dim : sc.lagrangians.front().ambient_dim))
      fail_at(path + ".ambient", "all Lagrangians must live in the same CP^n (equal monotonicity constants)");
    sc.lagrangians.push_back(std::move(d));
  }
  auto known_lagrangian = [&](const std::string& n, const std::string& path) {
    if (!names.count(n)) fail_at(path, "dangling Lagrangian name '" + n + "'");
  };

  if (doc.contains("intersections")) {
    const auto& xs = doc["intersections"];
    if (!xs.is_array()) fail_at("$.intersections", "expected an array");
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const std::string path = "$.intersections[" + std::to_string(i) + "]";
      const auto& x = xs[i];
      if (!x.is_object()) fail_at(path, "expected an object");
      detail::reject_unknown_keys(x,
                                  {"pair", "clean", "connected", "space", "restriction_surjective_degrees",
                                   "restriction_ranks", "surgery", "pins"},
                                  path);
      IntersectionSpec spec;
      const auto& pair = detail::require(x, "pair", path);
      if (!pair.is_array() || pair.size() != 2) fail_at(path + ".pair", "expected two Lagrangian names");
      spec.first = detail::get_string(pair[0], path + ".pair[0]");
      spec.second = detail::get_string(pair[1], path + ".pair[1]");
      known_lagrangian(spec.first, path + ".pair[0]");
      known_lagrangian(spec.second, path + ".pair[1]");
      for (const auto& other : sc.intersections)
        if (other.joins(spec.first, spec.second))
          fail_at(path + ".pair", "intersection " + spec.pair_label() + " declared twice");
      spec.clean = detail::opt_bool(x, "clean", true, path);
      spec.connected = detail::opt_bool(x, "connected", true, path);
      spec.space = detail::get_string(detail::require(x, "space", path), path + ".space");
      if (!sc.spaces.count(spec.space)) fail_at(path + ".space", "dangling space name '" + spec.space + "'");
      if (x.contains("restriction_surjective_degrees")) {
        const auto& ds = x["restriction_surjective_degrees"];
        if (!ds.is_array()) fail_at(path + ".restriction_surjective_degrees", "expected an array of degrees");
        for (std::size_t k = 0; k < ds.size(); ++k)
          spec.restriction_surjective_degrees.push_back(static_cast<int>(
              detail::get_int(ds[k], path + ".restriction_surjective_degrees[" + std::to_string(k) + "]")));
      }
      if (x.contains("restriction_ranks")) {
        const auto& rs = x["restriction_ranks"];
        if (!rs.is_object()) fail_at(path + ".restriction_ranks", "expected an object mapping degrees to ranks");
        for (const auto& [deg, r] : rs.items()) {
          const std::string sub = path + ".restriction_ranks." + deg;
          int d = 0;
          try {
            std::size_t used = 0;
            d = std::stoi(deg, &used);
            if (used != deg.size()) throw std::invalid_argument(deg);
          } catch (const std::logic_error&) {
            fail_at(sub, "degree is not an integer");
          }
          const long long rank = detail::get_int(r, sub);
          if (rank < 0) fail_at(sub, "rank must be >= 0");
          spec.restriction_ranks[d] = static_cast<std::size_t>(rank);
        }
      }
      if (x.contains("surgery")) {
        spec.surgery = detail::get_string(x["surgery"], path + ".surgery");
        known_lagrangian(*spec.surgery, path + ".surgery");
        if (!spec.clean || !spec.connected)
          throw AdmissibilityError("clean connected intersection",
                                   path + ": surgery along " + spec.pair_label() +
                                       " needs a clean and connected intersection");
      }
      if (x.contains("pins")) {
        const auto& ps = x["pins"];
        if (!ps.is_array()) fail_at(path + ".pins", "expected an array");
        for (std::size_t k = 0; k < ps.size(); ++k) {
          const std::string sub = path + ".pins[" + std::to_string(k) + "]";
          if (!ps[k].is_object()) fail_at(sub, "expected {\"degree\": n, \"group\": \"...\"}");
          detail::reject_unknown_keys(ps[k], {"degree", "group"}, sub);
          spec.pins.push_back({detail::get_int(detail::require(ps[k], "degree", sub), sub + ".degree"),
                               detail::group_at(detail::require(ps[k], "group", sub), sub + ".group")});
        }
      }
      sc.intersections.push_back(std::move(spec));
    }
  }

  if (doc.contains("claims")) {
    const auto& cs = doc["claims"];
    if (!cs.is_array()) fail_at("$.claims", "expected an array");
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const std::string path = "$.claims[" + std::to_string(i) + "]";
      const auto& c = cs[i];
      if (!c.is_object()) fail_at(path, "expected an object");
      detail::reject_unknown_keys(c, {"source", "ends", "spin", "monotone", "maslov"}, path);
      CobordismClaim claim;
      claim.source = detail::get_string(detail::require(c, "source", path), path + ".source");
      known_lagrangian(claim.source, path + ".source");
      const auto& ends = detail::require(c, "ends", path);
      if (!ends.is_array() || ends.size() != 2) fail_at(path + ".ends", "expected two ordered end names");
      claim.first_end = detail::get_string(ends[0], path + ".ends[0]");
      claim.second_end = detail::get_string(ends[1], path + ".ends[1]");
      known_lagrangian(claim.first_end, path + ".ends[0]");
      known_lagrangian(claim.second_end, path + ".ends[1]");
      claim.spin = detail::opt_bool(c, "spin", true, path);
      claim.monotone = detail::opt_bool(c, "monotone", true, path);
      if (c.contains("maslov")) {
        claim.maslov = detail::get_int(c["maslov"], path + ".maslov");
        if (*claim.maslov < 0 || *claim.maslov % 2 != 0)
          fail_at(path + ".maslov", "minimal Maslov number of an orientable cobordism must be even and >= 0");
      }
      sc.claims.push_back(std::move(claim));
    }
  }

  if (doc.contains("probe")) {
    sc.probe = detail::get_string(doc["probe"], "$.probe");
    known_lagrangian(*sc.probe, "$.probe");
  } else if (!sc.claims.empty()) {
    fail_at("$", "missing field 'probe' (claims need a probe Lagrangian K)");
  }

  if (doc.contains("solver")) {
    const auto& s = doc["solver"];
    if (!s.is_object()) fail_at("$.solver", "expected an object");
    detail::reject_unknown_keys(s, {"entry_bound", "window"}, "$.solver");
    if (s.contains("entry_bound")) sc.solver.entry_bound = detail::get_int(s["entry_bound"], "$.solver.entry_bound");
    if (s.contains("window")) sc.solver.window = detail::get_int(s["window"], "$.solver.window");
    if (sc.solver.entry_bound < 1) fail_at("$.solver.entry_bound", "must be >= 1");
    if (sc.solver.window < 1) fail_at("$.solver.window", "must be >= 1");
  }
  return sc;
}

/// Inverse of parse_scenario (named spaces are written out inline).
inline std::string serialize_scenario(const ObstructionScenario& sc) {
  using detail::json;
  json doc;
  doc["schema"] = 1;
  if (!sc.name.empty()) doc["name"] = sc.name;
  doc["grading"] = sc.grading.t_degree();
  json spaces = json::object();
  for (const auto& [n, s] : sc.spaces) spaces[n] = detail::space_to_json(s);
  doc["spaces"] = spaces;
  json lags = json::array();
  for (const auto& l : sc.lagrangians) {
    json j{{"name", l.name}, {"ambient", l.ambient_dim}, {"orientable", l.orientable}, {"spin", l.spin},
           {"monotone", l.monotone}};
    if (l.space) j["space"] = detail::space_to_json(*l.space);
    if (l.maslov) j["maslov"] = *l.maslov;
    lags.push_back(j);
  }
  doc["lagrangians"] = lags;
  json xs = json::array();
  for (const auto& x : sc.intersections) {
    json j{{"pair", {x.first, x.second}}, {"clean", x.clean}, {"connected", x.connected}, {"space", x.space}};
    if (!x.restriction_surjective_degrees.empty()) j["restriction_surjective_degrees"] = x.restriction_surjective_degrees;
    if (!x.restriction_ranks.empty()) {
      json r = json::object();
      for (const auto& [d, k] : x.restriction_ranks) r[std::to_string(d)] = k;
      j["restriction_ranks"] = r;
    }
    if (x.surgery) j["surgery"] = *x.surgery;
    if (!x.pins.empty()) {
      json ps = json::array();
      for (const auto& p : x.pins) ps.push_back({{"degree", p.degree}, {"group", p.group.to_string()}});
      j["pins"] = ps;
    }
    xs.push_back(j);
  }
  doc["intersections"] = xs;
  json cs = json::array();
  for (const auto& c : sc.claims) {
    json j{{"source", c.source}, {"ends", {c.first_end, c.second_end}}, {"spin", c.spin}, {"monotone", c.monotone}};
    if (c.maslov) j["maslov"] = *c.maslov;
    cs.push_back(j);
  }
  doc["claims"] = cs;
  if (sc.probe) doc["probe"] = *sc.probe;
  doc["solver"] = {{"entry_bound", sc.solver.entry_bound}, {"window", sc.solver.window}};
  return doc.dump(2) + "\n";
}

}  // namespace cobstruct
