#pragma once

#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <variant>

#include "cobstruct/abgroup.hpp"
#include "cobstruct/errors.hpp"

namespace cobstruct {

namespace detail {
inline long long floor_mod(long long n, long long m) {
  long long r = n % m;
  return r < 0 ? r + m : r;
}
}  // namespace detail

/// Integer-graded family of groups. Unperiodic groups store a finite set of
/// degrees (absent degrees are zero; an explicitly stored zero marks a degree
/// as known). Periodic groups store exactly the fundamental domain [0, period).
class GradedGroup {
 public:
  GradedGroup() = default;
  explicit GradedGroup(std::map<long long, FgAbGroup> entries) : entries_(std::move(entries)) {}

  static GradedGroup periodic(std::map<long long, FgAbGroup> domain, long long period) {
    if (period <= 0 || period % 2 != 0)
      throw ValidationError("GradedGroup: period must be a positive even integer, got " + std::to_string(period));
    GradedGroup g;
    g.period_ = period;
    for (auto& [deg, grp] : domain) {
      if (deg < 0 || deg >= period)
        throw ValidationError("GradedGroup: periodic domain entry at degree " + std::to_string(deg) +
                              " outside [0, " + std::to_string(period) + ")");
      g.entries_.emplace(deg, std::move(grp));
    }
    for (long long d = 0; d < period; ++d) g.entries_.try_emplace(d);
    return g;
  }

  std::optional<long long> period() const noexcept { return period_; }
  const std::map<long long, FgAbGroup>& entries() const noexcept { return entries_; }

  const FgAbGroup& at(long long degree) const {
    static const FgAbGroup kZero;
    if (period_) degree = detail::floor_mod(degree, *period_);
    auto it = entries_.find(degree);
    return it == entries_.end() ? kZero : it->second;
  }

  bool is_zero() const {
    for (const auto& [d, g] : entries_)
      if (!g.is_zero()) return false;
    return true;
  }

  std::string to_string() const {
    std::string out = "{";
    bool first = true;
    for (const auto& [d, g] : entries_) {
      out += (first ? "" : ", ") + std::to_string(d) + ": " + g.to_string();
      first = false;
    }
    out += "}";
    if (period_) out += " (period " + std::to_string(*period_) + ")";
    return out;
  }

  friend bool operator==(const GradedGroup& a, const GradedGroup& b) {
    if (a.period_ && b.period_) {
      const long long span = std::lcm(*a.period_, *b.period_);
      for (long long d = 0; d < span; ++d)
        if (a.at(d) != b.at(d)) return false;
      return true;
    }
    if (a.period_ || b.period_) return a.is_zero() && b.is_zero();
    for (const auto& [d, g] : a.entries_)
      if (g != b.at(d)) return false;
    for (const auto& [d, g] : b.entries_)
      if (g != a.at(d)) return false;
    return true;
  }

 private:
  std::map<long long, FgAbGroup> entries_;
  std::optional<long long> period_;
};

/// Grading of the Laurent coefficient ring Z[T, T^-1]: deg T = t_degree.
class LaurentGrading {
 public:
  explicit LaurentGrading(long long t_degree) : t_degree_(t_degree) {
    if (t_degree % 2 != 0)
      throw ValidationError("deg T = " + std::to_string(t_degree) +
                            " is odd; minimal Maslov numbers of orientable Lagrangians are even");
    if (t_degree > -2) throw ValidationError("deg T = " + std::to_string(t_degree) + " must be <= -2");
  }

  long long t_degree() const noexcept { return t_degree_; }
  /// |deg T|
  long long step() const noexcept { return -t_degree_; }

  friend bool operator==(const LaurentGrading&, const LaurentGrading&) = default;

 private:
  long long t_degree_;
};

/// Entry at degree n of the result is the entry at n - k of g.
inline GradedGroup shift(const GradedGroup& g, long long k) {
  std::map<long long, FgAbGroup> out;
  if (auto p = g.period()) {
    for (const auto& [d, grp] : g.entries()) out[detail::floor_mod(d + k, *p)] = grp;
    return GradedGroup::periodic(std::move(out), *p);
  }
  for (const auto& [d, grp] : g.entries()) out[d + k] = grp;
  return GradedGroup(std::move(out));
}

/// Smallest even period p dividing `period` such that g is p-periodic.
inline GradedGroup finest_period(const GradedGroup& g) {
  const auto period = g.period();
  if (!period) return g;
  for (long long p = 2; p <= *period; p += 2) {
    if (*period % p != 0) continue;
    bool ok = true;
    for (long long d = 0; d < *period && ok; ++d) ok = g.at(d) == g.at(d + p);
    if (!ok) continue;
    std::map<long long, FgAbGroup> domain;
    for (long long d = 0; d < p; ++d) domain[d] = g.at(d);
    return GradedGroup::periodic(std::move(domain), p);
  }
  return g;
}

/// Regrades Floer homology from deg T = -N0 to deg T = -N for N | N0:
/// result_* = (+)_{k=0}^{N0/N - 1} hf_{* + kN}.
inline GradedGroup coefficient_change(const GradedGroup& hf, const LaurentGrading& from, const LaurentGrading& to) {
  const long long n0 = from.step();
  const long long n = to.step();
  if (n0 % n != 0)
    throw PreconditionError("coefficient change: |deg T| = " + std::to_string(n) + " does not divide " +
                            std::to_string(n0));
  const auto period = hf.period();
  if (!period || n0 % *period != 0)
    throw PreconditionError("coefficient change: input must be periodic with a period dividing " +
                            std::to_string(n0));
  const long long out_period = std::gcd(*period, n);
  std::map<long long, FgAbGroup> domain;
  for (long long d = 0; d < out_period; ++d) {
    FgAbGroup acc;
    for (long long k = 0; k < n0 / n; ++k) acc = direct_sum(acc, hf.at(d + k * n));
    domain[d] = std::move(acc);
  }
  return finest_period(GradedGroup::periodic(std::move(domain), out_period));
}

struct PeriodicityConflict {
  long long first_degree;
  long long second_degree;
  FgAbGroup first;
  FgAbGroup second;

  std::string to_string() const {
    return "degrees " + std::to_string(first_degree) + " and " + std::to_string(second_degree) + " differ (" +
           first.to_string() + " vs " + second.to_string() + ")";
  }
};

using PeriodicityResult = std::variant<GradedGroup, PeriodicityConflict>;

/// Folds the stored degrees of g modulo `period`, or reports the first pair
/// of stored degrees that disagree.
inline PeriodicityResult impose_periodicity(const GradedGroup& g, long long period) {
  if (period <= 0 || period % 2 != 0)
    throw PreconditionError("impose_periodicity: period must be a positive even integer");
  if (auto own = g.period()) {
    const long long span = std::lcm(*own, period);
    for (long long d = 0; d < span; ++d)
      if (g.at(d) != g.at(d + period)) return PeriodicityConflict{d, d + period, g.at(d), g.at(d + period)};
    const long long p = std::gcd(*own, period);
    std::map<long long, FgAbGroup> domain;
    for (long long d = 0; d < p; ++d) domain[d] = g.at(d);
    return GradedGroup::periodic(std::move(domain), p);
  }
  std::map<long long, long long> representative;  // residue -> first stored degree
  std::map<long long, FgAbGroup> domain;
  for (const auto& [d, grp] : g.entries()) {
    const long long r = detail::floor_mod(d, period);
    auto [it, inserted] = representative.emplace(r, d);
    if (inserted) {
      domain[r] = grp;
    } else if (domain[r] != grp) {
      return PeriodicityConflict{it->second, d, domain[r], grp};
    }
  }
  return GradedGroup::periodic(std::move(domain), period);
}

}  // namespace cobstruct
