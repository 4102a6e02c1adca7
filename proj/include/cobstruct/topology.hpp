#pragma once

#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cobstruct/abgroup.hpp"
#include "cobstruct/errors.hpp"
#include "cobstruct/graded.hpp"

namespace cobstruct {

/// Catalog space: S^n, RP^n, S^1, products, or a space given by its homology.
class SpaceExpr {
 public:
  enum class Kind { sphere, real_projective, circle, product, explicit_homology };

  static SpaceExpr sphere(int n) {
    if (n < 0) throw ValidationError("S^n needs n >= 0");
    return SpaceExpr(Kind::sphere, n);
  }
  static SpaceExpr real_projective(int n) {
    if (n < 0) throw ValidationError("RP^n needs n >= 0");
    return SpaceExpr(Kind::real_projective, n);
  }
  static SpaceExpr circle() { return SpaceExpr(Kind::circle, 1); }
  static SpaceExpr product(SpaceExpr a, SpaceExpr b) {
    SpaceExpr s(Kind::product, a.dimension() + b.dimension());
    s.factors_.push_back(std::move(a));
    s.factors_.push_back(std::move(b));
    return s;
  }
  static SpaceExpr explicit_homology(GradedGroup homology, int dimension) {
    if (dimension < 0) throw ValidationError("explicit space: dimension must be >= 0");
    if (homology.period()) throw ValidationError("explicit space: homology cannot be periodic");
    for (const auto& [deg, g] : homology.entries())
      if (!g.is_zero() && (deg < 0 || deg > dimension))
        throw ValidationError("explicit space: homology in degree " + std::to_string(deg) + " outside [0, " +
                              std::to_string(dimension) + "]");
    SpaceExpr s(Kind::explicit_homology, dimension);
    s.homology_ = std::move(homology);
    return s;
  }

  Kind kind() const noexcept { return kind_; }
  int dimension() const noexcept { return dim_; }
  const std::vector<SpaceExpr>& factors() const noexcept { return factors_; }
  const GradedGroup& explicit_groups() const noexcept { return homology_; }

  std::string to_string() const {
    switch (kind_) {
      case Kind::sphere: return "S^" + std::to_string(dim_);
      case Kind::real_projective: return "RP^" + std::to_string(dim_);
      case Kind::circle: return "S^1";
      case Kind::product: return factors_[0].to_string() + " x " + factors_[1].to_string();
      case Kind::explicit_homology: return "<explicit, dim " + std::to_string(dim_) + ">";
    }
    return {};
  }

  friend bool operator==(const SpaceExpr&, const SpaceExpr&) = default;

 private:
  SpaceExpr(Kind kind, int dim) : kind_(kind), dim_(dim) {}

  Kind kind_;
  int dim_;
  std::vector<SpaceExpr> factors_;
  GradedGroup homology_;
};

namespace detail {

inline std::map<long long, FgAbGroup> nonzero(std::map<long long, FgAbGroup> m) {
  std::erase_if(m, [](const auto& kv) { return kv.second.is_zero(); });
  return m;
}

inline GradedGroup real_projective_homology(int n) {
  std::map<long long, FgAbGroup> h{{0, FgAbGroup::free(1)}};
  for (int k = 1; k <= n; ++k) {
    if (k % 2 == 0) continue;
    h[k] = k == n ? FgAbGroup::free(1) : FgAbGroup::cyclic(2);
  }
  return GradedGroup(std::move(h));
}

}  // namespace detail

/// Kunneth: H_n(X x Y) = (+)_{i+j=n} H_i (x) H_j  (+)  (+)_{i+j=n-1} Tor(H_i, H_j).
inline GradedGroup kunneth(const GradedGroup& x, const GradedGroup& y) {
  std::map<long long, FgAbGroup> out;
  for (const auto& [i, a] : x.entries())
    for (const auto& [j, b] : y.entries()) {
      out[i + j] = direct_sum(out[i + j], tensor(a, b));
      out[i + j + 1] = direct_sum(out[i + j + 1], tor(a, b));
    }
  return GradedGroup(detail::nonzero(std::move(out)));
}

/// Integral homology of a catalog space; zero degrees are not stored.
inline GradedGroup homology(const SpaceExpr& space) {
  using Kind = SpaceExpr::Kind;
  switch (space.kind()) {
    case Kind::sphere:
      if (space.dimension() == 0) return GradedGroup({{0, FgAbGroup::free(2)}});
      return GradedGroup({{0, FgAbGroup::free(1)}, {space.dimension(), FgAbGroup::free(1)}});
    case Kind::circle:
      return GradedGroup({{0, FgAbGroup::free(1)}, {1, FgAbGroup::free(1)}});
    case Kind::real_projective:
      return detail::real_projective_homology(space.dimension());
    case Kind::product:
      return kunneth(homology(space.factors()[0]), homology(space.factors()[1]));
    case Kind::explicit_homology:
      return GradedGroup(detail::nonzero(space.explicit_groups().entries()));
  }
  throw PreconditionError("homology: unknown space kind");
}

inline long long euler_characteristic(const GradedGroup& h) {
  long long chi = 0;
  for (const auto& [d, g] : h.entries()) chi += (d % 2 == 0 ? 1 : -1) * static_cast<long long>(g.free_rank());
  return chi;
}

/// H^k(X; Z/2) = Hom(H_k, Z/2) (+) Ext(H_{k-1}, Z/2), as (Z/2)^dim in degrees 0..top.
inline GradedGroup z2_cohomology(const GradedGroup& integral, int top_degree) {
  std::map<long long, FgAbGroup> out;
  for (int k = 0; k <= top_degree; ++k) {
    const auto& hk = integral.at(k);
    std::size_t dim = hk.free_rank() + hk.even_torsion_count();
    if (k > 0) dim += integral.at(k - 1).even_torsion_count();
    out[k] = FgAbGroup::elementary_two(dim);
  }
  return GradedGroup(std::move(out));
}

inline GradedGroup z2_cohomology(const SpaceExpr& space) { return z2_cohomology(homology(space), space.dimension()); }

struct LagrangianDescriptor {
  std::string name;
  std::optional<SpaceExpr> space;
  int ambient_dim = 1;  // n for CP^n
  /// Minimal Maslov number N_L; unset when only its parity is known.
  std::optional<long long> maslov;
  bool orientable = true;
  bool spin = true;
  bool monotone = true;

  /// Throws ValidationError on violated invariants.
  void validate() const {
    if (ambient_dim < 1) throw ValidationError(name + ": ambient dimension must be >= 1");
    if (maslov && *maslov < 0) throw ValidationError(name + ": minimal Maslov number must be >= 0");
    if (maslov && orientable && *maslov % 2 != 0)
      throw ValidationError(name + ": minimal Maslov number " + std::to_string(*maslov) +
                            " is odd but the Lagrangian is orientable");
    if (spin && !orientable) throw ValidationError(name + ": spin requires orientable");
    if (space && space->dimension() != ambient_dim)
      throw ValidationError(name + ": a Lagrangian of CP^" + std::to_string(ambient_dim) + " has dimension " +
                            std::to_string(ambient_dim) + ", space has dimension " +
                            std::to_string(space->dimension()));
  }

  friend bool operator==(const LagrangianDescriptor&, const LagrangianDescriptor&) = default;
};

/// N_{a,b} = gcd(N_a, N_b), with gcd(x, 0) = x.
inline long long pair_maslov(const LagrangianDescriptor& a, const LagrangianDescriptor& b) {
  for (const auto* l : {&a, &b}) {
    if (!l->monotone) throw ValidationError(l->name + " is not monotone; the pair Maslov number is undefined");
    if (!l->maslov) throw ValidationError(l->name + " has no declared minimal Maslov number");
  }
  return std::gcd(*a.maslov, *b.maslov);
}

/// Exact value numerator / (denominator * pi).
struct PiFraction {
  long long numerator = 0;
  long long denominator = 1;

  friend bool operator==(const PiFraction&, const PiFraction&) = default;
  std::string to_string() const {
    return std::to_string(numerator) + (denominator == 1 ? "" : "/" + std::to_string(denominator)) + "/pi";
  }
};

/// Monotonicity constant of any monotone Lagrangian in CP^n: tau = 2(n+1)/pi.
inline PiFraction monotonicity_constant(int ambient_dim) {
  if (ambient_dim < 1) throw PreconditionError("monotonicity_constant: n must be >= 1");
  return {2LL * (ambient_dim + 1), 1};
}

/// Mayer-Vietoris over Z/2 for V ~ L1 u_S L2:
///   H^{k-1}(L1) (+) H^{k-1}(L2) -> H^{k-1}(S) -> H^k(V) -> H^k(L1) (+) H^k(L2)
/// (j1*, j2*) is injective on H^k(V) when the first map is onto; surjectivity of
/// the restriction i1* in degree k-1 suffices. Checks k = 1, 2, so needs
/// restriction ranks in degrees 0 and 1. Returns false when the rank data
/// does not force injectivity.
inline bool mayer_vietoris_spin_check(const GradedGroup& l1, const GradedGroup& l2, const GradedGroup& s,
                                      const std::map<int, std::size_t>& restriction_ranks) {
  auto dim = [](const GradedGroup& g, int k, const char* what) {
    auto d = g.at(k).elementary_two_dimension();
    if (!d)
      throw ValidationError(std::string("Mayer-Vietoris check: H^") + std::to_string(k) + "(" + what +
                            "; Z/2) is not a Z/2 vector space");
    return *d;
  };
  bool injective = true;
  for (int k = 1; k <= 2; ++k) {
    const int below = k - 1;
    auto it = restriction_ranks.find(below);
    if (it == restriction_ranks.end())
      throw ValidationError("Mayer-Vietoris check: missing restriction rank in degree " + std::to_string(below));
    const std::size_t dim_l1 = dim(l1, below, "L1");
    dim(l2, below, "L2");
    const std::size_t dim_s = dim(s, below, "S");
    if (it->second > std::min(dim_l1, dim_s))
      throw ValidationError("Mayer-Vietoris check: restriction rank " + std::to_string(it->second) +
                            " in degree " + std::to_string(below) + " exceeds the dimensions involved");
    if (it->second != dim_s) injective = false;
  }
  return injective;
}

}  // namespace cobstruct
