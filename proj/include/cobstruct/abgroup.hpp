#pragma once

// Finitely generated abelian groups in invariant-factor form, homomorphisms
// between them, and the exact constructions (cokernels, kernels, images,
// subquotients, tensor and Tor) the spectral-sequence layer runs on.
//
// Generator convention: a group Z^r + Z/d_1 + ... + Z/d_k is generated by the
// k torsion generators (in chain order) followed by the r free generators.
// A hom A -> B is a (gens B) x (gens A) integer matrix; rows belonging to a
// torsion generator of order e are stored reduced into [0, e).

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cobstruct/errors.hpp"
#include "cobstruct/int_matrix.hpp"

namespace cobstruct {

class FgAbGroup;
FgAbGroup cokernel(const IntMatrix& m);

class FgAbGroup {
 public:
  FgAbGroup() = default;

  /// Validating constructor: torsion must already be an invariant-factor chain.
  FgAbGroup(std::size_t free_rank, std::vector<BigInt> torsion)
      : free_rank_(free_rank), torsion_(std::move(torsion)) {
    for (std::size_t i = 0; i < torsion_.size(); ++i) {
      if (torsion_[i] < 2) throw ValidationError("FgAbGroup: invariant factors must be >= 2");
      if (i + 1 < torsion_.size() && !(torsion_[i + 1] % torsion_[i]).is_zero())
        throw ValidationError("FgAbGroup: invariant factors must form a divisibility chain");
    }
  }

  static FgAbGroup zero() { return {}; }
  static FgAbGroup free(std::size_t rank) { return {rank, {}}; }
  /// Z/n; n = 0 gives Z, n = 1 the zero group.
  static FgAbGroup cyclic(const BigInt& n) { return from_cyclic_orders({n}); }
  /// Canonical form of a direct sum of cyclic groups (0 denotes Z).
  static FgAbGroup from_cyclic_orders(const std::vector<BigInt>& orders) {
    IntMatrix diag(orders.size(), orders.size());
    for (std::size_t i = 0; i < orders.size(); ++i) diag(i, i) = abs(orders[i]);
    return cokernel(diag);
  }
  /// (Z/2)^k
  static FgAbGroup elementary_two(std::size_t k) { return {0, std::vector<BigInt>(k, BigInt(2))}; }

  std::size_t free_rank() const noexcept { return free_rank_; }
  const std::vector<BigInt>& torsion() const noexcept { return torsion_; }
  std::size_t generator_count() const noexcept { return torsion_.size() + free_rank_; }
  bool is_zero() const noexcept { return free_rank_ == 0 && torsion_.empty(); }
  bool is_finite() const noexcept { return free_rank_ == 0; }

  /// Order of generator i; 0 for free generators.
  BigInt generator_order(std::size_t i) const { return i < torsion_.size() ? torsion_[i] : BigInt(0); }

  std::optional<BigInt> order() const {
    if (!is_finite()) return std::nullopt;
    BigInt n = 1;
    for (const auto& d : torsion_) n *= d;
    return n;
  }

  /// Relation matrix: gens x (torsion count), so that the group is its cokernel.
  IntMatrix relations() const {
    IntMatrix r(generator_count(), torsion_.size());
    for (std::size_t i = 0; i < torsion_.size(); ++i) r(i, i) = torsion_[i];
    return r;
  }

  /// Dimension over Z/2 when the group is elementary abelian 2-group.
  std::optional<std::size_t> elementary_two_dimension() const {
    if (free_rank_ != 0) return std::nullopt;
    for (const auto& d : torsion_)
      if (d != 2) return std::nullopt;
    return torsion_.size();
  }

  /// Number of invariant factors divisible by 2 (= dim of G (x) Z/2 minus the free rank).
  std::size_t even_torsion_count() const {
    return static_cast<std::size_t>(
        std::count_if(torsion_.begin(), torsion_.end(), [](const BigInt& d) { return (d % 2).is_zero(); }));
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::vector<std::string> parts;
    if (free_rank_ == 1) parts.emplace_back("Z");
    if (free_rank_ > 1) parts.push_back("Z^" + std::to_string(free_rank_));
    for (std::size_t i = 0; i < torsion_.size();) {
      std::size_t j = i;
      while (j < torsion_.size() && torsion_[j] == torsion_[i]) ++j;
      std::string cyc = "Z/" + torsion_[i].str();
      parts.push_back(j - i == 1 ? cyc : "(" + cyc + ")^" + std::to_string(j - i));
      i = j;
    }
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? " + " : "") + parts[i];
    return out;
  }

  friend bool operator==(const FgAbGroup&, const FgAbGroup&) = default;
  friend std::strong_ordering operator<=>(const FgAbGroup& a, const FgAbGroup& b) {
    if (auto c = a.free_rank_ <=> b.free_rank_; c != 0) return c;
    const std::size_t n = std::min(a.torsion_.size(), b.torsion_.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (a.torsion_[i] < b.torsion_[i]) return std::strong_ordering::less;
      if (a.torsion_[i] > b.torsion_[i]) return std::strong_ordering::greater;
    }
    return a.torsion_.size() <=> b.torsion_.size();
  }

 private:
  std::size_t free_rank_ = 0;
  std::vector<BigInt> torsion_;
};

inline std::ostream& operator<<(std::ostream& os, const FgAbGroup& g) { return os << g.to_string(); }

/// Z^rows / image(m), canonical.
inline FgAbGroup cokernel(const IntMatrix& m) {
  auto snf = smith_normal_form(m);
  std::size_t free = m.rows() - snf.rank;
  std::vector<BigInt> torsion;
  for (std::size_t i = 0; i < snf.rank; ++i)
    if (snf.d(i, i) != 1) torsion.push_back(snf.d(i, i));
  return {free, std::move(torsion)};
}

inline FgAbGroup direct_sum(const FgAbGroup& a, const FgAbGroup& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  std::vector<BigInt> orders(a.torsion());
  orders.insert(orders.end(), b.torsion().begin(), b.torsion().end());
  orders.insert(orders.end(), a.free_rank() + b.free_rank(), BigInt(0));
  return FgAbGroup::from_cyclic_orders(orders);
}

inline FgAbGroup direct_sum(const std::vector<FgAbGroup>& parts) {
  FgAbGroup acc;
  for (const auto& g : parts) acc = direct_sum(acc, g);
  return acc;
}

/// k-fold direct sum.
inline FgAbGroup power(const FgAbGroup& g, std::size_t k) {
  std::vector<BigInt> orders;
  for (std::size_t i = 0; i < k; ++i) {
    orders.insert(orders.end(), g.torsion().begin(), g.torsion().end());
    orders.insert(orders.end(), g.free_rank(), BigInt(0));
  }
  return FgAbGroup::from_cyclic_orders(orders);
}

namespace detail {
inline std::vector<BigInt> cyclic_orders(const FgAbGroup& g) {
  std::vector<BigInt> out(g.torsion());
  out.insert(out.end(), g.free_rank(), BigInt(0));
  return out;
}
inline BigInt order_gcd(const BigInt& m, const BigInt& n) {
  // gcd(0, n) = n encodes Z (x) Z/n = Z/n and Z (x) Z = Z
  return boost::multiprecision::gcd(m, n);
}
}  // namespace detail

inline FgAbGroup tensor(const FgAbGroup& a, const FgAbGroup& b) {
  std::vector<BigInt> orders;
  for (const auto& m : detail::cyclic_orders(a))
    for (const auto& n : detail::cyclic_orders(b)) orders.push_back(detail::order_gcd(m, n));
  return FgAbGroup::from_cyclic_orders(orders);
}

inline FgAbGroup tor(const FgAbGroup& a, const FgAbGroup& b) {
  std::vector<BigInt> orders;
  for (const auto& m : a.torsion())
    for (const auto& n : b.torsion()) orders.push_back(boost::multiprecision::gcd(m, n));
  return FgAbGroup::from_cyclic_orders(orders);
}

/// Prime-power orders of the indecomposable torsion summands, sorted.
inline std::vector<BigInt> elementary_divisors(const FgAbGroup& g) {
  std::vector<BigInt> out;
  for (BigInt d : g.torsion()) {
    for (BigInt p = 2; p * p <= d; ++p) {
      if (!(d % p).is_zero()) continue;
      BigInt q = 1;
      while ((d % p).is_zero()) {
        d /= p;
        q *= p;
      }
      out.push_back(q);
    }
    if (d > 1) out.push_back(d);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// True when part (+) X = whole for some group X (Krull-Schmidt on indecomposables).
inline bool is_summand_of(const FgAbGroup& part, const FgAbGroup& whole) {
  if (part.free_rank() > whole.free_rank()) return false;
  auto p = elementary_divisors(part);
  auto w = elementary_divisors(whole);
  return std::includes(w.begin(), w.end(), p.begin(), p.end());
}

class GroupHom {
 public:
  GroupHom(FgAbGroup source, FgAbGroup target, IntMatrix matrix)
      : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
    if (matrix_.rows() != target_.generator_count() || matrix_.cols() != source_.generator_count())
      throw ValidationError("GroupHom: matrix is " + std::to_string(matrix_.rows()) + "x" +
                            std::to_string(matrix_.cols()) + ", expected " +
                            std::to_string(target_.generator_count()) + "x" +
                            std::to_string(source_.generator_count()));
    for (std::size_t j = 0; j < matrix_.cols(); ++j) {
      const BigInt ord = source_.generator_order(j);
      for (std::size_t i = 0; i < matrix_.rows(); ++i) {
        const BigInt e = target_.generator_order(i);
        // ord * entry must vanish in the cyclic factor of order e
        const BigInt killed = ord * matrix_(i, j);
        const bool ok = e.is_zero() ? killed.is_zero() : (killed % e).is_zero();
        if (!ok)
          throw ValidationError("GroupHom: generator " + std::to_string(j) + " of order " + ord.str() +
                                " maps outside the elements it can reach (row " + std::to_string(i) + ")");
      }
    }
    normalize();
  }

  static GroupHom zero(FgAbGroup source, FgAbGroup target) {
    IntMatrix m(target.generator_count(), source.generator_count());
    return {std::move(source), std::move(target), std::move(m)};
  }

  const FgAbGroup& source() const noexcept { return source_; }
  const FgAbGroup& target() const noexcept { return target_; }
  const IntMatrix& matrix() const noexcept { return matrix_; }
  bool is_zero() const { return matrix_.is_zero(); }

  /// next o *this
  GroupHom then(const GroupHom& next) const {
    if (next.source_ != target_) throw ValidationError("GroupHom: composing across different groups");
    return {source_, next.target_, next.matrix_ * matrix_};
  }

  friend bool operator==(const GroupHom&, const GroupHom&) = default;

 private:
  void normalize() {
    for (std::size_t i = 0; i < matrix_.rows(); ++i) {
      const BigInt e = target_.generator_order(i);
      if (e.is_zero()) continue;
      for (std::size_t j = 0; j < matrix_.cols(); ++j) {
        BigInt r = matrix_(i, j) % e;
        if (r < 0) r += e;
        matrix_(i, j) = r;
      }
    }
  }

  FgAbGroup source_;
  FgAbGroup target_;
  IntMatrix matrix_;
};

namespace detail {

/// Basis of K = { x in Z^gens(source) : h(x) = 0 in target } as columns.
inline IntMatrix kernel_lattice(const GroupHom& h) {
  const std::size_t n = h.source().generator_count();
  IntMatrix combined = IntMatrix::hconcat(h.matrix(), h.target().relations());
  IntMatrix ker = integer_kernel(combined);
  return lattice_basis(ker.row_range(0, n));
}

}  // namespace detail

/// Subquotient ker(out) / im(in) at `entry`. Either map may be absent (zero).
inline FgAbGroup homology_at(const FgAbGroup& entry, const GroupHom* incoming, const GroupHom* outgoing) {
  const std::size_t n = entry.generator_count();
  if (incoming && incoming->target() != entry) throw ValidationError("homology_at: incoming map lands elsewhere");
  if (outgoing && outgoing->source() != entry) throw ValidationError("homology_at: outgoing map starts elsewhere");
  if (incoming && outgoing && !incoming->then(*outgoing).is_zero())
    throw ValidationError("homology_at: composite of consecutive maps is not zero");

  IntMatrix kernel_basis = outgoing ? detail::kernel_lattice(*outgoing) : IntMatrix::identity(n);
  IntMatrix boundaries = entry.relations();
  if (incoming) boundaries = IntMatrix::hconcat(incoming->matrix(), boundaries);
  if (kernel_basis.cols() == 0) return FgAbGroup::zero();
  return cokernel(solve_in_lattice(kernel_basis, boundaries));
}

struct HomImages {
  FgAbGroup image;
  FgAbGroup kernel;
  FgAbGroup cokernel;

  friend bool operator==(const HomImages&, const HomImages&) = default;
  friend auto operator<=>(const HomImages& a, const HomImages& b) {
    return std::tie(a.image, a.kernel, a.cokernel) <=> std::tie(b.image, b.kernel, b.cokernel);
  }
};

inline HomImages hom_images(const GroupHom& h) {
  IntMatrix kernel_basis = detail::kernel_lattice(h);
  return {
      cokernel(kernel_basis),
      homology_at(h.source(), nullptr, &h),
      cokernel(IntMatrix::hconcat(h.matrix(), h.target().relations())),
  };
}

/// Short human-readable description of a hom's isomorphism class.
inline std::string describe_hom(const GroupHom& h) {
  if (h.is_zero()) return "zero map";
  auto im = hom_images(h);
  std::ostringstream os;
  os << "matrix " << h.matrix() << ": image " << im.image;
  if (im.cokernel.is_finite() && !h.target().is_finite()) os << " of index " << *im.cokernel.order();
  os << ", kernel " << im.kernel << ", cokernel " << im.cokernel;
  return os.str();
}

struct HomEnumeration {
  std::vector<GroupHom> homs;
  /// True when maps with entries beyond the bound exist that the list may be missing.
  bool may_truncate = false;
};

namespace detail {

// 0, 1, -1, 2, -2, ... so that small positive entries come first
inline std::vector<BigInt> bounded_values(long long bound) {
  std::vector<BigInt> vals{0};
  for (long long k = 1; k <= bound; ++k) {
    vals.emplace_back(k);
    vals.emplace_back(-k);
  }
  return vals;
}

}  // namespace detail

/// Every distinct hom source -> target with matrix entries in [-bound, bound]
/// (torsion rows reduced), ordered by largest entry then lexicographically.
inline HomEnumeration hom_candidates(const FgAbGroup& source, const FgAbGroup& target, long long bound) {
  if (bound < 1) throw PreconditionError("entry bound must be >= 1");
  const std::size_t rows = target.generator_count();
  const std::size_t cols = source.generator_count();
  const auto values = detail::bounded_values(bound);
  HomEnumeration out;

  // admissible columns per source generator, deduplicated after reduction
  std::vector<std::vector<std::vector<BigInt>>> columns(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    const BigInt ord = source.generator_order(j);
    std::vector<std::vector<BigInt>> per_row(rows);
    for (std::size_t i = 0; i < rows; ++i) {
      const BigInt e = target.generator_order(i);
      if (e.is_zero() && ord.is_zero()) out.may_truncate = true;
      if (!e.is_zero() && e > 2 * bound + 1) out.may_truncate = true;
      std::vector<BigInt> seen;
      for (const auto& x : values) {
        const BigInt killed = ord * x;
        if (e.is_zero() ? !killed.is_zero() : !(killed % e).is_zero()) continue;
        BigInt r = x;
        if (!e.is_zero()) {
          r = x % e;
          if (r < 0) r += e;
        }
        if (std::find(seen.begin(), seen.end(), r) == seen.end()) seen.push_back(r);
      }
      per_row[i] = std::move(seen);
    }
    std::vector<std::vector<BigInt>> cols_j{{}};
    for (std::size_t i = 0; i < rows; ++i) {
      std::vector<std::vector<BigInt>> next;
      for (const auto& prefix : cols_j)
        for (const auto& v : per_row[i]) {
          auto c = prefix;
          c.push_back(v);
          next.push_back(std::move(c));
        }
      cols_j = std::move(next);
    }
    columns[j] = std::move(cols_j);
  }

  std::vector<std::size_t> idx(cols, 0);
  for (;;) {
    IntMatrix m(rows, cols);
    for (std::size_t j = 0; j < cols; ++j)
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = columns[j][idx[j]][i];
    out.homs.emplace_back(source, target, std::move(m));
    bool carry = true;
    for (std::size_t j = cols; carry && j > 0;) {
      --j;
      if (++idx[j] < columns[j].size())
        carry = false;
      else
        idx[j] = 0;
    }
    if (carry) break;
  }

  auto weight = [](const GroupHom& h) {
    BigInt w = 0;
    const auto& m = h.matrix();
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) w = std::max(w, BigInt(abs(m(i, j))));
    return w;
  };
  std::stable_sort(out.homs.begin(), out.homs.end(),
                   [&](const GroupHom& a, const GroupHom& b) { return weight(a) < weight(b); });
  return out;
}

/// Homs within the entry bound, one representative per (image, kernel, cokernel) class.
inline HomEnumeration enumerate_homs(const FgAbGroup& source, const FgAbGroup& target, long long bound) {
  auto all = hom_candidates(source, target, bound);
  HomEnumeration out;
  out.may_truncate = all.may_truncate;
  std::vector<HomImages> seen;
  for (auto& h : all.homs) {
    auto key = hom_images(h);
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
    seen.push_back(std::move(key));
    out.homs.push_back(std::move(h));
  }
  return out;
}

}  // namespace cobstruct
