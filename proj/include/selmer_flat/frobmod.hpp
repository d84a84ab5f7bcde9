#pragma once

// Finite abelian groups with a Frobenius automorphism.
//
// A module is stored in invariant-factor form  Z/d_1 + ... + Z/d_k  with
// d_1 | d_2 | ... | d_k and every d_i >= 2; Frobenius is an integer matrix
// acting on coordinate column vectors, row i read modulo d_i. All counts are
// obtained by explicit enumeration, capped by EnumerationLimits.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "selmer_flat/bigint.hpp"
#include "selmer_flat/errors.hpp"
#include "selmer_flat/smith.hpp"

namespace selmer_flat::frobmod {

using Element = std::vector<std::int64_t>;
using Matrix = std::vector<std::vector<std::int64_t>>;
using Fraction = Rational;

struct EnumerationLimits {
  std::int64_t max_order = 1'000'000;
};

class FrobModule {
 public:
  /// Validates the divisor chain, that the matrix is well defined on the
  /// quotient, and (by enumeration) that it is a bijection.
  static FrobModule create(std::vector<std::int64_t> divisors, Matrix frobenius,
                           const EnumerationLimits& limits = {}) {
    FrobModule m(std::move(divisors), std::move(frobenius));
    m.validate(limits);
    return m;
  }

  static FrobModule trivial() { return FrobModule({}, {}); }

  /// Z/n with Frobenius acting as multiplication by `multiplier`.
  static FrobModule cyclic(std::int64_t n, std::int64_t multiplier, const EnumerationLimits& limits = {}) {
    if (n == 1) return trivial();
    return create({n}, {{multiplier}}, limits);
  }

  const std::vector<std::int64_t>& divisors() const { return divisors_; }
  const Matrix& frobenius() const { return frobenius_; }
  std::size_t rank() const { return divisors_.size(); }

  std::int64_t order() const {
    std::int64_t n = 1;
    for (auto d : divisors_) {
      if (n > std::numeric_limits<std::int64_t>::max() / d) throw TooLarge("group order overflows 64 bits");
      n *= d;
    }
    return n;
  }

  std::int64_t exponent() const { return divisors_.empty() ? 1 : divisors_.back(); }

  Element zero() const { return Element(rank(), 0); }

  Element basis(std::size_t j) const {
    Element e = zero();
    e[j] = 1 % divisors_[j];
    return e;
  }

  Element normalize(Element x) const {
    for (std::size_t i = 0; i < rank(); ++i) x[i] = mod(x[i], divisors_[i]);
    return x;
  }

  Element add(const Element& x, const Element& y) const {
    Element z(rank());
    for (std::size_t i = 0; i < rank(); ++i) z[i] = (x[i] + y[i]) % divisors_[i];
    return z;
  }

  Element negate(const Element& x) const {
    Element z(rank());
    for (std::size_t i = 0; i < rank(); ++i) z[i] = (divisors_[i] - x[i]) % divisors_[i];
    return z;
  }

  Element scale(const Element& x, std::int64_t c) const {
    Element z(rank());
    for (std::size_t i = 0; i < rank(); ++i) z[i] = mod(static_cast<std::int64_t>((static_cast<__int128>(x[i]) * c) % divisors_[i]), divisors_[i]);
    return z;
  }

  Element apply_frobenius(const Element& x) const { return apply_matrix(frobenius_, x, divisors_); }

  std::int64_t index_of(const Element& x) const {
    std::int64_t idx = 0;
    for (std::size_t i = rank(); i-- > 0;) idx = idx * divisors_[i] + x[i];
    return idx;
  }

  Element element_at(std::int64_t idx) const {
    Element x(rank());
    for (std::size_t i = 0; i < rank(); ++i) {
      x[i] = idx % divisors_[i];
      idx /= divisors_[i];
    }
    return x;
  }

  void require_enumerable(const EnumerationLimits& limits) const {
    if (order() > limits.max_order)
      throw TooLarge("group order " + std::to_string(order()) + " exceeds enumeration cap " +
                     std::to_string(limits.max_order));
  }

  template <class F>
  void for_each(F&& f) const {
    std::int64_t n = order();
    Element x = zero();
    for (std::int64_t idx = 0; idx < n; ++idx) {
      f(static_cast<const Element&>(x));
      for (std::size_t i = 0; i < rank(); ++i) {
        if (++x[i] < divisors_[i]) break;
        x[i] = 0;
      }
    }
  }

  /// Frobenius composed with itself `power` times (power >= 0).
  FrobModule with_frobenius_power(std::int64_t power) const {
    Matrix result = identity(rank());
    Matrix base = frobenius_;
    while (power > 0) {
      if (power & 1) result = compose(base, result);
      power >>= 1;
      if (power > 0) base = compose(base, base);
    }
    return FrobModule(divisors_, result);
  }

  static Element apply_matrix(const Matrix& m, const Element& x, const std::vector<std::int64_t>& target_divisors) {
    Element y(target_divisors.size(), 0);
    for (std::size_t i = 0; i < target_divisors.size(); ++i) {
      __int128 acc = 0;
      for (std::size_t j = 0; j < x.size(); ++j) acc += static_cast<__int128>(m[i][j]) * x[j];
      acc %= target_divisors[i];
      if (acc < 0) acc += target_divisors[i];
      y[i] = static_cast<std::int64_t>(acc);
    }
    return y;
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
  }

  friend bool operator==(const FrobModule& a, const FrobModule& b) {
    return a.divisors_ == b.divisors_ && a.frobenius_ == b.frobenius_;
  }

 private:
  FrobModule(std::vector<std::int64_t> divisors, Matrix frobenius)
      : divisors_(std::move(divisors)), frobenius_(std::move(frobenius)) {
    for (std::size_t i = 0; i < frobenius_.size(); ++i)
      for (auto& c : frobenius_[i]) c = mod(c, divisors_[i]);
  }

  Matrix compose(const Matrix& a, const Matrix& b) const {  // a after b
    const std::size_t k = rank();
    Matrix c(k, std::vector<std::int64_t>(k, 0));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        __int128 acc = 0;
        for (std::size_t l = 0; l < k; ++l) acc += static_cast<__int128>(a[i][l]) * b[l][j];
        c[i][j] = static_cast<std::int64_t>(acc % divisors_[i]);
      }
    return c;
  }

  void validate(const EnumerationLimits& limits) const {
    const std::size_t k = divisors_.size();
    for (std::size_t i = 0; i < k; ++i) {
      if (divisors_[i] < 2) throw StructuralError("elementary divisors must be >= 2");
      if (i > 0 && divisors_[i] % divisors_[i - 1] != 0)
        throw StructuralError("elementary divisors must form a divisibility chain");
    }
    if (frobenius_.size() != k) throw StructuralError("Frobenius matrix has wrong number of rows");
    for (std::size_t i = 0; i < k; ++i) {
      if (frobenius_[i].size() != k) throw StructuralError("Frobenius matrix must be square");
      for (std::size_t j = 0; j < k; ++j)
        if (static_cast<__int128>(frobenius_[i][j]) * divisors_[j] % divisors_[i] != 0)
          throw StructuralError("Frobenius matrix is not well defined on Z/" + std::to_string(divisors_[j]));
    }
    require_enumerable(limits);
    std::vector<bool> seen(static_cast<std::size_t>(order()), false);
    for_each([&](const Element& x) {
      auto idx = static_cast<std::size_t>(index_of(apply_frobenius(x)));
      if (seen[idx]) throw StructuralError("Frobenius matrix is not a bijection");
      seen[idx] = true;
    });
  }

  std::vector<std::int64_t> divisors_;
  Matrix frobenius_;
};

/// Frobenius-equivariant homomorphism; matrix is (target rank) x (source rank).
class FrobHom {
 public:
  static FrobHom create(FrobModule source, FrobModule target, Matrix matrix, const EnumerationLimits& limits = {}) {
    FrobHom f(std::move(source), std::move(target), std::move(matrix));
    f.validate(limits);
    return f;
  }

  /// x -> c*x on a module into itself.
  static FrobHom multiplication(const FrobModule& m, std::int64_t c) {
    Matrix mat = FrobModule::identity(m.rank());
    for (std::size_t i = 0; i < m.rank(); ++i) mat[i][i] = c;
    return create(m, m, mat);
  }

  static FrobHom zero(const FrobModule& source, const FrobModule& target) {
    return create(source, target, Matrix(target.rank(), std::vector<std::int64_t>(source.rank(), 0)));
  }

  const FrobModule& source() const { return source_; }
  const FrobModule& target() const { return target_; }
  const Matrix& matrix() const { return matrix_; }

  Element operator()(const Element& x) const { return FrobModule::apply_matrix(matrix_, x, target_.divisors()); }

 private:
  FrobHom(FrobModule source, FrobModule target, Matrix matrix)
      : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
    for (std::size_t i = 0; i < matrix_.size(); ++i)
      for (auto& c : matrix_[i]) c = mod(c, target_.divisors()[i]);
  }

  void validate(const EnumerationLimits& limits) const {
    if (matrix_.size() != target_.rank()) throw StructuralError("homomorphism matrix has wrong number of rows");
    for (std::size_t i = 0; i < matrix_.size(); ++i) {
      if (matrix_[i].size() != source_.rank()) throw StructuralError("homomorphism matrix has wrong number of columns");
      for (std::size_t j = 0; j < source_.rank(); ++j)
        if (static_cast<__int128>(matrix_[i][j]) * source_.divisors()[j] % target_.divisors()[i] != 0)
          throw StructuralError("homomorphism is not well defined on the elementary divisors");
    }
    source_.require_enumerable(limits);
    source_.for_each([&](const Element& x) {
      if ((*this)(source_.apply_frobenius(x)) != target_.apply_frobenius((*this)(x)))
        throw StructuralError("homomorphism does not commute with Frobenius");
    });
  }

  FrobModule source_;
  FrobModule target_;
  Matrix matrix_;
};

/// Subgroup of an ambient module, given by generators.
struct Submodule {
  FrobModule ambient;
  std::vector<Element> generators;
};

// ------------------------------------------------------------ enumeration

/// Membership bitmap of the subgroup generated by `generators`.
inline std::vector<bool> closure(const FrobModule& m, const std::vector<Element>& generators,
                                 const EnumerationLimits& limits = {}) {
  m.require_enumerable(limits);
  std::vector<bool> in(static_cast<std::size_t>(m.order()), false);
  std::vector<Element> members{m.zero()};
  in[static_cast<std::size_t>(m.index_of(m.zero()))] = true;
  for (const auto& g : generators) {
    Element gn = m.normalize(g);
    if (in[static_cast<std::size_t>(m.index_of(gn))]) continue;
    // H + <g> = union of cosets H + k*g
    std::vector<Element> added;
    Element step = gn;
    while (!in[static_cast<std::size_t>(m.index_of(step))]) {
      for (const auto& h : members) {
        Element s = m.add(h, step);
        auto idx = static_cast<std::size_t>(m.index_of(s));
        if (!in[idx]) {
          in[idx] = true;
          added.push_back(std::move(s));
        }
      }
      step = m.add(step, gn);
    }
    members.insert(members.end(), added.begin(), added.end());
  }
  return in;
}

inline std::int64_t count_true(const std::vector<bool>& v) { return std::count(v.begin(), v.end(), true); }

/// #M(F): number of Frobenius-fixed elements.
inline std::int64_t fixed_points(const FrobModule& m, const EnumerationLimits& limits = {}) {
  m.require_enumerable(limits);
  std::int64_t n = 0;
  m.for_each([&](const Element& x) {
    if (m.apply_frobenius(x) == x) ++n;
  });
  return n;
}

/// Image of (Frob - 1), as generators.
inline std::vector<Element> frobenius_minus_one_generators(const FrobModule& m) {
  std::vector<Element> gens;
  for (std::size_t j = 0; j < m.rank(); ++j) {
    Element e = m.basis(j);
    gens.push_back(m.add(m.apply_frobenius(e), m.negate(e)));
  }
  return gens;
}

/// #M_F = #M / #(Frob - 1)M, with the image built by subgroup closure.
inline std::int64_t coinvariant_count(const FrobModule& m, const EnumerationLimits& limits = {}) {
  auto image = closure(m, frobenius_minus_one_generators(m), limits);
  return m.order() / count_true(image);
}

/// #H^1 of the profinite completion of Z generated by Frobenius. Equals the
/// number of fixed points; the coinvariant count is computed independently
/// and the two are required to agree.
inline std::int64_t h1_size(const FrobModule& m, const EnumerationLimits& limits = {}) {
  std::int64_t inv = fixed_points(m, limits);
  std::int64_t coinv = coinvariant_count(m, limits);
  if (inv != coinv)
    throw InternalInconsistency("invariants (" + std::to_string(inv) + ") != coinvariants (" +
                                std::to_string(coinv) + ")");
  return inv;
}

// ------------------------------------------------------------ sub / quotient

inline Submodule image_submodule(const FrobHom& f) {
  Submodule s{f.target(), {}};
  for (std::size_t j = 0; j < f.source().rank(); ++j) s.generators.push_back(f(f.source().basis(j)));
  return s;
}

/// Kernel as a submodule of the source, with a greedily chosen generating set.
inline Submodule kernel_submodule(const FrobHom& f, const EnumerationLimits& limits = {}) {
  const FrobModule& a = f.source();
  a.require_enumerable(limits);
  Submodule s{a, {}};
  std::vector<bool> in = closure(a, {}, limits);
  Element zero_target = f.target().zero();
  a.for_each([&](const Element& x) {
    if (in[static_cast<std::size_t>(a.index_of(x))]) return;
    if (f(x) != zero_target) return;
    s.generators.push_back(x);
    in = closure(a, s.generators, limits);
  });
  return s;
}

inline bool is_frobenius_stable(const Submodule& s, const EnumerationLimits& limits = {}) {
  auto in = closure(s.ambient, s.generators, limits);
  for (const auto& g : s.generators)
    if (!in[static_cast<std::size_t>(s.ambient.index_of(s.ambient.apply_frobenius(s.ambient.normalize(g))))])
      return false;
  return true;
}

/// Frobenius-fixed elements of a submodule, counted inside the ambient module.
inline std::int64_t fixed_points(const Submodule& s, const EnumerationLimits& limits = {}) {
  auto in = closure(s.ambient, s.generators, limits);
  std::int64_t n = 0;
  s.ambient.for_each([&](const Element& x) {
    if (in[static_cast<std::size_t>(s.ambient.index_of(x))] && s.ambient.apply_frobenius(x) == x) ++n;
  });
  return n;
}

namespace detail {

inline Element int_column(const IntMatrix& m, std::size_t col, const std::vector<std::int64_t>& mods) {
  Element x(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) x[i] = static_cast<std::int64_t>(mod(m[i][col], Int(mods[i])));
  return x;
}

}  // namespace detail

/// Raw presentation Z^k / relations, with a linear map on Z^k inducing Frobenius.
/// Used to bring arbitrary presentations into invariant-factor form.
struct Normalized {
  FrobModule module;
  Matrix to_normal;    // rows: normal coordinates as functions of raw coordinates
  Matrix from_normal;  // columns: raw representatives of normal generators
};

/// Normal form of Z^k / <relation columns> with Frobenius given by `raw_frobenius`
/// (k x k, must preserve the relation lattice).
inline Normalized normalize_presentation(std::size_t k, const IntMatrix& relations, const Matrix& raw_frobenius,
                                         const EnumerationLimits& limits = {}) {
  if (k == 0) return {FrobModule::trivial(), {}, {}};
  SmithForm snf = smith_normal_form(relations);
  std::vector<std::size_t> kept;
  std::vector<std::int64_t> divisors;
  for (std::size_t i = 0; i < k; ++i) {
    Int d = i < snf.diagonal.size() ? snf.diagonal[i] : Int(0);
    if (d == 0) throw StructuralError("presentation defines an infinite group");
    if (d == 1) continue;
    kept.push_back(i);
    divisors.push_back(to_int64(d));
  }
  Normalized out{FrobModule::trivial(), Matrix(kept.size(), std::vector<std::int64_t>(k, 0)),
                 Matrix(k, std::vector<std::int64_t>(kept.size(), 0))};
  for (std::size_t r = 0; r < kept.size(); ++r)
    for (std::size_t j = 0; j < k; ++j)
      out.to_normal[r][j] = static_cast<std::int64_t>(mod(snf.U[kept[r]][j], Int(divisors[r])));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t c = 0; c < kept.size(); ++c) {
      // raw representatives only matter modulo the relation lattice; keep them small
      Int v = snf.U_inv[i][kept[c]];
      out.from_normal[i][c] = to_int64(v);
    }
  // Frobenius in normal coordinates: to_normal * raw_frobenius * from_normal
  Matrix frob(kept.size(), std::vector<std::int64_t>(kept.size(), 0));
  for (std::size_t r = 0; r < kept.size(); ++r)
    for (std::size_t c = 0; c < kept.size(); ++c) {
      Int acc = 0;
      for (std::size_t i = 0; i < k; ++i) {
        Int inner = 0;
        for (std::size_t j = 0; j < k; ++j) inner += Int(raw_frobenius[i][j]) * out.from_normal[j][c];
        acc += Int(out.to_normal[r][i]) * inner;
      }
      frob[r][c] = static_cast<std::int64_t>(mod(acc, Int(divisors[r])));
    }
  out.module = FrobModule::create(divisors, frob, limits);
  return out;
}

/// Relation columns diag(d_i) of the ambient module.
inline IntMatrix ambient_relations(const FrobModule& m, std::size_t extra_columns = 0) {
  IntMatrix rel(m.rank(), std::vector<Int>(m.rank() + extra_columns, 0));
  for (std::size_t i = 0; i < m.rank(); ++i) rel[i][i] = m.divisors()[i];
  return rel;
}

/// N / S with the induced Frobenius; S must be Frobenius-stable.
inline FrobModule quotient_module(const Submodule& s, const EnumerationLimits& limits = {}) {
  if (!is_frobenius_stable(s, limits)) throw StructuralError("submodule is not Frobenius-stable");
  const FrobModule& n = s.ambient;
  IntMatrix rel = ambient_relations(n, s.generators.size());
  for (std::size_t c = 0; c < s.generators.size(); ++c)
    for (std::size_t i = 0; i < n.rank(); ++i) rel[i][n.rank() + c] = s.generators[c][i];
  return normalize_presentation(n.rank(), rel, n.frobenius(), limits).module;
}

/// Abstract structure of a Frobenius-stable submodule, with induced Frobenius.
inline FrobModule as_module(const Submodule& s, const EnumerationLimits& limits = {}) {
  if (!is_frobenius_stable(s, limits)) throw StructuralError("submodule is not Frobenius-stable");
  const FrobModule& amb = s.ambient;
  const std::size_t m = s.generators.size();
  const std::size_t k = amb.rank();
  if (m == 0 || k == 0) return FrobModule::trivial();

  // Relations among the generators: kernel of Z^m + Z^k -> Z^k, (x, y) -> G x + D y.
  IntMatrix b(k, std::vector<Int>(m + k, 0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < m; ++j) b[i][j] = s.generators[j][i];
    b[i][m + i] = amb.divisors()[i];
  }
  SmithForm snf = smith_normal_form(b);
  std::size_t rank_b = 0;
  for (auto& d : snf.diagonal)
    if (d != 0) ++rank_b;
  IntMatrix rel(m, std::vector<Int>(m + k - rank_b, 0));
  for (std::size_t c = rank_b; c < m + k; ++c)
    for (std::size_t j = 0; j < m; ++j) rel[j][c - rank_b] = snf.V[j][c];

  SmithForm sub = smith_normal_form(rel);
  std::vector<std::int64_t> divisors;
  std::vector<Element> basis;  // new generators as ambient elements
  for (std::size_t i = 0; i < m; ++i) {
    Int d = i < sub.diagonal.size() ? sub.diagonal[i] : Int(0);
    if (d == 0) throw InternalInconsistency("finite subgroup with infinite presentation");
    if (d == 1) continue;
    divisors.push_back(to_int64(d));
    Element g = amb.zero();
    for (std::size_t j = 0; j < m; ++j) {
      std::int64_t coeff = static_cast<std::int64_t>(mod(sub.U_inv[j][i], Int(amb.exponent())));
      g = amb.add(g, amb.scale(s.generators[j], coeff));
    }
    basis.push_back(g);
  }
  if (divisors.empty()) return FrobModule::trivial();

  // Coordinates of every subgroup element in the new basis, by enumeration.
  std::int64_t order = 1;
  for (auto d : divisors) order *= d;
  if (order > limits.max_order) throw TooLarge("submodule exceeds enumeration cap");
  std::unordered_map<std::int64_t, Element> coords;
  Element y(divisors.size(), 0);
  for (std::int64_t idx = 0; idx < order; ++idx) {
    Element x = amb.zero();
    for (std::size_t i = 0; i < divisors.size(); ++i) x = amb.add(x, amb.scale(basis[i], y[i]));
    if (!coords.emplace(amb.index_of(x), y).second)
      throw InternalInconsistency("submodule basis is not independent");
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (++y[i] < divisors[i]) break;
      y[i] = 0;
    }
  }
  Matrix frob(divisors.size(), std::vector<std::int64_t>(divisors.size(), 0));
  for (std::size_t c = 0; c < basis.size(); ++c) {
    auto it = coords.find(amb.index_of(amb.apply_frobenius(basis[c])));
    if (it == coords.end()) throw StructuralError("submodule is not Frobenius-stable");
    for (std::size_t r = 0; r < divisors.size(); ++r) frob[r][c] = it->second[r];
  }
  return FrobModule::create(divisors, frob, limits);
}

inline FrobModule image_module(const FrobHom& f, const EnumerationLimits& limits = {}) {
  return as_module(image_submodule(f), limits);
}

inline FrobModule kernel_module(const FrobHom& f, const EnumerationLimits& limits = {}) {
  return as_module(kernel_submodule(f, limits), limits);
}

/// Cokernel B / f(A).
inline FrobModule cokernel_module(const FrobHom& f, const EnumerationLimits& limits = {}) {
  return quotient_module(image_submodule(f), limits);
}

/// A (+) B with block-diagonal Frobenius, in invariant-factor form.
inline Normalized direct_sum(const FrobModule& a, const FrobModule& b, const EnumerationLimits& limits = {}) {
  const std::size_t k = a.rank() + b.rank();
  IntMatrix rel(k, std::vector<Int>(k, 0));
  Matrix frob(k, std::vector<std::int64_t>(k, 0));
  for (std::size_t i = 0; i < a.rank(); ++i) {
    rel[i][i] = a.divisors()[i];
    for (std::size_t j = 0; j < a.rank(); ++j) frob[i][j] = a.frobenius()[i][j];
  }
  for (std::size_t i = 0; i < b.rank(); ++i) {
    rel[a.rank() + i][a.rank() + i] = b.divisors()[i];
    for (std::size_t j = 0; j < b.rank(); ++j) frob[a.rank() + i][a.rank() + j] = b.frobenius()[i][j];
  }
  return normalize_presentation(k, rel, frob, limits);
}

/// Transports a map given in raw coordinates to normal coordinates.
inline Matrix transport(const Matrix& raw, const Normalized& source, const Normalized& target) {
  const std::size_t rows = target.to_normal.size(), cols = source.from_normal.empty() ? 0 : source.from_normal[0].size();
  Matrix out(rows, std::vector<std::int64_t>(cols, 0));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      Int acc = 0;
      for (std::size_t i = 0; i < raw.size(); ++i) {
        Int inner = 0;
        for (std::size_t j = 0; j < source.from_normal.size(); ++j) inner += Int(raw[i][j]) * source.from_normal[j][c];
        acc += Int(target.to_normal[r][i]) * inner;
      }
      out[r][c] = static_cast<std::int64_t>(mod(acc, Int(target.module.divisors()[r])));
    }
  return out;
}

// ------------------------------------------------------------ local indices

struct LocalIndices {
  Fraction left_index;       // c_A / #(phi Phi_A)(F)
  Fraction right_index;      // c_B / #(phi Phi_A)(F)
  std::int64_t bound_left;   // #Phi_A[phi](F)
  std::int64_t bound_right;  // #(Phi_B / phi Phi_A)(F)
  std::int64_t c_source;
  std::int64_t c_target;
  std::int64_t c_image;
};

/// Indices of the local Selmer and flat conditions in their intersection,
/// for phi: Phi_A -> Phi_B. Both indices are checked to be integers bounded
/// by the fixed points of the kernel and cokernel respectively.
inline LocalIndices local_indices(const FrobHom& f, const EnumerationLimits& limits = {}) {
  LocalIndices out{};
  out.c_source = fixed_points(f.source(), limits);
  out.c_target = fixed_points(f.target(), limits);
  out.c_image = fixed_points(image_submodule(f), limits);
  out.left_index = Fraction(out.c_source) / out.c_image;
  out.right_index = Fraction(out.c_target) / out.c_image;
  out.bound_left = fixed_points(kernel_submodule(f, limits), limits);
  out.bound_right = fixed_points(cokernel_module(f, limits), limits);
  if (denominator(out.left_index) != 1 || denominator(out.right_index) != 1)
    throw InternalInconsistency("local index is not an integer");
  if (out.left_index < 1 || out.right_index < 1) throw InternalInconsistency("local index is not positive");
  if (out.left_index > out.bound_left || out.right_index > out.bound_right)
    throw InternalInconsistency("local index exceeds its fixed-point bound");
  return out;
}

enum class Criterion { holds, fails, not_applicable };

inline const char* to_string(Criterion c) {
  switch (c) {
    case Criterion::holds:
      return "holds";
    case Criterion::fails:
      return "fails";
    case Criterion::not_applicable:
      return "not-applicable";
  }
  return "?";
}

struct CoprimalityReport {
  std::int64_t degree;
  std::int64_t c_source, c_target, c_image;
  Criterion target_equality;  // gcd(n, c_B) = 1  =>  Phi_B(F) = (phi Phi_A)(F)
  Criterion source_equality;  // gcd(n, c_A) = 1  =>  Phi_A(F) = (phi Phi_A)(F) in size
  Criterion both;             // gcd(n, c_A c_B) = 1  =>  both
};

/// Evaluates the coprimality implications for phi of degree n. A criterion
/// whose gcd hypothesis fails is reported as not applicable.
inline CoprimalityReport check_coprimality_criteria(const FrobHom& f, std::int64_t n,
                                                    const EnumerationLimits& limits = {}) {
  if (n < 1) throw Error("degree must be positive");
  CoprimalityReport r{};
  r.degree = n;
  r.c_source = fixed_points(f.source(), limits);
  r.c_target = fixed_points(f.target(), limits);
  r.c_image = fixed_points(image_submodule(f), limits);
  auto decide = [&](bool applicable, bool equal) {
    if (!applicable) return Criterion::not_applicable;
    return equal ? Criterion::holds : Criterion::fails;
  };
  bool tgt_ok = gcd64(n, r.c_target) == 1, src_ok = gcd64(n, r.c_source) == 1;
  r.target_equality = decide(tgt_ok, r.c_target == r.c_image);
  r.source_equality = decide(src_ok, r.c_source == r.c_image);
  r.both = decide(tgt_ok && src_ok, r.c_target == r.c_image && r.c_source == r.c_image);
  return r;
}

// ------------------------------------------------------------ exactness

struct SixTermCounts {
  std::int64_t kernel_fixed, source_fixed, image_fixed;
  std::int64_t kernel_coinv, source_coinv, image_coinv;
  std::int64_t image_of_source_fixed;  // #f(A^F) inside I^F
  std::int64_t connecting_image;       // #I^F / #f(A^F)
  std::int64_t kernel_h1_to_source;    // #ker(K_F -> A_F), by coset enumeration
  std::int64_t kernel_h1_source_to_image;  // #ker(A_F -> I_F)
  std::int64_t image_h1_kernel_to_source;  // #im(K_F -> A_F)
  bool exact;
};

/// Counts every term of
///   0 -> K^F -> A^F -> I^F -> K_F -> A_F -> I_F -> 0
/// for 0 -> K -> A -> I -> 0 (K = ker f, I = im f) and checks exactness at
/// each interior term by direct coset enumeration.
inline SixTermCounts six_term_check(const FrobHom& f, const EnumerationLimits& limits = {}) {
  const FrobModule& a = f.source();
  const FrobModule& b = f.target();
  SixTermCounts c{};
  Submodule ker = kernel_submodule(f, limits);
  Submodule img = image_submodule(f);
  auto in_ker = closure(a, ker.generators, limits);
  auto in_img = closure(b, img.generators, limits);

  // (F-1) applied inside each of K, A, I.
  std::vector<Element> fk, fa, fi;
  for (const auto& g : ker.generators) fk.push_back(a.add(a.apply_frobenius(g), a.negate(g)));
  fa = frobenius_minus_one_generators(a);
  for (const auto& g : img.generators) fi.push_back(b.add(b.apply_frobenius(g), b.negate(g)));
  auto fk_in = closure(a, fk, limits);
  auto fa_in = closure(a, fa, limits);
  auto fi_in = closure(b, fi, limits);

  std::int64_t k_size = count_true(in_ker), i_size = count_true(in_img);
  c.kernel_fixed = fixed_points(ker, limits);
  c.source_fixed = fixed_points(a, limits);
  c.image_fixed = fixed_points(img, limits);
  c.kernel_coinv = k_size / count_true(fk_in);
  c.source_coinv = a.order() / count_true(fa_in);
  c.image_coinv = i_size / count_true(fi_in);

  std::vector<bool> image_of_fixed(static_cast<std::size_t>(b.order()), false);
  std::int64_t k_cap_fa = 0, pre_fi = 0;
  a.for_each([&](const Element& x) {
    auto ix = static_cast<std::size_t>(a.index_of(x));
    Element y = f(x);
    if (a.apply_frobenius(x) == x) image_of_fixed[static_cast<std::size_t>(b.index_of(y))] = true;
    if (in_ker[ix] && fa_in[ix]) ++k_cap_fa;
    if (fi_in[static_cast<std::size_t>(b.index_of(y))]) ++pre_fi;
  });
  c.image_of_source_fixed = count_true(image_of_fixed);
  c.connecting_image = c.image_fixed / c.image_of_source_fixed;
  c.kernel_h1_to_source = k_cap_fa / count_true(fk_in);
  c.kernel_h1_source_to_image = pre_fi / count_true(fa_in);
  c.image_h1_kernel_to_source = c.kernel_coinv / c.kernel_h1_to_source;

  bool ok = true;
  ok &= c.image_fixed % c.image_of_source_fixed == 0;
  // exact at A^F: kernel of A^F -> I^F is K^F
  ok &= c.source_fixed == c.kernel_fixed * c.image_of_source_fixed;
  // exact at K_F: image of delta equals kernel of K_F -> A_F
  ok &= c.connecting_image == c.kernel_h1_to_source;
  // exact at A_F
  ok &= c.image_h1_kernel_to_source == c.kernel_h1_source_to_image;
  // A_F -> I_F surjective
  ok &= c.source_coinv / c.kernel_h1_source_to_image == c.image_coinv;
  // alternating product of orders
  ok &= static_cast<__int128>(c.kernel_fixed) * c.image_fixed * c.source_coinv ==
        static_cast<__int128>(c.source_fixed) * c.kernel_coinv * c.image_coinv;
  c.exact = ok;
  return c;
}

}  // namespace selmer_flat::frobmod
