#pragma once

// Number-field invariants at desk scale: Q, quadratic fields, and fields
// given by a monic irreducible integer polynomial.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include "selmer_flat/bigint.hpp"
#include "selmer_flat/poly.hpp"
#include "selmer_flat/quadform.hpp"

namespace selmer_flat::nf {

using poly::ZPoly;

struct Place {
  int e = 1;  // ramification index
  int f = 1;  // residue degree
  friend bool operator==(const Place&, const Place&) = default;
};

struct Splitting {
  Int prime;
  std::vector<Place> places;
  int count() const { return static_cast<int>(places.size()); }
  int max_e() const {
    int e = 1;
    for (const auto& pl : places) e = std::max(e, pl.e);
    return e;
  }
};

// ------------------------------------------------------------ polynomials over Z

namespace detail {

inline std::vector<Int> signed_divisors(const Int& n) {
  std::vector<Int> pos{1};
  for (const auto& [p, e] : factor(n)) {
    std::size_t m = pos.size();
    Int pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < m; ++i) pos.push_back(pos[i] * pk);
    }
  }
  std::vector<Int> out;
  for (const auto& d : pos) {
    out.push_back(d);
    out.push_back(-d);
  }
  return out;
}

/// Lagrange interpolation over Q through (x_i, y_i).
inline poly::QPoly interpolate(const std::vector<Int>& xs, const std::vector<Int>& ys) {
  poly::QPoly result;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    poly::QPoly basis{Rational(1)};
    Rational denom = 1;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (i == j) continue;
      basis = poly::mul(basis, poly::QPoly{Rational(-xs[j]), Rational(1)});
      denom *= Rational(xs[i] - xs[j]);
    }
    if (result.size() < basis.size()) result.resize(basis.size());
    for (std::size_t k = 0; k < basis.size(); ++k) result[k] += basis[k] * Rational(ys[i]) / denom;
  }
  poly::trim(result);
  return result;
}

/// Kronecker's method: a monic factor of degree d, if one exists.
inline bool has_factor_of_degree(const ZPoly& f, int d, std::int64_t max_combinations) {
  // d + 1 evaluation points with the fewest divisors
  std::vector<std::pair<std::size_t, Int>> scored;
  for (int k = -12; k <= 12; ++k) {
    Int v = poly::evaluate(f, Int(k));
    if (v == 0) return d == 1;
    scored.push_back({signed_divisors(v).size(), Int(k)});
  }
  std::sort(scored.begin(), scored.end());
  std::vector<Int> xs;
  std::vector<std::vector<Int>> choices;
  std::int64_t combos = 1;
  for (int i = 0; i <= d; ++i) {
    xs.push_back(scored[static_cast<std::size_t>(i)].second);
    choices.push_back(signed_divisors(poly::evaluate(f, xs.back())));
    combos *= static_cast<std::int64_t>(choices.back().size());
    if (combos > max_combinations) throw TooLarge("irreducibility test exceeds the Kronecker search cap");
  }
  std::vector<std::size_t> idx(xs.size(), 0);
  poly::QPoly fq = poly::to_q(f);
  while (true) {
    std::vector<Int> ys;
    for (std::size_t i = 0; i < xs.size(); ++i) ys.push_back(choices[i][idx[i]]);
    poly::QPoly g = interpolate(xs, ys);
    if (poly::degree(g) == d && g.back() == 1) {
      bool integral = std::all_of(g.begin(), g.end(), [](const Rational& c) { return denominator(c) == 1; });
      if (integral && poly::divmod(fq, g).second.empty()) return true;
    }
    std::size_t i = 0;
    while (i < idx.size() && ++idx[i] == choices[i].size()) idx[i++] = 0;
    if (i == idx.size()) return false;
  }
}

}  // namespace detail

/// Irreducibility over Q of a monic integer polynomial: factorization degree
/// patterns modulo unramified primes first, Kronecker's method for whatever
/// degrees survive.
inline bool is_irreducible(const ZPoly& f_in, std::int64_t max_combinations = 2'000'000) {
  ZPoly f = f_in;
  poly::trim(f);
  const int n = poly::degree(f);
  if (n < 1) return false;
  if (n == 1) return true;
  Int disc = poly::discriminant(f);
  if (disc == 0) return false;
  std::vector<bool> possible(static_cast<std::size_t>(n + 1), true);  // degrees of a proper factor
  possible[0] = possible[static_cast<std::size_t>(n)] = false;
  int used = 0;
  for (std::int64_t l = 2; l < 5000 && used < 40; ++l) {
    if (!is_prime(l) || disc % l == 0) continue;
    ++used;
    auto shape = poly::factor_shape(f, l);
    std::vector<bool> sums(static_cast<std::size_t>(n + 1), false);
    sums[0] = true;
    for (const auto& s : shape.shapes)
      for (int k = n; k >= s.degree; --k)
        if (sums[static_cast<std::size_t>(k - s.degree)]) sums[static_cast<std::size_t>(k)] = true;
    bool any = false;
    for (int k = 1; k < n; ++k) {
      possible[static_cast<std::size_t>(k)] = possible[static_cast<std::size_t>(k)] && sums[static_cast<std::size_t>(k)];
      any = any || possible[static_cast<std::size_t>(k)];
    }
    if (!any) return true;
  }
  for (int d = 1; 2 * d <= n; ++d)
    if (possible[static_cast<std::size_t>(d)] && detail::has_factor_of_degree(f, d, max_combinations)) return false;
  return true;
}

/// Splitting of l in Z[theta] for theta a root of f, guarded by Dedekind's
/// criterion: throws UnsupportedPrime when l divides [O_K : Z[theta]].
inline Splitting dedekind_splitting(const ZPoly& f, const Int& l) {
  poly::Fp field(l);
  auto fact = poly::factor_shape(f, l);
  Splitting out{l, {}};
  bool squarefree = true;
  for (const auto& s : fact.shapes) {
    out.places.push_back({s.multiplicity, s.degree});
    if (s.multiplicity > 1) squarefree = false;
  }
  if (!squarefree) {
    ZPoly fbar = field.reduce(f);
    ZPoly g = fact.radical;
    ZPoly h = field.quo(fbar, g);
    ZPoly gh = poly::ZPoly(g.size() + h.size() - 1, Int(0));
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < h.size(); ++j) gh[i + j] += g[i] * h[j];  // product of lifts over Z
    ZPoly F(std::max(f.size(), gh.size()), Int(0));
    for (std::size_t i = 0; i < F.size(); ++i) {
      Int diff = (i < f.size() ? f[i] : Int(0)) - (i < gh.size() ? gh[i] : Int(0));
      if (diff % l != 0) throw InternalInconsistency("Dedekind lift is not congruent to f");
      F[i] = diff / l;
    }
    ZPoly common = field.gcd(field.gcd(field.reduce(F), g), h);
    if (poly::degree(common) > 0)
      throw UnsupportedPrime(l.str() + " divides the index of Z[theta]; splitting not determined");
  }
  return out;
}

// ------------------------------------------------------------ fields

class NumberField {
 public:
  enum class Kind { rational, quadratic, polynomial };

  static NumberField rationals() {
    NumberField k;
    k.kind_ = Kind::rational;
    k.poly_ = {0, 1};
    return k;
  }

  static NumberField quadratic(const Int& d) {
    if (d == 0 || d == 1 || !is_squarefree(d)) throw StructuralError("quadratic field needs squarefree d != 0, 1; got " + d.str());
    NumberField k;
    k.kind_ = Kind::quadratic;
    k.d_ = d;
    k.D_ = mod(d, Int(4)) == 1 ? d : Int(4 * d);
    // generator of the maximal order, so Dedekind never refuses
    k.poly_ = mod(d, Int(4)) == 1 ? ZPoly{(1 - d) / 4, -1, 1} : ZPoly{-d, 0, 1};
    return k;
  }

  /// Monic irreducible f; degree 1 gives Q and degree 2 the quadratic field
  /// it defines.
  static NumberField polynomial(ZPoly f, std::map<std::int64_t, int> h_override = {}) {
    poly::trim(f);
    if (f.empty() || f.back() != 1) throw StructuralError("defining polynomial must be monic");
    if (!is_irreducible(f)) throw StructuralError("defining polynomial is reducible over Q");
    NumberField k;
    if (poly::degree(f) == 1) {
      k = rationals();
    } else if (poly::degree(f) == 2) {
      Int disc = poly::discriminant(f), d = disc < 0 ? Int(-1) : Int(1);
      for (const auto& [p, e] : factor(disc))
        if (e % 2 == 1) d *= p;
      k = quadratic(d);
    } else {
      k.kind_ = Kind::polynomial;
      k.poly_ = std::move(f);
    }
    k.h_override_ = std::move(h_override);
    return k;
  }

  Kind kind() const { return kind_; }
  int degree() const { return poly::degree(poly_); }
  const ZPoly& defining_polynomial() const { return poly_; }
  const std::map<std::int64_t, int>& h_override() const { return h_override_; }

  const Int& d() const {
    require_quadratic();
    return d_;
  }
  const Int& fundamental_discriminant() const {
    require_quadratic();
    return D_;
  }

  std::string description() const {
    switch (kind_) {
      case Kind::rational:
        return "Q";
      case Kind::quadratic:
        return "Q(sqrt(" + d_.str() + "))";
      case Kind::polynomial: {
        std::string s;
        for (int i = degree(); i >= 0; --i) {
          const Int& c = poly_[static_cast<std::size_t>(i)];
          if (c == 0) continue;
          std::string term = i == 0 ? "" : (i == 1 ? "x" : "x^" + std::to_string(i));
          std::string coeff = (c == 1 && i > 0) ? "" : (c == -1 && i > 0) ? "-" : c.str();
          if (!s.empty() && c > 0) s += "+";
          s += coeff + term;
        }
        return "Q[x]/(" + s + ")";
      }
    }
    return "?";
  }

 private:
  void require_quadratic() const {
    if (kind_ != Kind::quadratic) throw NotApplicable("not a quadratic field");
  }

  Kind kind_ = Kind::rational;
  Int d_ = 0, D_ = 0;
  ZPoly poly_;
  std::map<std::int64_t, int> h_override_;
};

inline std::pair<int, int> signature(const NumberField& k) {
  switch (k.kind()) {
    case NumberField::Kind::rational:
      return {1, 0};
    case NumberField::Kind::quadratic:
      return k.d() > 0 ? std::pair{2, 0} : std::pair{0, 1};
    case NumberField::Kind::polynomial: {
      int r1 = poly::count_real_roots(poly::to_q(k.defining_polynomial()));
      return {r1, (k.degree() - r1) / 2};
    }
  }
  return {0, 0};
}

/// Splitting computed by factoring the defining polynomial modulo l.
inline Splitting splitting_by_polynomial(const NumberField& k, const Int& l) {
  if (!is_prime(l)) throw Error(l.str() + " is not prime");
  return dedekind_splitting(k.defining_polynomial(), l);
}

inline Splitting splitting(const NumberField& k, const Int& l) {
  if (!is_prime(l)) throw Error(l.str() + " is not prime");
  switch (k.kind()) {
    case NumberField::Kind::rational:
      return {l, {{1, 1}}};
    case NumberField::Kind::quadratic: {
      int chi = kronecker(k.fundamental_discriminant(), l);
      if (chi == 1) return {l, {{1, 1}, {1, 1}}};
      if (chi == -1) return {l, {{1, 2}}};
      return {l, {{2, 1}}};
    }
    case NumberField::Kind::polynomial:
      return dedekind_splitting(k.defining_polynomial(), l);
  }
  return {l, {}};
}

/// Ramified primes with their largest ramification index.
inline std::map<Int, int> ramified_primes(const NumberField& k, const FactorLimits& limits = {}) {
  std::map<Int, int> out;
  switch (k.kind()) {
    case NumberField::Kind::rational:
      return out;
    case NumberField::Kind::quadratic:
      for (const auto& p : prime_divisors(k.fundamental_discriminant(), limits)) out[p] = 2;
      return out;
    case NumberField::Kind::polynomial:
      for (const auto& p : prime_divisors(poly::discriminant(k.defining_polynomial()), limits)) {
        int e = dedekind_splitting(k.defining_polynomial(), p).max_e();
        if (e > 1) out[p] = e;
      }
      return out;
  }
  return out;
}

/// dim_{F_p} Cl_K[p] for odd p. Quadratic fields use the narrow form class
/// group, whose odd part is the class group.
inline int class_group_p_rank(const NumberField& k, std::int64_t p, const quadform::Limits& limits = {}) {
  if (p == 2 || !is_prime(Int(p))) throw Error("class group p-rank needs an odd prime");
  auto it = k.h_override().find(p);
  if (it != k.h_override().end()) return it->second;
  switch (k.kind()) {
    case NumberField::Kind::rational:
      return 0;
    case NumberField::Kind::quadratic:
      return quadform::ClassGroup(k.fundamental_discriminant(), limits).p_rank(p);
    case NumberField::Kind::polynomial:
      throw MissingInvariant("h_" + std::to_string(p) + " of " + k.description() +
                             " must be supplied (no class group computation for degree > 2)");
  }
  return 0;
}

namespace detail {

using Real = boost::multiprecision::cpp_bin_float_50;
using Complex = boost::multiprecision::cpp_complex_50;

inline std::vector<Complex> complex_roots(const ZPoly& f) {
  const int n = poly::degree(f);
  std::vector<Complex> coeff;
  for (const auto& c : f) coeff.emplace_back(Real(c.str()), Real(0));
  auto eval = [&](const Complex& z) {
    Complex acc(0, 0);
    for (int i = n; i >= 0; --i) acc = acc * z + coeff[static_cast<std::size_t>(i)];
    return acc;
  };
  std::vector<Complex> z(static_cast<std::size_t>(n));
  Complex seed(Real("0.4"), Real("0.9")), w(1, 0);
  for (auto& zi : z) {
    zi = w;
    w *= seed;
  }
  for (int it = 0; it < 2000; ++it) {
    Real change = 0;
    for (std::size_t k = 0; k < z.size(); ++k) {
      Complex denom(1, 0);
      for (std::size_t j = 0; j < z.size(); ++j)
        if (j != k) denom *= z[k] - z[j];
      Complex step = eval(z[k]) / denom;
      z[k] -= step;
      change = std::max(change, Real(abs(step)));
    }
    if (change < Real("1e-45")) break;
  }
  return z;
}

/// g(theta) with g = sum num_i / den x^i; checks Phi_p(g) = 0 in Q[x]/(f).
inline bool is_root_of_cyclotomic(const ZPoly& f, const std::vector<Int>& num, const Int& den, std::int64_t p) {
  poly::QPoly fq = poly::to_q(f), g;
  for (const auto& c : num) g.push_back(Rational(c) / Rational(den));
  poly::trim(g);
  auto reduce = [&](const poly::QPoly& x) { return poly::divmod(x, fq).second; };
  // Phi_p(g) = 1 + g + ... + g^{p-1}
  poly::QPoly acc{Rational(1)}, power{Rational(1)};
  for (std::int64_t i = 1; i < p; ++i) {
    power = reduce(poly::mul(power, g));
    if (acc.size() < power.size()) acc.resize(power.size());
    for (std::size_t k = 0; k < power.size(); ++k) acc[k] += power[k];
    poly::trim(acc);
  }
  return acc.empty();
}

/// Solves V c = w with V_{jk} = theta_j^k by Gaussian elimination.
inline std::vector<Complex> solve_vandermonde(const std::vector<Complex>& theta, std::vector<Complex> w) {
  const std::size_t n = theta.size();
  std::vector<std::vector<Complex>> a(n, std::vector<Complex>(n));
  for (std::size_t j = 0; j < n; ++j) {
    Complex pw(1, 0);
    for (std::size_t k = 0; k < n; ++k) {
      a[j][k] = pw;
      pw *= theta[j];
    }
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (abs(a[r][col]) > abs(a[piv][col])) piv = r;
    std::swap(a[col], a[piv]);
    std::swap(w[col], w[piv]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      Complex m = a[r][col] / a[col][col];
      for (std::size_t k = col; k < n; ++k) a[r][k] -= m * a[col][k];
      w[r] -= m * w[col];
    }
  }
  for (std::size_t k = 0; k < n; ++k) w[k] /= a[k][k];
  return w;
}

/// Looks for an element of Q(theta) that is a primitive p-th root of unity.
/// The candidate is found numerically and accepted only after exact checking.
inline bool find_root_of_unity(const ZPoly& f, std::int64_t p) {
  auto roots = complex_roots(f);
  const Real eps("1e-30");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (root, conjugate)
  std::vector<bool> used(roots.size(), false);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    if (roots[i].imag() < eps && roots[i].imag() > -eps) return false;  // real place
    std::size_t best = i;
    Real dist = -1;
    for (std::size_t j = 0; j < roots.size(); ++j) {
      if (j == i || used[j]) continue;
      Real dd = abs(roots[j] - Complex(roots[i].real(), -roots[i].imag()));
      if (dist < 0 || dd < dist) {
        dist = dd;
        best = j;
      }
    }
    used[i] = used[best] = true;
    pairs.push_back({i, best});
  }
  const Real two_pi = 2 * boost::math::constants::pi<Real>();
  auto zeta_pow = [&](std::int64_t a) {
    Real ang = two_pi * Real(a) / Real(p);
    return Complex(cos(ang), sin(ang));
  };
  Int den = poly::discriminant(f);
  if (den < 0) den = -den;
  const Real den_r(den.str());
  std::vector<std::int64_t> expo(pairs.size(), 1);
  while (true) {
    std::vector<Complex> w(roots.size());
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      w[pairs[k].first] = zeta_pow(expo[k]);
      w[pairs[k].second] = zeta_pow(p - expo[k]);
    }
    auto c = solve_vandermonde(roots, w);
    std::vector<Int> num;
    bool near_rational = true;
    for (const auto& ck : c) {
      Real scaled = ck.real() * den_r;
      Real rounded = round(scaled);
      if (abs(scaled - rounded) > Real("1e-15") || abs(ck.imag() * den_r) > Real("1e-15")) {
        near_rational = false;
        break;
      }
      num.push_back(rounded.convert_to<Int>());
    }
    if (near_rational && is_root_of_cyclotomic(f, num, den, p)) return true;
    // next exponent assignment; the first pair stays at 1
    std::size_t k = 1;
    while (k < expo.size() && ++expo[k] == p) expo[k++] = 1;
    if (k >= expo.size()) return false;
  }
}

}  // namespace detail

/// dim_{F_p} mu_p(K), 0 or 1.
inline int mu_p_dim(const NumberField& k, std::int64_t p) {
  if (!is_prime(Int(p))) throw Error("mu_p needs a prime");
  if (p == 2) return 1;  // -1 is always there
  if ((k.degree() % (p - 1)) != 0) return 0;
  switch (k.kind()) {
    case NumberField::Kind::rational:
      return 0;
    case NumberField::Kind::quadratic:
      return p == 3 && k.d() == -3 ? 1 : 0;
    case NumberField::Kind::polynomial:
      break;
  }
  if (signature(k).first > 0) return 0;
  const ZPoly& f = k.defining_polynomial();
  Int disc = poly::discriminant(f);
  // a degree-one prime l with l != 1 mod p rules out zeta_p
  for (std::int64_t l = 3; l < 200000; l += 2) {
    if (l == p || disc % l == 0 || !is_prime(Int(l))) continue;
    if (l % p != 1 && poly::Fp(l).has_root(f)) return 0;
    if (l > 2000 && l % p == 1) continue;
    if (l > 2000) break;
  }
  if (detail::find_root_of_unity(f, p)) return 1;
  for (std::int64_t l = 2001; l < 200000; l += 2) {
    if (l == p || disc % l == 0 || l % p == 1 || !is_prime(Int(l))) continue;
    if (poly::Fp(l).has_root(f)) return 0;
  }
  throw Error("could not decide whether " + k.description() + " contains the " + std::to_string(p) +
              "-th roots of unity");
}

// ------------------------------------------------------------ invariant bundle

struct FieldInvariants {
  std::string description;
  int degree = 1;
  int r1 = 1, r2 = 0;
  std::map<Int, int> e;                         // ramified primes -> max e_p
  std::map<Int, std::vector<Place>> places;     // splitting at requested primes
  std::map<std::int64_t, int> h_p;              // class-group p-ranks
  std::map<std::int64_t, int> u_p;              // mu_p dimensions
  std::optional<Int> quadratic_d;

  std::set<Int> unsupported;                    // index divisors: splitting refused

  int e_at(const Int& p) const {
    if (unsupported.count(p)) throw UnsupportedPrime(p.str() + " divides the index of the defining order of " + description);
    auto it = e.find(p);
    return it == e.end() ? 1 : it->second;
  }

  const std::vector<Place>& places_at(const Int& p) const {
    if (unsupported.count(p)) throw UnsupportedPrime(p.str() + " divides the index of the defining order of " + description);
    auto it = places.find(p);
    if (it == places.end()) throw MissingInvariant("splitting of " + p.str() + " in " + description + " not computed");
    return it->second;
  }

  int split_count(const Int& p) const { return static_cast<int>(places_at(p).size()); }

  int h(std::int64_t p) const {
    auto it = h_p.find(p);
    if (it == h_p.end()) throw MissingInvariant("h_" + std::to_string(p) + " of " + description + " not available");
    return it->second;
  }

  int u(std::int64_t p) const {
    auto it = u_p.find(p);
    if (it == u_p.end()) throw MissingInvariant("u_" + std::to_string(p) + " of " + description + " not available");
    return it->second;
  }

  bool two_unramified() const { return e_at(2) == 1; }

  /// Every ramified prime is known (no index divisor left undecided).
  bool ramification_complete() const { return unsupported.empty(); }
};

/// Invariants of K with splitting data at `primes` (and at every ramified
/// prime) and class-group / roots-of-unity data at `rank_primes`. A missing
/// class-group rank for a general field is left absent, to be reported by
/// whichever consumer needs it.
inline FieldInvariants compute_invariants(const NumberField& k, const std::vector<Int>& primes,
                                          const std::vector<std::int64_t>& rank_primes) {
  FieldInvariants inv;
  inv.description = k.description();
  inv.degree = k.degree();
  std::tie(inv.r1, inv.r2) = signature(k);
  if (k.kind() == NumberField::Kind::quadratic) inv.quadratic_d = k.d();
  // index divisors are recorded and refused on lookup rather than here
  std::set<Int> candidates(primes.begin(), primes.end());
  if (k.kind() == NumberField::Kind::polynomial) {
    for (const auto& p : prime_divisors(poly::discriminant(k.defining_polynomial()))) candidates.insert(p);
  } else {
    for (const auto& [p, e] : ramified_primes(k)) candidates.insert(p);
  }
  for (const auto& p : candidates) {
    try {
      auto sp = splitting(k, p);
      inv.places[p] = sp.places;
      if (sp.max_e() > 1) inv.e[p] = sp.max_e();
    } catch (const UnsupportedPrime&) {
      inv.unsupported.insert(p);
    }
  }
  for (auto p : rank_primes) {
    if (p != 2) {
      try {
        inv.h_p[p] = class_group_p_rank(k, p);
      } catch (const MissingInvariant&) {
      }
    }
    inv.u_p[p] = mu_p_dim(k, p);
  }
  return inv;
}

}  // namespace selmer_flat::nf
