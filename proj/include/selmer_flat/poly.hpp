#pragma once

// Dense univariate polynomials, coefficients stored low degree first.
// Two flavours: over F_p (p prime, arbitrary size) and over Q.

#include <cstddef>
#include <utility>
#include <vector>

#include "selmer_flat/bigint.hpp"

namespace selmer_flat::poly {

using ZPoly = std::vector<Int>;
using QPoly = std::vector<Rational>;

template <class T>
void trim(std::vector<T>& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

template <class T>
int degree(const std::vector<T>& f) {
  return static_cast<int>(f.size()) - 1;  // -1 for the zero polynomial
}

// ---------------------------------------------------------------- F_p[x]

class Fp {
 public:
  explicit Fp(Int p) : p_(std::move(p)) {}

  const Int& prime() const { return p_; }

  ZPoly reduce(const ZPoly& f) const {
    ZPoly g(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) g[i] = mod(f[i], p_);
    trim(g);
    return g;
  }

  ZPoly add(const ZPoly& f, const ZPoly& g) const {
    ZPoly h(std::max(f.size(), g.size()));
    for (std::size_t i = 0; i < h.size(); ++i) {
      Int s = (i < f.size() ? f[i] : Int(0)) + (i < g.size() ? g[i] : Int(0));
      h[i] = mod(s, p_);
    }
    trim(h);
    return h;
  }

  ZPoly sub(const ZPoly& f, const ZPoly& g) const {
    ZPoly h(std::max(f.size(), g.size()));
    for (std::size_t i = 0; i < h.size(); ++i) {
      Int s = (i < f.size() ? f[i] : Int(0)) - (i < g.size() ? g[i] : Int(0));
      h[i] = mod(s, p_);
    }
    trim(h);
    return h;
  }

  ZPoly mul(const ZPoly& f, const ZPoly& g) const {
    if (f.empty() || g.empty()) return {};
    ZPoly h(f.size() + g.size() - 1);
    for (std::size_t i = 0; i < f.size(); ++i)
      for (std::size_t j = 0; j < g.size(); ++j) h[i + j] += f[i] * g[j];
    return reduce(h);
  }

  /// Quotient and remainder; g must be non-zero.
  std::pair<ZPoly, ZPoly> divmod(ZPoly f, const ZPoly& g) const {
    f = reduce(f);
    if (g.empty()) throw Error("polynomial division by zero");
    int dg = degree(g);
    Int inv = inverse_mod(g.back(), p_);
    if (degree(f) < dg) return {{}, f};
    ZPoly q(f.size() - g.size() + 1);
    while (degree(f) >= dg) {
      int shift = degree(f) - dg;
      Int c = mod(f.back() * inv, p_);
      q[shift] = c;
      for (int i = 0; i <= dg; ++i) f[i + shift] = mod(f[i + shift] - c * g[i], p_);
      trim(f);
    }
    trim(q);
    return {q, f};
  }

  ZPoly rem(const ZPoly& f, const ZPoly& g) const { return divmod(f, g).second; }
  ZPoly quo(const ZPoly& f, const ZPoly& g) const { return divmod(f, g).first; }

  ZPoly monic(ZPoly f) const {
    f = reduce(f);
    if (f.empty()) return f;
    Int inv = inverse_mod(f.back(), p_);
    for (auto& c : f) c = mod(c * inv, p_);
    return f;
  }

  ZPoly gcd(ZPoly a, ZPoly b) const {
    a = reduce(a);
    b = reduce(b);
    while (!b.empty()) {
      ZPoly r = rem(a, b);
      a = std::move(b);
      b = std::move(r);
    }
    return monic(a);
  }

  ZPoly derivative(const ZPoly& f) const {
    ZPoly d;
    for (std::size_t i = 1; i < f.size(); ++i) d.push_back(mod(f[i] * Int(i), p_));
    trim(d);
    return d;
  }

  /// base^e mod m.
  ZPoly powmod(ZPoly base, Int e, const ZPoly& m) const {
    ZPoly result{1};
    result = rem(result, m);
    base = rem(base, m);
    while (e > 0) {
      if ((e & 1) != 0) result = rem(mul(result, base), m);
      e >>= 1;
      if (e > 0) base = rem(mul(base, base), m);
    }
    return result;
  }

  /// Number of distinct roots of f in F_p.
  int root_count(const ZPoly& f) const {
    ZPoly g = reduce(f);
    if (g.empty()) throw Error("root_count of zero polynomial");
    if (degree(g) == 0) return 0;
    ZPoly xp = powmod(ZPoly{0, 1}, p_, g);
    ZPoly h = gcd(g, sub(xp, ZPoly{0, 1}));
    return degree(h);
  }

  bool has_root(const ZPoly& f) const { return root_count(f) > 0; }

  struct SquarefreePart {
    ZPoly factor;  // squarefree, monic
    int multiplicity;
  };

  /// Yun's algorithm adapted to characteristic p.
  std::vector<SquarefreePart> squarefree_decomposition(const ZPoly& f_in) const {
    ZPoly f = monic(f_in);
    std::vector<SquarefreePart> out;
    if (degree(f) <= 0) return out;
    ZPoly d = derivative(f);
    if (d.empty()) {
      for (auto& part : squarefree_decomposition(pth_root(f))) out.push_back({part.factor, part.multiplicity * pth()});
      return out;
    }
    ZPoly c = gcd(f, d);
    ZPoly w = quo(f, c);
    int i = 1;
    while (degree(w) > 0) {
      ZPoly y = gcd(w, c);
      ZPoly z = quo(w, y);
      if (degree(z) > 0) out.push_back({monic(z), i});
      ++i;
      w = y;
      c = quo(c, y);
    }
    if (degree(c) > 0) {
      for (auto& part : squarefree_decomposition(pth_root(c))) out.push_back({part.factor, part.multiplicity * pth()});
    }
    return out;
  }

  struct DegreeBlock {
    int degree;  // degree of each irreducible factor
    int count;   // how many such factors
  };

  /// Distinct-degree factorisation of a squarefree monic polynomial.
  std::vector<DegreeBlock> distinct_degree(ZPoly f) const {
    f = monic(f);
    std::vector<DegreeBlock> out;
    ZPoly x{0, 1};
    ZPoly h = rem(x, f);
    int i = 1;
    while (degree(f) >= 2 * i) {
      h = powmod(h, p_, f);
      ZPoly g = gcd(f, sub(h, x));
      if (degree(g) > 0) {
        out.push_back({i, degree(g) / i});
        f = quo(f, g);
        h = rem(h, f);
      }
      ++i;
    }
    if (degree(f) > 0) out.push_back({degree(f), 1});
    return out;
  }

 private:
  int pth() const { return static_cast<int>(to_int64(p_)); }

  ZPoly pth_root(const ZPoly& f) const {
    // Over F_p every coefficient is its own p-th root.
    std::int64_t p = to_int64(p_);
    ZPoly g;
    for (std::size_t i = 0; i < f.size(); i += static_cast<std::size_t>(p)) g.push_back(f[i]);
    trim(g);
    return g;
  }

  Int p_;
};

/// One irreducible factor of f mod p: its degree and multiplicity.
struct FactorShape {
  int degree;
  int multiplicity;
};

struct Factorization {
  std::vector<FactorShape> shapes;  // one entry per irreducible factor
  ZPoly radical;                    // product of the distinct irreducible factors, monic
};

inline Factorization factor_shape(const ZPoly& f, const Int& p) {
  Fp field(p);
  Factorization out;
  out.radical = ZPoly{1};
  for (auto& part : field.squarefree_decomposition(f)) {
    out.radical = field.mul(out.radical, part.factor);
    for (auto& block : field.distinct_degree(part.factor))
      for (int k = 0; k < block.count; ++k) out.shapes.push_back({block.degree, part.multiplicity});
  }
  return out;
}

// ---------------------------------------------------------------- Q[x]

inline QPoly to_q(const ZPoly& f) {
  QPoly g(f.begin(), f.end());
  trim(g);
  return g;
}

inline std::pair<QPoly, QPoly> divmod(QPoly f, const QPoly& g) {
  if (g.empty()) throw Error("polynomial division by zero");
  trim(f);
  int dg = degree(g);
  if (degree(f) < dg) return {{}, f};
  QPoly q(f.size() - g.size() + 1);
  while (degree(f) >= dg) {
    int shift = degree(f) - dg;
    Rational c = f.back() / g.back();
    q[shift] = c;
    for (int i = 0; i <= dg; ++i) f[i + shift] -= c * g[i];
    f.pop_back();
    trim(f);
  }
  trim(q);
  return {q, f};
}

inline QPoly derivative(const QPoly& f) {
  QPoly d;
  for (std::size_t i = 1; i < f.size(); ++i) d.push_back(f[i] * Rational(static_cast<long long>(i)));
  trim(d);
  return d;
}

inline QPoly mul(const QPoly& f, const QPoly& g) {
  if (f.empty() || g.empty()) return {};
  QPoly h(f.size() + g.size() - 1);
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) h[i + j] += f[i] * g[j];
  trim(h);
  return h;
}

inline Rational evaluate(const QPoly& f, const Rational& x) {
  Rational acc = 0;
  for (auto it = f.rbegin(); it != f.rend(); ++it) acc = acc * x + *it;
  return acc;
}

inline Int evaluate(const ZPoly& f, const Int& x) {
  Int acc = 0;
  for (auto it = f.rbegin(); it != f.rend(); ++it) acc = acc * x + *it;
  return acc;
}

inline Rational resultant(QPoly a, QPoly b) {
  trim(a);
  trim(b);
  if (a.empty() || b.empty()) return 0;
  Rational scale = 1;
  while (true) {
    int da = degree(a), db = degree(b);
    if (db == 0) {
      Rational r = scale;
      for (int i = 0; i < da; ++i) r *= b[0];
      return r;
    }
    QPoly r = divmod(a, b).second;
    if (r.empty()) return 0;
    int dr = degree(r);
    if ((da % 2 == 1) && (db % 2 == 1)) scale = -scale;
    for (int i = 0; i < da - dr; ++i) scale *= b.back();
    a = std::move(b);
    b = std::move(r);
  }
}

/// Discriminant of an integer polynomial of degree >= 1.
inline Int discriminant(const ZPoly& f_in) {
  QPoly f = to_q(f_in);
  int n = degree(f);
  if (n < 1) throw Error("discriminant of constant polynomial");
  Rational r = resultant(f, derivative(f)) / f.back();
  if (((n * (n - 1)) / 2) % 2 == 1) r = -r;
  if (denominator(r) != 1) throw InternalInconsistency("non-integral discriminant");
  return numerator(r);
}

inline int sign(const Rational& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); }

/// Number of distinct real roots of a non-zero polynomial, via its Sturm sequence.
inline int count_real_roots(const QPoly& f_in) {
  QPoly f = f_in;
  trim(f);
  if (degree(f) <= 0) return 0;
  std::vector<QPoly> seq{f, derivative(f)};
  while (true) {
    QPoly r = divmod(seq[seq.size() - 2], seq.back()).second;
    if (r.empty()) break;
    for (auto& c : r) c = -c;
    seq.push_back(std::move(r));
  }
  auto changes = [&](bool at_plus_infinity) {
    int count = 0, last = 0;
    for (auto& g : seq) {
      int s = sign(g.back());
      if (!at_plus_infinity && degree(g) % 2 == 1) s = -s;
      if (s == 0) continue;
      if (last != 0 && s != last) ++count;
      last = s;
    }
    return count;
  };
  return changes(false) - changes(true);
}

}  // namespace selmer_flat::poly
