#pragma once

// Tate's algorithm over Z_p for every prime p, including 2 and 3.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "selmer_flat/bigint.hpp"
#include "selmer_flat/curve.hpp"
#include "selmer_flat/frobmod.hpp"
#include "selmer_flat/poly.hpp"

namespace selmer_flat::tate {

enum class KodairaFamily { I, I_star, II, III, IV, IV_star, III_star, II_star };

struct Kodaira {
  KodairaFamily family = KodairaFamily::I;
  int n = 0;  // index for I_n and I_n*

  std::string str() const {
    switch (family) {
      case KodairaFamily::I:
        return "I" + std::to_string(n);
      case KodairaFamily::I_star:
        return "I" + std::to_string(n) + "*";
      case KodairaFamily::II:
        return "II";
      case KodairaFamily::III:
        return "III";
      case KodairaFamily::IV:
        return "IV";
      case KodairaFamily::IV_star:
        return "IV*";
      case KodairaFamily::III_star:
        return "III*";
      case KodairaFamily::II_star:
        return "II*";
    }
    return "?";
  }

  friend bool operator==(const Kodaira&, const Kodaira&) = default;
};

enum class ReductionKind { good, split_multiplicative, nonsplit_multiplicative, additive };

inline const char* to_string(ReductionKind k) {
  switch (k) {
    case ReductionKind::good:
      return "good";
    case ReductionKind::split_multiplicative:
      return "split-mult";
    case ReductionKind::nonsplit_multiplicative:
      return "nonsplit-mult";
    case ReductionKind::additive:
      return "additive";
  }
  return "?";
}

struct LocalData {
  Int p;
  Kodaira kodaira;
  int v_min_disc = 0;
  ReductionKind kind = ReductionKind::good;
  std::int64_t tamagawa = 1;
  bool semiabelian = true;
  bool pot_good = true;
  frobmod::FrobModule component_group = frobmod::FrobModule::trivial();
};

namespace detail {

/// Whether a x^2 + b x + c has a root mod p.
inline bool quadratic_has_root(const Int& a, const Int& b, const Int& c, const Int& p) {
  Int A = mod(a, p), B = mod(b, p), C = mod(c, p);
  if (A == 0) return B != 0 || C == 0;
  if (p == 2) return C == 0 || mod(A + B + C, p) == 0;
  return kronecker(B * B - 4 * A * C, p) >= 0;
}

inline int cubic_root_count(const Int& b, const Int& c, const Int& d, const Int& p) {
  return poly::Fp(p).root_count(poly::ZPoly{d, c, b, 1});
}

inline frobmod::FrobModule component_group(const Kodaira& k, ReductionKind kind, std::int64_t c) {
  using frobmod::FrobModule;
  switch (k.family) {
    case KodairaFamily::I:
      if (k.n <= 1) return FrobModule::trivial();
      return FrobModule::cyclic(k.n, kind == ReductionKind::split_multiplicative ? 1 : -1);
    case KodairaFamily::II:
    case KodairaFamily::II_star:
      return FrobModule::trivial();
    case KodairaFamily::III:
    case KodairaFamily::III_star:
      return FrobModule::cyclic(2, 1);
    case KodairaFamily::IV:
    case KodairaFamily::IV_star:
      return FrobModule::cyclic(3, c == 3 ? 1 : -1);
    case KodairaFamily::I_star:
      if (k.n % 2 == 1) return FrobModule::cyclic(4, c == 4 ? 1 : -1);
      if (c == 4) return FrobModule::create({2, 2}, {{1, 0}, {0, 1}});
      if (c == 2) return FrobModule::create({2, 2}, {{0, 1}, {1, 0}});
      return FrobModule::create({2, 2}, {{0, 1}, {1, 1}});
  }
  throw InternalInconsistency("unknown Kodaira type");
}

struct TateRun {
  LocalData local;
  WeierstrassCurve model;  // p-minimal model reached by the algorithm
};

inline Int exact_div(const Int& a, const Int& b) {
  if (a % b != 0) throw InternalInconsistency("Tate's algorithm: expected exact division");
  return a / b;
}

inline TateRun run(WeierstrassCurve curve, const Int& p) {
  if (!is_prime(p)) throw Error("Tate's algorithm needs a prime, got " + p.str());
  auto v = [&](const Int& x) { return valuation(x, p); };
  auto red = [&](const Int& x) { return mod(x, p); };
  auto inv = [&](const Int& x) { return inverse_mod(x, p); };
  auto divides = [&](const Int& x) { return x % p == 0; };
  const Int p2 = p * p, p3 = p2 * p, p4 = p3 * p;
  const Int half = p == 2 ? Int(0) : inv(Int(2));

  auto finish = [&](const WeierstrassCurve& c, Kodaira k, int vd, ReductionKind kind, std::int64_t cp) {
    LocalData ld;
    ld.p = p;
    ld.kodaira = k;
    ld.v_min_disc = vd;
    ld.kind = kind;
    ld.tamagawa = cp;
    ld.semiabelian = kind != ReductionKind::additive;
    ld.pot_good = c.c4() == 0 || 3 * v(c.c4()) >= vd;
    ld.component_group = component_group(k, kind, cp);
    return TateRun{ld, c};
  };

  while (true) {
    WeierstrassCurve c = curve;
    const int vd = v(c.discriminant());
    if (vd == 0) return finish(c, {KodairaFamily::I, 0}, 0, ReductionKind::good, 1);

    // move the singular point of the reduction to (0, 0)
    Int r, t;
    if (p == 2) {
      if (divides(c.b2())) {
        r = red(c.a4());
        t = red(r * (1 + c.a2() + c.a4()) + c.a6());
      } else {
        Int a1inv = inv(c.a1());
        r = red(a1inv * c.a3());
        t = red(a1inv * (c.a4() + r * r));
      }
    } else if (p == 3) {
      r = divides(c.b2()) ? red(-c.b6()) : red(-inv(c.b2()) * c.b4());
      t = red(c.a1() * r + c.a3());
    } else {
      r = divides(c.c4()) ? Int(-inv(Int(12)) * c.b2()) : Int(-inv(12 * c.c4()) * (c.c6() + c.b2() * c.c4()));
      t = -half * (c.a1() * r + c.a3());
      r = red(r);
      t = red(t);
    }
    c = c.rst_transform(r, 0, t);

    if (!divides(c.b2())) {
      int n = vd;
      if (quadratic_has_root(1, c.a1(), -c.a2(), p))
        return finish(c, {KodairaFamily::I, n}, vd, ReductionKind::split_multiplicative, n);
      return finish(c, {KodairaFamily::I, n}, vd, ReductionKind::nonsplit_multiplicative, n % 2 == 0 ? 2 : 1);
    }

    if (v(c.a6()) < 2) return finish(c, {KodairaFamily::II, 0}, vd, ReductionKind::additive, 1);
    if (v(c.b8()) < 3) return finish(c, {KodairaFamily::III, 0}, vd, ReductionKind::additive, 2);
    if (v(c.b6()) < 3) {
      std::int64_t cp = quadratic_has_root(1, exact_div(c.a3(), p), -exact_div(c.a6(), p2), p) ? 3 : 1;
      return finish(c, {KodairaFamily::IV, 0}, vd, ReductionKind::additive, cp);
    }

    // now p | a1, a2; p^2 | a3, a4; p^3 | a6
    Int s;
    if (p == 2) {
      s = red(c.a2());
      t = 2 * red(exact_div(c.a6(), 4));
    } else if (p == 3) {
      s = red(c.a1());
      t = c.a3();  // a3 + 2t = 3 a3 must vanish mod 9, so t is not reduced
    } else {
      s = red(-c.a1() * half);
      t = p * red(-exact_div(c.a3(), p) * half);
    }
    c = c.rst_transform(0, s, t);

    Int b = exact_div(c.a2(), p), cc = exact_div(c.a4(), p2), d = exact_div(c.a6(), p3);
    Int w = 27 * d * d - b * b * cc * cc + 4 * b * b * b * d - 18 * b * cc * d + 4 * cc * cc * cc;
    Int x = 3 * cc - b * b;

    if (!divides(w)) {
      std::int64_t cp = 1 + detail::cubic_root_count(b, cc, d, p);
      return finish(c, {KodairaFamily::I_star, 0}, vd, ReductionKind::additive, cp);
    }

    if (!divides(x)) {
      // double root: move it to 0
      if (p == 2)
        r = cc;
      else if (p == 3)
        r = b * cc;
      else
        r = (b * cc - 9 * d) * inv(2 * x);
      r = p * red(r);
      c = c.rst_transform(r, 0, 0);

      int ix = 3, iy = 3;
      Int mx = p2, my = p2;
      std::int64_t cp = 0;
      while (true) {
        Int a2t = exact_div(c.a2(), p), a3t = exact_div(c.a3(), my), a4t = exact_div(c.a4(), p * mx),
            a6t = exact_div(c.a6(), mx * my);
        if (!divides(a3t * a3t + 4 * a6t)) {
          cp = quadratic_has_root(1, a3t, -a6t, p) ? 4 : 2;
          break;
        }
        t = p == 2 ? Int(my * red(a6t)) : Int(my * red(-a3t * half));
        c = c.rst_transform(0, 0, t);
        my *= p;
        ++iy;
        a2t = exact_div(c.a2(), p);
        a3t = exact_div(c.a3(), my);
        a4t = exact_div(c.a4(), p * mx);
        a6t = exact_div(c.a6(), mx * my);
        if (!divides(a4t * a4t - 4 * a6t * a2t)) {
          cp = quadratic_has_root(a2t, a4t, a6t, p) ? 4 : 2;
          break;
        }
        r = p == 2 ? Int(mx * red(a6t * inv(a2t))) : Int(mx * red(-a4t * inv(2 * a2t)));
        c = c.rst_transform(r, 0, 0);
        mx *= p;
        ++ix;
      }
      return finish(c, {KodairaFamily::I_star, ix + iy - 5}, vd, ReductionKind::additive, cp);
    }

    // triple root: move it to 0
    if (p == 2)
      r = b;
    else if (p == 3)
      r = -d;
    else
      r = -b * inv(Int(3));
    r = p * red(r);
    c = c.rst_transform(r, 0, 0);

    Int a3t = exact_div(c.a3(), p2), a6t = exact_div(c.a6(), p4);
    if (!divides(a3t * a3t + 4 * a6t)) {
      std::int64_t cp = quadratic_has_root(1, a3t, -a6t, p) ? 3 : 1;
      return finish(c, {KodairaFamily::IV_star, 0}, vd, ReductionKind::additive, cp);
    }
    t = p == 2 ? Int(-p2 * red(a6t)) : Int(p2 * red(-a3t * half));
    c = c.rst_transform(0, 0, t);
    if (v(c.a4()) < 4) return finish(c, {KodairaFamily::III_star, 0}, vd, ReductionKind::additive, 2);
    if (v(c.a6()) < 6) return finish(c, {KodairaFamily::II_star, 0}, vd, ReductionKind::additive, 1);

    // not minimal: divide by p and start over
    curve = c.divide_by(p);
  }
}

}  // namespace detail

inline LocalData tate_algorithm(const WeierstrassCurve& curve, const Int& p) { return detail::run(curve, p).local; }

/// A p-minimal model. Returns the input when it is already minimal, and a
/// pure rescaling x -> p^{2k} x, y -> p^{3k} y when that suffices.
inline WeierstrassCurve minimal_model_at(const WeierstrassCurve& curve, const Int& p) {
  auto result = detail::run(curve, p);
  int v = valuation(curve.discriminant(), p);
  if (v == result.local.v_min_disc) return curve;
  int k = (v - result.local.v_min_disc) / 12;
  Int u = ipow(p, static_cast<unsigned>(k));
  if (curve.can_divide_by(u)) return curve.divide_by(u);
  return result.model;
}

/// Local data at every prime dividing the minimal discriminant.
inline std::vector<LocalData> bad_primes(const WeierstrassCurve& curve, const FactorLimits& limits = {}) {
  std::vector<LocalData> out;
  for (const auto& p : prime_divisors(curve.discriminant(), limits)) {
    LocalData ld = tate_algorithm(curve, p);
    if (ld.kind != ReductionKind::good) out.push_back(std::move(ld));
  }
  return out;
}

/// Trace of Frobenius of the reduction at 2 from a point count over F_2.
inline int trace_at_2(const WeierstrassCurve& curve) {
  WeierstrassCurve m = minimal_model_at(curve, 2);
  if (valuation(m.discriminant(), 2) != 0) throw NotApplicable("curve has bad reduction at 2");
  int a[5];
  for (int i = 0; i < 5; ++i) a[i] = static_cast<int>(mod(m.ainvs()[i], Int(2)));
  int points = 1;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      if ((y * y + a[0] * x * y + a[2] * y - (x * x * x + a[1] * x * x + a[3] * x + a[4])) % 2 == 0) ++points;
  return 3 - points;
}

inline bool is_supersingular_at_2(const WeierstrassCurve& curve) { return trace_at_2(curve) % 2 == 0; }

/// Local data after base change to a place with ramification index e and
/// residue degree f. Empty when additive reduction meets ramification, where
/// the type can change and is not computed here.
inline std::optional<LocalData> base_change(const LocalData& ld, int e, int f) {
  if (e < 1 || f < 1) throw Error("ramification index and residue degree must be positive");
  LocalData out = ld;
  switch (ld.kind) {
    case ReductionKind::good:
      return out;
    case ReductionKind::split_multiplicative:
    case ReductionKind::nonsplit_multiplicative: {
      int n = ld.kodaira.n * e;
      bool split = ld.kind == ReductionKind::split_multiplicative || f % 2 == 0;
      out.kodaira = {KodairaFamily::I, n};
      out.v_min_disc = ld.v_min_disc * e;
      out.kind = split ? ReductionKind::split_multiplicative : ReductionKind::nonsplit_multiplicative;
      out.tamagawa = split ? n : (n % 2 == 0 ? 2 : 1);
      out.component_group = detail::component_group(out.kodaira, out.kind, out.tamagawa);
      return out;
    }
    case ReductionKind::additive:
      if (e != 1) return std::nullopt;
      out.component_group = ld.component_group.with_frobenius_power(f);
      out.tamagawa = frobmod::fixed_points(out.component_group);
      return out;
  }
  return std::nullopt;
}

}  // namespace selmer_flat::tate
