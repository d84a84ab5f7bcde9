#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/miller_rabin.hpp>

#include "selmer_flat/errors.hpp"

namespace selmer_flat {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline constexpr int kInfiniteValuation = std::numeric_limits<int>::max() / 4;

/// Least non-negative residue.
inline Int mod(const Int& a, const Int& m) {
  Int r = a % m;
  if (r < 0) r += (m < 0 ? Int(-m) : m);
  return r;
}

inline std::int64_t mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

inline int valuation(Int a, const Int& p) {
  if (a == 0) return kInfiniteValuation;
  int v = 0;
  while (a % p == 0) {
    a /= p;
    ++v;
  }
  return v;
}

inline Int ipow(const Int& base, unsigned exp) { return boost::multiprecision::pow(base, exp); }

inline Int powmod(const Int& base, const Int& exp, const Int& m) {
  return boost::multiprecision::powm(mod(base, m), exp, m);
}

inline Int gcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }

inline std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b != 0) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

/// Returns (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0.
inline std::tuple<Int, Int, Int> xgcd(const Int& a, const Int& b) {
  Int old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    Int q = old_r / r;
    Int tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

inline Int inverse_mod(const Int& a, const Int& m) {
  auto [g, x, y] = xgcd(mod(a, m), m);
  (void)y;
  if (g != 1) throw Error("inverse_mod: element not invertible");
  return mod(x, m);
}

inline Int isqrt(const Int& n) {
  if (n < 0) throw Error("isqrt of negative number");
  return boost::multiprecision::sqrt(n);
}

inline bool is_square(const Int& n) {
  if (n < 0) return false;
  Int s = isqrt(n);
  return s * s == n;
}

inline bool is_prime(const Int& n) {
  if (n < 2) return false;
  static const int small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (int q : small) {
    if (n == q) return true;
    if (n % q == 0) return false;
  }
  if (n < 41 * 41) return true;
  // Fixed-seed generator keeps results reproducible run to run.
  std::mt19937 gen(0x5e1f);
  return boost::multiprecision::miller_rabin_test(n, 32, gen);
}

inline std::int64_t to_int64(const Int& n) {
  if (n > std::numeric_limits<std::int64_t>::max() || n < std::numeric_limits<std::int64_t>::min())
    throw TooLarge("integer does not fit in 64 bits: " + n.str());
  return static_cast<std::int64_t>(n);
}

/// Parses a decimal integer with optional sign; rejects anything else.
inline Int parse_int(const std::string& s) {
  std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (i == s.size()) throw SchemaError("not an integer: '" + s + "'");
  for (std::size_t j = i; j < s.size(); ++j)
    if (s[j] < '0' || s[j] > '9') throw SchemaError("not an integer: '" + s + "'");
  Int v(s.substr(i));
  return s[0] == '-' ? Int(-v) : v;
}

/// Kronecker symbol (a/n) by quadratic reciprocity.
inline int kronecker(Int a, Int n) {
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  int result = 1;
  if (n < 0) {
    n = -n;
    if (a < 0) result = -result;
  }
  int v = 0;
  while (n % 2 == 0) {
    n /= 2;
    ++v;
  }
  if (v > 0) {
    if (a % 2 == 0) return 0;
    int a8 = static_cast<int>(mod(a, Int(8)));
    if ((v % 2 == 1) && (a8 == 3 || a8 == 5)) result = -result;
  }
  a = mod(a, n);
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      int n8 = static_cast<int>(n % 8);
      if (n8 == 3 || n8 == 5) result = -result;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

struct FactorLimits {
  std::int64_t trial_division_bound = 1'000'000;
  std::int64_t rho_iterations = 2'000'000;
};

namespace detail {

inline Int pollard_brent(const Int& n, std::int64_t budget, std::uint64_t seed) {
  if (n % 2 == 0) return 2;
  std::mt19937_64 gen(seed);
  for (int attempt = 0; attempt < 16; ++attempt) {
    Int y = Int(gen()) % n, c = Int(gen()) % (n - 1) + 1, g = 1, q = 1, x, ys;
    std::int64_t r = 1, m = 128, spent = 0;
    while (g == 1) {
      x = y;
      for (std::int64_t i = 0; i < r; ++i) y = (y * y + c) % n;
      std::int64_t k = 0;
      while (k < r && g == 1) {
        ys = y;
        std::int64_t lim = std::min(m, r - k);
        for (std::int64_t i = 0; i < lim; ++i) {
          y = (y * y + c) % n;
          q = (q * (x > y ? Int(x - y) : Int(y - x))) % n;
        }
        g = gcd(q, n);
        k += m;
        spent += lim;
        if (spent > budget) return 0;
      }
      r *= 2;
    }
    if (g == n) {
      do {
        ys = (ys * ys + c) % n;
        g = gcd(x > ys ? Int(x - ys) : Int(ys - x), n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
  return 0;
}

inline void factor_into(const Int& n, std::vector<Int>& primes, const FactorLimits& limits) {
  if (n == 1) return;
  if (is_prime(n)) {
    primes.push_back(n);
    return;
  }
  Int d = pollard_brent(n, limits.rho_iterations, static_cast<std::uint64_t>(primes.size()) + 17);
  if (d == 0 || d == 1 || d == n)
    throw FactoringCapExceeded("could not factor " + n.str() + " within the configured cap");
  factor_into(d, primes, limits);
  factor_into(n / d, primes, limits);
}

}  // namespace detail

/// Prime factorisation of |n| (n != 0): trial division, then Pollard-Brent rho.
inline std::vector<std::pair<Int, int>> factor(Int n, const FactorLimits& limits = {}) {
  if (n == 0) throw Error("factor(0)");
  if (n < 0) n = -n;
  std::vector<std::pair<Int, int>> out;
  auto push = [&](const Int& p, int e) { out.emplace_back(p, e); };
  for (std::int64_t p = 2; p <= limits.trial_division_bound && Int(p) * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p == 0) {
      int e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      push(p, e);
    }
  }
  if (n > 1) {
    std::vector<Int> rest;
    detail::factor_into(n, rest, limits);
    std::sort(rest.begin(), rest.end());
    for (std::size_t i = 0; i < rest.size();) {
      std::size_t j = i;
      while (j < rest.size() && rest[j] == rest[i]) ++j;
      push(rest[i], static_cast<int>(j - i));
      i = j;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<Int> prime_divisors(const Int& n, const FactorLimits& limits = {}) {
  std::vector<Int> ps;
  for (auto& [p, e] : factor(n, limits)) ps.push_back(p);
  return ps;
}

inline bool is_squarefree(const Int& n) {
  if (n == 0) return false;
  for (auto& [p, e] : factor(n))
    if (e > 1) return false;
  return true;
}

}  // namespace selmer_flat
