#pragma once

// Form class groups of quadratic discriminants.
//
// Negative D: positive definite forms, each class has a unique reduced form.
// Positive D: indefinite forms up to proper equivalence (the narrow class
// group); reduced forms of a class form one cycle under the rho operator.

#include <algorithm>
#include <cstdint>
#include <map>
#include <tuple>
#include <vector>

#include "selmer_flat/bigint.hpp"

namespace selmer_flat::quadform {

struct Form {
  Int a, b, c;
  friend bool operator==(const Form&, const Form&) = default;
  friend bool operator<(const Form& x, const Form& y) { return std::tie(x.a, x.b, x.c) < std::tie(y.a, y.b, y.c); }
};

inline Int discriminant(const Form& f) { return f.b * f.b - 4 * f.a * f.c; }

inline bool is_primitive(const Form& f) { return gcd(gcd(f.a, f.b), f.c) == 1; }

inline bool is_fundamental_discriminant(const Int& D) {
  if (D == 0 || D == 1) return false;
  Int r = mod(D, Int(4));
  if (r == 1) return is_squarefree(D);
  if (r != 0) return false;
  Int m = D / 4;
  Int m4 = mod(m, Int(4));
  return (m4 == 2 || m4 == 3) && is_squarefree(m);
}

struct Limits {
  Int max_abs_discriminant = 10'000'000;
};

namespace detail {

inline Int floor_div(const Int& a, const Int& b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace detail

/// Form class group of a non-square discriminant D (narrow when D > 0).
class ClassGroup {
 public:
  explicit ClassGroup(Int D, const Limits& limits = {}) : D_(std::move(D)) {
    if (D_ == 0 || mod(D_, Int(4)) > 1 || (D_ > 0 && is_square(D_)))
      throw Error("not a non-square discriminant: " + D_.str());
    if ((D_ < 0 ? Int(-D_) : D_) > limits.max_abs_discriminant)
      throw TooLarge("|D| = " + D_.str() + " above the class group cap");
    sqrt_d_ = D_ > 0 ? isqrt(D_) : Int(0);
    enumerate();
  }

  const Int& discriminant() const { return D_; }
  std::size_t order() const { return reps_.size(); }
  const std::vector<Form>& representatives() const { return reps_; }

  Form identity_form() const {
    Int b0 = mod(D_, Int(2));
    return reduce({1, b0, (b0 * b0 - D_) / 4});
  }

  /// The class of (-1, b0, ...), whose quotient gives the wide class group.
  std::size_t minus_one_class() const {
    if (D_ < 0) return identity();
    Int b0 = mod(D_, Int(2));
    return index_of({-1, b0, (D_ - b0 * b0) / 4});
  }

  std::size_t index_of(const Form& f) const {
    Form g = canonical(f);
    auto it = index_.find(g);
    if (it == index_.end()) throw InternalInconsistency("form not found among class representatives");
    return it->second;
  }

  /// Dirichlet composition followed by reduction.
  Form compose(const Form& f, const Form& g) const {
    Int s = (f.b + g.b) / 2;
    auto [e1, u1, v1] = xgcd(f.a, g.a);
    auto [e, w1, w] = xgcd(e1, s);
    Int u = u1 * w1, v = v1 * w1;
    Int a3 = f.a * g.a / (e * e);
    Int b3 = (u * f.a * g.b + v * g.a * f.b + w * (f.b * g.b + D_) / 2) / e;
    Int two_a3 = 2 * (a3 < 0 ? Int(-a3) : a3);
    b3 = mod(b3, two_a3);
    Int c3 = (b3 * b3 - D_) / (4 * a3);
    return reduce({a3, b3, c3});
  }

  Form power(Form f, Int n) const {
    if (n < 0) {
      f = inverse(f);
      n = -n;
    }
    Form result = identity_form();
    while (n > 0) {
      if ((n & 1) != 0) result = compose(result, f);
      n >>= 1;
      if (n > 0) f = compose(f, f);
    }
    return result;
  }

  Form inverse(const Form& f) const { return reduce({f.a, -f.b, f.c}); }

  std::size_t multiply(std::size_t i, std::size_t j) const { return index_of(compose(reps_[i], reps_[j])); }

  std::size_t identity() const { return index_of(identity_form()); }

  /// dim_{F_p} of G[p] (narrow group), by counting x with x^p = 1.
  int p_rank(std::int64_t p) const {
    std::size_t id = identity(), count = 0;
    for (const auto& f : reps_)
      if (index_of(power(f, p)) == id) ++count;
    return exponent_of(count, p);
  }

  /// Invariant factors, largest first; wide = quotient by the class of -1.
  std::vector<Int> structure(bool wide = false) const {
    std::vector<bool> in_h(order(), false);
    in_h[identity()] = true;
    if (wide) in_h[minus_one_class()] = true;
    std::size_t h_size = std::count(in_h.begin(), in_h.end(), true);
    std::size_t group_order = order() / h_size;

    // order of every coset
    std::vector<std::int64_t> ord(order());
    for (std::size_t i = 0; i < order(); ++i) {
      std::size_t y = i;
      std::int64_t k = 1;
      while (!in_h[y]) {
        y = multiply(y, i);
        ++k;
      }
      ord[i] = k;
    }
    std::map<std::int64_t, std::vector<int>> per_prime;  // q -> exponents of cyclic factors
    std::size_t rest = group_order;
    for (std::int64_t q = 2; rest > 1; ++q) {
      if (rest % q != 0) continue;
      while (rest % q == 0) rest /= q;
      std::vector<std::size_t> counts{1};  // #{x : x^{q^k} in H} / #H
      std::int64_t qk = 1;
      while (true) {
        qk *= q;
        std::size_t n = 0;
        for (std::size_t i = 0; i < order(); ++i)
          if (qk % ord[i] == 0) ++n;
        counts.push_back(n / h_size);
        if (counts.back() == counts[counts.size() - 2]) break;
      }
      // number of cyclic factors of order >= q^k is log_q(counts[k] / counts[k-1])
      std::vector<int> at_least;
      for (std::size_t k = 1; k + 1 < counts.size(); ++k)
        at_least.push_back(exponent_of(counts[k] / counts[k - 1], q));
      std::vector<int> exps;
      for (std::size_t k = 0; k < at_least.size(); ++k) {
        int next = k + 1 < at_least.size() ? at_least[k + 1] : 0;
        for (int m = 0; m < at_least[k] - next; ++m) exps.push_back(static_cast<int>(k) + 1);
      }
      std::sort(exps.rbegin(), exps.rend());
      per_prime[q] = exps;
    }
    std::vector<Int> inv;
    for (std::size_t slot = 0;; ++slot) {
      Int d = 1;
      bool any = false;
      for (auto& [q, exps] : per_prime)
        if (slot < exps.size()) {
          d *= ipow(Int(q), static_cast<unsigned>(exps[slot]));
          any = true;
        }
      if (!any) break;
      inv.push_back(d);
    }
    return inv;
  }

  /// Reduced representative in the same proper class.
  Form reduce(Form f) const { return D_ < 0 ? reduce_definite(f) : reduce_indefinite(f); }

 private:
  static int exponent_of(std::size_t n, std::int64_t p) {
    int e = 0;
    while (n > 1) {
      if (n % p != 0) throw InternalInconsistency("torsion count is not a prime power");
      n /= p;
      ++e;
    }
    return e;
  }

  static Form normalize_definite(Form f) {
    // b into (-a, a]
    Int two_a = 2 * f.a;
    Int k = detail::floor_div(f.a - f.b, two_a);
    Int b = f.b + two_a * k;
    Int c = (b * b - (f.b * f.b - 4 * f.a * f.c)) / (4 * f.a);
    return {f.a, b, c};
  }

  Form reduce_definite(Form f) const {
    if (f.a < 0) throw Error("definite reduction needs a positive form");
    f = normalize_definite(f);
    while (f.a > f.c) {
      f = normalize_definite({f.c, -f.b, f.a});
    }
    if (f.a == f.c && f.b < 0) f.b = -f.b;
    return f;
  }

  bool is_reduced_indefinite(const Form& f) const {
    Int abs_a = f.a < 0 ? Int(-f.a) : f.a;
    if (f.b <= 0 || f.b > sqrt_d_) return false;
    if (2 * abs_a <= sqrt_d_) return f.b + 2 * abs_a > sqrt_d_;
    return 2 * abs_a - f.b <= sqrt_d_;
  }

  /// rho(a, b, c) = (c, r, (r^2 - D) / 4c) with r = -b mod 2c in the normalizing range.
  Form rho(const Form& f) const {
    Int c = f.c, abs_c = c < 0 ? Int(-c) : c, two_c = 2 * abs_c;
    Int lo = abs_c > sqrt_d_ ? Int(-abs_c + 1) : Int(sqrt_d_ - 2 * abs_c + 1);
    Int r = lo + mod(-f.b - lo, two_c);
    return {c, r, (r * r - D_) / (4 * c)};
  }

  Form reduce_indefinite(Form f) const {
    int guard = 0;
    while (!is_reduced_indefinite(f)) {
      f = rho(f);
      if (++guard > 100000) throw InternalInconsistency("indefinite reduction did not terminate");
    }
    return f;
  }

  Form canonical(const Form& f) const {
    Form g = reduce(f);
    if (D_ < 0) return g;
    auto it = cycle_min_.find(g);
    if (it == cycle_min_.end()) throw InternalInconsistency("reduced form outside every cycle");
    return it->second;
  }

  void enumerate() {
    if (D_ < 0) {
      Int bound = isqrt(-D_ / 3);
      for (Int a = 1; a <= bound; ++a)
        for (Int b = -a + 1; b <= a; ++b) {
          if (mod(b - D_, Int(2)) != 0) continue;
          Int num = b * b - D_;
          if (num % (4 * a) != 0) continue;
          Int c = num / (4 * a);
          if (c < a || (c == a && b < 0)) continue;
          Form f{a, b, c};
          if (is_primitive(f)) add_class(f);
        }
      return;
    }
    std::vector<Form> reduced;
    for (Int b = 1; b <= sqrt_d_; ++b) {
      if (mod(b - D_, Int(2)) != 0) continue;
      Int m = (D_ - b * b) / 4;  // = -a c > 0
      for (Int a = 1; a * a <= m; ++a) {
        if (m % a != 0) continue;
        for (const Int& x : {a, Int(m / a)}) {
          for (int sign : {1, -1}) {
            Form f{sign * x, b, -m / (sign * x)};
            if (is_reduced_indefinite(f) && is_primitive(f)) reduced.push_back(f);
          }
          if (a * a == m) break;
        }
      }
    }
    std::sort(reduced.begin(), reduced.end());
    reduced.erase(std::unique(reduced.begin(), reduced.end()), reduced.end());
    for (const auto& f : reduced) {
      if (cycle_min_.count(f)) continue;
      std::vector<Form> cycle{f};
      for (Form g = rho(f); !(g == f); g = rho(g)) cycle.push_back(g);
      Form least = *std::min_element(cycle.begin(), cycle.end());
      for (const auto& g : cycle) cycle_min_[g] = least;
      add_class(least);
    }
  }

  void add_class(const Form& f) {
    index_[f] = reps_.size();
    reps_.push_back(f);
  }

  Int D_;
  Int sqrt_d_;
  std::vector<Form> reps_;
  std::map<Form, std::size_t> index_;
  std::map<Form, Form> cycle_min_;
};

}  // namespace selmer_flat::quadform
