#pragma once

// Random Frobenius modules and equivariant maps with a degree witness, plus
// the property harness run by the CLI and the test suites.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "selmer_flat/frobmod.hpp"

namespace selmer_flat::frobmod {

/// phi together with psi and n such that psi.phi = n and phi.psi = n, i.e.
/// n plays the role of the degree of an isogeny inducing phi.
struct IsogenyLikeMap {
  FrobHom phi;
  FrobHom psi;
  std::int64_t degree;
};

namespace detail {

inline Matrix mat_mul(const Matrix& a, const Matrix& b, const std::vector<std::int64_t>& row_mods) {
  Matrix c(a.size(), std::vector<std::int64_t>(b.empty() ? 0 : b[0].size(), 0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < c[i].size(); ++j) {
      __int128 acc = 0;
      for (std::size_t l = 0; l < b.size(); ++l) acc += static_cast<__int128>(a[i][l]) * b[l][j];
      c[i][j] = mod(static_cast<std::int64_t>(acc % row_mods[i]), row_mods[i]);
    }
  return c;
}

inline std::int64_t uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

}  // namespace detail

/// Random divisor chain with order <= max_order.
inline std::vector<std::int64_t> random_divisors(std::mt19937_64& rng, std::int64_t max_order) {
  std::vector<std::int64_t> d;
  std::int64_t order = 1;
  const int rank = static_cast<int>(detail::uniform(rng, 0, 3));
  for (int i = 0; i < rank; ++i) {
    std::int64_t prev = d.empty() ? 1 : d.back();
    std::vector<std::int64_t> options;
    for (std::int64_t m = 1; prev * m * order <= max_order && m <= 12; ++m)
      if (prev * m >= 2) options.push_back(prev * m);
    if (options.empty()) break;
    std::int64_t next = options[static_cast<std::size_t>(detail::uniform(rng, 0, static_cast<std::int64_t>(options.size()) - 1))];
    d.push_back(next);
    order *= next;
  }
  return d;
}

/// Random automorphism of the group with the given divisors, built from
/// unit scalings, admissible transvections and swaps of equal factors.
inline Matrix random_automorphism(std::mt19937_64& rng, const std::vector<std::int64_t>& d) {
  const std::size_t k = d.size();
  Matrix f = FrobModule::identity(k);
  if (k == 0) return f;
  const int moves = static_cast<int>(detail::uniform(rng, 0, 6));
  for (int step = 0; step < moves; ++step) {
    Matrix e = FrobModule::identity(k);
    auto i = static_cast<std::size_t>(detail::uniform(rng, 0, static_cast<std::int64_t>(k) - 1));
    auto j = static_cast<std::size_t>(detail::uniform(rng, 0, static_cast<std::int64_t>(k) - 1));
    switch (detail::uniform(rng, 0, 2)) {
      case 0: {
        std::int64_t u;
        do u = detail::uniform(rng, 1, d[i]);
        while (gcd64(u, d[i]) != 1);
        e[i][i] = u;
        break;
      }
      case 1: {
        if (i == j) continue;
        std::int64_t c = detail::uniform(rng, 1, d[i]);
        if (d[j] < d[i]) c *= d[i] / d[j];  // keeps d_i | d_j * c
        e[i][j] = c;
        break;
      }
      default:
        if (d[i] != d[j]) continue;
        e[i][i] = e[j][j] = 0;
        e[i][j] = e[j][i] = 1;
    }
    f = detail::mat_mul(e, f, d);
  }
  return f;
}

inline FrobModule random_module(std::mt19937_64& rng, std::int64_t max_order) {
  auto d = random_divisors(rng, max_order);
  return FrobModule::create(d, random_automorphism(rng, d));
}

namespace detail {

inline Matrix scaled_power(const FrobModule& m, std::int64_t scalar, std::int64_t power) {
  Matrix f = m.with_frobenius_power(power).frobenius();
  for (std::size_t i = 0; i < f.size(); ++i)
    for (auto& c : f[i]) c = mod(static_cast<std::int64_t>(static_cast<__int128>(c) * scalar % m.divisors()[i]), m.divisors()[i]);
  return f;
}

/// Order of Frobenius, found by iterating until the identity comes back.
inline std::int64_t frobenius_order(const FrobModule& m) {
  for (std::int64_t k = 1;; ++k)
    if (m.with_frobenius_power(k).frobenius() == m.with_frobenius_power(0).frobenius()) return k;
}

inline IsogenyLikeMap endomorphism_family(std::mt19937_64& rng, const FrobModule& m) {
  const std::int64_t e = m.exponent();
  const std::int64_t ord = frobenius_order(m);
  std::int64_t i = uniform(rng, 0, ord - 1);
  std::int64_t a = uniform(rng, 1, e), b = uniform(rng, 1, e);
  FrobHom phi = FrobHom::create(m, m, scaled_power(m, a, i));
  FrobHom psi = FrobHom::create(m, m, scaled_power(m, b, (ord - i) % ord));
  return {phi, psi, a * b};
}

inline IsogenyLikeMap zero_family(std::mt19937_64& rng, const FrobModule& a, const FrobModule& b) {
  std::int64_t base = std::lcm(a.exponent(), b.exponent());
  std::int64_t n = base * uniform(rng, 1, 3);
  return {FrobHom::zero(a, b), FrobHom::zero(b, a), n};
}

inline IsogenyLikeMap sum_family(const IsogenyLikeMap& x, const IsogenyLikeMap& y) {
  auto src = direct_sum(x.phi.source(), y.phi.source());
  auto tgt = direct_sum(x.phi.target(), y.phi.target());
  const std::int64_t n1 = x.degree, n2 = y.degree;
  auto block = [](const Matrix& p, const Matrix& q, std::size_t rows1, std::size_t cols1, std::size_t rows2,
                  std::size_t cols2, std::int64_t s1, std::int64_t s2) {
    Matrix m(rows1 + rows2, std::vector<std::int64_t>(cols1 + cols2, 0));
    for (std::size_t i = 0; i < rows1; ++i)
      for (std::size_t j = 0; j < cols1; ++j) m[i][j] = p[i][j] * s1;
    for (std::size_t i = 0; i < rows2; ++i)
      for (std::size_t j = 0; j < cols2; ++j) m[rows1 + i][cols1 + j] = q[i][j] * s2;
    return m;
  };
  const auto& a1 = x.phi.source();
  const auto& b1 = x.phi.target();
  const auto& a2 = y.phi.source();
  const auto& b2 = y.phi.target();
  Matrix phi_raw = block(x.phi.matrix(), y.phi.matrix(), b1.rank(), a1.rank(), b2.rank(), a2.rank(), 1, 1);
  // psi_1 scaled by n2 and psi_2 by n1 so both composites equal n1*n2
  Matrix psi_raw = block(x.psi.matrix(), y.psi.matrix(), a1.rank(), b1.rank(), a2.rank(), b2.rank(), n2, n1);
  FrobHom phi = FrobHom::create(src.module, tgt.module, transport(phi_raw, src, tgt));
  FrobHom psi = FrobHom::create(tgt.module, src.module, transport(psi_raw, tgt, src));
  return {phi, psi, n1 * n2};
}

}  // namespace detail

/// One random instance; all group orders stay <= max_order.
inline IsogenyLikeMap random_isogeny_like(std::mt19937_64& rng, std::int64_t max_order) {
  switch (detail::uniform(rng, 0, 3)) {
    case 0:
      return detail::endomorphism_family(rng, random_module(rng, max_order));
    case 1:
      return detail::zero_family(rng, random_module(rng, max_order), FrobModule::trivial());
    case 2: {
      std::int64_t half = std::max<std::int64_t>(2, static_cast<std::int64_t>(std::sqrt(static_cast<double>(max_order))));
      return detail::zero_family(rng, random_module(rng, half), random_module(rng, half));
    }
    default: {
      std::int64_t half = std::max<std::int64_t>(2, static_cast<std::int64_t>(std::sqrt(static_cast<double>(max_order))));
      auto x = detail::endomorphism_family(rng, random_module(rng, half));
      auto y = detail::uniform(rng, 0, 1) == 0
                   ? detail::endomorphism_family(rng, random_module(rng, half))
                   : detail::zero_family(rng, random_module(rng, half), FrobModule::trivial());
      return detail::sum_family(x, y);
    }
  }
}

struct VerifyResult {
  std::int64_t instances = 0;
  std::int64_t violations = 0;
  std::vector<std::string> messages;  // first few violations
};

/// Checks every local property on one instance; returns an empty string or a
/// description of the first violated property.
inline std::string verify_instance(const IsogenyLikeMap& inst, const EnumerationLimits& limits = {}) {
  const FrobHom& f = inst.phi;
  try {
    // degree witness
    bool witness_ok = true;
    f.source().for_each([&](const Element& x) {
      if (inst.psi(f(x)) != f.source().scale(x, inst.degree)) witness_ok = false;
    });
    f.target().for_each([&](const Element& y) {
      if (f(inst.psi(y)) != f.target().scale(y, inst.degree)) witness_ok = false;
    });
    if (!witness_ok) return "degree witness does not compose to multiplication by n";

    h1_size(f.source(), limits);
    h1_size(f.target(), limits);
    local_indices(f, limits);
    auto c = check_coprimality_criteria(f, inst.degree, limits);
    if (c.target_equality == Criterion::fails || c.source_equality == Criterion::fails || c.both == Criterion::fails)
      return "coprimality implication falsified";
    if (!six_term_check(f, limits).exact) return "six-term sequence not exact";
    auto renorm = normalize_presentation(f.source().rank(), ambient_relations(f.source()), f.source().frobenius(), limits);
    if (!(renorm.module == f.source())) return "normal form is not idempotent";
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

inline VerifyResult verify_random(std::uint64_t seed, std::int64_t iterations, std::int64_t max_order = 10'000,
                                  const EnumerationLimits& limits = {}) {
  std::mt19937_64 rng(seed);
  VerifyResult r;
  for (std::int64_t it = 0; it < iterations; ++it) {
    auto inst = random_isogeny_like(rng, max_order);
    ++r.instances;
    std::string msg = verify_instance(inst, limits);
    if (!msg.empty()) {
      ++r.violations;
      if (r.messages.size() < 5) r.messages.push_back("instance " + std::to_string(it) + ": " + msg);
    }
  }
  return r;
}

}  // namespace selmer_flat::frobmod
