#pragma once

// Hypothesis checking for the comparison between Selmer groups and flat
// cohomology: the excluded set Sigma, the per-conclusion hypotheses for an
// isogeny of degree n over K (and L), the companion-curve parity criterion,
// the supersingular-at-2 rule, and per-place containment checks.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "selmer_flat/bigint.hpp"
#include "selmer_flat/curve.hpp"
#include "selmer_flat/frobmod.hpp"
#include "selmer_flat/nf.hpp"
#include "selmer_flat/tate.hpp"

namespace selmer_flat::theorem {

// ------------------------------------------------------------ curve data

/// Reduction data of a curve over Q. `bad` lists the primes of bad
/// reduction; when `complete` is false the list may omit some, and queries
/// at unlisted primes fail instead of assuming good reduction.
struct CurveData {
  std::string label;
  std::optional<WeierstrassCurve> curve;
  std::vector<tate::LocalData> bad;
  bool complete = true;

  static CurveData from_curve(const WeierstrassCurve& c, std::string label = {}, const FactorLimits& limits = {}) {
    return {std::move(label), c, tate::bad_primes(c, limits), true};
  }

  const tate::LocalData* find(const Int& p) const {
    for (const auto& ld : bad)
      if (ld.p == p) return &ld;
    return nullptr;
  }

  /// Local data at p; good reduction when p is not listed and the list is complete.
  tate::LocalData at(const Int& p) const {
    if (const auto* ld = find(p)) return *ld;
    if (curve) return tate::tate_algorithm(*curve, p);
    if (!complete) throw MissingInvariant("no local data at " + p.str() + (label.empty() ? "" : " for " + label));
    tate::LocalData good;
    good.p = p;
    return good;
  }

  std::vector<Int> bad_primes() const {
    std::vector<Int> out;
    for (const auto& ld : bad) out.push_back(ld.p);
    std::sort(out.begin(), out.end());
    return out;
  }

  Int tamagawa_product() const {
    Int prod = 1;
    for (const auto& ld : bad) prod *= ld.tamagawa;
    return prod;
  }
};

struct Reason {
  std::string code;
  std::string sentence;
  friend bool operator==(const Reason&, const Reason&) = default;
};

// ------------------------------------------------------------ local data over K

/// Prime divisors of the Tamagawa factor at a place of K above ld.p. When
/// the base change is not computed (additive reduction at a ramified place)
/// the set covers every prime that can occur and `exact` is false.
struct TamagawaPrimes {
  std::set<Int> primes;
  bool exact = true;
};

inline TamagawaPrimes tamagawa_primes_at(const tate::LocalData& ld, const nf::Place& place) {
  TamagawaPrimes out;
  if (auto bc = tate::base_change(ld, place.e, place.f)) {
    for (const auto& q : prime_divisors(Int(bc->tamagawa))) out.primes.insert(q);
    return out;
  }
  out.exact = false;
  if (ld.kodaira.family == tate::KodairaFamily::I_star) {
    // becomes I_{ne} or I_{ne}*: c divides 4 or ne
    out.primes.insert(2);
    for (const auto& q : prime_divisors(Int(ld.kodaira.n) * place.e)) out.primes.insert(q);
  } else {
    // potentially good: c <= 4
    out.primes = {2, 3};
  }
  return out;
}

/// Union over the places of K above every bad prime of the curve.
inline TamagawaPrimes tamagawa_primes_over(const CurveData& c, const nf::FieldInvariants& k) {
  TamagawaPrimes out;
  for (const auto& ld : c.bad)
    for (const auto& place : k.places_at(ld.p)) {
      auto t = tamagawa_primes_at(ld, place);
      out.primes.insert(t.primes.begin(), t.primes.end());
      out.exact = out.exact && t.exact;
    }
  return out;
}

/// Primes whose splitting a field must provide for the checks below.
inline std::vector<Int> required_primes(const CurveData& a, const std::optional<CurveData>& b, std::int64_t n) {
  std::set<Int> s;
  for (const auto& p : a.bad_primes()) s.insert(p);
  if (b)
    for (const auto& p : b->bad_primes()) s.insert(p);
  if (n > 1)
    for (const auto& p : prime_divisors(Int(n))) s.insert(p);
  return {s.begin(), s.end()};
}

// ------------------------------------------------------------ Sigma

struct SigmaReport {
  std::set<Int> primes;
  std::map<Int, std::vector<std::string>> reasons;  // tags: bad-reduction, divides-tamagawa, two, ramification-bound
  std::vector<std::string> notes;

  void add(const Int& p, const std::string& tag) {
    primes.insert(p);
    auto& tags = reasons[p];
    if (std::find(tags.begin(), tags.end(), tag) == tags.end()) tags.push_back(tag);
  }
};

/// Primes outside of which the curve's Selmer groups over K are determined by
/// the torsion Galois modules: bad primes, Tamagawa divisors over K, 2, and
/// odd primes p ramified in K with e_p >= p - 1.
inline SigmaReport compute_sigma(const CurveData& a, const nf::FieldInvariants& k) {
  if (!a.complete) throw MissingInvariant("Sigma needs local data at every bad prime");
  SigmaReport r;
  r.add(2, "two");
  for (const auto& ld : a.bad) r.add(ld.p, "bad-reduction");
  for (const auto& ld : a.bad)
    for (const auto& place : k.places_at(ld.p)) {
      auto t = tamagawa_primes_at(ld, place);
      for (const auto& q : t.primes) r.add(q, "divides-tamagawa");
      if (!t.exact)
        r.notes.push_back("additive reduction at " + ld.p.str() + " over a place with e = " + std::to_string(place.e) +
                          ": base change not computed, every possible Tamagawa prime included");
    }
  for (const auto& [p, e] : k.e)
    if (p != 2 && Int(e) >= p - 1) r.add(p, "ramification-bound");
  for (const auto& p : k.unsupported) {
    if (p == 2) continue;
    r.add(p, "ramification-bound");
    r.notes.push_back("ramification at " + p.str() + " not determined (index divisor); included");
  }
  return r;
}

// ------------------------------------------------------------ hypotheses

/// Topology of A(K_v) at the real places, which is not computed here.
enum class RealPlaces { unknown, connected, disconnected };

inline const char* to_string(RealPlaces r) {
  switch (r) {
    case RealPlaces::unknown:
      return "unknown";
    case RealPlaces::connected:
      return "connected";
    case RealPlaces::disconnected:
      return "disconnected";
  }
  return "?";
}

struct HypothesisReport {
  std::int64_t n = 0;
  bool semiabelian_at_n = false;
  bool good_at_n = false;
  bool tamagawa_coprime = false;    // over K
  bool tamagawa_coprime_L = false;  // over L
  bool real_condition = false;
  bool ramification_ok = false;
  std::set<std::string> conclusions;  // subset of {a.i, a.ii, c, full}
  std::vector<Reason> reasons;

  bool has(const std::string& c) const { return conclusions.count(c) > 0; }
};

/// Hypotheses for phi: A -> B of degree n over K, with the Selmer group
/// taken over L. B defaults to A (phi = multiplication by n), L to K.
inline HypothesisReport check_theorem(const CurveData& a, const std::optional<CurveData>& b_in, std::int64_t n,
                                      const nf::FieldInvariants& k, const std::optional<nf::FieldInvariants>& l_in,
                                      RealPlaces real = RealPlaces::unknown) {
  if (n < 2) throw Error("isogeny degree must be at least 2");
  const CurveData& b = b_in ? *b_in : a;
  const nf::FieldInvariants& l = l_in ? *l_in : k;
  HypothesisReport r;
  r.n = n;
  auto n_primes = prime_divisors(Int(n));

  r.semiabelian_at_n = true;
  r.good_at_n = true;
  for (const auto& p : n_primes) {
    tate::LocalData ld = a.at(p);
    if (!ld.semiabelian) {
      r.semiabelian_at_n = false;
      r.reasons.push_back({"not-semiabelian-at-n", "semiabelian reduction at every place above a prime dividing " +
                                                       std::to_string(n) + " fails: reduction at " + p.str() +
                                                       " is additive (" + ld.kodaira.str() + ")"});
    }
    if (ld.kind != tate::ReductionKind::good) {
      r.good_at_n = false;
      r.reasons.push_back({"bad-reduction-at-n", "good reduction at every place above a prime dividing " +
                                                     std::to_string(n) + " fails: reduction at " + p.str() + " is " +
                                                     tate::to_string(ld.kind) + " (" + ld.kodaira.str() + ")"});
    }
  }

  auto coprime = [&](const nf::FieldInvariants& field, const char* code, const std::string& where) {
    auto ta = tamagawa_primes_over(a, field);
    auto tb = tamagawa_primes_over(b, field);
    std::set<Int> all = ta.primes;
    all.insert(tb.primes.begin(), tb.primes.end());
    for (const auto& p : n_primes)
      if (all.count(p)) {
        bool exact = ta.exact && tb.exact;
        r.reasons.push_back({code, "n = " + std::to_string(n) + " prime to the product of the Tamagawa factors of A and B over " +
                                       where + " fails: " + p.str() + (exact ? " divides it" : " may divide it (base change not computed)")});
        return false;
      }
    return true;
  };
  r.tamagawa_coprime = coprime(k, "tamagawa-not-coprime", k.description);
  r.tamagawa_coprime_L = l_in ? coprime(l, "tamagawa-not-coprime-L", l.description) : r.tamagawa_coprime;

  if (n % 2 == 1 || k.r1 == 0 || real == RealPlaces::connected) {
    r.real_condition = true;
  } else {
    r.reasons.push_back({real == RealPlaces::unknown ? "real-place-unknown" : "real-place-disconnected",
                         "n odd or A(K_v) connected at every real place fails: n is even and the real places are " +
                             std::string(to_string(real))});
  }

  r.ramification_ok = true;
  for (const auto& p : n_primes) {
    int e = k.e_at(p);
    if (Int(e) >= p - 1) {
      r.ramification_ok = false;
      r.reasons.push_back({"ramification-too-large", "e_p < p - 1 for every p dividing n fails at p = " + p.str() +
                                                         " (e_p = " + std::to_string(e) + ")"});
    }
  }

  if (r.semiabelian_at_n) r.conclusions.insert("a.i");
  if (r.semiabelian_at_n && r.tamagawa_coprime && r.real_condition) r.conclusions.insert("a.ii");
  if (r.good_at_n && r.ramification_ok) r.conclusions.insert("c");
  if (r.has("a.ii") && r.has("c") && r.tamagawa_coprime_L) r.conclusions.insert("full");
  return r;
}

// ------------------------------------------------------------ companion curves

struct CompanionReport {
  std::int64_t p = 0;
  bool applies = false;
  std::vector<Int> bad_primes;                 // union over both curves
  std::map<Int, std::int64_t> tamagawa_first;  // bad prime -> c
  std::map<Int, std::int64_t> tamagawa_second;
  std::vector<Reason> reasons;
  std::string sentence;
};

/// Arithmetic side conditions for comparing two curves over Q with
/// isomorphic p-torsion (the isomorphism itself is taken on trust): p odd,
/// prime to both conductors and to every local Tamagawa factor. When they
/// hold, the two ranks are predicted to have equal parity.
inline CompanionReport check_companion(const CurveData& e1, const CurveData& e2, std::int64_t p) {
  if (!e1.complete || !e2.complete) throw MissingInvariant("companion check needs local data at every bad prime");
  CompanionReport r;
  r.p = p;
  std::set<Int> bad;
  for (const auto& ld : e1.bad) {
    bad.insert(ld.p);
    r.tamagawa_first[ld.p] = ld.tamagawa;
  }
  for (const auto& ld : e2.bad) {
    bad.insert(ld.p);
    r.tamagawa_second[ld.p] = ld.tamagawa;
  }
  for (const auto& q : bad) {
    r.tamagawa_first.emplace(q, 1);
    r.tamagawa_second.emplace(q, 1);
  }
  r.bad_primes.assign(bad.begin(), bad.end());
  if (p == 2 || !is_prime(Int(p))) r.reasons.push_back({"p-not-odd-prime", "p must be an odd prime"});
  if (bad.count(Int(p)))
    r.reasons.push_back({"p-divides-conductor", std::to_string(p) + " divides the conductor of one of the curves"});
  for (const auto* tam : {&r.tamagawa_first, &r.tamagawa_second})
    for (const auto& [q, c] : *tam)
      if (c % p == 0) {
        r.reasons.push_back({"p-divides-tamagawa", std::to_string(p) + " divides the Tamagawa factor c_" + q.str() +
                                                       " = " + std::to_string(c) + " of " +
                                                       (tam == &r.tamagawa_first ? e1.label : e2.label)});
      }
  r.applies = r.reasons.empty();
  auto list = [&](const std::map<Int, std::int64_t>& tam) {
    std::string s;
    for (const auto& [q, c] : tam) s += (s.empty() ? "" : ", ") + ("c_" + q.str() + " = " + std::to_string(c));
    return s;
  };
  Int conductor_rad = 1;
  for (const auto& q : bad) conductor_rad *= q;
  if (r.applies) {
    r.sentence = std::to_string(p) + " is prime to the bad primes (radical of the conductor " + conductor_rad.str() +
                 ") and to the Tamagawa factors " + list(r.tamagawa_first) + " of " + e1.label + " and " +
                 list(r.tamagawa_second) + " of " + e2.label + "; if the mod-" + std::to_string(p) +
                 " representations are isomorphic, the ranks are predicted to agree mod 2";
  } else {
    r.sentence = "the criterion does not apply: " + r.reasons.front().sentence;
  }
  return r;
}

// ------------------------------------------------------------ supersingular at 2

struct SS2Report {
  bool applies = false;         // the degree-2 kernel is determined at places over 2
  bool sel2_determined = false; // additionally: odd Tamagawa product over K, K totally imaginary
  std::vector<Reason> reasons;
};

/// Rule for multiplication by 2 when K has odd discriminant and the curve has
/// good supersingular reduction at 2.
inline SS2Report check_ss2_rule(const CurveData& a, const nf::FieldInvariants& k) {
  SS2Report r;
  if (!a.curve) throw MissingInvariant("the supersingularity test needs a Weierstrass model");
  bool ok = true;
  if (!k.two_unramified()) {
    ok = false;
    r.reasons.push_back({"even-discriminant", "K must have odd discriminant; 2 ramifies in " + k.description});
  }
  if (a.at(2).kind != tate::ReductionKind::good) {
    ok = false;
    r.reasons.push_back({"bad-at-2", "the curve must have good reduction at 2"});
  } else if (!tate::is_supersingular_at_2(*a.curve)) {
    ok = false;
    r.reasons.push_back({"ordinary-at-2", "the reduction at 2 is ordinary (odd trace of Frobenius)"});
  }
  r.applies = ok;
  if (!ok) return r;
  auto t = tamagawa_primes_over(a, k);
  bool odd = t.primes.count(2) == 0;
  if (!odd)
    r.reasons.push_back({"even-tamagawa", std::string("the Tamagawa product over K ") +
                                              (t.exact ? "is even" : "may be even (base change not computed)")});
  if (k.r1 != 0) r.reasons.push_back({"real-place", "K has a real place"});
  r.sel2_determined = odd && k.r1 == 0;
  return r;
}

// ------------------------------------------------------------ per-place containments

struct PlaceDatum {
  std::string label;
  frobmod::FrobHom phi;     // phi: Phi_A -> Phi_B with Frobenius actions
  bool semiabelian = true;  // semiabelian reduction, needed when the residue characteristic divides n
};

struct PlaceContainment {
  std::string label;
  frobmod::LocalIndices indices;
  bool sel_in_h1 = false;  // #Phi_B(F) = #(phi Phi_A)(F)
  bool h1_in_sel = false;  // #Phi_A(F) = #(phi Phi_A)(F)
};

struct ContainmentReport {
  std::int64_t n = 0;
  std::vector<PlaceContainment> places;
  bool sel_in_h1 = false;
  bool h1_in_sel = false;
  std::string status;  // "equal", "sel-in-h1", "h1-in-sel", "bounded defect only"
  std::vector<Reason> reasons;
};

inline ContainmentReport check_local_containments(const std::vector<PlaceDatum>& data, std::int64_t n,
                                                  RealPlaces real = RealPlaces::unknown, int real_places = 0,
                                                  const frobmod::EnumerationLimits& limits = {}) {
  if (n < 1) throw Error("degree must be positive");
  ContainmentReport r;
  r.n = n;
  r.sel_in_h1 = r.h1_in_sel = true;
  for (const auto& d : data) {
    PlaceContainment pc;
    pc.label = d.label;
    pc.indices = frobmod::local_indices(d.phi, limits);
    pc.sel_in_h1 = d.semiabelian && pc.indices.c_target == pc.indices.c_image;
    pc.h1_in_sel = d.semiabelian && pc.indices.c_source == pc.indices.c_image;
    if (!d.semiabelian) r.reasons.push_back({"not-semiabelian", "place " + d.label + " lacks semiabelian reduction"});
    if (!pc.sel_in_h1)
      r.reasons.push_back({"target-index", "place " + d.label + ": #Phi_B(F) = " + std::to_string(pc.indices.c_target) +
                                               " differs from #(phi Phi_A)(F) = " + std::to_string(pc.indices.c_image)});
    if (!pc.h1_in_sel)
      r.reasons.push_back({"source-index", "place " + d.label + ": #Phi_A(F) = " + std::to_string(pc.indices.c_source) +
                                               " differs from #(phi Phi_A)(F) = " + std::to_string(pc.indices.c_image)});
    r.sel_in_h1 = r.sel_in_h1 && pc.sel_in_h1;
    r.h1_in_sel = r.h1_in_sel && pc.h1_in_sel;
    r.places.push_back(std::move(pc));
  }
  if (n % 2 == 0 && real_places > 0 && real != RealPlaces::connected) {
    r.h1_in_sel = false;
    r.reasons.push_back({"real-place", "n is even and A(K_v) is not known to be connected at the real places"});
  }
  if (r.sel_in_h1 && r.h1_in_sel)
    r.status = "equal";
  else if (r.sel_in_h1)
    r.status = "sel-in-h1";
  else if (r.h1_in_sel)
    r.status = "h1-in-sel";
  else
    r.status = "bounded defect only";
  return r;
}

}  // namespace selmer_flat::theorem
