#pragma once

// The 5-Selmer engine for the curve 11a1 over number fields, plus the
// general index bounds it relies on.
//
// 11a1 has E[5] = Z/5 + mu_5 and split multiplicative reduction I5 at 11,
// so the flat cohomology of its 5-torsion over O_K has dimension
//   2 h_5 + r1 + r2 - 1 + u_5
// and the 5-Selmer group differs from it by at most #{v | 11} in each
// direction.

#include <optional>
#include <string>
#include <vector>

#include "selmer_flat/bigint.hpp"
#include "selmer_flat/frobmod.hpp"
#include "selmer_flat/nf.hpp"
#include "selmer_flat/tate.hpp"
#include "selmer_flat/theorem.hpp"

namespace selmer_flat::predictor {

struct Bounds {
  int lower = 0;
  int upper = 0;
  friend bool operator==(const Bounds&, const Bounds&) = default;
};

struct Sel5Bounds {
  Bounds raw;              // h1 -/+ #{v | 11}
  Bounds clamped;          // lower bound at least 0
  Bounds torsion_clamped;  // lower bound at least 1: E(Q)[5] = Z/5 maps into Sel_5
};

struct Prediction {
  std::string field;
  int h1_dim = 0;
  int places_above_11 = 0;
  int sel_lower = 0;  // raw bounds, so sel_upper - sel_lower = 2 #{v | 11}
  int sel_upper = 0;
  Sel5Bounds bounds;
  Bounds parity_window;  // torsion-clamped bounds moved inward to the parity
  int parity = 0;
  std::string case_label;  // a, b, c, d, e, real-quadratic, none
  std::string narrative;
};

/// dim_{F_p} H^1_fppf(O_K, Z/p + mu_p) = 2 h_p + r1 + r2 - 1 + u_p.
inline int h1_fppf_dim(const nf::FieldInvariants& inv, std::int64_t p = 5) {
  return 2 * inv.h(p) + inv.r1 + inv.r2 - 1 + inv.u(p);
}

inline Sel5Bounds sel5_bounds(const nf::FieldInvariants& inv) {
  int h1 = h1_fppf_dim(inv);
  int s = inv.split_count(11);
  Sel5Bounds b;
  b.raw = {h1 - s, h1 + s};
  b.clamped = {std::max(b.raw.lower, 0), b.raw.upper};
  b.torsion_clamped = {std::max(b.raw.lower, 1), b.raw.upper};
  return b;
}

/// dim Sel_5 mod 2 = r1 + r2 - 1 + u_5 + #{v | 11}.
inline int sel5_parity(const nf::FieldInvariants& inv) {
  int v = inv.r1 + inv.r2 - 1 + inv.u(5) + inv.split_count(11);
  return ((v % 2) + 2) % 2;
}

struct CaseResult {
  std::string label;
  std::string narrative;
};

namespace detail {

inline bool imaginary_quadratic(const nf::FieldInvariants& k) { return k.degree == 2 && k.r2 == 1; }
inline bool real_quadratic(const nf::FieldInvariants& k) { return k.degree == 2 && k.r1 == 2; }

inline std::string rank_one_or_sha(const std::string& field) {
  return "either rk E(" + field + ") = 1, or rk E(" + field + ") = 0 and Sha(E/" + field +
         ")[5^oo] has Z_5-corank 1";
}

}  // namespace detail

/// Matches the field against the hypotheses of the 11a1 rank statements.
/// `base` is the field K when `inv` describes a quadratic extension F of K
/// (the tower case); the containment F ⊃ K is taken on trust.
inline CaseResult classify_case(const nf::FieldInvariants& inv,
                                const std::optional<nf::FieldInvariants>& base = std::nullopt) {
  auto h5 = inv.h_p.find(5);
  if (h5 == inv.h_p.end()) throw MissingInvariant("h_5 of " + inv.description + " not available");
  if (h5->second != 0)
    return {"none", "h_5 = " + std::to_string(h5->second) + " > 0; no rank statement applies"};
  const int s = inv.split_count(11);
  const std::string name = inv.description;

  if (base) {
    const auto& k = *base;
    auto kh = k.h_p.find(5);
    bool k_is_c = detail::imaginary_quadratic(k) && kh != k.h_p.end() && kh->second == 0 && k.split_count(11) == 2;
    if (!k_is_c) return {"none", "the base field is not imaginary quadratic with h_5 = 0 and 11 split"};
    if (inv.degree != 2 * k.degree) return {"none", "the top field is not a quadratic extension of the base"};
    if (s != k.split_count(11))
      return {"none", "a place of the base above 11 splits in the top field (" + std::to_string(s) + " places above 11)"};
    return {"d", "either rk E(" + name + ") = 2, or Sha(E/" + name + ")[5^oo] is infinite"};
  }

  if (inv.degree == 1) return {"a", "rk E(Q) = 0"};
  if (detail::imaginary_quadratic(inv)) {
    if (s == 1) return {"b", "rk E(" + name + ") = 0 (11 is " + (inv.e_at(11) > 1 ? "ramified" : "inert") + ")"};
    return {"c", detail::rank_one_or_sha(name) + "; in the second case Sha(E/" + name +
                     ")[p^oo] is infinite for every prime p"};
  }
  if (detail::real_quadratic(inv)) {
    if (s == 1)
      return {"real-quadratic", detail::rank_one_or_sha(name) + "; in the second case Sha(E/" + name +
                                    ")[p^oo] is infinite for every prime p"};
    return {"none", "real quadratic with 11 split; no rank statement applies"};
  }
  bool cubic = inv.degree == 3 && inv.r2 == 1;
  bool quartic = inv.degree == 4 && inv.r1 == 0;
  if ((cubic || quartic) && s == 1) return {"e", detail::rank_one_or_sha(name)};
  return {"none", "no rank statement covers this field"};
}

/// Full prediction for 11a1 over the field.
inline Prediction predict_11a1(const nf::FieldInvariants& inv,
                               const std::optional<nf::FieldInvariants>& base = std::nullopt) {
  Prediction p;
  p.field = inv.description;
  p.h1_dim = h1_fppf_dim(inv);
  p.places_above_11 = inv.split_count(11);
  p.bounds = sel5_bounds(inv);
  p.sel_lower = p.bounds.raw.lower;
  p.sel_upper = p.bounds.raw.upper;
  p.parity = sel5_parity(inv);
  p.parity_window = p.bounds.torsion_clamped;
  if ((p.parity_window.lower - p.parity) % 2 != 0) ++p.parity_window.lower;
  if ((p.parity_window.upper - p.parity) % 2 != 0) --p.parity_window.upper;
  auto c = classify_case(inv, base);
  p.case_label = c.label;
  p.narrative = "dim H^1_fppf = " + std::to_string(p.h1_dim) + "; " + std::to_string(p.bounds.raw.lower) +
                " <= dim Sel_5 <= " + std::to_string(p.bounds.raw.upper) + " (raw), lower bound raised to " +
                std::to_string(p.bounds.torsion_clamped.lower) +
                " by the rational 5-torsion point; dim Sel_5 = " + std::to_string(p.parity) + " mod 2. " + c.narrative;
  return p;
}

// ------------------------------------------------------------ index bounds

struct ShaIndexBounds {
  Int tamagawa_bound;  // product of the local Tamagawa factors
  Int real_bound;      // 2^{r1 dim A}
};

inline ShaIndexBounds sha_index_bounds(const std::vector<tate::LocalData>& local, int r1, int dim_a = 1) {
  ShaIndexBounds b{1, ipow(Int(2), static_cast<unsigned>(r1 * dim_a))};
  for (const auto& ld : local) b.tamagawa_bound *= ld.tamagawa;
  return b;
}

/// Same bounds over K, with the Tamagawa factors taken at every place of K.
inline ShaIndexBounds sha_index_bounds(const theorem::CurveData& a, const nf::FieldInvariants& k) {
  std::vector<tate::LocalData> over_k;
  for (const auto& ld : a.bad)
    for (const auto& place : k.places_at(ld.p)) {
      auto bc = tate::base_change(ld, place.e, place.f);
      if (!bc) throw NotApplicable("Tamagawa factor at a ramified place above " + ld.p.str() + " not computed");
      over_k.push_back(*bc);
    }
  return sha_index_bounds(over_k, k.r1);
}

struct Defect {
  Int sel_minus_h1_bound = 1;  // product of #(Phi_B / phi Phi_A)(F)
  Int h1_minus_sel_bound = 1;  // product of #Phi_A[phi](F)
};

/// Bounds on the two quotients between Sel_phi and H^1_fppf, from the
/// component-group data at each finite place.
inline Defect quantitative_defect(const std::vector<frobmod::FrobHom>& places, std::int64_t n, int real_places = 0,
                                  const frobmod::EnumerationLimits& limits = {}) {
  if (n % 2 == 0 && real_places > 0)
    throw NotApplicable("even degree with real places: the archimedean factors are not bounded here");
  Defect d;
  for (const auto& phi : places) {
    auto idx = frobmod::local_indices(phi, limits);
    d.sel_minus_h1_bound *= idx.bound_right;
    d.h1_minus_sel_bound *= idx.bound_left;
  }
  return d;
}

/// Multiplication by 5 on the component groups of 11a1 at the places of K above 11.
inline std::vector<frobmod::FrobHom> datum_11a1(const nf::FieldInvariants& k) {
  tate::LocalData ld;
  ld.p = 11;
  ld.kodaira = {tate::KodairaFamily::I, 5};
  ld.kind = tate::ReductionKind::split_multiplicative;
  ld.tamagawa = 5;
  ld.v_min_disc = 5;
  ld.semiabelian = true;
  ld.pot_good = false;
  ld.component_group = frobmod::FrobModule::cyclic(5, 1);
  std::vector<frobmod::FrobHom> out;
  for (const auto& place : k.places_at(11)) {
    auto bc = tate::base_change(ld, place.e, place.f);
    out.push_back(frobmod::FrobHom::multiplication(bc->component_group, 5));
  }
  return out;
}

}  // namespace selmer_flat::predictor
