#include <gtest/gtest.h>

#include <random>

#include "selmer_flat/json_io.hpp"
#include "selmer_flat/predictor.hpp"

using namespace selmer_flat;
using namespace selmer_flat::predictor;

namespace {

nf::FieldInvariants inv(const nf::NumberField& k) { return nf::compute_invariants(k, {Int(11)}, {5}); }
nf::FieldInvariants quad(int d) { return inv(nf::NumberField::quadratic(d)); }
nf::FieldInvariants q() { return inv(nf::NumberField::rationals()); }

theorem::CurveData fixture(const std::string& label) {
  auto j = json_io::read_file(std::string(SELMER_FLAT_TEST_DATA) + "/fixtures/" + label + ".json");
  return theorem::CurveData::from_curve(json_io::curve_from_json(j), label);
}

int log5(Int x) {
  int k = 0;
  while (x > 1) {
    EXPECT_EQ(x % 5, 0);
    x /= 5;
    ++k;
  }
  return k;
}

std::vector<int> squarefree_range(int lo, int hi) {
  std::vector<int> out;
  for (int d = lo; d <= hi; ++d)
    if (d != 0 && d != 1 && is_squarefree(Int(d))) out.push_back(d);
  return out;
}

}  // namespace

TEST(H1, Examples) {
  EXPECT_EQ(h1_fppf_dim(q()), 0);
  EXPECT_EQ(h1_fppf_dim(quad(-1)), 0);
  EXPECT_EQ(h1_fppf_dim(quad(-47)), 2);
  EXPECT_EQ(h1_fppf_dim(quad(5)), 1);
  // Q(zeta_5): r2 = 2, u_5 = 1, class number 1
  auto cyc = nf::compute_invariants(nf::NumberField::polynomial({1, 1, 1, 1, 1}, {{5, 0}}), {Int(11)}, {5});
  EXPECT_EQ(h1_fppf_dim(cyc), 2);
  auto cubic = nf::compute_invariants(nf::NumberField::polynomial({-2, 0, 0, 1}), {Int(11)}, {5});
  EXPECT_THROW(h1_fppf_dim(cubic), MissingInvariant);
}

TEST(Sel5, BoundsExamples) {
  auto b = sel5_bounds(q());
  EXPECT_EQ(b.raw, (Bounds{-1, 1}));
  EXPECT_EQ(b.clamped, (Bounds{0, 1}));
  EXPECT_EQ(b.torsion_clamped, (Bounds{1, 1}));
  EXPECT_EQ(sel5_bounds(quad(-7)).clamped, (Bounds{0, 2}));
  auto r5 = sel5_bounds(quad(5));
  EXPECT_EQ(r5.raw, (Bounds{-1, 3}));
  EXPECT_EQ(r5.clamped, (Bounds{0, 3}));
}

TEST(Sel5, ParityExamples) {
  EXPECT_EQ(sel5_parity(q()), 1);
  EXPECT_EQ(sel5_parity(quad(-1)), 1);
  EXPECT_EQ(sel5_parity(quad(-7)), 0);
}

TEST(Sel5, RationalsPinDownDimension) {
  auto p = predict_11a1(q());
  EXPECT_EQ(p.h1_dim, 0);
  EXPECT_EQ(p.parity, 1);
  EXPECT_EQ(p.bounds.torsion_clamped, (Bounds{1, 1}));
  EXPECT_EQ(p.parity_window, (Bounds{1, 1}));
  EXPECT_EQ(p.case_label, "a");
}

TEST(Classify, Examples) {
  EXPECT_EQ(classify_case(quad(-1)).label, "b");
  EXPECT_EQ(classify_case(quad(-7)).label, "c");
  EXPECT_EQ(classify_case(quad(-47)).label, "none");
  EXPECT_EQ(classify_case(quad(-11)).label, "b");  // ramified
  EXPECT_EQ(classify_case(quad(2)).label, "real-quadratic");  // (8/11) = -1
  EXPECT_EQ(classify_case(quad(5)).label, "none");  // 11 splits
  EXPECT_NE(classify_case(quad(-7)).narrative.find("rk E(Q(sqrt(-7))) = 1"), std::string::npos);
}

TEST(Classify, CubicAndQuartic) {
  // x^3 - 2: one complex place; 11 = 2 mod 3, so x^3 - 2 has one root mod 11 and 11 has two places
  auto cubic = nf::compute_invariants(nf::NumberField::polynomial({-2, 0, 0, 1}, {{5, 0}}), {Int(11)}, {5});
  EXPECT_EQ(cubic.split_count(11), 2);
  EXPECT_EQ(classify_case(cubic).label, "none");
  // x^3 - x - 1 has the root 6 mod 11
  auto c23 = nf::compute_invariants(nf::NumberField::polynomial({-1, -1, 0, 1}, {{5, 0}}), {Int(11)}, {5});
  EXPECT_GE(c23.split_count(11), 2);
  EXPECT_EQ(classify_case(c23).label, "none");
  // a cubic with one complex place and 11 inert
  int found = 0;
  for (int a = -4; a <= 4 && !found; ++a)
    for (int b = -4; b <= 4 && !found; ++b) {
      nf::ZPoly f{b, a, 0, 1};
      if (!nf::is_irreducible(f) || poly::Fp(11).has_root(f)) continue;
      auto k = nf::compute_invariants(nf::NumberField::polynomial(f, {{5, 0}}), {Int(11)}, {5});
      if (k.r2 != 1) continue;
      EXPECT_EQ(k.split_count(11), 1);
      EXPECT_EQ(classify_case(k).label, "e");
      ++found;
    }
  EXPECT_EQ(found, 1);
  // Q(zeta_5): totally imaginary quartic but 11 = 1 mod 5 splits completely
  auto cyc = nf::compute_invariants(nf::NumberField::polynomial({1, 1, 1, 1, 1}, {{5, 0}}), {Int(11)}, {5});
  EXPECT_EQ(cyc.split_count(11), 4);
  EXPECT_EQ(classify_case(cyc).label, "none");
  // x^4 + 1 (Q(zeta_8)): 11 = 3 mod 8, two places of degree 2
  auto z8 = nf::compute_invariants(nf::NumberField::polynomial({1, 0, 0, 0, 1}, {{5, 0}}), {Int(11)}, {5});
  EXPECT_EQ(classify_case(z8).label, "none");
}

TEST(Classify, QuarticSingleAbove11) {
  // search small totally imaginary quartics x^4 + a x^2 + b x + c with 11 inert
  int found = 0;
  for (int a = -3; a <= 3 && found < 3; ++a)
    for (int b = -3; b <= 3 && found < 3; ++b)
      for (int c = 1; c <= 5 && found < 3; ++c) {
        nf::ZPoly f{c, b, a, 0, 1};
        if (!nf::is_irreducible(f)) continue;
        auto k = nf::NumberField::polynomial(f, {{5, 0}});
        if (k.degree() != 4 || nf::signature(k).first != 0) continue;
        nf::FieldInvariants fi;
        try {
          fi = nf::compute_invariants(k, {Int(11)}, {5});
          if (fi.split_count(11) != 1) continue;
        } catch (const UnsupportedPrime&) {
          continue;
        }
        EXPECT_EQ(classify_case(fi).label, "e");
        ++found;
      }
  EXPECT_GT(found, 0);
}

TEST(Classify, Tower) {
  auto k = quad(-7);
  ASSERT_EQ(classify_case(k).label, "c");
  // F = Q(i, sqrt -7) = Q(i + sqrt -7), root of x^4 + 16 x^2 + 36; 11 is inert in Q(i)
  auto f = nf::compute_invariants(nf::NumberField::polynomial({36, 0, 16, 0, 1}, {{5, 0}}), {Int(11)}, {5});
  EXPECT_EQ(f.split_count(11), 2);
  EXPECT_EQ(classify_case(f, k).label, "d");
  // F = Q(sqrt 3, sqrt -7): 11 splits completely
  auto g = nf::compute_invariants(nf::NumberField::polynomial({100, 0, 8, 0, 1}, {{5, 0}}), {Int(11)}, {5});
  // x^4 + 8x^2 + 100 is the minimal polynomial of sqrt 3 + sqrt -7
  EXPECT_EQ(g.split_count(11), 4);
  EXPECT_EQ(classify_case(g, k).label, "none");
  // base not of type (c)
  EXPECT_EQ(classify_case(f, quad(-1)).label, "none");
}

TEST(Classify, NeverFiresWithClassGroupFivePart) {
  for (int d : squarefree_range(-3000, 3000)) {
    auto k = quad(d);
    if (k.h(5) > 0) {
      EXPECT_EQ(classify_case(k).label, "none") << d;
    }
  }
}

TEST(Classify, InertOrRamifiedImaginaryQuadratics) {
  int count = 0;
  for (int d : squarefree_range(-500, -1)) {
    auto k = quad(d);
    if (k.h(5) != 0 || k.split_count(11) != 1) continue;
    ++count;
    auto p = predict_11a1(k);
    EXPECT_EQ(p.case_label, "b");
    EXPECT_GE(p.sel_upper, 1);
    EXPECT_EQ(p.bounds.torsion_clamped, (Bounds{1, 1}));
    EXPECT_EQ(p.parity, 1);
  }
  EXPECT_GT(count, 20);
}

TEST(Identities, ParityAndWidthOverManyFields) {
  int count = 0;
  for (int d : squarefree_range(-400, 400)) {
    auto k = quad(d);
    int s = k.split_count(11);
    EXPECT_EQ(sel5_parity(k), (h1_fppf_dim(k) + s) % 2) << d;
    auto b = sel5_bounds(k);
    EXPECT_EQ(b.raw.upper - b.raw.lower, 2 * s);
    auto defect = quantitative_defect(datum_11a1(k), 5, k.r1);
    EXPECT_EQ(log5(defect.sel_minus_h1_bound), s);
    EXPECT_EQ(log5(defect.h1_minus_sel_bound), s);
    EXPECT_LE(b.clamped.lower, b.clamped.upper);
    ++count;
  }
  EXPECT_GE(count, 200);
}

TEST(ShaIndex, Examples) {
  auto e = fixture("11a1");
  auto b = sha_index_bounds(e.bad, 1);
  EXPECT_EQ(b.tamagawa_bound, 5);
  EXPECT_EQ(b.real_bound, 2);
  EXPECT_EQ(sha_index_bounds(fixture("2534e1").bad, 1).tamagawa_bound, 88);
  auto over = sha_index_bounds(e, nf::compute_invariants(nf::NumberField::quadratic(-7), {Int(11)}, {}));
  EXPECT_EQ(over.real_bound, 1);
  EXPECT_EQ(over.tamagawa_bound, 25);
}

TEST(Defect, Examples) {
  auto trivial = frobmod::FrobModule::trivial();
  auto d0 = quantitative_defect({frobmod::FrobHom::zero(trivial, trivial)}, 5);
  EXPECT_EQ(d0.sel_minus_h1_bound, 1);
  EXPECT_EQ(d0.h1_minus_sel_bound, 1);
  auto d1 = quantitative_defect(datum_11a1(q()), 5, 1);
  EXPECT_EQ(d1.sel_minus_h1_bound, 5);
  EXPECT_EQ(d1.h1_minus_sel_bound, 5);
  auto i5 = frobmod::FrobHom::multiplication(frobmod::FrobModule::cyclic(5, 1), 5);
  auto d2 = quantitative_defect({i5, i5}, 5);
  EXPECT_EQ(d2.sel_minus_h1_bound, 25);
  EXPECT_EQ(d2.h1_minus_sel_bound, 25);
  EXPECT_THROW(quantitative_defect({i5}, 2, 1), NotApplicable);
}
