#include <gtest/gtest.h>

#include <random>
#include <set>

#include "selmer_flat/json_io.hpp"
#include "selmer_flat/tate.hpp"

using namespace selmer_flat;
using namespace selmer_flat::tate;
using json_io::json;

namespace {

WeierstrassCurve fixture(const std::string& label) {
  return json_io::curve_from_json(json_io::read_file(std::string(SELMER_FLAT_TEST_DATA) + "/fixtures/" + label + ".json"));
}

const json& oracle() {
  static const json data = json_io::read_file(std::string(SELMER_FLAT_TEST_DATA) + "/data/tate_oracle.json");
  return data;
}

WeierstrassCurve c11a1() { return {0, -1, 1, -10, -20}; }

// Nonsingular points of the reduction mod p, by direct enumeration; the
// singular point is excluded.
std::int64_t nonsingular_points(const WeierstrassCurve& e, std::int64_t p) {
  std::int64_t a[5];
  for (int i = 0; i < 5; ++i) a[i] = static_cast<std::int64_t>(mod(e.ainvs()[i], Int(p)));
  std::int64_t count = 1;  // point at infinity
  for (std::int64_t x = 0; x < p; ++x)
    for (std::int64_t y = 0; y < p; ++y) {
      std::int64_t f = (y * y + a[0] * x * y + a[2] * y - x * x * x - a[1] * x * x - a[3] * x - a[4]) % p;
      if (f != 0) continue;
      std::int64_t fx = (a[0] * y - 3 * x * x - 2 * a[1] * x - a[3]) % p;
      std::int64_t fy = (2 * y + a[0] * x + a[2]) % p;
      if (fx != 0 || fy != 0) ++count;
    }
  return count;
}

}  // namespace

TEST(Curve, Invariants) {
  auto e = c11a1();
  EXPECT_EQ(e.discriminant(), -161051);
  EXPECT_EQ(4 * e.b8(), e.b2() * e.b6() - e.b4() * e.b4());
  EXPECT_EQ(1728 * e.discriminant(), e.c4() * e.c4() * e.c4() - e.c6() * e.c6());
  EXPECT_THROW(WeierstrassCurve(0, 0, 0, 0, 0), StructuralError);
}

TEST(Tate, Examples11a1) {
  auto at11 = tate_algorithm(c11a1(), 11);
  EXPECT_EQ(at11.kind, ReductionKind::split_multiplicative);
  EXPECT_EQ(at11.kodaira.str(), "I5");
  EXPECT_EQ(at11.tamagawa, 5);
  EXPECT_EQ(at11.v_min_disc, 5);
  EXPECT_TRUE(at11.semiabelian);
  EXPECT_FALSE(at11.pot_good);
  EXPECT_EQ(at11.component_group.divisors(), std::vector<std::int64_t>{5});
  EXPECT_EQ(nonsingular_points(c11a1(), 11), 10);  // p - 1: split node

  auto at5 = tate_algorithm(c11a1(), 5);
  EXPECT_EQ(at5.kind, ReductionKind::good);
  EXPECT_EQ(at5.tamagawa, 1);
  EXPECT_EQ(at5.component_group.rank(), 0u);
}

TEST(Tate, GoodAwayFromDiscriminant) {
  for (int p : {2, 3, 7, 13, 101}) EXPECT_EQ(tate_algorithm(c11a1(), p).kind, ReductionKind::good);
}

TEST(Tate, BadPrimes) {
  auto b = bad_primes(c11a1());
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0].p, 11);
  EXPECT_EQ(b[0].tamagawa, 5);

  for (const auto& ld : bad_primes(WeierstrassCurve(0, 0, 0, 0, 1))) EXPECT_TRUE(ld.p == 2 || ld.p == 3);

  WeierstrassCurve e37(0, 0, 1, -1, 0);  // discriminant 37
  EXPECT_EQ(e37.discriminant(), 37);
  EXPECT_EQ(bad_primes(e37).size(), 1u);
}

TEST(MinimalModel, Examples) {
  EXPECT_EQ(minimal_model_at(c11a1(), 11), c11a1());

  WeierstrassCurve base(0, 0, 0, 1, 0);
  EXPECT_EQ(minimal_model_at(base.scale_by(2), 2), base);

  for (int p : {5, 7, 11}) {
    WeierstrassCurve e(0, 0, 0, 0, ipow(Int(p), 6));
    auto m = minimal_model_at(e, p);
    EXPECT_EQ(m, WeierstrassCurve(0, 0, 0, 0, 1));
    EXPECT_EQ(valuation(e.discriminant(), p) - valuation(m.discriminant(), p), 12);
  }
}

TEST(MinimalModel, ShiftedNonMinimal) {
  // scaled and then translated, so a pure rescaling cannot undo it
  WeierstrassCurve e = c11a1().scale_by(3).rst_transform(1, 1, 1);
  auto m = minimal_model_at(e, 3);
  EXPECT_EQ(valuation(m.discriminant(), 3), 0);
}

TEST(Supersingular, Examples) {
  WeierstrassCurve ss(0, 0, 1, 0, 0);
  EXPECT_EQ(trace_at_2(ss), 0);
  EXPECT_TRUE(is_supersingular_at_2(ss));
  EXPECT_FALSE(is_supersingular_at_2(WeierstrassCurve(1, 0, 0, 0, 1)));
  EXPECT_THROW(is_supersingular_at_2(WeierstrassCurve(0, 0, 0, 1, 0)), NotApplicable);
}

TEST(Fixtures, PinnedTamagawaNumbers) {
  auto expect = [](const std::string& label, std::map<int, std::int64_t> want) {
    auto b = bad_primes(fixture(label));
    ASSERT_EQ(b.size(), want.size()) << label;
    for (const auto& ld : b) EXPECT_EQ(ld.tamagawa, want.at(static_cast<int>(ld.p))) << label << " at " << ld.p;
  };
  expect("11a1", {{11, 5}});
  expect("2534e1", {{2, 44}, {7, 1}, {181, 2}});
  expect("2534g1", {{2, 13}, {7, 2}, {181, 1}});
  expect("4592d1", {{2, 4}, {7, 1}, {41, 2}});
  expect("4592g1", {{2, 4}, {7, 1}, {41, 1}});
  EXPECT_EQ(tate_algorithm(fixture("4592d1"), 2).kodaira.str(), "I38*");
  EXPECT_EQ(tate_algorithm(fixture("4592g1"), 2).kodaira.str(), "I7*");
}

TEST(Oracle, MatchesFrozenPariData) {
  std::set<std::string> seen;
  int checked = 0;
  for (const auto& rec : oracle()) {
    auto e = json_io::curve_from_json(rec["ainvs"]);
    for (const auto& loc : rec["local"]) {
      Int p = json_io::to_int(loc["p"]);
      auto ld = tate_algorithm(e, p);
      std::string ctx = e.str() + " at p=" + p.str();
      ASSERT_EQ(ld.kodaira.str(), loc["kodaira"].get<std::string>()) << ctx;
      ASSERT_EQ(ld.tamagawa, loc["tamagawa"].get<std::int64_t>()) << ctx;
      ASSERT_EQ(ld.v_min_disc, loc["v_min_disc"].get<int>()) << ctx;
      seen.insert(ld.kodaira.family == KodairaFamily::I ? (ld.kodaira.n == 0 ? "I0" : "In")
                  : ld.kodaira.family == KodairaFamily::I_star ? (ld.kodaira.n == 0 ? "I0*" : "In*")
                                                               : ld.kodaira.str());
      ++checked;
    }
  }
  EXPECT_GT(checked, 1500);
  EXPECT_EQ(seen.size(), 10u);  // every Kodaira family is exercised
}

TEST(Oracle, ComponentGroupAgreesWithTamagawa) {
  int n = 0;
  for (const auto& rec : oracle()) {
    auto e = json_io::curve_from_json(rec["ainvs"]);
    for (const auto& ld : bad_primes(e)) {
      EXPECT_EQ(frobmod::fixed_points(ld.component_group), ld.tamagawa) << e.str() << " at " << ld.p;
      ++n;
    }
    if (n > 600) break;
  }
  EXPECT_GT(n, 500);
}

TEST(Oracle, MultiplicativeSplittingByPointCount) {
  int checked = 0;
  for (const auto& rec : oracle()) {
    auto e = json_io::curve_from_json(rec["ainvs"]);
    for (const auto& loc : rec["local"]) {
      Int p = json_io::to_int(loc["p"]);
      if (p > 400) continue;
      auto ld = tate_algorithm(e, p);
      if (ld.kind != ReductionKind::split_multiplicative && ld.kind != ReductionKind::nonsplit_multiplicative) continue;
      auto m = minimal_model_at(e, p);
      std::int64_t pp = static_cast<std::int64_t>(p);
      std::int64_t ns = nonsingular_points(m, pp);
      EXPECT_EQ(ns, ld.kind == ReductionKind::split_multiplicative ? pp - 1 : pp + 1) << e.str() << " at " << p;
      if (ld.kind == ReductionKind::split_multiplicative)
        EXPECT_EQ(ld.tamagawa, ld.kodaira.n);
      else
        EXPECT_EQ(ld.tamagawa, ld.kodaira.n % 2 == 0 ? 2 : 1);
      ++checked;
    }
  }
  EXPECT_GT(checked, 300);
}

TEST(Oracle, PotentiallyGoodIffIntegralJ) {
  for (const auto& rec : oracle()) {
    auto e = json_io::curve_from_json(rec["ainvs"]);
    Rational j = e.j_invariant();
    for (const auto& ld : bad_primes(e)) {
      bool integral = numerator(j) == 0 || valuation(denominator(j), ld.p) == 0;
      EXPECT_EQ(ld.pot_good, integral) << e.str() << " at " << ld.p;
      EXPECT_EQ(ld.semiabelian, ld.kind != ReductionKind::additive);
    }
  }
}

TEST(Property, InvariantUnderIntegralChangeOfVariables) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> small(-20, 20);
  int n = 0;
  for (const auto& rec : oracle()) {
    if (++n > 300) break;
    auto e = json_io::curve_from_json(rec["ainvs"]);
    auto moved = e.rst_transform(small(rng), small(rng), small(rng));
    std::set<Int> primes;
    for (const auto& loc : rec["local"]) primes.insert(json_io::to_int(loc["p"]));
    Int u = 1;
    for (int q : {5, 7, 11, 13, 17, 19, 23}) {
      if (!primes.count(q)) {
        u = q;
        break;
      }
    }
    moved = moved.scale_by(u);
    for (const auto& p : primes) {
      auto a = tate_algorithm(e, p), b = tate_algorithm(moved, p);
      EXPECT_EQ(a.kodaira, b.kodaira);
      EXPECT_EQ(a.tamagawa, b.tamagawa);
      EXPECT_EQ(a.kind, b.kind);
      EXPECT_EQ(a.v_min_disc, b.v_min_disc);
    }
  }
}

TEST(BaseChange, Rules) {
  auto at11 = tate_algorithm(c11a1(), 11);
  auto ram = base_change(at11, 2, 1);
  ASSERT_TRUE(ram);
  EXPECT_EQ(ram->kodaira.str(), "I10");
  EXPECT_EQ(ram->tamagawa, 10);

  // nonsplit I1 of 37a1-like data becomes split over an even residue degree
  LocalData ns = at11;
  ns.kind = ReductionKind::nonsplit_multiplicative;
  ns.tamagawa = 1;
  ns.component_group = frobmod::FrobModule::cyclic(5, -1);
  EXPECT_EQ(base_change(ns, 1, 2)->tamagawa, 5);
  EXPECT_EQ(base_change(ns, 1, 1)->tamagawa, 1);
  EXPECT_EQ(base_change(ns, 2, 1)->tamagawa, 2);

  // additive: unramified changes only the Frobenius, ramified is undetermined
  auto iv = tate_algorithm(WeierstrassCurve(0, 0, 0, 0, 5 * 5 * 2), 5);  // y^2 = x^3 + 50
  EXPECT_EQ(iv.kodaira.str(), "IV");
  auto iv2 = base_change(iv, 1, 2);
  ASSERT_TRUE(iv2);
  EXPECT_EQ(iv2->tamagawa, 3);
  EXPECT_FALSE(base_change(iv, 2, 1));
}
