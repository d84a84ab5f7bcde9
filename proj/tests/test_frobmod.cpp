#include <gtest/gtest.h>

#include <random>

#include "selmer_flat/frobmod.hpp"
#include "selmer_flat/frobmod_verify.hpp"

using namespace selmer_flat;
using namespace selmer_flat::frobmod;

namespace {

FrobModule swap44() { return FrobModule::create({4, 4}, {{0, 1}, {1, 0}}); }

// Independent brute-force oracle: orbit counting on the raw group, no matrices
// reduced through Smith form.
std::int64_t brute_fixed(const FrobModule& m) {
  std::int64_t n = 0;
  m.for_each([&](const Element& x) { n += m.apply_frobenius(x) == x; });
  return n;
}

}  // namespace

TEST(FixedPoints, Examples) {
  EXPECT_EQ(fixed_points(FrobModule::trivial()), 1);
  EXPECT_EQ(fixed_points(FrobModule::cyclic(5, 1)), 5);
  EXPECT_EQ(fixed_points(FrobModule::cyclic(5, 2)), 1);
}

TEST(FixedPoints, CapIsEnforced) {
  EnumerationLimits tight{100};
  auto m = FrobModule::create({11, 11}, {{1, 0}, {0, 1}});
  EXPECT_THROW(fixed_points(m, tight), TooLarge);
  EXPECT_THROW(FrobModule::create({1000, 2000}, {{1, 0}, {0, 1}}), TooLarge);
}

TEST(H1Size, Examples) {
  EXPECT_EQ(h1_size(FrobModule::trivial()), 1);
  EXPECT_EQ(h1_size(FrobModule::cyclic(5, 1)), 5);
  EXPECT_EQ(h1_size(swap44()), 4);
  EXPECT_EQ(coinvariant_count(swap44()), 4);
}

TEST(Construction, RejectsBadInput) {
  EXPECT_THROW(FrobModule::create({4, 6}, {{1, 0}, {0, 1}}), StructuralError);
  EXPECT_THROW(FrobModule::create({1}, {{1}}), StructuralError);
  EXPECT_THROW(FrobModule::create({6}, {{2}}), StructuralError);  // not injective
  // entry (1,0) maps Z/2 into Z/4 by 1, which is not well defined
  EXPECT_THROW(FrobModule::create({2, 4}, {{1, 0}, {1, 1}}), StructuralError);
  EXPECT_NO_THROW(FrobModule::create({2, 4}, {{1, 0}, {2, 1}}));
  auto z5 = FrobModule::cyclic(5, 2);
  auto z5t = FrobModule::cyclic(5, 1);
  EXPECT_THROW(FrobHom::create(z5, z5t, {{1}}), StructuralError);  // not equivariant
}

TEST(SubQuotient, Examples) {
  auto z6 = FrobModule::cyclic(6, 1);
  auto id = FrobHom::multiplication(z6, 1);
  EXPECT_EQ(image_module(id).divisors(), std::vector<std::int64_t>{6});
  EXPECT_EQ(kernel_module(id).rank(), 0u);

  auto two = FrobHom::multiplication(z6, 2);
  EXPECT_EQ(image_module(two).divisors(), std::vector<std::int64_t>{3});
  EXPECT_EQ(kernel_module(two).divisors(), std::vector<std::int64_t>{2});

  auto z4 = FrobModule::cyclic(4, 1);
  EXPECT_EQ(quotient_module(Submodule{z4, {{2}}}).divisors(), std::vector<std::int64_t>{2});
}

TEST(SubQuotient, InducedFrobenius) {
  // Z/2 + Z/4 with Frob (x, y) -> (x, y + 2x); the 2-torsion is {(x, 2y)}.
  auto m = FrobModule::create({2, 4}, {{1, 0}, {2, 1}});
  auto sub = as_module(Submodule{m, {{1, 0}, {0, 2}}});
  EXPECT_EQ(sub.divisors(), (std::vector<std::int64_t>{2, 2}));
  EXPECT_EQ(fixed_points(sub), fixed_points(Submodule{m, {{1, 0}, {0, 2}}}));
  EXPECT_EQ(fixed_points(sub), 2);
  auto q = quotient_module(Submodule{m, {{0, 2}}});
  EXPECT_EQ(q.divisors(), (std::vector<std::int64_t>{2, 2}));
  EXPECT_EQ(fixed_points(q), 4);
}

TEST(SubQuotient, UnstableSubmoduleRejected) {
  EXPECT_THROW(quotient_module(Submodule{swap44(), {{1, 0}}}), StructuralError);
  EXPECT_THROW(as_module(Submodule{swap44(), {{1, 0}}}), StructuralError);
}

TEST(SubQuotient, OrdersMultiply) {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 200; ++it) {
    auto inst = random_isogeny_like(rng, 2000);
    const auto& f = inst.phi;
    auto k = kernel_module(f), i = image_module(f), c = cokernel_module(f);
    EXPECT_EQ(k.order() * i.order(), f.source().order());
    EXPECT_EQ(i.order() * c.order(), f.target().order());
    EXPECT_EQ(fixed_points(i), fixed_points(image_submodule(f)));
    EXPECT_EQ(fixed_points(k), fixed_points(kernel_submodule(f)));
    EXPECT_EQ(brute_fixed(k), fixed_points(k));
  }
}

TEST(LocalIndices, Examples) {
  auto z5 = FrobModule::cyclic(5, 1);
  auto id = local_indices(FrobHom::multiplication(z5, 1));
  EXPECT_EQ(id.left_index, 1);
  EXPECT_EQ(id.right_index, 1);
  EXPECT_EQ(id.bound_left, 1);
  EXPECT_EQ(id.bound_right, 1);

  auto to_zero = local_indices(FrobHom::zero(z5, FrobModule::trivial()));
  EXPECT_EQ(to_zero.left_index, 5);
  EXPECT_EQ(to_zero.bound_left, 5);

  auto times5 = local_indices(FrobHom::multiplication(z5, 5));
  EXPECT_EQ(times5.right_index, 5);
  EXPECT_EQ(times5.bound_right, 5);
}

TEST(Coprimality, Examples) {
  auto z3 = FrobModule::cyclic(3, 1);
  auto id = check_coprimality_criteria(FrobHom::multiplication(z3, 1), 7);
  EXPECT_EQ(id.target_equality, Criterion::holds);
  EXPECT_EQ(id.source_equality, Criterion::holds);
  EXPECT_EQ(id.both, Criterion::holds);

  auto times5 = check_coprimality_criteria(FrobHom::multiplication(z3, 5), 5);
  EXPECT_EQ(times5.c_image, 3);
  EXPECT_EQ(times5.both, Criterion::holds);

  auto z5f = FrobModule::cyclic(5, 2);
  auto weak = check_coprimality_criteria(FrobHom::zero(z5f, FrobModule::trivial()), 5);
  EXPECT_EQ(weak.c_source, 1);
  EXPECT_EQ(weak.c_image, 1);
  EXPECT_EQ(weak.c_target, 1);
  EXPECT_EQ(weak.target_equality, Criterion::holds);
  EXPECT_EQ(weak.source_equality, Criterion::holds);

  auto z5 = FrobModule::cyclic(5, 1);
  auto na = check_coprimality_criteria(FrobHom::multiplication(z5, 5), 5);
  EXPECT_EQ(na.target_equality, Criterion::not_applicable);
  EXPECT_EQ(na.source_equality, Criterion::not_applicable);
  EXPECT_EQ(na.both, Criterion::not_applicable);
}

TEST(SixTerm, SmallCases) {
  auto m = FrobModule::create({2, 4}, {{1, 0}, {2, 1}});
  auto f = FrobHom::multiplication(m, 2);
  auto c = six_term_check(f);
  EXPECT_TRUE(c.exact);
  EXPECT_EQ(c.source_fixed, fixed_points(m));
  EXPECT_TRUE(six_term_check(FrobHom::multiplication(swap44(), 2)).exact);
}

TEST(Normalize, IdempotentOnNormalModules) {
  std::mt19937_64 rng(3);
  for (int it = 0; it < 200; ++it) {
    auto m = random_module(rng, 5000);
    auto n = normalize_presentation(m.rank(), ambient_relations(m), m.frobenius());
    EXPECT_EQ(n.module, m);
  }
}

TEST(DirectSum, FixedPointsMultiply) {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 100; ++it) {
    auto a = random_module(rng, 60), b = random_module(rng, 60);
    auto s = direct_sum(a, b);
    EXPECT_EQ(s.module.order(), a.order() * b.order());
    EXPECT_EQ(fixed_points(s.module), fixed_points(a) * fixed_points(b));
  }
}

TEST(Property, RandomInstancesVerify) {
  auto r = verify_random(20241015, 300, 10'000);
  EXPECT_EQ(r.instances, 300);
  EXPECT_EQ(r.violations, 0) << (r.messages.empty() ? "" : r.messages.front());
}
