#include <gtest/gtest.h>

#include <random>

#include "kbo/lia.hpp"
#include "reference.hpp"

using namespace kbo;
using kbo::testing::exhaustive;

namespace {

LinExpr V(const char* n, Weight c = 1) { return lin_var(n, c); }
LinExpr K(Weight c) { return lin_const(c); }

}  // namespace

TEST(Lia, Examples) {
  LinSystem s{{}, {lin_eq(V("x", 2) + V("y", 3), K(7))}};
  auto r = solve_system(s);
  ASSERT_TRUE(r);
  EXPECT_TRUE(satisfies(s, *r));
  EXPECT_EQ((*r)["x"], 2);
  EXPECT_EQ((*r)["y"], 1);

  LinSystem u{{}, {lin_eq(V("x") + V("y"), K(1)), lin_gt(V("x"), K(1))}};
  EXPECT_FALSE(solve_system(u));

  auto e = solve_system(LinSystem{});
  ASSERT_TRUE(e);
  EXPECT_TRUE(e->empty());
}

TEST(Lia, GcdAndStrict) {
  EXPECT_FALSE(solve_system({{}, {lin_eq(V("x", 2) + V("y", 4), K(5))}}));
  // x > y and y > x is infeasible even over the rationals.
  EXPECT_FALSE(solve_system({{}, {lin_gt(V("x"), V("y")), lin_gt(V("y"), V("x"))}}));
  // 2x >= 3 tightens to x >= 2.
  auto r = solve_system({{}, {lin_ge(V("x", 2), K(3))}});
  ASSERT_TRUE(r);
  EXPECT_EQ((*r)["x"], 2);
}

TEST(Lia, NeedsBranching) {
  // Rational optimum is fractional; integer solution needs branching.
  LinSystem s{{}, {lin_eq(V("x", 3) + V("y", 5), K(17)), lin_ge(V("x"), K(1))}};
  auto r = solve_system(s);
  ASSERT_TRUE(r);
  EXPECT_EQ((*r)["x"], 4);
  EXPECT_EQ((*r)["y"], 1);
  // No integer point in a thin slab.
  EXPECT_FALSE(feasible({{}, {lin_ge(V("x", 4), K(1)), lin_ge(K(3), V("x", 4))}}));
}

TEST(Lia, EqualitiesWithoutUnitCoefficients) {
  // After pivoting on c the second row is -21a + 30b + 28d + 24 = 0, whose
  // lattice branch and bound alone kept missing.
  LinSystem s{{},
              {lin_eq(V("a", -4) + V("b", 5) + V("c") + V("d", 5) + K(2), K(0)),
               lin_eq(V("a", -1) + V("b", 5) + V("c", -5) + V("d", 3) + K(14), K(0)),
               lin_ge(V("a", -1) + V("b", 2) + V("c", 2) + V("d", 3), K(6))}};
  auto r = solve_system(s);
  ASSERT_TRUE(r);
  EXPECT_EQ(*r, (Assignment{{"a", 4}, {"b", 2}, {"c", 4}, {"d", 0}}));
  EXPECT_FALSE(feasible({{}, {lin_eq(V("x", 2) + V("y", 3), K(1))}}));
  EXPECT_FALSE(feasible({{}, {lin_eq(V("x", 6) + V("y", 10), V("z", 15) + K(1)), lin_ge(K(0), V("z"))}}));
}

TEST(Lia, DeclaredVarsAppear) {
  auto r = solve_system({{"z"}, {lin_gt(V("x"), K(2))}});
  ASSERT_TRUE(r);
  EXPECT_EQ(r->at("z"), 0);
  EXPECT_EQ(r->at("x"), 3);
}

TEST(Lia, LargeCoefficientsFallBack) {
  LinSystem s{{}, {lin_eq(V("x", 1'000'003) + V("y", 999'983), K(1'000'003LL * 999'983 + 1'000'003 + 999'983))}};
  auto r = solve_system(s);
  ASSERT_TRUE(r);
  EXPECT_TRUE(satisfies(s, *r));
}

TEST(Lia, Relaxation) {
  // Rows are gcd-tightened first, so this thin slab is already empty.
  EXPECT_FALSE(relaxation_feasible({{}, {lin_ge(V("x", 4), K(1)), lin_ge(K(3), V("x", 4))}}));
  EXPECT_TRUE(relaxation_feasible({{}, {lin_ge(V("x", 4) + V("y", 6), K(1)), lin_ge(K(3), V("x", 4) + V("y", 6))}}));
  EXPECT_FALSE(relaxation_feasible({{}, {lin_gt(V("x"), V("y")), lin_ge(V("y"), V("x"))}}));
}

TEST(Lia, Expand) {
  auto A = ArithFormula::atom(lin_gt(V("x"), K(1)));
  auto B = ArithFormula::atom(lin_gt(V("y"), K(1)));
  auto C = ArithFormula::atom(lin_eq(V("x"), V("y")));
  auto systems = expand_to_systems(ArithFormula::conj({ArithFormula::disj({A, B}), C}));
  ASSERT_EQ(systems.size(), 2u);
  EXPECT_EQ(systems[0].atoms.size(), 2u);
  EXPECT_EQ(systems[0].atoms[0], A.as_atom());
  EXPECT_EQ(systems[1].atoms[0], B.as_atom());
  EXPECT_EQ(expand_to_systems(A).size(), 1u);
  EXPECT_TRUE(expand_to_systems(ArithFormula::falsity()).empty());
  auto t = expand_to_systems(ArithFormula::truth());
  ASSERT_EQ(t.size(), 1u);
  EXPECT_TRUE(t[0].atoms.empty());
}

TEST(Lia, RandomAgainstExhaustive) {
  std::mt19937_64 rng(3);
  const char* names[] = {"a", "b", "c", "d"};
  std::uniform_int_distribution<int> coef(-5, 5), nv(1, 3), na(1, 3), rel(0, 2), cst(-10, 20);
  for (int iter = 0; iter < 150; ++iter) {
    LinSystem s;
    int vars = nv(rng);
    int atoms = na(rng);
    for (int k = 0; k < atoms; ++k) {
      LinExpr l = K(cst(rng));
      for (int v = 0; v < vars; ++v) l += V(names[v], coef(rng));
      LinAtom a{l, LinRel(rel(rng)), K(0)};
      s.atoms.push_back(a);
    }
    auto got = solve_system(s);
    auto ref = exhaustive(s, 30);
    if (ref) {
      ASSERT_TRUE(got) << print_system(s);
    }
    if (got) {
      ASSERT_TRUE(satisfies(s, *got)) << print_system(s);
      bool in_box = std::all_of(got->begin(), got->end(), [](auto& kv) { return kv.second <= 30; });
      if (in_box) {
        ASSERT_TRUE(ref);
        Assignment want = *ref;
        for (auto& [k, v] : *got) {
          if (!want.count(k)) want[k] = 0;
        }
        EXPECT_EQ(*got, want) << print_system(s);
      }
    }
  }
}
