#include <gtest/gtest.h>

#include "kbo/counting.hpp"
#include "kbo/oracle.hpp"
#include "reference.hpp"
#include "sigs.hpp"

using namespace kbo;
using kbo::testing::sig;

using kbo::testing::holds_at;

TEST(Counting, Stats) {
  auto st = signature_stats(sig(kbo::testing::kSig2));
  EXPECT_EQ(st.S, 4u);
  EXPECT_EQ(st.B, 1u);
  EXPECT_EQ(st.F, 3u);
  EXPECT_EQ(st.W, 1);
  EXPECT_EQ(st.A, 2u);
  EXPECT_EQ(classify(sig(kbo::testing::kSig3)), SignatureClass::ZeroWeightUnary);
  EXPECT_EQ(classify(sig(kbo::testing::kSig4)), SignatureClass::ConstantsOnly);
  EXPECT_EQ(classify(sig(kbo::testing::kSigUnary)), SignatureClass::UnaryOnly);
  EXPECT_EQ(classify(sig(kbo::testing::kSig1)), SignatureClass::Branching);
}

TEST(Counting, ExistsSystem) {
  auto p = sig(kbo::testing::kSig1);
  auto sys = exists_system(p, lin_var("x"), "n_");
  auto with = [&](Weight x, Weight ng, Weight na) {
    return satisfies(sys, {{"x", x}, {"n_g", ng}, {"n_a", na}});
  };
  EXPECT_TRUE(with(3, 1, 2));
  EXPECT_FALSE(with(0, 0, 0));
  for (Weight ng = 0; ng < 4; ++ng) {
    for (Weight na = 0; na < 4; ++na) EXPECT_FALSE(with(2, ng, na));
  }
  sys.atoms.push_back(lin_eq(lin_var("x"), lin_const(2)));
  EXPECT_FALSE(feasible(sys));
}

TEST(Counting, Thresholds) {
  EXPECT_EQ(thresholds(sig(kbo::testing::kSig1)), std::make_pair(Weight{2}, Weight{4}));
  EXPECT_EQ(thresholds(sig(kbo::testing::kSig2)), std::make_pair(Weight{2}, Weight{4}));
  EXPECT_EQ(thresholds(sig(kbo::testing::kSigHeavy)), std::make_pair(Weight{6}, Weight{18}));
  EXPECT_THROW(thresholds(sig(kbo::testing::kSig3)), Error);
  EXPECT_THROW(tnt(1, 1, sig(kbo::testing::kSigUnary)), Error);
}

TEST(Counting, TntExamples) {
  auto p = sig(kbo::testing::kSig1);
  EXPECT_EQ(tnt(10, 5, p), 2);
  EXPECT_EQ(tnt(1, 5, p), 1);
  EXPECT_EQ(tnt(5, 2, p), 0);
}

TEST(Counting, TntAgainstOracle) {
  for (const char* text : {kbo::testing::kSig1, kbo::testing::kSig2, kbo::testing::kSigHeavy}) {
    auto p = sig(text);
    for (Weight M = 1; M <= 9; ++M) {
      Weight c = count_weight(p, M, 1000);
      for (Weight N = 1; N <= 8; ++N) ASSERT_EQ(tnt(N, M, p), std::min(N, c)) << text << M << N;
    }
  }
}

TEST(Counting, AtLeastExamples) {
  auto s3 = sig(kbo::testing::kSig3);
  auto f3 = at_least(3, s3, lin_var("x"));
  EXPECT_TRUE(holds_at(f3, 1));
  EXPECT_TRUE(holds_at(f3, 2));
  auto s1 = sig(kbo::testing::kSig1);
  auto f = at_least(2, s1, lin_var("x"));
  EXPECT_TRUE(holds_at(f, 5));
  EXPECT_FALSE(holds_at(f, 3));
  auto u = load_signature("symbol g 1 2\nsymbol c1 0 1\nsymbol c2 0 2\nprecedence g > c2 > c1\n");
  auto fu = at_least(2, u, lin_var("x"));
  for (Weight x : {5, 6, 7}) EXPECT_FALSE(holds_at(fu, x)) << x;
}

TEST(Counting, AtLeastAgainstOracle) {
  for (const char* text : {kbo::testing::kSig1, kbo::testing::kSig3, kbo::testing::kSig4,
                           kbo::testing::kSigUnary}) {
    auto p = sig(text);
    for (Weight N = 0; N <= 4; ++N) {
      auto f = at_least(N, p, lin_var("x"));
      for (Weight x = 0; x <= 20; ++x) {
        ASSERT_EQ(holds_at(f, x), count_weight(p, x, N) >= N) << text << " N=" << N << " x=" << x;
      }
    }
  }
}
