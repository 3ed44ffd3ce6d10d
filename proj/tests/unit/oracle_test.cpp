#include <gtest/gtest.h>

#include "kbo/oracle.hpp"
#include "sigs.hpp"

using namespace kbo;
using kbo::testing::sig;

namespace {

std::vector<std::string> names(const KboParams& p, const std::vector<Term>& ts) {
  std::vector<std::string> out;
  for (const auto& t : ts) out.push_back(to_string(p, t));
  return out;
}

// Binary trees with k internal nodes: the Catalan numbers.
Weight catalan(int k) {
  Weight c = 1;
  for (int i = 0; i < k; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
  return c;
}

}  // namespace

TEST(Enum, Examples) {
  auto s1 = sig(kbo::testing::kSig1);
  EXPECT_EQ(names(s1, enum_terms(s1, {5, 0})),
            (std::vector<std::string>{"a", "g(a,a)", "g(a,g(a,a))", "g(g(a,a),a)"}));
  EXPECT_TRUE(enum_terms(s1, {0, 0}).empty());
  auto s3 = sig(kbo::testing::kSig3);
  EXPECT_EQ(names(s3, enum_terms(s3, {1, 2})), (std::vector<std::string>{"a", "f(a)", "f(f(a))"}));
}

TEST(Enum, SortedAndDistinct) {
  for (const char* text : kbo::testing::all_sigs()) {
    auto p = sig(text);
    auto ts = enum_terms(p, {7, 3});
    for (std::size_t i = 1; i < ts.size(); ++i) {
      ASSERT_EQ(kbo_compare(p, ts[i - 1], ts[i]), Order::LT);
    }
  }
}

TEST(Count, MatchesCatalanAndEnumeration) {
  auto s1 = sig(kbo::testing::kSig1);
  auto ts = enum_terms(s1, {13, 0});
  for (Weight w = 1; w <= 13; ++w) {
    Weight enumerated = std::count_if(ts.begin(), ts.end(),
                                      [&](const Term& t) { return ground_weight(s1, t) == w; });
    Weight expected = w % 2 == 1 ? catalan(static_cast<int>(w / 2)) : 0;
    EXPECT_EQ(enumerated, expected) << w;
    EXPECT_EQ(count_weight(s1, w, 1'000'000), expected) << w;
  }
  EXPECT_EQ(count_weight(s1, 7, 10), 5);
  EXPECT_EQ(count_weight(s1, 2, 10), 0);
  EXPECT_EQ(count_weight(s1, 9, 10), 10);
  auto s3 = sig(kbo::testing::kSig3);
  EXPECT_EQ(count_weight(s3, 1, 3), 3);
}

TEST(Count, EnumerationAgreesOnAllSigs) {
  for (const char* text : {kbo::testing::kSig2, kbo::testing::kSig4, kbo::testing::kSigHeavy,
                           kbo::testing::kSigUnary}) {
    auto p = sig(text);
    auto ts = enum_terms(p, {8, 0});
    for (Weight w = 1; w <= 8; ++w) {
      Weight enumerated = std::count_if(ts.begin(), ts.end(),
                                        [&](const Term& t) { return ground_weight(p, t) == w; });
      EXPECT_EQ(count_weight(p, w, 1'000'000), enumerated) << text << " w=" << w;
    }
  }
}

TEST(BruteForce, Examples) {
  auto s1 = sig(kbo::testing::kSig1);
  auto r = brute_force_check(parse_formula("x > y", s1), s1, EnumBound{5, 0});
  ASSERT_TRUE(r.sat);
  EXPECT_EQ(to_string(s1, r.witness.at("x")), "g(a,a)");
  EXPECT_EQ(to_string(s1, r.witness.at("y")), "a");
  EXPECT_FALSE(brute_force_check(parse_formula("x > x", s1), s1, EnumBound{7, 0}).sat);
  EXPECT_FALSE(brute_force_check(parse_formula("x >lex y", s1), s1, EnumBound{3, 0}).sat);
  EXPECT_TRUE(brute_force_check(parse_formula("x >lex y", s1), s1, EnumBound{5, 0}).sat);
}

TEST(BruteForce, NarrowingMatchesPlainEvaluation) {
  auto p = sig(kbo::testing::kSig2);
  auto universe = enum_terms(p, {4, 0});
  for (const char* text : {"x > y & g(y) > x", "x >lex y & y >lex z", "w(x) = w(y) + 1 & y >w z",
                           "x = s(y) | y = g(x)", "!(x > y) & h(x, y) >lex h(y, x)",
                           "w(x) + w(x) >= w(y) + 3 & x > s(y)", "h(h(x,c),y) = s(h(x,z))",
                           "u > h(h(u,z),g(c)) | x >w y", "!(x = g(x)) & x > y", "w(x) > w(y) + 10 | x = y",
                           "!(h(x,y) = h(y,x)) & s(x) >lex g(z)"}) {
    auto f = parse_formula(text, p);
    auto vars = vars_of(f);
    std::size_t fast = 0, slow = 0;
    for_each_solution(f, p, universe, vars, [&](const Substitution&) {
      ++fast;
      return true;
    });
    // Plain nested loops.
    std::function<void(std::size_t, Substitution&)> rec = [&](std::size_t i, Substitution& s) {
      if (i == vars.size()) {
        if (evaluate(f, p, s)) ++slow;
        return;
      }
      for (const auto& t : universe) {
        s.insert_or_assign(vars[i], t);
        rec(i + 1, s);
      }
      s.erase(vars[i]);
    };
    Substitution s;
    rec(0, s);
    EXPECT_EQ(fast, slow) << text;
  }
}

// Three free variables over a few hundred terms: the binding order and the
// early decisions keep these to a fraction of the full product.
TEST(BruteForce, LargeUniverse) {
  auto p = sig(kbo::testing::kSig2);
  auto universe = enum_terms(p, {7, 0});
  ASSERT_GT(universe.size(), 600u);
  EXPECT_FALSE(brute_force_check(parse_formula("h(h(x,c),y) = s(h(x,z))", p), p, universe).sat);
  EXPECT_FALSE(brute_force_check(parse_formula("y > s(g(x)) & u > h(h(u,z),g(c)) & y >w u", p), p, universe).sat);
  auto f = parse_formula("z = h(g(y),u) & u >lex y", p);
  auto r = brute_force_check(f, p, universe);
  ASSERT_TRUE(r.sat);
  EXPECT_TRUE(evaluate(f, p, r.witness));
}
