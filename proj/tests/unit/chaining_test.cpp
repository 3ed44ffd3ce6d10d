#include <gtest/gtest.h>

#include <random>

#include "helpers.hpp"
#include "kbo/chaining.hpp"
#include "kbo/oracle.hpp"
#include "sigs.hpp"

using namespace kbo;
using kbo::testing::holds;
using kbo::testing::sig;
using kbo::testing::term_atoms;

namespace {

std::vector<std::string> printed(const KboParams& p, const std::vector<Chain>& cs) {
  std::vector<std::string> out;
  for (const auto& c : cs) out.push_back(print_chain(c, p));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(Flatten, NestedArgument) {
  auto p = sig(kbo::testing::kSig2);
  FreshNames names;
  auto out = flatten(term_atoms(p, "x >w g(h(y,y))"), names);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(print_atom(out[0], p), "_v1 = h(y,y)");
  EXPECT_EQ(print_atom(out[1], p), "x >w g(_v1)");
}

TEST(Flatten, InnermostFirstAndShared) {
  auto p = sig(kbo::testing::kSig2);
  auto atoms = term_atoms(p, "g(h(h(y,y),c)) > x & s(h(y,y)) = x");
  FreshNames n2;
  auto flat = flatten(atoms, n2);
  std::vector<std::string> got;
  for (const auto& a : flat) got.push_back(print_atom(a, p));
  EXPECT_EQ(got, (std::vector<std::string>{"_v1 = h(y,y)", "_v2 = c", "_v3 = h(_v1,_v2)",
                                           "g(_v3) > x", "s(_v1) = x"}));
  for (const auto& a : flat) {
    EXPECT_TRUE(is_flat(a.left));
    EXPECT_TRUE(is_flat(a.right));
  }
}

TEST(Flatten, FreshNamesAvoidExisting) {
  auto p = sig(kbo::testing::kSig2);
  FreshNames names;
  auto out = flatten(term_atoms(p, "_v1 >w g(s(c))"), names);
  EXPECT_EQ(print_atom(out[0], p), "_v2 = c");
}

TEST(Chain, Examples) {
  auto p = sig(kbo::testing::kSig1);
  auto none = term_atoms(p, "x >w y & y >w x");
  EXPECT_TRUE(chain_branches(p, none).empty());
  EXPECT_TRUE(saturate_and_normalize(none).empty());

  auto eq = term_atoms(p, "x = y & y = x");
  EXPECT_EQ(printed(p, chain_branches(p, eq)), (std::vector<std::string>{"x = y"}));
  EXPECT_EQ(printed(p, saturate_and_normalize(eq)), (std::vector<std::string>{"x = y"}));

  auto lex = term_atoms(p, "x >lex y & y >lex z & x >lex z");
  EXPECT_EQ(printed(p, chain_branches(p, lex)), (std::vector<std::string>{"x >lex y >lex z"}));
  auto n = normalize_chain(lex);
  ASSERT_TRUE(n);
  EXPECT_EQ(print_chain(*n, p), "x >lex y >lex z");

  auto mixed = term_atoms(p, "x >w y & y = z & x >lex z");
  EXPECT_TRUE(chain_branches(p, mixed).empty());
  EXPECT_FALSE(normalize_chain(mixed));
}

TEST(Chain, NormalizeRules) {
  auto p = sig(kbo::testing::kSig1);
  // = cycle drops, > cycle kills
  auto n = normalize_chain(term_atoms(p, "x = y & y = z & z = x"));
  ASSERT_TRUE(n);
  EXPECT_EQ(print_chain(*n, p), "x = y = z");
  EXPECT_FALSE(normalize_chain(term_atoms(p, "x >lex y & y = z & z = x")));
  // transitive >w needs a >w on the path
  EXPECT_FALSE(normalize_chain(term_atoms(p, "x >lex y & y >lex z & x >w z")));
  n = normalize_chain(term_atoms(p, "x >lex y & y >w z & x >w z"));
  ASSERT_TRUE(n);
  EXPECT_EQ(print_chain(*n, p), "x >lex y >w z");
  EXPECT_EQ(n->first_row_end(), 2u);
  // a transitive = needs an all-= path
  EXPECT_FALSE(normalize_chain(term_atoms(p, "x >lex y & y = z & x = z")));
}

TEST(Chain, BranchesAreChained) {
  auto p = sig(kbo::testing::kSig2);
  FreshNames names;
  auto atoms = flatten(term_atoms(p, "h(x,y) >lex g(s(z)) & y >w c"), names);
  auto cs = chain_branches(p, atoms);
  EXPECT_FALSE(cs.empty());
  for (const auto& c : cs) {
    std::string why;
    EXPECT_TRUE(is_chained(c, &why)) << print_chain(c, p) << ": " << why;
  }
}

TEST(Chain, NothingBelowLeastConstant) {
  for (const char* text : {kbo::testing::kSig1, kbo::testing::kSig3}) {
    auto p = sig(text);
    FreshNames names;
    EXPECT_TRUE(chain_branches(p, flatten(term_atoms(p, "a > z"), names)).empty());
    EXPECT_TRUE(chain_branches(p, flatten(term_atoms(p, "x = a & x > y"), names)).empty());
    EXPECT_FALSE(chain_branches(p, flatten(term_atoms(p, "z > a"), names)).empty());
  }
}

// Without pruning both routes produce the same labelled preorders.
TEST(Chain, RoutesAgree) {
  auto p = sig(kbo::testing::kSig1);
  std::mt19937_64 rng(11);
  const std::vector<std::string> vars = {"x", "y", "z", "u"};
  const char* rels[] = {">w", ">lex", "="};
  ChainOptions raw{false, false};
  for (int round = 0; round < 60; ++round) {
    std::string text;
    int n = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < n; ++i) {
      if (i) text += " & ";
      text += vars[rng() % 4] + " " + rels[rng() % 3] + " " + vars[rng() % 4];
    }
    auto atoms = term_atoms(p, text);
    EXPECT_EQ(printed(p, chain_branches(p, atoms, raw)), printed(p, saturate_and_normalize(atoms))) << text;
  }
}

// Over a finite universe, every solution satisfies exactly one chain and
// every chain solution is a solution.
TEST(Chain, PartitionMatchesOracle) {
  std::mt19937_64 rng(5);
  for (const char* text : {kbo::testing::kSig1, kbo::testing::kSig3}) {
    auto p = sig(text);
    auto universe = enum_terms(p, {7, 2});
    std::vector<std::string> pool = {"x", "y", "z"};
    for (SymbolId g = 0; g < p.size(); ++g) {
      const auto& s = p.symbol(g);
      if (s.arity == 0) pool.push_back(s.name);
      if (s.arity == 1) pool.push_back(s.name + "(x)"), pool.push_back(s.name + "(y)");
      if (s.arity == 2) pool.push_back(s.name + "(x,y)"), pool.push_back(s.name + "(y,x)");
    }
    const char* rels[] = {">w", ">lex", "=", ">"};
    for (int round = 0; round < 40; ++round) {
      std::string f;
      int n = 1 + static_cast<int>(rng() % 3);
      for (int i = 0; i < n; ++i) {
        if (i) f += " & ";
        f += pool[rng() % pool.size()] + " " + rels[rng() % 4] + " " + pool[rng() % pool.size()];
      }
      auto atoms = term_atoms(p, f);
      auto chains = chain_branches(p, atoms);
      std::vector<std::vector<TermAtom>> chain_as;
      for (const auto& c : chains) chain_as.push_back(chain_atoms(c));
      std::vector<std::string> vs = {"x", "y", "z"};
      Substitution s;
      std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == vs.size()) {
          int hits = 0;
          for (const auto& ca : chain_as) hits += holds(p, ca, s);
          ASSERT_EQ(hits, holds(p, atoms, s) ? 1 : 0) << f;
          return;
        }
        for (const auto& t : universe) {
          s.insert_or_assign(vs[i], t);
          rec(i + 1);
        }
      };
      rec(0);
    }
  }
}
