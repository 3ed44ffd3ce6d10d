#include <gtest/gtest.h>

#include <random>

#include "kbo/formula.hpp"
#include "sigs.hpp"

using namespace kbo;
using kbo::testing::sig;

namespace {

const KboParams& s1() {
  static KboParams p = sig(kbo::testing::kSig1);
  return p;
}

Formula P(const char* text) { return parse_formula(text, s1()); }

const TermAtom& term_atom(const Formula& f) { return std::get<TermAtom>(f.as_atom()); }

}  // namespace

TEST(Parse, TermAtom) {
  Formula f = P("g(x,a) > x");
  ASSERT_EQ(f.kind(), Formula::Kind::Atom);
  EXPECT_EQ(term_atom(f).rel, TermRel::Succ);
  EXPECT_EQ(to_string(s1(), term_atom(f).left), "g(x,a)");
  EXPECT_TRUE(term_atom(f).right.is_var());
}

TEST(Parse, NegationAndArith) {
  Formula f = P("!(x = y) & w(x) > w(y) + 1");
  ASSERT_EQ(f.kind(), Formula::Kind::And);
  ASSERT_EQ(f.children().size(), 2u);
  EXPECT_EQ(f.children()[0].kind(), Formula::Kind::Not);
  EXPECT_EQ(term_atom(f.children()[0].children()[0]).rel, TermRel::EqTA);
  const auto& a = std::get<ArithAtom>(f.children()[1].as_atom());
  EXPECT_EQ(a.rel, ArithRel::Gt);
  EXPECT_EQ(a.right.constant, 1);
}

TEST(Parse, SplitRelations) {
  EXPECT_EQ(term_atom(P("x >w y")).rel, TermRel::SuccW);
  EXPECT_EQ(term_atom(P("x >lex y")).rel, TermRel::SuccLex);
  // `>wx` is `>` followed by the variable wx.
  EXPECT_EQ(term_atom(P("x >wx")).rel, TermRel::Succ);
  EXPECT_EQ(std::get<ArithAtom>(P("3 >w(x)").as_atom()).rel, ArithRel::Gt);
  EXPECT_EQ(std::get<ArithAtom>(P("w(x) >= 2").as_atom()).rel, ArithRel::Ge);
}

TEST(Parse, Errors) {
  EXPECT_THROW(P("g(x"), SyntaxError);
  EXPECT_THROW(P("x >"), SyntaxError);
  EXPECT_THROW(P("x > w(y)"), SyntaxError);
  try {
    P("g(x) > a");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ArityMismatch);
  }
  try {
    P("x & y");
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.position(), 2u);
  }
}

TEST(Print, RoundTrip) {
  for (const char* text :
       {"g(x,a) > x", "!(x = y) & w(x) > w(y) + 1", "(x > y | y > x) & !!(a = x)",
        "x >w y | x >lex y & (y = a | a > y)", "w(g(x,x)) >= 3 + w(y)", "!(x > a & y > a)",
        "(x > a | y > a) | x = y", "(x > a & y > a) & x = y"}) {
    Formula f = P(text);
    std::string printed = print_formula(f, s1());
    EXPECT_EQ(P(printed.c_str()), f) << text << " -> " << printed;
  }
}

TEST(Negation, Rules) {
  auto nf = eliminate_negations(P("!(x > y)"), s1());
  EXPECT_EQ(nf, P("x = y | y > x"));
  EXPECT_EQ(eliminate_negations(P("!(x = y)"), s1()), P("x > y | y > x"));
  EXPECT_EQ(eliminate_negations(P("!(w(x) > w(y))"), s1()), P("w(x) = w(y) | w(y) > w(x)"));
  EXPECT_EQ(eliminate_negations(P("!!(x > y)"), s1()), P("x > y"));
  EXPECT_EQ(eliminate_negations(P("!(x > y & y > a)"), s1()),
            P("(x = y | y > x) | (y = a | a > y)"));
}

TEST(Dnf, Split) {
  auto cs = to_dnf_constraints(P("x > y"));
  ASSERT_EQ(cs.size(), 2u);
  EXPECT_EQ(std::get<TermAtom>(cs[0][0]).rel, TermRel::SuccW);
  EXPECT_EQ(std::get<TermAtom>(cs[1][0]).rel, TermRel::SuccLex);
  cs = to_dnf_constraints(P("(x = a | y = a) & x = y"));
  ASSERT_EQ(cs.size(), 2u);
  EXPECT_EQ(cs[0].size(), 2u);
  cs = to_dnf_constraints(P("w(x) > 3"));
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_EQ(cs[0].size(), 1u);
  EXPECT_TRUE(to_dnf_constraints(P("x > x")).empty());
}

TEST(Dnf, StopsEarly) {
  int seen = 0;
  bool done = for_each_dnf_constraint(P("x > y | y > x | x = y"), true, [&](const Constraint&) {
    return ++seen < 2;
  });
  EXPECT_FALSE(done);
  EXPECT_EQ(seen, 2);
}

// Random formulas, random ground substitutions: F holds iff some branch does.
TEST(Dnf, SemanticPreservation) {
  std::mt19937_64 rng(11);
  const auto& p = s1();
  std::vector<std::string> vars{"x", "y", "z"};
  auto rterm = [&](int d) {
    std::uniform_int_distribution<int> k(0, 4);
    int c = k(rng);
    if (c < 3) return Term::var(vars[c]);
    return kbo::testing::random_ground(p, rng, d);
  };
  std::function<Formula(int)> rform = [&](int depth) -> Formula {
    std::uniform_int_distribution<int> k(0, depth > 0 ? 6 : 3);
    int c = k(rng);
    if (c == 0) return Formula::atom(TermAtom{rterm(1), rterm(1), TermRel::Succ});
    if (c == 1) return Formula::atom(TermAtom{rterm(1), rterm(1), TermRel::EqTA});
    if (c == 2) return Formula::atom(TermAtom{rterm(1), rterm(1), TermRel::SuccLex});
    if (c == 3) {
      return Formula::atom(ArithAtom{weight_of(p, rterm(1)),
                                     weight_of(p, rterm(1)) + WeightExpr{1, {}}, ArithRel::Ge});
    }
    if (c == 4) return Formula::negate(rform(depth - 1));
    if (c == 5) return Formula::conj({rform(depth - 1), rform(depth - 1)});
    return Formula::disj({rform(depth - 1), rform(depth - 1)});
  };
  for (int i = 0; i < 200; ++i) {
    Formula f = rform(3);
    auto branches = to_dnf_constraints(eliminate_negations(f, p));
    for (int j = 0; j < 10; ++j) {
      Substitution s;
      for (const auto& v : vars) s.insert_or_assign(v, kbo::testing::random_ground(p, rng, 3));
      bool direct = evaluate(f, p, s);
      bool any = false;
      for (const auto& b : branches) any = any || evaluate(b, p, s);
      ASSERT_EQ(direct, any) << print_formula(f, p);
    }
  }
}
