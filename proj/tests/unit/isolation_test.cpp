#include <gtest/gtest.h>

#include <random>

#include "helpers.hpp"
#include "reference.hpp"
#include "kbo/isolation.hpp"
#include "kbo/oracle.hpp"
#include "sigs.hpp"

using namespace kbo;
using kbo::testing::sig;
using kbo::testing::term_atoms;
using kbo::testing::extends;

namespace {

Chain chain_of(const KboParams& p, std::vector<std::string> terms, std::vector<TermRel> links) {
  Chain c;
  for (const auto& t : terms) c.terms.push_back(parse_term(t, p));
  c.links = std::move(links);
  return c;
}

constexpr TermRel W = TermRel::SuccW;
constexpr TermRel L = TermRel::SuccLex;
constexpr TermRel E = TermRel::EqTA;

std::vector<IsolatedForm> isolate_text(const KboParams& p, const std::string& text) {
  std::vector<IsolatedForm> out;
  FreshNames names;
  for (const auto& c : to_dnf_constraints(eliminate_negations(parse_formula(text, p), p), true)) {
    isolate_constraint(p, c, names, {}, [&](const IsolatedForm& f) {
      out.push_back(f);
      return true;
    });
  }
  return out;
}

std::vector<std::string> printed(const KboParams& p, const std::vector<IsolatedForm>& fs) {
  std::vector<std::string> out;
  for (const auto& f : fs) out.push_back(print_isolated(f, p));
  return out;
}

}  // namespace

TEST(Cleanup, Examples) {
  auto p2 = sig(kbo::testing::kSig2);
  auto c = first_row_cleanup(p2, chain_of(p2, {"y", "y", "c"}, {E, W}));
  ASSERT_TRUE(c);
  EXPECT_EQ(print_chain(*c, p2), "y >w c");
  EXPECT_FALSE(first_row_cleanup(p2, chain_of(p2, {"y", "s(y)"}, {W})));
  EXPECT_FALSE(first_row_cleanup(p2, chain_of(p2, {"y", "z", "y"}, {L, E})));
  auto p3 = sig(kbo::testing::kSig3);
  auto same = chain_of(p3, {"f(y)", "y"}, {L});
  c = first_row_cleanup(p3, same);
  ASSERT_TRUE(c);
  EXPECT_EQ(*c, same);
  EXPECT_FALSE(first_row_cleanup(p3, chain_of(p3, {"y", "f(y)"}, {L})));
}

TEST(RowEqualities, Examples) {
  auto p1 = sig(kbo::testing::kSig1);
  WorkingConstraint w;
  w.chain = chain_of(p1, {"g(x1,x2)", "g(y1,y2)", "x1", "y1", "x2", "y2"}, {E, W, E, W, E});
  ASSERT_TRUE(eliminate_row_equalities(p1, w));
  ASSERT_EQ(w.triang.size(), 2u);
  EXPECT_EQ(w.triang[0].var, "y1");
  EXPECT_EQ(to_string(p1, w.triang[0].term), "x1");
  EXPECT_EQ(w.triang[1].var, "y2");
  EXPECT_EQ(print_chain(w.chain, p1), "g(x1,x2) >w x1 = x1 >w x2 = x2");

  auto p2 = sig(kbo::testing::kSig2);
  WorkingConstraint clash;
  clash.chain = chain_of(p2, {"g(x)", "s(y)", "x", "y"}, {E, W, E});
  EXPECT_FALSE(eliminate_row_equalities(p2, clash));

  WorkingConstraint bindx;
  bindx.chain = chain_of(p2, {"x", "g(y)", "y"}, {E, W});
  ASSERT_TRUE(eliminate_row_equalities(p2, bindx));
  ASSERT_EQ(bindx.triang.size(), 1u);
  EXPECT_EQ(bindx.triang[0].var, "x");
  EXPECT_EQ(to_string(p2, bindx.triang[0].term), "g(y)");
  EXPECT_EQ(print_chain(bindx.chain, p2), "g(y) >w y");

  // f(x) = f(y) comes down to x = y
  auto p3 = sig(kbo::testing::kSig3);
  WorkingConstraint tower;
  tower.chain = chain_of(p3, {"f(x)", "f(y)", "x", "y"}, {E, L, E});
  ASSERT_TRUE(eliminate_row_equalities(p3, tower));
  ASSERT_EQ(tower.triang.size(), 1u);
  EXPECT_EQ(tower.triang[0].var, "x");
  EXPECT_EQ(to_string(p3, tower.triang[0].term), "y");
}

TEST(Guess, Shapes) {
  auto p2 = sig(kbo::testing::kSig2);
  FreshNames names({"x"});
  std::vector<std::string> got;
  guess_shapes(p2, "x", 3, names, [&](const Term& t) {
    got.push_back(to_string(p2, t));
    return true;
  });
  EXPECT_EQ(got, (std::vector<std::string>{"h(_v1,_v2)", "g(_v3)", "s(_v4)", "c"}));

  auto p3 = sig(kbo::testing::kSig3);
  got.clear();
  guess_shapes(p3, "x", 2, names, [&](const Term& t) {
    got.push_back(to_string(p3, t));
    return true;
  });
  EXPECT_EQ(got, (std::vector<std::string>{"a", "f(a)", "f(f(a))", "b", "f(b)", "f(f(b))"}));
}

TEST(LexDecompose, Examples) {
  auto p = sig(kbo::testing::kSig2);
  auto t = [&](const char* s) { return parse_term(s, p); };
  auto d = lex_decompose(p, t("g(x)"), t("s(y)"));
  EXPECT_FALSE(d.unsat);
  ASSERT_TRUE(d.weight);
  EXPECT_EQ(print_atom(*d.weight, p), "w(x) + 1 = w(y) + 1");
  ASSERT_EQ(d.options.size(), 1u);
  EXPECT_TRUE(d.options[0].empty());

  EXPECT_TRUE(lex_decompose(p, t("s(x)"), t("g(y)")).unsat);

  d = lex_decompose(p, t("h(x1,x2)"), t("h(y1,y2)"));
  EXPECT_FALSE(d.unsat);
  ASSERT_EQ(d.options.size(), 2u);
  ASSERT_EQ(d.options[0].size(), 1u);
  EXPECT_EQ(print_atom(d.options[0][0], p), "x1 > y1");
  ASSERT_EQ(d.options[1].size(), 2u);
  EXPECT_EQ(print_atom(d.options[1][0], p), "x1 = y1");
  EXPECT_EQ(print_atom(d.options[1][1], p), "x2 > y2");

  auto p3 = sig(kbo::testing::kSig3);
  EXPECT_TRUE(lex_decompose(p3, parse_term("a", p3), parse_term("f(b)", p3)).unsat);
  d = lex_decompose(p3, parse_term("f(b)", p3), parse_term("a", p3));
  EXPECT_FALSE(d.unsat);
}

TEST(Discharge, Examples) {
  auto p = sig(kbo::testing::kSig1);
  auto run = [&](const std::string& e, std::vector<std::string> old) {
    std::vector<Discharge> out;
    discharge_variables(p, term_atoms(p, e), old, {}, {}, [&](const Discharge& d) {
      out.push_back(d);
      return true;
    });
    return out;
  };
  auto blue = run("u = v", {"v"});
  ASSERT_EQ(blue.size(), 1u);
  ASSERT_EQ(blue[0].triang.size(), 1u);
  EXPECT_EQ(blue[0].triang[0].var, "u");
  EXPECT_EQ(to_string(p, blue[0].triang[0].term), "v");

  auto green = run("u1 > u2", {});
  ASSERT_EQ(green.size(), 2u);
  EXPECT_EQ(green[0].simp.size() + green[1].simp.size(), 1u);
  EXPECT_EQ(green[0].arith.size() + green[1].arith.size(), 1u);

  auto red = run("u > v", {"v"});
  ASSERT_EQ(red.size(), 1u);
  ASSERT_EQ(red[0].red.size(), 1u);
  EXPECT_TRUE(red[0].simp.empty());

  EXPECT_TRUE(run("u = v & u > v", {"v"}).empty());
}

TEST(Isolate, SmallChains) {
  auto p = sig(kbo::testing::kSig1);
  EXPECT_EQ(printed(p, isolate_text(p, "x >w y")),
            (std::vector<std::string>{"arith: w(x) > w(y); triang:; simp:"}));
  EXPECT_EQ(printed(p, isolate_text(p, "x >lex y")),
            (std::vector<std::string>{"arith:; triang:; simp: x >lex y"}));
  EXPECT_EQ(printed(p, isolate_text(p, "")), (std::vector<std::string>{"arith:; triang:; simp:"}));
}

TEST(Isolate, SameHeadRowSplitsArguments) {
  auto p = sig(kbo::testing::kSig2);
  auto forms = isolate_text(p, "g(x) >lex g(y)");
  ASSERT_FALSE(forms.empty());
  for (const auto& f : forms) {
    std::string why;
    EXPECT_TRUE(check_isolated(f, &why)) << why;
  }
}

TEST(Isolate, TraceNamesSteps) {
  auto p = sig(kbo::testing::kSig2);
  std::vector<std::string> lines;
  IsolateOptions opts;
  opts.trace = [&](const std::string& s) { lines.push_back(s); };
  FreshNames names;
  auto c = to_dnf_constraints(parse_formula("h(x,y) >lex g(z)", p), true).front();
  isolate_constraint(p, c, names, opts, [](const IsolatedForm&) { return true; });
  auto has = [&](const std::string& prefix) {
    return std::any_of(lines.begin(), lines.end(), [&](const std::string& l) { return l.rfind(prefix, 0) == 0; });
  };
  EXPECT_TRUE(has("flatten:"));
  EXPECT_TRUE(has("chain:"));
  EXPECT_TRUE(has("lex-split:"));
  EXPECT_TRUE(has("isolated:"));
}

TEST(Isolate, ResourceLimit) {
  auto p = sig(kbo::testing::kSig2);
  IsolateOptions opts;
  opts.max_steps = 3;
  FreshNames names;
  auto c = to_dnf_constraints(parse_formula("h(x,y) >lex g(z) & z > y", p), true).front();
  EXPECT_THROW(isolate_constraint(p, c, names, opts, [](const IsolatedForm&) { return true; }), Error);
}

// Over a small universe: every solution of C extends to some isolated form,
// and every isolated-form solution restricted to C's variables solves C.
TEST(Isolate, SolutionSetsMatchOracle) {
  std::mt19937_64 rng(17);
  struct Case {
    const char* sig;
    Weight weight;
    std::vector<std::string> pool;
  };
  std::vector<Case> cases = {
      {kbo::testing::kSig1, 7, {"x", "y", "z", "a", "g(x,y)", "g(y,x)", "g(x,a)", "g(g(x,y),z)"}},
      {kbo::testing::kSig2, 3, {"x", "y", "z", "c", "g(x)", "s(y)", "h(x,y)", "h(y,x)", "g(s(x))"}},
  };
  const char* rels[] = {">", ">w", ">lex", "="};
  for (const auto& cs : cases) {
    auto p = sig(cs.sig);
    auto universe = enum_terms(p, {cs.weight, 0});
    auto wide = enum_terms(p, {cs.weight + 4, 0});
    for (int round = 0; round < 25; ++round) {
      std::string text;
      int n = 1 + static_cast<int>(rng() % 2);
      for (int i = 0; i < n; ++i) {
        if (i) text += " & ";
        text += cs.pool[rng() % cs.pool.size()] + " " + rels[rng() % 4] + " " + cs.pool[rng() % cs.pool.size()];
      }
      Formula f = parse_formula(text, p);
      auto forms = isolate_text(p, text);
      for (const auto& form : forms) {
        std::string why;
        ASSERT_TRUE(check_isolated(form, &why)) << text << ": " << why;
      }
      auto vars = vars_of(f);
      for_each_solution(f, p, universe, vars, [&](const Substitution& theta) {
        bool ok = std::any_of(forms.begin(), forms.end(),
                              [&](const IsolatedForm& form) { return extends(p, form, theta, wide); });
        EXPECT_TRUE(ok) << text;
        return ok;
      });
      // Soundness on the forms' own small solutions.
      for (const auto& form : forms) {
        Formula ff = Formula::from_constraint(isolated_constraint(form));
        auto fv = vars_of(ff);
        for (const auto& v : vars) {
          if (std::find(fv.begin(), fv.end(), v) == fv.end()) fv.push_back(v);
        }
        if (fv.size() > 5) continue;
        for_each_solution(ff, p, universe, fv, [&](const Substitution& s) {
          bool ok = evaluate(f, p, s);
          EXPECT_TRUE(ok) << text << " / " << print_isolated(form, p);
          return ok;
        });
      }
    }
  }
}
