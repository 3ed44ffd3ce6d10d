#pragma once

// Small parsing shortcuts for tests.

#include <random>
#include <string>
#include <vector>

#include "kbo/formula.hpp"

namespace kbo::testing {

/// The term atoms of a conjunction, relations kept as written.
inline std::vector<TermAtom> term_atoms(const KboParams& p, const std::string& text) {
  std::vector<TermAtom> out;
  auto cs = to_dnf_constraints(parse_formula(text, p), false);
  if (cs.empty()) return out;
  for (const auto& a : cs.front()) {
    if (const auto* t = std::get_if<TermAtom>(&a)) out.push_back(*t);
  }
  return out;
}

inline bool holds(const KboParams& p, const std::vector<TermAtom>& atoms, const Substitution& s) {
  for (const auto& a : atoms) {
    if (!evaluate(Atom{a}, p, s)) return false;
  }
  return true;
}

/// Random open term as text: variables from `vars`, at most `depth` levels.
inline std::string random_term_text(const KboParams& p, std::mt19937_64& rng, const std::vector<std::string>& vars,
                                    int depth) {
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  std::vector<SymbolId> consts, funs;
  for (SymbolId i = 0; i < p.size(); ++i) (p.symbol(i).arity == 0 ? consts : funs).push_back(i);
  int roll = static_cast<int>(pick(6));
  if (depth <= 0 || funs.empty() || roll < 3) {
    if (roll < 2 || consts.empty()) return vars[pick(vars.size())];
    if (roll == 2 || depth <= 0 || funs.empty()) return p.symbol(consts[pick(consts.size())]).name;
  }
  SymbolId g = funs[pick(funs.size())];
  std::string out = p.symbol(g).name + "(";
  for (unsigned i = 0; i < p.symbol(g).arity; ++i) {
    if (i) out += ",";
    out += random_term_text(p, rng, vars, depth - 1);
  }
  return out + ")";
}

/// Random formula with `atoms` atoms under and/or/not.
inline std::string random_formula_text(const KboParams& p, std::mt19937_64& rng, const std::vector<std::string>& vars,
                                       int atoms, int depth = 2, bool connectives = true) {
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  auto atom = [&]() {
    static const char* rels[] = {">", ">", ">w", ">lex", "="};
    if (pick(8) == 0) {
      return "w(" + random_term_text(p, rng, vars, depth) + ") > w(" + random_term_text(p, rng, vars, depth) + ")";
    }
    return random_term_text(p, rng, vars, depth) + " " + rels[pick(5)] + " " + random_term_text(p, rng, vars, depth);
  };
  std::string out = atom();
  for (int i = 1; i < atoms; ++i) {
    std::string next = atom();
    if (connectives && pick(4) == 0) next = "!(" + next + ")";
    out = (connectives && pick(3) == 0) ? "(" + out + ") | " + next : "(" + out + ") & " + next;
  }
  return out;
}

}  // namespace kbo::testing
