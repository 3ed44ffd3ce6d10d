#pragma once

// Signatures and random generators shared by unit and acceptance tests.

#include <random>
#include <string>
#include <vector>

#include "kbo/term.hpp"

namespace kbo::testing {

inline const char* kSig1 =
    "symbol g 2 1\n"
    "symbol a 0 1\n"
    "precedence g > a\n";

// Also the signature the Diophantine encoding targets.
inline const char* kSig2 =
    "symbol h 2 1\n"
    "symbol g 1 1\n"
    "symbol s 1 1\n"
    "symbol c 0 1\n"
    "precedence h > g > s > c\n";

inline const char* kSig3 =
    "symbol f 1 0\n"
    "symbol a 0 1\n"
    "symbol b 0 2\n"
    "precedence f > a > b\n";

inline const char* kSig4 =
    "symbol c1 0 1\n"
    "symbol c2 0 1\n"
    "symbol c3 0 1\n"
    "precedence c3 > c2 > c1\n";

// A branching signature with weight-2 symbols.
inline const char* kSigHeavy =
    "symbol g 3 2\n"
    "symbol a 0 1\n"
    "precedence g > a\n";

// Unary-only: one positive unary plus constants.
inline const char* kSigUnary =
    "symbol s 1 2\n"
    "symbol a 0 1\n"
    "symbol b 0 3\n"
    "precedence s > b > a\n";

inline KboParams sig(const char* text) { return load_signature(text); }

inline std::vector<const char*> all_sigs() { return {kSig1, kSig2, kSig3, kSig4}; }

/// Random ground term with at most `depth` levels; leaves are constants.
inline Term random_ground(const KboParams& p, std::mt19937_64& rng, int depth) {
  std::vector<SymbolId> consts, funs;
  for (SymbolId i = 0; i < p.size(); ++i) {
    (p.symbol(i).arity == 0 ? consts : funs).push_back(i);
  }
  std::uniform_int_distribution<int> coin(0, 2);
  if (depth <= 0 || funs.empty() || coin(rng) == 0) {
    return Term::app(consts[std::uniform_int_distribution<std::size_t>(0, consts.size() - 1)(rng)]);
  }
  SymbolId g = funs[std::uniform_int_distribution<std::size_t>(0, funs.size() - 1)(rng)];
  std::vector<Term> args;
  for (unsigned i = 0; i < p.symbol(g).arity; ++i) args.push_back(random_ground(p, rng, depth - 1));
  return Term::app(g, std::move(args));
}

}  // namespace kbo::testing
