#pragma once

// How many ground terms have a given weight: contents equations, the
// thresholds past which counts are 0 or large, the truncated count, and
// Presburger formulas expressing "at least N terms of weight x".

#include <string>
#include <utility>

#include "kbo/lia.hpp"
#include "kbo/term.hpp"

namespace kbo {

struct SignatureStats {
  std::size_t S = 0;  // symbols
  std::size_t B = 0;  // arity >= 2
  std::size_t F = 0;  // non-constants
  Weight W = 0;       // max weight
  unsigned A = 0;     // max arity
};

SignatureStats signature_stats(const KboParams& params);

enum class SignatureClass {
  ZeroWeightUnary,  // has f: every weight class is empty or infinite
  ConstantsOnly,
  UnaryOnly,        // one positive-weight unary plus constants
  Branching,        // a symbol of arity >= 2, or two distinct unaries
};

SignatureClass classify(const KboParams& params);
const char* class_name(SignatureClass c);

/// x = sum w(g_i) n_i  and  1 + sum (arity_i - 1) n_i = 0. The count
/// variables are named `<prefix><symbol>`.
LinSystem exists_system(const KboParams& params, const LinExpr& x, const std::string& prefix);

/// (N1, N2) = (W*A, W^2*(A+1) + W). Branching signatures only.
std::pair<Weight, Weight> thresholds(const KboParams& params);

/// min(N, number of ground terms of weight M). Branching signatures only.
Weight tnt(Weight N, Weight M, const KboParams& params);

/// Formula over the weight expression x (plus fresh existential variables
/// named with `prefix`) true iff at least N ground terms have weight x.
ArithFormula at_least(Weight N, const KboParams& params, const LinExpr& x,
                      const std::string& prefix = "~n.");

}  // namespace kbo
