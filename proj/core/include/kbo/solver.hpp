#pragma once

// End-to-end satisfiability with verified witnesses.

#include <optional>
#include <string>
#include <vector>

#include "kbo/counting.hpp"
#include "kbo/isolation.hpp"

namespace kbo {

struct Verdict {
  bool sat = false;
  /// Grounding for every variable of the input formula when sat.
  Substitution witness;
};

struct SolveOptions {
  /// Cap on isolation steps and on arithmetic systems tried; exceeding it
  /// throws ResourceLimit rather than answering UNSAT.
  std::size_t max_branches = 1'000'000;
  LiaOptions lia;
  ChainOptions chain;
  /// Use the polynomial procedure for constants-only signatures when a
  /// disjunct only has `>` and `=` atoms.
  bool constants_fast_path = true;
  TraceSink trace;
};

struct SolveStats {
  std::size_t constraints = 0;
  std::size_t isolated_forms = 0;
  std::size_t systems = 0;
};

Verdict solve(const Formula& f, const KboParams& params, const SolveOptions& opts = {},
              SolveStats* stats = nullptr);

/// The arithmetic meaning of an isolated form: its arith part, |y| = |t| for
/// each triang entry, equal weights plus at_least_N along each simple chain,
/// at_least_1 for every other non-dependent variable (including `scope`).
/// Weight variables are named `|x|`.
ArithFormula reduce_isolated(const IsolatedForm& form, const KboParams& params,
                             const std::vector<std::string>& scope = {});

/// Ground terms for the variables of the form from a solution of
/// reduce_isolated: the least terms of the given weights, simple chains
/// filled with distinct terms in descending order, dependents by
/// substitution.
Substitution construct_witness(const IsolatedForm& form, const Assignment& weights, const KboParams& params,
                               const std::vector<std::string>& scope = {});

/// First k ground terms of weight w in ascending KBO order (fewer if fewer
/// exist).
std::vector<Term> terms_of_weight(const KboParams& params, Weight w, std::size_t k);

/// Polynomial procedure for signatures of constants only. Throws
/// WrongSignatureClass on other signatures and InvalidArgument when a
/// disjunct uses >w, >lex or weight atoms.
Verdict solve_constants_only(const Formula& f, const KboParams& params);

}  // namespace kbo
