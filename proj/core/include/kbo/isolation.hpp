#pragma once

// Row-by-row elimination of a chain into isolated forms
//   arith  /\  y1 = t1 /\ ... /\ yn = tn  /\  simple >lex chains of variables.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kbo/chaining.hpp"

namespace kbo {

struct TriangEntry {
  std::string var;
  Term term;
  friend bool operator==(const TriangEntry&, const TriangEntry&) = default;
};

struct IsolatedForm {
  std::vector<ArithAtom> arith;
  /// y_i does not occur in t_j for j >= i; later entries never mention
  /// earlier dependents, so evaluation runs back to front.
  std::vector<TriangEntry> triang;
  /// Each chain x1 >lex x2 >lex ... of pairwise different variables.
  std::vector<std::vector<std::string>> simp;
};

std::string print_isolated(const IsolatedForm& f, const KboParams& params);
bool check_isolated(const IsolatedForm& f, std::string* why = nullptr);
/// The form as a plain constraint (for checking against the oracle).
Constraint isolated_constraint(const IsolatedForm& f);
/// Extends `free_values` (values of all non-dependent variables) with the
/// dependents.
Substitution resolve_triang(const std::vector<TriangEntry>& triang, Substitution free_values);
/// Variables that are dependent in triang.
std::vector<std::string> dependents(const IsolatedForm& f);

struct WorkingConstraint {
  Chain chain;
  std::vector<ArithAtom> arith;
  std::vector<TriangEntry> triang;
  std::vector<std::vector<std::string>> simp;
};

using TraceSink = std::function<void(const std::string&)>;

struct IsolateOptions {
  ChainOptions chain;
  /// Steps (row eliminations plus branch points) before ResourceLimit.
  std::size_t max_steps = 1'000'000;
  TraceSink trace;
};

/// Drops repeated first-row variables joined by `=` and returns nullopt when
/// some first-row variable also occurs lower down, or occurs inside a
/// first-row term other than as f(y) strictly above y with a >lex between.
std::optional<Chain> first_row_cleanup(const KboParams& params, Chain c);

/// Removes every `=` link from the first row, moving the equalities into
/// triang and substituting them everywhere in the chain. False when the row
/// is unsatisfiable (symbol clash or occurs check).
bool eliminate_row_equalities(const KboParams& params, WorkingConstraint& w,
                              const TraceSink& trace = {});

/// Substitutions x := f^m(g(y1..yk)) for the variable `x`, g != f in
/// precedence-descending order, m = 0..max_f (only m = 0 without f), fresh
/// y's. Returns false if the visitor stopped.
bool guess_shapes(const KboParams& params, const std::string& x, std::size_t max_f, FreshNames& names,
                  const std::function<bool(const Term&)>& visit);

/// s >lex t for s = f^k(g(xs)), t = f^m(h(ys)) with g, h != f.
struct LexDecomposition {
  bool unsat = false;
  /// |s| = |t|, omitted when syntactically trivial.
  std::optional<ArithAtom> weight;
  /// Disjunction of conjunctions of variable atoms (`=` and `>`); a single
  /// empty conjunction means no further condition.
  std::vector<std::vector<TermAtom>> options;
};
LexDecomposition lex_decompose(const KboParams& params, const Term& s, const Term& t);

/// Result of settling the variable constraints E left over by a row.
struct Discharge {
  std::vector<TriangEntry> triang;
  std::vector<std::vector<std::string>> simp;
  std::vector<ArithAtom> arith;
  /// Atoms over old variables or variables linked to them; they go back into
  /// the chain.
  std::vector<TermAtom> red;
};

/// Equalities touching old variables are substituted (blue), components
/// without old variables are chained into simp/arith (green, one result per
/// chain), the rest is returned as red atoms. `ctx` is used for pruning.
bool discharge_variables(const KboParams& params, const std::vector<TermAtom>& E,
                         const std::vector<std::string>& old_vars, const WeightContext& ctx,
                         const ChainOptions& opts, const std::function<bool(const Discharge&)>& visit);

using IsolatedVisitor = std::function<bool(const IsolatedForm&)>;

/// Every isolated form reachable from w. Their union is equivalent to w up
/// to f (exactly equivalent without a zero-weight unary); each emitted form
/// implies w. Returns false if the visitor stopped. Throws ResourceLimit.
bool isolate(const KboParams& params, const WorkingConstraint& w, FreshNames& names,
             const IsolateOptions& opts, const IsolatedVisitor& visit);

/// From a constraint (term atoms with any relation, arithmetic atoms):
/// split, flatten, chain and isolate.
bool isolate_constraint(const KboParams& params, const Constraint& c, FreshNames& names,
                        const IsolateOptions& opts, const IsolatedVisitor& visit);

}  // namespace kbo
