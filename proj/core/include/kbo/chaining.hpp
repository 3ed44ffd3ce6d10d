#pragma once

// Flattening and chaining: turning a conjunction of term atoms into a
// disjunction of chains s1 # s2 # ... # sn, # one of >w, >lex, =.

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kbo/formula.hpp"
#include "kbo/lia.hpp"

namespace kbo {

/// A variable, or g(x1..xm) with all xi variables.
bool is_flat(const Term& t);

/// Hands out `_v<k>` names that clash with nothing reserved so far.
class FreshNames {
 public:
  FreshNames() = default;
  explicit FreshNames(const std::vector<std::string>& used) { reserve(used); }
  void reserve(const std::string& name) { used_.insert(name); }
  void reserve(const std::vector<std::string>& names) { used_.insert(names.begin(), names.end()); }
  std::string next();

 private:
  std::set<std::string> used_;
  std::size_t counter_ = 0;
};

/// Replaces every non-variable argument by a fresh variable v and adds
/// v = t for it, innermost first. Equal subterms share one variable.
std::vector<TermAtom> flatten(const std::vector<TermAtom>& atoms, FreshNames& names);

/// terms[0] is the greatest. links[i] relates terms[i] and terms[i+1] and is
/// one of SuccW, SuccLex, EqTA.
struct Chain {
  std::vector<Term> terms;
  std::vector<TermRel> links;

  bool empty() const { return terms.empty(); }
  /// Index one past the end of the first row (the first >w link, or the end).
  std::size_t first_row_end() const;
  friend bool operator==(const Chain&, const Chain&) = default;
};

/// The link atoms of the chain.
std::vector<TermAtom> chain_atoms(const Chain& c);
std::string print_chain(const Chain& c, const KboParams& params);

/// Structural conditions on a chain: terms flat and pairwise distinct, and
/// every argument of a non-variable term is itself a term of the chain.
bool is_chained(const Chain& c, std::string* why = nullptr);

/// Weight variable names used in linear systems: `|x|` for term variable x.
std::string weight_var(const std::string& term_var);
LinExpr weight_lin(const WeightExpr& e);
LinAtom weight_lin(const ArithAtom& a);

/// Weight facts known to hold alongside the chain, used for pruning.
struct WeightContext {
  std::vector<ArithAtom> arith;
  std::vector<std::pair<std::string, Term>> triang;
};

struct ChainOptions {
  /// Drop orderings that contradict facts true of all ground terms
  /// (subterm property, distinct heads, lexicographic consistency).
  bool structural_pruning = true;
  /// Drop orderings whose weight equalities/inequalities have no solution.
  bool weight_pruning = true;
};

using ChainVisitor = std::function<bool(const Chain&)>;

/// Every chain (over all terms of the atoms plus `extra_terms`, plus the
/// variables inside them) that implies the atoms. Together the chains are
/// equivalent to the conjunction. Atoms may use `>`, `>w`, `>lex`, `=` and
/// must be flat. Each labelled total preorder is produced once. Returns
/// false if the visitor stopped early.
bool chain_branches(const KboParams& params, const std::vector<TermAtom>& atoms,
                    const std::vector<Term>& extra_terms, const WeightContext& ctx,
                    const ChainOptions& opts, const ChainVisitor& visit);
std::vector<Chain> chain_branches(const KboParams& params, const std::vector<TermAtom>& atoms,
                                  const ChainOptions& opts = {});

/// Turns a constraint in which every pair of terms is compared into a chain
/// using the cycle and transitivity rules, or nullopt when they show it
/// unsatisfiable. Atoms must not use the plain `>`.
std::optional<Chain> normalize_chain(const std::vector<TermAtom>& atoms);

/// Reference route: five-way case split over every uncompared pair, then
/// normalize_chain. Exponential; meant for cross-checking small inputs.
std::vector<Chain> saturate_and_normalize(const std::vector<TermAtom>& atoms);

}  // namespace kbo
