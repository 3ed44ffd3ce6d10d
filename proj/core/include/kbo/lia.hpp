#pragma once

// Linear arithmetic over the naturals: conjunctive systems, a complete
// solver with deterministic witnesses, and DNF expansion of and/or trees.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kbo/term.hpp"

namespace kbo {

/// Integer linear expression. Same shape as WeightExpr, but coefficients and
/// the constant may be negative here.
using LinExpr = WeightExpr;

enum class LinRel { Eq, Gt, Ge };

struct LinAtom {
  LinExpr left;
  LinRel rel = LinRel::Eq;
  LinExpr right;
  friend bool operator==(const LinAtom&, const LinAtom&) = default;
};

/// Conjunction of atoms over variables ranging over N. `vars` lists
/// variables that must appear in the witness even if no atom mentions them.
struct LinSystem {
  std::vector<std::string> vars;
  std::vector<LinAtom> atoms;
};

using Assignment = std::map<std::string, Weight>;

struct LiaOptions {
  /// Nodes explored by the unbounded int64 branch-and-bound before it
  /// switches to the bounded exact search.
  std::size_t fast_node_cap = 4000;
  /// Node budget for the bounded search; exceeding it throws ResourceLimit.
  std::size_t exact_node_cap = 2'000'000;
};

/// All variables of the system, sorted by name.
std::vector<std::string> system_vars(const LinSystem& s);

bool satisfies(const LinSystem& s, const Assignment& a);

/// Lexicographically least solution in variable-name order, or nullopt.
std::optional<Assignment> solve_system(const LinSystem& s, const LiaOptions& opts = {});
/// Integer feasibility without computing the least witness.
bool feasible(const LinSystem& s, const LiaOptions& opts = {});
/// Feasibility of the rational relaxation (x >= 0 real) of the gcd-tightened
/// rows. A necessary condition for feasible(); used as a cheap filter.
bool relaxation_feasible(const LinSystem& s);

/// And/or tree over LinAtoms. The empty conjunction is true, the empty
/// disjunction false.
class ArithFormula {
 public:
  enum class Kind { Atom, And, Or };

  static ArithFormula atom(LinAtom a);
  static ArithFormula conj(std::vector<ArithFormula> parts);
  static ArithFormula disj(std::vector<ArithFormula> parts);
  static ArithFormula truth() { return conj({}); }
  static ArithFormula falsity() { return disj({}); }

  Kind kind() const { return node_->kind; }
  const LinAtom& as_atom() const { return *node_->atom; }
  const std::vector<ArithFormula>& children() const { return node_->children; }

  bool is_true() const { return kind() == Kind::And && children().empty(); }
  bool is_false() const { return kind() == Kind::Or && children().empty(); }

 private:
  struct Node {
    Kind kind = Kind::Atom;
    std::optional<LinAtom> atom;
    std::vector<ArithFormula> children;
  };
  explicit ArithFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

bool evaluate(const ArithFormula& f, const Assignment& a);

using SystemVisitor = std::function<bool(const LinSystem&)>;

/// Lazily enumerates the DNF of `f` conjoined with `base`. Variables that
/// appear only inside `f` (existential helpers) are ordinary system
/// variables. Returns false if the visitor stopped early.
bool expand_to_systems(const ArithFormula& f, const LinSystem& base, const SystemVisitor& visit);
std::vector<LinSystem> expand_to_systems(const ArithFormula& f);

std::string print_lin_atom(const LinAtom& a);
std::string print_system(const LinSystem& s);
/// `true`, `false`, atoms joined by ` & ` and ` | ` with parentheses.
std::string print_arith(const ArithFormula& f);

// Helpers for building expressions.
LinExpr lin_var(const std::string& name, Weight coeff = 1);
LinExpr lin_const(Weight c);
LinAtom lin_eq(LinExpr l, LinExpr r);
LinAtom lin_gt(LinExpr l, LinExpr r);
LinAtom lin_ge(LinExpr l, LinExpr r);

}  // namespace kbo
