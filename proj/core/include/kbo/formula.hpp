#pragma once

// Ordering-constraint formulas over the two-sorted structure of terms and
// natural-number weights.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "kbo/term.hpp"

namespace kbo {

/// `>`, `=`, `>w`, `>lex`.
enum class TermRel { Succ, EqTA, SuccW, SuccLex };
/// `>`, `>=`, `=` between weight expressions.
enum class ArithRel { Gt, Ge, Eq };

struct TermAtom {
  Term left;
  Term right;
  TermRel rel = TermRel::Succ;
  friend bool operator==(const TermAtom&, const TermAtom&) = default;
};

struct ArithAtom {
  WeightExpr left;
  WeightExpr right;
  ArithRel rel = ArithRel::Gt;
  friend bool operator==(const ArithAtom&, const ArithAtom&) = default;
};

using Atom = std::variant<TermAtom, ArithAtom>;

/// A conjunction of atoms.
using Constraint = std::vector<Atom>;

class Formula {
 public:
  enum class Kind { Atom, Not, And, Or };

  static Formula atom(Atom a);
  static Formula negate(Formula f);
  static Formula conj(std::vector<Formula> parts);
  static Formula disj(std::vector<Formula> parts);
  static Formula from_constraint(const Constraint& c);

  Kind kind() const { return node_->kind; }
  const Atom& as_atom() const { return *node_->atom; }
  const std::vector<Formula>& children() const { return node_->children; }

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node {
    Kind kind = Kind::Atom;
    std::optional<Atom> atom;
    std::vector<Formula> children;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Parses the ASCII constraint syntax. Identifiers that are not declared
/// symbols are variables. `w(t)` is the weight of `t` unless `w` is itself a
/// declared symbol.
Formula parse_formula(std::string_view text, const KboParams& params);
/// Parses a single term (used by the CLI for `compare`).
Term parse_term(std::string_view text, const KboParams& params);

std::string print_formula(const Formula& f, const KboParams& params);
std::string print_atom(const Atom& a, const KboParams& params);
std::string print_weight_expr(const WeightExpr& e);

/// Variables in order of first occurrence.
std::vector<std::string> vars_of(const Formula& f);
std::vector<std::string> vars_of(const Constraint& c);

/// Pushes negations to the leaves and removes them using totality of both
/// orders. Parameters are needed to spell out weights for negated `>w`.
Formula eliminate_negations(const Formula& f, const KboParams& params);

using ConstraintVisitor = std::function<bool(const Constraint&)>;

/// Lazily enumerates DNF branches of a NOT-free formula. With split_succ,
/// every `s > t` atom branches into `s >w t` and `s >lex t`. Branches with a
/// syntactically reflexive strict atom are skipped. Returns false when the
/// visitor stopped the enumeration.
bool for_each_dnf_constraint(const Formula& f, bool split_succ, const ConstraintVisitor& visit);
std::vector<Constraint> to_dnf_constraints(const Formula& f, bool split_succ = true);

/// Direct evaluation under a grounding substitution.
bool evaluate(const Formula& f, const KboParams& params, const Substitution& subst);
bool evaluate(const Atom& a, const KboParams& params, const Substitution& subst);
bool evaluate(const Constraint& c, const KboParams& params, const Substitution& subst);

/// Three-valued evaluation: nullopt when some needed variable is unbound.
std::optional<bool> evaluate_partial(const Formula& f, const KboParams& params,
                                     const Substitution& subst);

}  // namespace kbo
