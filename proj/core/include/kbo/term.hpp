#pragma once

// Signatures, KBO parameters, terms, weights and the ground comparator.

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kbo/error.hpp"

namespace kbo {

using Weight = std::int64_t;
using SymbolId = std::uint32_t;

struct Symbol {
  std::string name;
  unsigned arity = 0;
  Weight weight = 0;
};

/// Unvalidated signature as read from a file or built by hand.
struct RawSignature {
  std::vector<Symbol> symbols;
  /// Symbol names, greatest first.
  std::vector<std::string> precedence;
};

/// A validated weight function and compatible total precedence.
///
/// Symbols keep their declaration order; that order is the fixed
/// enumeration used to index Contents vectors.
class KboParams {
 public:
  std::size_t size() const { return symbols_.size(); }
  const Symbol& symbol(SymbolId id) const { return symbols_.at(id); }
  const std::vector<Symbol>& symbols() const { return symbols_; }
  std::optional<SymbolId> find(std::string_view name) const;
  SymbolId id_of(std::string_view name) const;  // throws UnknownSymbol

  /// Precedence rank; larger means greater.
  unsigned rank(SymbolId id) const { return rank_.at(id); }
  bool greater(SymbolId a, SymbolId b) const { return rank_.at(a) > rank_.at(b); }
  /// Symbols ordered greatest first.
  const std::vector<SymbolId>& by_precedence() const { return by_precedence_; }

  /// The zero-weight unary symbol, when the signature has one.
  std::optional<SymbolId> zero_unary() const { return zero_unary_; }
  bool is_zero_unary(SymbolId id) const { return zero_unary_ && *zero_unary_ == id; }

  bool constants_only() const;
  Weight min_constant_weight() const;

 private:
  friend KboParams validate_params(const RawSignature& raw);
  std::vector<Symbol> symbols_;
  std::vector<unsigned> rank_;
  std::vector<SymbolId> by_precedence_;
  std::unordered_map<std::string, SymbolId> index_;
  std::optional<SymbolId> zero_unary_;
};

/// Checks every condition on the weight function and precedence and throws an
/// Error listing all violations, or returns the validated parameters.
KboParams validate_params(const RawSignature& raw);

/// Reads `symbol <name> <arity> <weight>` / `precedence a > b > ...` lines.
RawSignature parse_signature(std::string_view text);
KboParams load_signature(std::string_view text);
KboParams load_signature_file(const std::string& path);
std::string print_signature(const KboParams& params);

/// Immutable first-order term with shared structure. Variables are named;
/// applications refer to symbols by id.
class Term {
 public:
  static Term var(std::string name);
  static Term app(SymbolId symbol, std::vector<Term> args = {});

  bool is_var() const { return node_->is_var; }
  const std::string& var_name() const { return node_->name; }
  SymbolId symbol() const { return node_->symbol; }
  std::span<const Term> args() const { return node_->args; }
  const Term& arg(std::size_t i) const { return node_->args.at(i); }
  std::size_t arity() const { return node_->args.size(); }

  bool is_ground() const { return node_->ground; }
  /// Number of symbol and variable occurrences.
  std::size_t size() const { return node_->size; }
  std::size_t hash() const { return node_->hash; }

  friend bool operator==(const Term& a, const Term& b);
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  struct Node {
    bool is_var = false;
    std::string name;
    SymbolId symbol = 0;
    std::vector<Term> args;
    bool ground = true;
    std::size_t size = 1;
    std::size_t hash = 0;
  };
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

/// Builds `f^n(t)`.
Term wrap(SymbolId symbol, std::size_t times, Term t);

void collect_vars(const Term& t, std::vector<std::string>& out);
std::vector<std::string> vars_of(const Term& t);
bool occurs(const std::string& var, const Term& t);

/// Checks arities against the signature. Throws ArityMismatch / UnknownSymbol.
void check_term(const KboParams& params, const Term& t);

std::string to_string(const KboParams& params, const Term& t);

/// Linear weight expression `constant + sum coeff(x) * |x|`.
struct WeightExpr {
  Weight constant = 0;
  std::map<std::string, Weight> coeffs;

  WeightExpr& operator+=(const WeightExpr& other);
  friend WeightExpr operator+(WeightExpr a, const WeightExpr& b) { return a += b; }
  friend bool operator==(const WeightExpr&, const WeightExpr&) = default;

  bool is_constant() const { return coeffs.empty(); }
  /// Evaluates with per-variable weights; throws if a variable is missing.
  Weight evaluate(const std::map<std::string, Weight>& var_weights) const;
};

WeightExpr weight_of(const KboParams& params, const Term& t);
/// Weight of a ground term.
Weight ground_weight(const KboParams& params, const Term& t);

enum class Order { LT, EQ, GT };
const char* order_name(Order o);

/// The Knuth-Bendix order on ground terms. EQ only on syntactic equality.
Order kbo_compare(const KboParams& params, const Term& s, const Term& t);

struct FMetrics {
  std::size_t height_s = 0;
  std::size_t height_t = 0;
  std::int64_t distance = 0;
};

std::size_t f_height(const KboParams& params, const Term& t);
/// Strips the outermost f-tower.
const Term& f_base(const KboParams& params, const Term& t);
FMetrics f_metrics(const KboParams& params, const Term& s, const Term& t);

/// Per-symbol occurrence counts in declaration order.
struct Contents {
  std::vector<Weight> counts;
  friend bool operator==(const Contents&, const Contents&) = default;
};

Contents contents_of(const KboParams& params, const Term& t);

using Substitution = std::map<std::string, Term>;

Term apply(const Substitution& subst, const Term& t);
/// Replaces a single variable.
Term replace_var(const Term& t, const std::string& var, const Term& by);

}  // namespace kbo
