#include "kbo/formula.hpp"

#include <algorithm>
#include <unordered_set>

namespace kbo {

// ---------------------------------------------------------------------------
// Construction

Formula Formula::atom(Atom a) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Atom;
  n->atom = std::move(a);
  return Formula(std::move(n));
}

Formula Formula::negate(Formula f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Not;
  n->children.push_back(std::move(f));
  return Formula(std::move(n));
}

Formula Formula::conj(std::vector<Formula> parts) {
  if (parts.size() == 1) return std::move(parts.front());
  auto n = std::make_shared<Node>();
  n->kind = Kind::And;
  n->children = std::move(parts);
  return Formula(std::move(n));
}

Formula Formula::disj(std::vector<Formula> parts) {
  if (parts.size() == 1) return std::move(parts.front());
  auto n = std::make_shared<Node>();
  n->kind = Kind::Or;
  n->children = std::move(parts);
  return Formula(std::move(n));
}

Formula Formula::from_constraint(const Constraint& c) {
  std::vector<Formula> parts;
  parts.reserve(c.size());
  for (const auto& a : c) parts.push_back(atom(a));
  return conj(std::move(parts));
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  if (a.kind() == Formula::Kind::Atom) return a.as_atom() == b.as_atom();
  return a.children() == b.children();
}

// ---------------------------------------------------------------------------
// Printing

std::string print_weight_expr(const WeightExpr& e) {
  std::string out;
  for (const auto& [v, c] : e.coeffs) {
    for (Weight i = 0; i < c; ++i) {
      if (!out.empty()) out += " + ";
      out += "w(" + v + ")";
    }
  }
  if (e.constant != 0 || out.empty()) {
    if (!out.empty()) out += " + ";
    out += std::to_string(e.constant);
  }
  return out;
}

std::string print_atom(const Atom& a, const KboParams& params) {
  if (const auto* t = std::get_if<TermAtom>(&a)) {
    const char* rel = ">";
    switch (t->rel) {
      case TermRel::Succ: rel = ">"; break;
      case TermRel::EqTA: rel = "="; break;
      case TermRel::SuccW: rel = ">w"; break;
      case TermRel::SuccLex: rel = ">lex"; break;
    }
    return to_string(params, t->left) + " " + rel + " " + to_string(params, t->right);
  }
  const auto& r = std::get<ArithAtom>(a);
  const char* rel = r.rel == ArithRel::Gt ? ">" : r.rel == ArithRel::Ge ? ">=" : "=";
  return print_weight_expr(r.left) + " " + rel + " " + print_weight_expr(r.right);
}

namespace {

void print_rec(const Formula& f, const KboParams& params, std::string& out);

void print_child(const Formula& child, bool parens, const KboParams& params, std::string& out) {
  if (parens) out += '(';
  print_rec(child, params, out);
  if (parens) out += ')';
}

void print_rec(const Formula& f, const KboParams& params, std::string& out) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Atom:
      out += print_atom(f.as_atom(), params);
      return;
    case K::Not: {
      const auto& c = f.children().front();
      out += '!';
      print_child(c, c.kind() == K::And || c.kind() == K::Or, params, out);
      return;
    }
    case K::And:
    case K::Or: {
      const bool is_and = f.kind() == K::And;
      for (std::size_t i = 0; i < f.children().size(); ++i) {
        if (i) out += is_and ? " & " : " | ";
        const auto& c = f.children()[i];
        bool parens = c.kind() == K::Or || (c.kind() == K::And && is_and) ||
                      (c.kind() == K::And && c.children().size() < 2);
        print_child(c, parens, params, out);
      }
      return;
    }
  }
}

}  // namespace

std::string print_formula(const Formula& f, const KboParams& params) {
  std::string out;
  print_rec(f, params, out);
  return out;
}

// ---------------------------------------------------------------------------
// Variables

namespace {

// Variables in order of first occurrence; the set keeps long formulas linear.
struct VarList {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  void add(const std::string& v) {
    if (seen.insert(v).second) out.push_back(v);
  }
};

void add_atom_vars(const Atom& a, VarList& vars) {
  if (const auto* t = std::get_if<TermAtom>(&a)) {
    for (const auto& v : vars_of(t->left)) vars.add(v);
    for (const auto& v : vars_of(t->right)) vars.add(v);
  } else {
    const auto& r = std::get<ArithAtom>(a);
    for (const auto& [v, c] : r.left.coeffs) vars.add(v);
    for (const auto& [v, c] : r.right.coeffs) vars.add(v);
  }
}

void add_formula_vars(const Formula& f, VarList& vars) {
  if (f.kind() == Formula::Kind::Atom) {
    add_atom_vars(f.as_atom(), vars);
    return;
  }
  for (const auto& c : f.children()) add_formula_vars(c, vars);
}

}  // namespace

std::vector<std::string> vars_of(const Formula& f) {
  VarList vars;
  add_formula_vars(f, vars);
  return std::move(vars.out);
}

std::vector<std::string> vars_of(const Constraint& c) {
  VarList vars;
  for (const auto& a : c) add_atom_vars(a, vars);
  return std::move(vars.out);
}

// ---------------------------------------------------------------------------
// Negation elimination

namespace {

Formula term_atom(Term l, Term r, TermRel rel) {
  return Formula::atom(TermAtom{std::move(l), std::move(r), rel});
}

Formula arith_atom(WeightExpr l, WeightExpr r, ArithRel rel) {
  return Formula::atom(ArithAtom{std::move(l), std::move(r), rel});
}

Formula negate_atom(const Atom& a, const KboParams& params) {
  if (const auto* t = std::get_if<TermAtom>(&a)) {
    const Term& s = t->left;
    const Term& r = t->right;
    switch (t->rel) {
      case TermRel::Succ:
        return Formula::disj({term_atom(s, r, TermRel::EqTA), term_atom(r, s, TermRel::Succ)});
      case TermRel::EqTA:
        return Formula::disj({term_atom(s, r, TermRel::Succ), term_atom(r, s, TermRel::Succ)});
      case TermRel::SuccW: {
        // not |s| > |r|  <=>  r >w s  or  |s| = |r|
        WeightExpr ws = weight_of(params, s);
        WeightExpr wr = weight_of(params, r);
        return Formula::disj({term_atom(r, s, TermRel::SuccW),
                              arith_atom(std::move(ws), std::move(wr), ArithRel::Eq)});
      }
      case TermRel::SuccLex:
        return Formula::disj({term_atom(s, r, TermRel::SuccW), term_atom(s, r, TermRel::EqTA),
                              term_atom(r, s, TermRel::Succ)});
    }
  }
  const auto& r = std::get<ArithAtom>(a);
  switch (r.rel) {
    case ArithRel::Gt:
      return Formula::disj({arith_atom(r.left, r.right, ArithRel::Eq),
                            arith_atom(r.right, r.left, ArithRel::Gt)});
    case ArithRel::Ge:
      return arith_atom(r.right, r.left, ArithRel::Gt);
    case ArithRel::Eq:
      return Formula::disj({arith_atom(r.left, r.right, ArithRel::Gt),
                            arith_atom(r.right, r.left, ArithRel::Gt)});
  }
  return Formula::atom(a);
}

Formula nnf(const Formula& f, bool negated, const KboParams& params) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Atom:
      return negated ? negate_atom(f.as_atom(), params) : f;
    case K::Not:
      return nnf(f.children().front(), !negated, params);
    case K::And:
    case K::Or: {
      std::vector<Formula> parts;
      for (const auto& c : f.children()) parts.push_back(nnf(c, negated, params));
      const bool make_and = (f.kind() == K::And) != negated;
      if (parts.empty()) {
        // Empty conjunction is true; keep its shape so negation stays visible.
        return make_and ? Formula::conj({}) : Formula::disj({});
      }
      return make_and ? Formula::conj(std::move(parts)) : Formula::disj(std::move(parts));
    }
  }
  return f;
}

}  // namespace

Formula eliminate_negations(const Formula& f, const KboParams& params) {
  return nnf(f, false, params);
}

// ---------------------------------------------------------------------------
// DNF

namespace {

bool trivially_false(const Atom& a) {
  if (const auto* t = std::get_if<TermAtom>(&a)) {
    return t->rel != TermRel::EqTA && t->left == t->right;
  }
  const auto& r = std::get<ArithAtom>(a);
  if (!r.left.is_constant() || !r.right.is_constant()) return false;
  switch (r.rel) {
    case ArithRel::Gt: return !(r.left.constant > r.right.constant);
    case ArithRel::Ge: return !(r.left.constant >= r.right.constant);
    case ArithRel::Eq: return r.left.constant != r.right.constant;
  }
  return false;
}

bool trivially_true(const Atom& a) {
  if (const auto* t = std::get_if<TermAtom>(&a)) {
    return t->rel == TermRel::EqTA && t->left == t->right;
  }
  const auto& r = std::get<ArithAtom>(a);
  return r.left.is_constant() && r.right.is_constant() && !trivially_false(a);
}

struct DnfWalker {
  bool split;
  const ConstraintVisitor& visit;
  Constraint acc;

  bool go(std::vector<Formula> work) {
    while (!work.empty()) {
      Formula f = std::move(work.back());
      work.pop_back();
      switch (f.kind()) {
        case Formula::Kind::Atom: {
          const Atom& a = f.as_atom();
          if (trivially_false(a)) return true;
          if (trivially_true(a)) break;
          const auto* t = std::get_if<TermAtom>(&a);
          if (split && t && t->rel == TermRel::Succ) {
            for (TermRel r : {TermRel::SuccW, TermRel::SuccLex}) {
              auto next = work;
              next.push_back(Formula::atom(TermAtom{t->left, t->right, r}));
              if (!go(std::move(next))) return false;
            }
            return true;
          }
          acc.push_back(a);
          bool cont = go(std::move(work));
          acc.pop_back();
          return cont;
        }
        case Formula::Kind::And:
          for (auto it = f.children().rbegin(); it != f.children().rend(); ++it) work.push_back(*it);
          break;
        case Formula::Kind::Or: {
          for (const auto& c : f.children()) {
            auto next = work;
            next.push_back(c);
            if (!go(std::move(next))) return false;
          }
          return true;
        }
        case Formula::Kind::Not:
          throw Error(ErrorCode::InvalidArgument, "DNF expects a negation-free formula");
      }
    }
    return visit(acc);
  }
};

}  // namespace

bool for_each_dnf_constraint(const Formula& f, bool split_succ, const ConstraintVisitor& visit) {
  DnfWalker w{split_succ, visit, {}};
  return w.go({f});
}

std::vector<Constraint> to_dnf_constraints(const Formula& f, bool split_succ) {
  std::vector<Constraint> out;
  for_each_dnf_constraint(f, split_succ, [&](const Constraint& c) {
    out.push_back(c);
    return true;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

std::optional<Weight> var_weight(const KboParams& params, const Substitution& subst,
                                 const std::string& v) {
  auto it = subst.find(v);
  if (it == subst.end() || !it->second.is_ground()) return std::nullopt;
  return ground_weight(params, it->second);
}

std::optional<Weight> eval_weight(const WeightExpr& e, const KboParams& params,
                                  const Substitution& subst) {
  Weight total = e.constant;
  for (const auto& [v, c] : e.coeffs) {
    auto w = var_weight(params, subst, v);
    if (!w) return std::nullopt;
    total += c * *w;
  }
  return total;
}

std::optional<bool> eval_atom(const Atom& a, const KboParams& params, const Substitution& subst) {
  if (const auto* t = std::get_if<TermAtom>(&a)) {
    Term l = apply(subst, t->left);
    Term r = apply(subst, t->right);
    if (!l.is_ground() || !r.is_ground()) return std::nullopt;
    switch (t->rel) {
      case TermRel::EqTA: return l == r;
      case TermRel::Succ: return kbo_compare(params, l, r) == Order::GT;
      case TermRel::SuccW: return ground_weight(params, l) > ground_weight(params, r);
      case TermRel::SuccLex:
        return ground_weight(params, l) == ground_weight(params, r) &&
               kbo_compare(params, l, r) == Order::GT;
    }
  }
  const auto& r = std::get<ArithAtom>(a);
  auto lw = eval_weight(r.left, params, subst);
  auto rw = eval_weight(r.right, params, subst);
  if (!lw || !rw) return std::nullopt;
  switch (r.rel) {
    case ArithRel::Gt: return *lw > *rw;
    case ArithRel::Ge: return *lw >= *rw;
    case ArithRel::Eq: return *lw == *rw;
  }
  return std::nullopt;
}

}  // namespace

std::optional<bool> evaluate_partial(const Formula& f, const KboParams& params,
                                     const Substitution& subst) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Atom: return eval_atom(f.as_atom(), params, subst);
    case K::Not: {
      auto v = evaluate_partial(f.children().front(), params, subst);
      if (!v) return std::nullopt;
      return !*v;
    }
    case K::And:
    case K::Or: {
      const bool is_and = f.kind() == K::And;
      bool unknown = false;
      for (const auto& c : f.children()) {
        auto v = evaluate_partial(c, params, subst);
        if (!v) {
          unknown = true;
        } else if (*v != is_and) {
          return !is_and;
        }
      }
      if (unknown) return std::nullopt;
      return is_and;
    }
  }
  return std::nullopt;
}

bool evaluate(const Formula& f, const KboParams& params, const Substitution& subst) {
  auto v = evaluate_partial(f, params, subst);
  if (!v) throw Error(ErrorCode::InvalidArgument, "substitution is not grounding");
  return *v;
}

bool evaluate(const Atom& a, const KboParams& params, const Substitution& subst) {
  auto v = eval_atom(a, params, subst);
  if (!v) throw Error(ErrorCode::InvalidArgument, "substitution is not grounding");
  return *v;
}

bool evaluate(const Constraint& c, const KboParams& params, const Substitution& subst) {
  return std::all_of(c.begin(), c.end(),
                     [&](const Atom& a) { return evaluate(a, params, subst); });
}

}  // namespace kbo
