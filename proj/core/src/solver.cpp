#include "kbo/solver.hpp"

#include <algorithm>
#include <numeric>

namespace kbo {

// ---------------------------------------------------------------------------
// Least terms of a weight. Terms of equal weight are ordered by head
// precedence, then arguments left to right; f-terms come last and are
// ordered by their argument, so the list is: non-f terms, then f applied to
// the list, and so on.

namespace {

class TermGen {
 public:
  explicit TermGen(const KboParams& p) : p_(p) {
    for (auto it = p.by_precedence().rbegin(); it != p.by_precedence().rend(); ++it) {
      if (!p.is_zero_unary(*it)) ascending_.push_back(*it);
    }
  }

  std::vector<Term> first(Weight w, std::size_t k) {
    if (w <= 0 || k == 0) return {};
    auto key = std::make_pair(w, k);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::vector<Term> out = base(w, k);
    if (auto f = p_.zero_unary()) {
      std::vector<Term> level = out;
      while (out.size() < k && !level.empty()) {
        for (auto& t : level) t = Term::app(*f, {t});
        for (const auto& t : level) {
          if (out.size() == k) break;
          out.push_back(t);
        }
      }
    }
    memo_.emplace(key, out);
    return out;
  }

 private:
  std::vector<Term> base(Weight w, std::size_t k) {
    std::vector<Term> out;
    for (SymbolId g : ascending_) {
      if (out.size() >= k) break;
      const Symbol& s = p_.symbol(g);
      if (s.arity == 0) {
        if (s.weight == w) out.push_back(Term::app(g));
        continue;
      }
      for (auto& args : tuples(s.arity, w - s.weight, k - out.size())) out.push_back(Term::app(g, std::move(args)));
    }
    return out;
  }

  // First k argument tuples of total weight rem, lexicographically ascending.
  std::vector<std::vector<Term>> tuples(unsigned m, Weight rem, std::size_t k) {
    std::vector<std::vector<Term>> out;
    if (m == 0) {
      if (rem == 0) out.push_back({});
      return out;
    }
    const Weight floor_w = p_.min_constant_weight();
    for (Weight v = floor_w; v <= rem - floor_w * (m - 1) && out.size() < k; ++v) {
      for (const auto& t : first(v, k)) {
        if (out.size() >= k) break;
        for (auto& rest : tuples(m - 1, rem - v, k - out.size())) {
          rest.insert(rest.begin(), t);
          out.push_back(std::move(rest));
        }
      }
    }
    return out;
  }

  const KboParams& p_;
  std::vector<SymbolId> ascending_;
  std::map<std::pair<Weight, std::size_t>, std::vector<Term>> memo_;
};

struct Scope {
  std::vector<std::string> free;  // non-dependent, outside simple chains
  std::set<std::string> dependent;
};

Scope scope_of(const IsolatedForm& form, const std::vector<std::string>& extra) {
  Scope sc;
  for (const auto& e : form.triang) sc.dependent.insert(e.var);
  std::set<std::string> in_simp;
  for (const auto& c : form.simp) in_simp.insert(c.begin(), c.end());
  std::set<std::string> seen;
  auto add = [&](const std::string& v) {
    if (sc.dependent.count(v) || in_simp.count(v) || !seen.insert(v).second) return;
    sc.free.push_back(v);
  };
  for (const auto& a : form.arith) {
    for (const auto& [v, c] : a.left.coeffs) add(v);
    for (const auto& [v, c] : a.right.coeffs) add(v);
  }
  for (const auto& e : form.triang) {
    for (const auto& v : vars_of(e.term)) add(v);
  }
  for (const auto& v : extra) add(v);
  return sc;
}

}  // namespace

std::vector<Term> terms_of_weight(const KboParams& params, Weight w, std::size_t k) {
  TermGen gen(params);
  return gen.first(w, k);
}

ArithFormula reduce_isolated(const IsolatedForm& form, const KboParams& params,
                             const std::vector<std::string>& scope) {
  std::vector<ArithFormula> parts;
  for (const auto& a : form.arith) parts.push_back(ArithFormula::atom(weight_lin(a)));
  for (const auto& e : form.triang) {
    parts.push_back(ArithFormula::atom(lin_eq(lin_var(weight_var(e.var)), weight_lin(weight_of(params, e.term)))));
  }
  for (const auto& c : form.simp) {
    const LinExpr head = lin_var(weight_var(c.front()));
    for (std::size_t i = 1; i < c.size(); ++i) parts.push_back(ArithFormula::atom(lin_eq(lin_var(weight_var(c[i])), head)));
    parts.push_back(at_least(static_cast<Weight>(c.size()), params, head, "~" + c.front() + "."));
  }
  for (const auto& v : scope_of(form, scope).free) {
    parts.push_back(at_least(1, params, lin_var(weight_var(v)), "~" + v + "."));
  }
  return ArithFormula::conj(std::move(parts));
}

Substitution construct_witness(const IsolatedForm& form, const Assignment& weights, const KboParams& params,
                               const std::vector<std::string>& scope) {
  TermGen gen(params);
  auto weight = [&](const std::string& v) {
    auto it = weights.find(weight_var(v));
    if (it == weights.end()) throw Error(ErrorCode::InvalidArgument, "construct_witness: no weight for " + v);
    return it->second;
  };
  Substitution s;
  for (const auto& c : form.simp) {
    auto ts = gen.first(weight(c.front()), c.size());
    if (ts.size() < c.size()) {
      throw Error(ErrorCode::WitnessSearchExhausted, "not enough terms of weight " + std::to_string(weight(c.front())));
    }
    // x1 >lex x2 >lex ...: the largest term goes first.
    for (std::size_t i = 0; i < c.size(); ++i) s.insert_or_assign(c[i], ts[c.size() - 1 - i]);
  }
  for (const auto& v : scope_of(form, scope).free) {
    auto ts = gen.first(weight(v), 1);
    if (ts.empty()) throw Error(ErrorCode::WitnessSearchExhausted, "no term of weight " + std::to_string(weight(v)));
    s.insert_or_assign(v, ts.front());
  }
  return resolve_triang(form.triang, std::move(s));
}

// ---------------------------------------------------------------------------

namespace {

std::vector<SymbolId> constants_ascending(const KboParams& p) {
  std::vector<SymbolId> cs;
  for (SymbolId i = 0; i < p.size(); ++i) {
    if (p.symbol(i).arity == 0) cs.push_back(i);
  }
  std::sort(cs.begin(), cs.end(), [&](SymbolId a, SymbolId b) {
    return kbo_compare(p, Term::app(a), Term::app(b)) == Order::LT;
  });
  return cs;
}

// One disjunct of > and = atoms over variables and constants.
std::optional<Substitution> constants_constraint(const KboParams& p, const Constraint& c) {
  std::vector<Term> nodes;
  std::map<Term, int> id;
  auto node = [&](const Term& t) {
    auto [it, fresh] = id.emplace(t, static_cast<int>(nodes.size()));
    if (fresh) nodes.push_back(t);
    return it->second;
  };
  std::vector<std::pair<int, int>> gt, eq;
  for (const auto& a : c) {
    const auto* t = std::get_if<TermAtom>(&a);
    if (!t || (t->rel != TermRel::Succ && t->rel != TermRel::EqTA)) {
      throw Error(ErrorCode::InvalidArgument, "constants-only procedure takes > and = atoms only");
    }
    int l = node(t->left), r = node(t->right);
    (t->rel == TermRel::Succ ? gt : eq).emplace_back(l, r);
  }
  const int n = static_cast<int>(nodes.size());
  // Equalities: classes, at most one constant per class.
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (auto [a, b] : eq) parent[find(a)] = find(b);
  std::vector<std::optional<SymbolId>> fixed(n);
  for (int i = 0; i < n; ++i) {
    if (nodes[i].is_var()) continue;
    auto& slot = fixed[find(i)];
    if (slot && *slot != nodes[i].symbol()) return std::nullopt;
    slot = nodes[i].symbol();
  }
  // Strict edges between classes, visited sinks first (Kahn on the reversed
  // graph). A class that never becomes ready sits on a cycle.
  std::vector<std::vector<int>> above(n);
  std::vector<int> pending(n, 0);
  for (auto [a, b] : gt) {
    const int u = find(a), v = find(b);
    if (u == v) return std::nullopt;
    above[v].push_back(u);
    ++pending[u];
  }
  const auto consts = constants_ascending(p);
  std::map<SymbolId, std::size_t> rank;
  for (std::size_t i = 0; i < consts.size(); ++i) rank[consts[i]] = i;
  // need[i]: one more than the largest value below i.
  std::vector<std::size_t> need(n, 0), value(n, 0);
  std::vector<int> ready;
  for (int i = 0; i < n; ++i) {
    if (find(i) == i && pending[i] == 0) ready.push_back(i);
  }
  int done = 0, roots = 0;
  for (int i = 0; i < n; ++i) roots += find(i) == i;
  while (!ready.empty()) {
    const int i = ready.back();
    ready.pop_back();
    ++done;
    if (fixed[i]) {
      if (rank[*fixed[i]] < need[i]) return std::nullopt;
      value[i] = rank[*fixed[i]];
    } else {
      if (need[i] >= consts.size()) return std::nullopt;  // nothing above the greatest constant
      value[i] = need[i];
    }
    for (int u : above[i]) {
      need[u] = std::max(need[u], value[i] + 1);
      if (--pending[u] == 0) ready.push_back(u);
    }
  }
  if (done < roots) return std::nullopt;
  Substitution s;
  for (int i = 0; i < n; ++i) {
    if (nodes[i].is_var()) s.insert_or_assign(nodes[i].var_name(), Term::app(consts[value[find(i)]]));
  }
  return s;
}

bool only_succ_eq(const Constraint& c) {
  return std::all_of(c.begin(), c.end(), [](const Atom& a) {
    const auto* t = std::get_if<TermAtom>(&a);
    return t && (t->rel == TermRel::Succ || t->rel == TermRel::EqTA);
  });
}

void fill_missing(const KboParams& p, const std::vector<std::string>& vars, Substitution& s) {
  TermGen gen(p);
  const Term least = gen.first(p.min_constant_weight(), 1).front();
  for (const auto& v : vars) {
    if (!s.count(v)) s.insert_or_assign(v, least);
  }
}

}  // namespace

Verdict solve_constants_only(const Formula& f, const KboParams& params) {
  if (!params.constants_only()) {
    throw Error(ErrorCode::WrongSignatureClass, "solve_constants_only needs a signature of constants");
  }
  const auto vars = vars_of(f);
  Verdict out;
  for_each_dnf_constraint(eliminate_negations(f, params), false, [&](const Constraint& c) {
    auto s = constants_constraint(params, c);
    if (!s) return true;
    fill_missing(params, vars, *s);
    out.sat = true;
    out.witness = std::move(*s);
    return false;
  });
  return out;
}

// ---------------------------------------------------------------------------

namespace {

class Driver {
 public:
  Driver(const Formula& f, const KboParams& p, const SolveOptions& opts, SolveStats& stats)
      : f_(f), p_(p), opts_(opts), stats_(stats), vars_(vars_of(f)), names_(vars_) {}

  Verdict run() {
    Verdict out;
    for_each_dnf_constraint(eliminate_negations(f_, p_), false, [&](const Constraint& c) {
      ++stats_.constraints;
      trace("disjunct: " + print_formula(Formula::from_constraint(c), p_));
      if (opts_.constants_fast_path && p_.constants_only() && only_succ_eq(c)) {
        if (auto s = constants_constraint(p_, c)) {
          fill_missing(p_, vars_, *s);
          if (evaluate(f_, p_, *s)) {
            out = {true, project(*s)};
            return false;
          }
        }
        return true;
      }
      IsolateOptions iso;
      iso.chain = opts_.chain;
      iso.max_steps = opts_.max_branches;
      iso.trace = opts_.trace;
      return isolate_constraint(p_, c, names_, iso, [&](const IsolatedForm& form) {
        ++stats_.isolated_forms;
        if (auto s = try_form(form)) {
          out = {true, project(*s)};
          return false;
        }
        return true;
      });
    });
    if (!out.sat && exhausted_) {
      throw Error(ErrorCode::WitnessSearchExhausted,
                  "no verified witness found, and some satisfiable branch yielded none");
    }
    return out;
  }

 private:
  std::optional<Substitution> try_form(const IsolatedForm& form) {
    // Cheap screen: the form without the counting disjunctions.
    LinSystem base;
    for (const auto& a : form.arith) base.atoms.push_back(weight_lin(a));
    for (const auto& e : form.triang) {
      base.atoms.push_back(lin_eq(lin_var(weight_var(e.var)), weight_lin(weight_of(p_, e.term))));
    }
    if (!base.atoms.empty() && !feasible(base, opts_.lia)) return std::nullopt;
    std::optional<Substitution> found;
    expand_to_systems(reduce_isolated(form, p_, vars_), {}, [&](const LinSystem& sys) {
      if (++stats_.systems > opts_.max_branches) {
        throw Error(ErrorCode::ResourceLimit,
                    "more than " + std::to_string(opts_.max_branches) + " arithmetic systems");
      }
      auto sol = solve_system(sys, opts_.lia);
      if (!sol) return true;
      trace("arith: solved " + print_system(sys));
      try {
        found = witness(form, *sol);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::WitnessSearchExhausted) throw;
        exhausted_ = true;
        trace(std::string("witness: ") + e.what());
      }
      return !found;
    });
    return found;
  }

  // Least-term witness, then a bounded search over other terms of the same
  // weights for the free variables if verification fails.
  Substitution witness(const IsolatedForm& form, const Assignment& weights) {
    Substitution s = construct_witness(form, weights, p_, vars_);
    if (evaluate(f_, p_, s)) return s;
    trace("witness: least terms fail verification, searching nearby terms");
    const auto sc = scope_of(form, vars_);
    TermGen gen(p_);
    const std::size_t width = 4;
    std::vector<std::vector<Term>> cand;
    for (const auto& v : sc.free) cand.push_back(gen.first(weights.at(weight_var(v)), width));
    Substitution cur = s;
    std::size_t tries = 0;
    std::optional<Substitution> hit;
    std::function<bool(std::size_t)> rec = [&](std::size_t i) {
      if (i == sc.free.size()) {
        if (++tries > 10000) return false;
        Substitution full = resolve_triang(form.triang, cur);
        if (evaluate(f_, p_, full)) {
          hit = std::move(full);
          return false;
        }
        return true;
      }
      for (const auto& t : cand[i]) {
        cur.insert_or_assign(sc.free[i], t);
        if (!rec(i + 1)) return false;
      }
      return true;
    };
    rec(0);
    if (hit) return *hit;
    throw Error(ErrorCode::WitnessSearchExhausted, "no verified witness near the least terms");
  }

  Substitution project(const Substitution& s) const {
    Substitution out;
    for (const auto& v : vars_) out.insert_or_assign(v, s.at(v));
    return out;
  }

  void trace(const std::string& s) const {
    if (opts_.trace) opts_.trace(s);
  }

  const Formula& f_;
  const KboParams& p_;
  const SolveOptions& opts_;
  SolveStats& stats_;
  std::vector<std::string> vars_;
  FreshNames names_;
  bool exhausted_ = false;
};

}  // namespace

Verdict solve(const Formula& f, const KboParams& params, const SolveOptions& opts, SolveStats* stats) {
  SolveStats local;
  Driver d(f, params, opts, stats ? *stats : local);
  return d.run();
}

}  // namespace kbo
