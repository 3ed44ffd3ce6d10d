#include "kbo/isolation.hpp"

#include <algorithm>
#include <numeric>

namespace kbo {

std::string print_isolated(const IsolatedForm& f, const KboParams& params) {
  std::string s = "arith:";
  for (std::size_t i = 0; i < f.arith.size(); ++i) s += (i ? " & " : " ") + print_atom(f.arith[i], params);
  s += "; triang:";
  for (std::size_t i = 0; i < f.triang.size(); ++i) {
    s += (i ? ", " : " ") + f.triang[i].var + " = " + to_string(params, f.triang[i].term);
  }
  s += "; simp:";
  for (std::size_t i = 0; i < f.simp.size(); ++i) {
    s += i ? ", " : " ";
    for (std::size_t j = 0; j < f.simp[i].size(); ++j) s += (j ? " >lex " : "") + f.simp[i][j];
  }
  return s;
}

bool check_isolated(const IsolatedForm& f, std::string* why) {
  auto fail = [&](std::string m) {
    if (why) *why = std::move(m);
    return false;
  };
  std::set<std::string> dep;
  for (std::size_t i = 0; i < f.triang.size(); ++i) {
    if (!dep.insert(f.triang[i].var).second) return fail("dependent twice: " + f.triang[i].var);
    for (std::size_t j = i; j < f.triang.size(); ++j) {
      if (occurs(f.triang[i].var, f.triang[j].term)) return fail("not triangular at " + f.triang[i].var);
    }
  }
  std::set<std::string> seen;
  for (const auto& chain : f.simp) {
    for (const auto& v : chain) {
      if (!seen.insert(v).second) return fail("simp variable repeated: " + v);
      if (dep.count(v)) return fail("simp variable is dependent: " + v);
    }
  }
  return true;
}

Constraint isolated_constraint(const IsolatedForm& f) {
  Constraint c;
  for (const auto& a : f.arith) c.push_back(a);
  for (const auto& e : f.triang) c.push_back(TermAtom{Term::var(e.var), e.term, TermRel::EqTA});
  for (const auto& chain : f.simp) {
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      c.push_back(TermAtom{Term::var(chain[i]), Term::var(chain[i + 1]), TermRel::SuccLex});
    }
  }
  return c;
}

Substitution resolve_triang(const std::vector<TriangEntry>& triang, Substitution free_values) {
  for (auto it = triang.rbegin(); it != triang.rend(); ++it) {
    free_values.insert_or_assign(it->var, kbo::apply(free_values, it->term));
  }
  return free_values;
}

std::vector<std::string> dependents(const IsolatedForm& f) {
  std::vector<std::string> out;
  for (const auto& e : f.triang) out.push_back(e.var);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

bool is_f_of(const KboParams& p, const Term& t, const Term& y) {
  return !t.is_var() && p.is_zero_unary(t.symbol()) && t.arg(0) == y;
}

Term strip_f(const Term& t, std::size_t n) {
  Term out = t;
  for (std::size_t i = 0; i < n; ++i) out = out.arg(0);
  return out;
}

void bind(WorkingConstraint& w, const std::string& v, const Term& t) {
  w.triang.push_back({v, t});
  for (auto& term : w.chain.terms) term = replace_var(term, v, t);
}

Chain sub_chain(const Chain& c, std::size_t from) {
  Chain out;
  if (from >= c.terms.size()) return out;
  out.terms.assign(c.terms.begin() + static_cast<std::ptrdiff_t>(from), c.terms.end());
  out.links.assign(c.links.begin() + static_cast<std::ptrdiff_t>(from), c.links.end());
  return out;
}

ArithAtom weight_atom(const KboParams& p, const Term& s, ArithRel rel, const Term& t) {
  return ArithAtom{weight_of(p, s), weight_of(p, t), rel};
}

WeightContext context_of(const WorkingConstraint& w) {
  WeightContext ctx;
  ctx.arith = w.arith;
  for (const auto& e : w.triang) ctx.triang.emplace_back(e.var, e.term);
  return ctx;
}

}  // namespace

std::optional<Chain> first_row_cleanup(const KboParams& params, Chain c) {
  for (;;) {
    const std::size_t r = c.first_row_end();
    bool again = false;
    // Repeated first-row terms: fine only when joined by =.
    for (std::size_t i = 0; i < r && !again; ++i) {
      for (std::size_t j = i + 1; j < r; ++j) {
        if (c.terms[i] != c.terms[j]) continue;
        for (std::size_t k = i; k < j; ++k) {
          if (c.links[k] != TermRel::EqTA) return std::nullopt;
        }
        c.terms.erase(c.terms.begin() + static_cast<std::ptrdiff_t>(i));
        c.links.erase(c.links.begin() + static_cast<std::ptrdiff_t>(i));
        again = true;
        break;
      }
    }
    if (again) continue;
    for (std::size_t j = 0; j < r; ++j) {
      const Term& y = c.terms[j];
      if (!y.is_var()) continue;
      for (std::size_t k = r; k < c.terms.size(); ++k) {
        if (occurs(y.var_name(), c.terms[k])) return std::nullopt;
      }
      for (std::size_t n = 0; n < r; ++n) {
        if (n == j || !occurs(y.var_name(), c.terms[n])) continue;
        if (!is_f_of(params, c.terms[n], y) || n > j) return std::nullopt;
        bool lex = false;
        for (std::size_t k = n; k < j; ++k) lex = lex || c.links[k] == TermRel::SuccLex;
        if (!lex) return std::nullopt;
      }
    }
    return c;
  }
}

bool eliminate_row_equalities(const KboParams& params, WorkingConstraint& w, const TraceSink& trace) {
  auto note = [&](const std::string& v, const Term& t) {
    if (trace) trace("row-equality: " + v + " := " + to_string(params, t));
  };
  for (;;) {
    Chain& c = w.chain;
    const std::size_t r = c.first_row_end();
    std::size_t i = 0;
    while (i + 1 < r && c.links[i] != TermRel::EqTA) ++i;
    if (i + 1 >= r) return true;
    const Term a = c.terms[i], b = c.terms[i + 1];
    if (a == b) {
      c.terms.erase(c.terms.begin() + static_cast<std::ptrdiff_t>(i));
      c.links.erase(c.links.begin() + static_cast<std::ptrdiff_t>(i));
      continue;
    }
    // f^k(s) = f^m(t): peel the common tower.
    const std::size_t d = std::min(f_height(params, a), f_height(params, b));
    const Term s = strip_f(a, d), t = strip_f(b, d);
    if (s.is_var()) {
      if (occurs(s.var_name(), t)) return false;
      note(s.var_name(), t);
      bind(w, s.var_name(), t);
      continue;
    }
    if (t.is_var()) {
      if (occurs(t.var_name(), s)) return false;
      note(t.var_name(), s);
      bind(w, t.var_name(), s);
      continue;
    }
    if (s.symbol() != t.symbol()) {
      if (trace) trace("row-equality: symbol clash");
      return false;
    }
    std::size_t p = 0;
    while (p < s.arity() && s.arg(p) == t.arg(p)) ++p;
    if (!s.arg(p).is_var() || !t.arg(p).is_var()) {
      throw Error(ErrorCode::InvalidArgument, "eliminate_row_equalities: row term is not quasi-flat");
    }
    note(t.arg(p).var_name(), s.arg(p));
    bind(w, t.arg(p).var_name(), s.arg(p));
  }
}

bool guess_shapes(const KboParams& params, const std::string& x, std::size_t max_f, FreshNames& names,
                  const std::function<bool(const Term&)>& visit) {
  (void)x;
  const auto f = params.zero_unary();
  const std::size_t top = f ? max_f : 0;
  for (SymbolId g : params.by_precedence()) {
    if (params.is_zero_unary(g)) continue;
    for (std::size_t m = 0; m <= top; ++m) {
      std::vector<Term> args;
      for (unsigned i = 0; i < params.symbol(g).arity; ++i) args.push_back(Term::var(names.next()));
      Term t = Term::app(g, std::move(args));
      if (m) t = wrap(*f, m, t);
      if (!visit(t)) return false;
    }
  }
  return true;
}

LexDecomposition lex_decompose(const KboParams& params, const Term& s, const Term& t) {
  LexDecomposition d;
  const std::size_t k = f_height(params, s), m = f_height(params, t);
  const Term& g = f_base(params, s);
  const Term& h = f_base(params, t);
  if (g.is_var() || h.is_var()) throw Error(ErrorCode::InvalidArgument, "lex_decompose: variable below f");
  if (k < m || (k == m && params.greater(h.symbol(), g.symbol()))) {
    d.unsat = true;
    return d;
  }
  ArithAtom wa = weight_atom(params, s, ArithRel::Eq, t);
  if (wa.left != wa.right) d.weight = wa;
  if (k > m || g.symbol() != h.symbol()) {
    d.options.push_back({});
    return d;
  }
  std::vector<TermAtom> eqs;
  for (std::size_t i = 0; i < g.arity(); ++i) {
    const Term& x = g.arg(i);
    const Term& y = h.arg(i);
    if (x == y) continue;
    auto opt = eqs;
    opt.push_back({x, y, TermRel::Succ});
    d.options.push_back(std::move(opt));
    eqs.push_back({x, y, TermRel::EqTA});
  }
  d.unsat = d.options.empty();
  return d;
}

// ---------------------------------------------------------------------------

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

bool discharge_variables(const KboParams& params, const std::vector<TermAtom>& E,
                         const std::vector<std::string>& old_vars, const WeightContext& ctx,
                         const ChainOptions& opts, const std::function<bool(const Discharge&)>& visit) {
  const std::set<std::string> old(old_vars.begin(), old_vars.end());
  std::vector<std::string> vars;
  std::map<std::string, int> id;
  for (const auto& a : E) {
    for (const Term* t : {&a.left, &a.right}) {
      if (!t->is_var()) throw Error(ErrorCode::InvalidArgument, "discharge_variables: atoms must relate variables");
      if (id.emplace(t->var_name(), static_cast<int>(vars.size())).second) vars.push_back(t->var_name());
    }
  }
  Discharge base;
  // Equalities: every class collapses onto an old member if it has one.
  UnionFind eq(vars.size());
  for (const auto& a : E) {
    if (a.rel == TermRel::EqTA) eq.unite(id[a.left.var_name()], id[a.right.var_name()]);
  }
  std::map<int, std::string> rep;
  for (const auto& v : vars) {
    int r = eq.find(id[v]);
    auto it = rep.find(r);
    if (it == rep.end()) {
      rep.emplace(r, v);
    } else if (old.count(v) && !old.count(it->second)) {
      it->second = v;
    }
  }
  Substitution to_rep;
  for (const auto& v : vars) {
    const std::string& r = rep[eq.find(id[v])];
    if (r != v) {
      base.triang.push_back({v, Term::var(r)});
      to_rep.insert_or_assign(v, Term::var(r));
    }
  }
  std::vector<TermAtom> strict;
  for (const auto& a : E) {
    if (a.rel == TermRel::EqTA) continue;
    TermAtom b{kbo::apply(to_rep, a.left), kbo::apply(to_rep, a.right), a.rel};
    if (b.left == b.right) return true;
    if (std::find(strict.begin(), strict.end(), b) == strict.end()) strict.push_back(b);
  }
  // Components of the strict atoms.
  UnionFind comp(vars.size());
  for (const auto& a : strict) comp.unite(id[a.left.var_name()], id[a.right.var_name()]);
  std::map<int, bool> touches_old;
  for (const auto& a : strict) {
    for (const Term* t : {&a.left, &a.right}) {
      bool& flag = touches_old[comp.find(id[t->var_name()])];
      flag = flag || old.count(t->var_name()) > 0;
    }
  }
  std::vector<int> green_roots;
  std::map<int, std::vector<TermAtom>> green;
  for (const auto& a : strict) {
    int r = comp.find(id[a.left.var_name()]);
    if (touches_old[r]) {
      base.red.push_back(a);
    } else {
      if (!green.count(r)) green_roots.push_back(r);
      green[r].push_back(a);
    }
  }
  std::function<bool(std::size_t, Discharge&)> rec = [&](std::size_t k, Discharge& d) {
    if (k == green_roots.size()) return visit(d);
    return chain_branches(params, green[green_roots[k]], {}, ctx, opts, [&](const Chain& c) {
      Discharge next = d;
      // Collapse = classes onto their last member, then split at >w.
      std::vector<std::string> seg;
      std::size_t i = 0;
      auto close_seg = [&]() {
        if (seg.size() >= 2) next.simp.push_back(seg);
        seg.clear();
      };
      while (i < c.terms.size()) {
        std::size_t j = i;
        while (j < c.links.size() && c.links[j] == TermRel::EqTA) ++j;
        const std::string last = c.terms[j].var_name();
        for (std::size_t q = i; q < j; ++q) next.triang.push_back({c.terms[q].var_name(), c.terms[j]});
        seg.push_back(last);
        if (j < c.links.size() && c.links[j] == TermRel::SuccW) {
          close_seg();
          next.arith.push_back(weight_atom(params, c.terms[j], ArithRel::Gt, c.terms[j + 1]));
        }
        i = j + 1;
      }
      close_seg();
      return rec(k + 1, next);
    });
  };
  return rec(0, base);
}

// ---------------------------------------------------------------------------

namespace {

class Isolator {
 public:
  Isolator(const KboParams& p, FreshNames& names, const IsolateOptions& opts, const IsolatedVisitor& visit)
      : p_(p), names_(names), opts_(opts), visit_(visit) {}

  bool step(WorkingConstraint w) {
    tick();
    if (w.chain.empty()) return emit(w);
    trace("chain: " + print_chain(w.chain, p_));
    auto cleaned = first_row_cleanup(p_, w.chain);
    if (!cleaned) {
      trace("cleanup: unsatisfiable");
      return true;
    }
    w.chain = std::move(*cleaned);
    const std::size_t l = w.chain.first_row_end();
    const Chain rest_before = sub_chain(w.chain, l);
    if (!eliminate_row_equalities(p_, w, opts_.trace)) return true;

    const std::size_t r = w.chain.first_row_end();
    std::vector<Term> row(w.chain.terms.begin(), w.chain.terms.begin() + static_cast<std::ptrdiff_t>(r));
    Chain rest = sub_chain(w.chain, r);
    const bool dirty = rest != rest_before;
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = i + 1; j < r; ++j) {
        if (row[i] == row[j]) {
          trace("row: repeated term under >lex");
          return true;
        }
      }
    }
    if (r == 1) {
      if (!rest.empty()) w.arith.push_back(weight_atom(p_, row[0], ArithRel::Gt, rest.terms[0]));
      trace("row-to-arith: " + to_string(p_, row[0]));
      return proceed(std::move(w), rest, {}, dirty);
    }
    if (std::all_of(row.begin(), row.end(), [](const Term& t) { return t.is_var(); })) {
      std::vector<std::string> names;
      for (const auto& t : row) names.push_back(t.var_name());
      w.simp.push_back(names);
      if (!rest.empty()) w.arith.push_back(weight_atom(p_, row.back(), ArithRel::Gt, rest.terms[0]));
      trace("row-to-simp: " + print_chain(sub_chain_prefix(w.chain, r), p_));
      return proceed(std::move(w), rest, {}, dirty);
    }
    // Row with function symbols: guess the shape of every variable entry.
    std::vector<std::string> guessed;
    for (const auto& t : row) {
      const Term& b = f_base(p_, t);
      if (b.is_var() && std::find(guessed.begin(), guessed.end(), b.var_name()) == guessed.end()) {
        guessed.push_back(b.var_name());
      }
    }
    std::vector<std::string> old;
    for (const auto& t : row) {
      for (const auto& v : vars_of(t)) {
        if (std::find(guessed.begin(), guessed.end(), v) == guessed.end() &&
            std::find(old.begin(), old.end(), v) == old.end()) {
          old.push_back(v);
        }
      }
    }
    return guess(0, guessed, l, old, std::move(w), r, dirty);
  }

 private:
  static Chain sub_chain_prefix(const Chain& c, std::size_t r) {
    Chain out;
    out.terms.assign(c.terms.begin(), c.terms.begin() + static_cast<std::ptrdiff_t>(r));
    out.links.assign(c.links.begin(), c.links.begin() + static_cast<std::ptrdiff_t>(r - 1));
    return out;
  }

  bool guess(std::size_t i, const std::vector<std::string>& guessed, std::size_t l,
             const std::vector<std::string>& old, WorkingConstraint w, std::size_t r, bool dirty) {
    if (i == guessed.size()) return after_guess(std::move(w), old, r, dirty);
    const std::string& x = guessed[i];
    return guess_shapes(p_, x, l, names_, [&](const Term& t) {
      tick();
      WorkingConstraint n = w;
      bind(n, x, t);
      trace("guess: " + x + " := " + to_string(p_, t));
      return guess(i + 1, guessed, l, old, std::move(n), r, dirty);
    });
  }

  bool after_guess(WorkingConstraint w, const std::vector<std::string>& old, std::size_t r, bool dirty) {
    std::vector<Term> row(w.chain.terms.begin(), w.chain.terms.begin() + static_cast<std::ptrdiff_t>(r));
    Chain rest = sub_chain(w.chain, r);
    std::vector<std::vector<std::vector<TermAtom>>> choices;
    for (std::size_t i = 0; i + 1 < r; ++i) {
      auto d = lex_decompose(p_, row[i], row[i + 1]);
      if (d.unsat) {
        trace("lex-split: " + to_string(p_, row[i]) + " >lex " + to_string(p_, row[i + 1]) + " impossible");
        return true;
      }
      if (d.weight) w.arith.push_back(*d.weight);
      choices.push_back(std::move(d.options));
    }
    if (!rest.empty()) w.arith.push_back(weight_atom(p_, row.back(), ArithRel::Gt, rest.terms[0]));
    std::vector<TermAtom> E;
    return pick(0, choices, E, w, rest, old, dirty);
  }

  bool pick(std::size_t i, const std::vector<std::vector<std::vector<TermAtom>>>& choices,
            std::vector<TermAtom>& E, const WorkingConstraint& w, const Chain& rest,
            const std::vector<std::string>& old, bool dirty) {
    if (i == choices.size()) return settle(E, w, rest, old, dirty);
    for (const auto& opt : choices[i]) {
      tick();
      const std::size_t mark = E.size();
      E.insert(E.end(), opt.begin(), opt.end());
      bool go = pick(i + 1, choices, E, w, rest, old, dirty);
      E.erase(E.begin() + static_cast<std::ptrdiff_t>(mark), E.end());
      if (!go) return false;
    }
    return true;
  }

  bool settle(const std::vector<TermAtom>& E, const WorkingConstraint& w, const Chain& rest,
              const std::vector<std::string>& old, bool dirty) {
    if (opts_.trace) {
      std::string s;
      for (const auto& a : E) s += (s.empty() ? "" : " & ") + print_atom(a, p_);
      trace("lex-split: residue {" + s + "}");
    }
    return discharge_variables(p_, E, old, context_of(w), opts_.chain, [&](const Discharge& d) {
      WorkingConstraint n = w;
      n.chain = rest;
      for (const auto& e : d.triang) {
        trace("discharge: " + e.var + " := " + to_string(p_, e.term));
        bind(n, e.var, e.term);
      }
      for (const auto& s : d.simp) {
        n.simp.push_back(s);
        trace("discharge: simple chain of " + std::to_string(s.size()));
      }
      n.arith.insert(n.arith.end(), d.arith.begin(), d.arith.end());
      Chain r = n.chain;
      if (!d.red.empty()) trace("discharge: " + std::to_string(d.red.size()) + " atom(s) back to the chain");
      return proceed(std::move(n), r, d.red, dirty || r != rest);
    });
  }

  // Continues with `rest` (plus extra atoms) as the chain part.
  bool proceed(WorkingConstraint w, const Chain& rest, const std::vector<TermAtom>& extra, bool dirty) {
    if (!dirty && extra.empty()) {
      w.chain = rest;
      return step(std::move(w));
    }
    std::vector<TermAtom> atoms = chain_atoms(rest);
    atoms.insert(atoms.end(), extra.begin(), extra.end());
    for (const auto& a : atoms) {
      if (!is_flat(a.left) || !is_flat(a.right)) {
        throw Error(ErrorCode::InvalidArgument, "isolate: chain part lost flatness");
      }
    }
    if (atoms.empty() && rest.terms.empty()) {
      w.chain = {};
      return step(std::move(w));
    }
    trace("rechain");
    return chain_branches(p_, atoms, rest.terms, context_of(w), opts_.chain, [&](const Chain& c) {
      WorkingConstraint n = w;
      n.chain = c;
      return step(std::move(n));
    });
  }

  bool emit(const WorkingConstraint& w) {
    IsolatedForm f{w.arith, w.triang, w.simp};
    trace("isolated: " + print_isolated(f, p_));
    return visit_(f);
  }

  void tick() {
    if (++steps_ > opts_.max_steps) {
      throw Error(ErrorCode::ResourceLimit,
                  "isolation exceeded " + std::to_string(opts_.max_steps) + " steps");
    }
  }

  void trace(const std::string& s) const {
    if (opts_.trace) opts_.trace(s);
  }

  const KboParams& p_;
  FreshNames& names_;
  const IsolateOptions& opts_;
  const IsolatedVisitor& visit_;
  std::size_t steps_ = 0;
};

}  // namespace

bool isolate(const KboParams& params, const WorkingConstraint& w, FreshNames& names,
             const IsolateOptions& opts, const IsolatedVisitor& visit) {
  for (const auto& t : w.chain.terms) names.reserve(vars_of(t));
  Isolator iso(params, names, opts, visit);
  return iso.step(w);
}

bool isolate_constraint(const KboParams& params, const Constraint& c, FreshNames& names,
                        const IsolateOptions& opts, const IsolatedVisitor& visit) {
  names.reserve(vars_of(c));
  std::vector<TermAtom> terms;
  WorkingConstraint base;
  for (const auto& a : c) {
    if (const auto* t = std::get_if<TermAtom>(&a)) terms.push_back(*t);
    else base.arith.push_back(std::get<ArithAtom>(a));
  }
  Isolator iso(params, names, opts, visit);
  if (terms.empty()) return iso.step(base);
  auto flat = flatten(terms, names);
  if (opts.trace) {
    std::string s;
    for (const auto& a : flat) s += (s.empty() ? "" : " & ") + print_atom(a, params);
    opts.trace("flatten: " + s);
  }
  return chain_branches(params, flat, {}, context_of(base), opts.chain, [&](const Chain& ch) {
    WorkingConstraint w = base;
    w.chain = ch;
    return iso.step(w);
  });
}

}  // namespace kbo
