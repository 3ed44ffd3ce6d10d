#include "kbo/chaining.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <tuple>
#include <unordered_map>

namespace kbo {

bool is_flat(const Term& t) {
  if (t.is_var()) return true;
  for (const auto& a : t.args()) {
    if (!a.is_var()) return false;
  }
  return true;
}

std::string FreshNames::next() {
  for (;;) {
    std::string n = "_v" + std::to_string(++counter_);
    if (used_.insert(n).second) return n;
  }
}

namespace {

class Flattener {
 public:
  explicit Flattener(FreshNames& names) : names_(names) {}

  Term top(const Term& t) {
    if (t.is_var()) return t;
    std::vector<Term> args;
    args.reserve(t.arity());
    for (const auto& a : t.args()) args.push_back(arg(a));
    return Term::app(t.symbol(), std::move(args));
  }

  std::vector<TermAtom> defs;

 private:
  Term arg(const Term& t) {
    if (t.is_var()) return t;
    if (auto it = memo_.find(t); it != memo_.end()) return Term::var(it->second);
    Term flat = top(t);
    std::string v = names_.next();
    memo_.emplace(t, v);
    defs.push_back({Term::var(v), flat, TermRel::EqTA});
    return Term::var(v);
  }

  FreshNames& names_;
  std::map<Term, std::string> memo_;
};

}  // namespace

std::vector<TermAtom> flatten(const std::vector<TermAtom>& atoms, FreshNames& names) {
  for (const auto& a : atoms) {
    names.reserve(vars_of(a.left));
    names.reserve(vars_of(a.right));
  }
  Flattener fl(names);
  std::vector<TermAtom> body;
  for (const auto& a : atoms) {
    body.push_back({fl.top(a.left), fl.top(a.right), a.rel});
  }
  std::vector<TermAtom> out = std::move(fl.defs);
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

std::size_t Chain::first_row_end() const {
  for (std::size_t i = 0; i < links.size(); ++i) {
    if (links[i] == TermRel::SuccW) return i + 1;
  }
  return terms.size();
}

std::vector<TermAtom> chain_atoms(const Chain& c) {
  std::vector<TermAtom> out;
  for (std::size_t i = 0; i < c.links.size(); ++i) out.push_back({c.terms[i], c.terms[i + 1], c.links[i]});
  return out;
}

std::string print_chain(const Chain& c, const KboParams& params) {
  if (c.terms.empty()) return "(empty)";
  std::string s = to_string(params, c.terms[0]);
  for (std::size_t i = 0; i < c.links.size(); ++i) {
    switch (c.links[i]) {
      case TermRel::SuccW: s += " >w "; break;
      case TermRel::SuccLex: s += " >lex "; break;
      case TermRel::EqTA: s += " = "; break;
      case TermRel::Succ: s += " > "; break;
    }
    s += to_string(params, c.terms[i + 1]);
  }
  return s;
}

bool is_chained(const Chain& c, std::string* why) {
  auto fail = [&](std::string m) {
    if (why) *why = std::move(m);
    return false;
  };
  if (c.links.size() + 1 != c.terms.size() && !c.terms.empty()) return fail("link count");
  std::set<Term> seen;
  for (const auto& t : c.terms) {
    if (!is_flat(t)) return fail("term not flat");
    if (!seen.insert(t).second) return fail("term repeated");
  }
  for (const auto& t : c.terms) {
    for (const auto& a : t.args()) {
      if (!seen.count(a)) return fail("argument missing from chain");
    }
  }
  for (auto l : c.links) {
    if (l == TermRel::Succ) return fail("plain > link");
  }
  return true;
}

std::string weight_var(const std::string& term_var) { return "|" + term_var + "|"; }

LinExpr weight_lin(const WeightExpr& e) {
  LinExpr out;
  out.constant = e.constant;
  for (const auto& [v, c] : e.coeffs) out.coeffs[weight_var(v)] += c;
  return out;
}

LinAtom weight_lin(const ArithAtom& a) {
  LinAtom out{weight_lin(a.left), LinRel::Eq, weight_lin(a.right)};
  switch (a.rel) {
    case ArithRel::Gt: out.rel = LinRel::Gt; break;
    case ArithRel::Ge: out.rel = LinRel::Ge; break;
    case ArithRel::Eq: out.rel = LinRel::Eq; break;
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Terms in order of first occurrence, each followed by its argument variables.
std::vector<Term> collect_terms(const std::vector<TermAtom>& atoms, const std::vector<Term>& extra) {
  std::vector<Term> out;
  std::set<Term> seen;
  auto add = [&](const Term& t) {
    if (seen.insert(t).second) out.push_back(t);
    for (const auto& a : t.args()) {
      if (seen.insert(a).second) out.push_back(a);
    }
  };
  for (const auto& a : atoms) {
    add(a.left);
    add(a.right);
  }
  for (const auto& t : extra) add(t);
  return out;
}

enum class Pos { Eq, AboveW, AboveLex, BelowW, BelowLex };

bool above(Pos p) { return p == Pos::AboveW || p == Pos::AboveLex; }

// Requirement a `rel` b, with NotEq for "different classes".
enum class Req { Succ, SuccW, SuccLex, Eq, NotEq };

bool meets(Pos p, Req r) {
  switch (r) {
    case Req::Succ: return above(p);
    case Req::SuccW: return p == Pos::AboveW;
    case Req::SuccLex: return p == Pos::AboveLex;
    case Req::Eq: return p == Pos::Eq;
    case Req::NotEq: return p != Pos::Eq;
  }
  return false;
}

Req req_of(TermRel r) {
  switch (r) {
    case TermRel::Succ: return Req::Succ;
    case TermRel::SuccW: return Req::SuccW;
    case TermRel::SuccLex: return Req::SuccLex;
    case TermRel::EqTA: return Req::Eq;
  }
  return Req::Eq;
}

struct Edge {
  int other;
  Req req;  // this `req` other
};

class Enumerator {
 public:
  Enumerator(const KboParams& params, const std::vector<TermAtom>& atoms, const std::vector<Term>& extra,
             const WeightContext& ctx, const ChainOptions& opts, const ChainVisitor& visit)
      : p_(params), ctx_(ctx), opts_(opts), visit_(visit) {
    terms_ = collect_terms(atoms, extra);
    for (std::size_t i = 0; i < terms_.size(); ++i) index_.emplace(terms_[i], static_cast<int>(i));
    edges_.resize(terms_.size());
    for (const auto& a : atoms) {
      if (!is_flat(a.left) || !is_flat(a.right)) {
        throw Error(ErrorCode::InvalidArgument, "chain_branches: atoms must be flat");
      }
      add_req(index_.at(a.left), index_.at(a.right), req_of(a.rel));
    }
    if (opts_.structural_pruning) {
      for (std::size_t i = 0; i < terms_.size(); ++i) {
        const Term& t = terms_[i];
        if (t.is_var()) continue;
        compound_.push_back(static_cast<int>(i));
        Req r = p_.is_zero_unary(t.symbol()) ? Req::SuccLex : Req::SuccW;
        for (const auto& a : t.args()) add_req(static_cast<int>(i), index_.at(a), r);
      }
      ground_facts();
    }
    plan_order();
    cls_of_.assign(terms_.size(), -1);
  }

  bool run() {
    if (opts_.structural_pruning && cyclic()) return true;
    if (opts_.weight_pruning) {
      base_ = base_system();
      if (!relaxation_feasible(base_)) return true;
    }
    return insert(0);
  }

 private:
  void add_req(int a, int b, Req r) {
    edges_[a].push_back({b, r});
    rev_[b].push_back({a, r});
  }

  // Terms whose value is forced (ground, or tied by = to something forced)
  // stand in a known relation to each other.
  void ground_facts() {
    const std::size_t n = terms_.size();
    value_.assign(n, std::nullopt);
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = 0; i < n; ++i) {
        if (value_[i]) continue;
        const Term& t = terms_[i];
        if (t.is_var()) {
          auto try_edge = [&](const Edge& e) {
            if (e.req == Req::Eq && value_[e.other]) value_[i] = value_[e.other];
          };
          for (const auto& e : edges_[i]) try_edge(e);
          if (auto it = rev_.find(static_cast<int>(i)); !value_[i] && it != rev_.end()) {
            for (const auto& e : it->second) try_edge(e);
          }
        } else {
          std::vector<Term> args;
          for (const auto& a : t.args()) {
            const auto& v = value_[index_.at(a)];
            if (!v) break;
            args.push_back(*v);
          }
          if (args.size() == t.arity()) value_[i] = Term::app(t.symbol(), std::move(args));
        }
        changed = changed || value_[i].has_value();
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!value_[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!value_[j]) continue;
        const Term& s = *value_[i];
        const Term& t = *value_[j];
        const Order o = kbo_compare(p_, s, t);
        int hi = static_cast<int>(i), lo = static_cast<int>(j);
        if (o == Order::EQ) {
          add_req(hi, lo, Req::Eq);
          continue;
        }
        if (o == Order::LT) std::swap(hi, lo);
        const bool w = ground_weight(p_, s) != ground_weight(p_, t);
        add_req(hi, lo, w ? Req::SuccW : Req::SuccLex);
      }
    }
  }

  // A strict requirement inside an =-class, or a cycle of strict
  // requirements, rules out every ordering.
  bool cyclic() const {
    const int n = static_cast<int>(terms_.size());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (int i = 0; i < n; ++i) {
      for (const auto& e : edges_[i]) {
        if (e.req == Req::Eq) parent[find(i)] = find(e.other);
      }
    }
    // Nothing lies strictly below the least ground term.
    std::optional<Term> least;
    for (SymbolId c = 0; c < p_.size(); ++c) {
      if (p_.symbol(c).arity != 0) continue;
      Term t = Term::app(c, {});
      if (!least || kbo_compare(p_, t, *least) == Order::LT) least = t;
    }
    std::vector<bool> bottom(n, false);
    for (int i = 0; i < n; ++i) {
      if (least && value_[i] == least) bottom[find(i)] = true;
    }
    std::vector<std::vector<int>> out(n);
    std::vector<int> indeg(n, 0);
    for (int i = 0; i < n; ++i) {
      for (const auto& e : edges_[i]) {
        if (e.req == Req::Eq) continue;
        const int u = find(i), v = find(e.other);
        if (e.req == Req::NotEq) {
          if (u == v) return true;
          continue;
        }
        if (u == v || bottom[u]) return true;
        out[u].push_back(v);
        ++indeg[v];
      }
    }
    std::vector<int> ready;
    int roots = 0;
    for (int i = 0; i < n; ++i) {
      if (find(i) != i) continue;
      ++roots;
      if (indeg[i] == 0) ready.push_back(i);
    }
    int seen = 0;
    while (!ready.empty()) {
      const int u = ready.back();
      ready.pop_back();
      ++seen;
      for (int v : out[u]) {
        if (--indeg[v] == 0) ready.push_back(v);
      }
    }
    return seen < roots;
  }

  // Weight consequences of the requirements, true of every ordering we may
  // produce.
  LinSystem base_system() const {
    LinSystem sys;
    std::set<std::string> vars;
    auto w = [&](int i) { return weight_lin(weight_of(p_, terms_[i])); };
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      for (const auto& v : vars_of(terms_[i])) vars.insert(v);
      for (const auto& e : edges_[i]) {
        switch (e.req) {
          case Req::Succ: sys.atoms.push_back(lin_ge(w(static_cast<int>(i)), w(e.other))); break;
          case Req::SuccW: sys.atoms.push_back(lin_gt(w(static_cast<int>(i)), w(e.other))); break;
          case Req::SuccLex:
          case Req::Eq: sys.atoms.push_back(lin_eq(w(static_cast<int>(i)), w(e.other))); break;
          case Req::NotEq: break;
        }
      }
      if (value_.size() > i && value_[i] && terms_[i].is_var()) {
        sys.atoms.push_back(lin_eq(lin_var(weight_var(terms_[i].var_name())),
                                   lin_const(ground_weight(p_, *value_[i]))));
      }
    }
    for (const auto& a : ctx_.arith) sys.atoms.push_back(weight_lin(a));
    for (const auto& [y, t] : ctx_.triang) {
      sys.atoms.push_back(lin_eq(lin_var(weight_var(y)), weight_lin(weight_of(p_, t))));
      vars.insert(y);
      for (const auto& v : vars_of(t)) vars.insert(v);
    }
    for (const auto& a : ctx_.arith) {
      for (const auto& [v, c] : a.left.coeffs) vars.insert(v);
      for (const auto& [v, c] : a.right.coeffs) vars.insert(v);
    }
    const Weight floor_w = p_.min_constant_weight();
    for (const auto& v : vars) sys.atoms.push_back(lin_ge(lin_var(weight_var(v)), lin_const(floor_w)));
    return sys;
  }

  // Most connected first, then always the term with the most links into
  // what is already placed, so contradictions surface near the root.
  void plan_order() {
    const std::size_t n = terms_.size();
    std::vector<std::set<int>> adj(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto& e : edges_[i]) {
        if (e.other == static_cast<int>(i)) continue;
        adj[i].insert(e.other);
        adj[e.other].insert(static_cast<int>(i));
      }
    }
    std::vector<std::set<int>> eq(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto& e : edges_[i]) {
        if (e.req != Req::Eq) continue;
        eq[i].insert(e.other);
        eq[e.other].insert(static_cast<int>(i));
      }
    }
    std::vector<int> links(n, 0), eq_links(n, 0);
    std::vector<bool> placed(n, false);
    order_.clear();
    while (order_.size() < n) {
      int best = -1;
      for (std::size_t i = 0; i < n; ++i) {
        if (placed[i]) continue;
        auto key = [&](int j) { return std::make_tuple(eq_links[j] > 0, links[j], adj[j].size()); };
        if (best < 0 || key(static_cast<int>(i)) > key(best)) best = static_cast<int>(i);
      }
      placed[best] = true;
      order_.push_back(best);
      for (int j : adj[best]) ++links[j];
      for (int j : eq[best]) ++eq_links[j];
    }
  }

  Pos pos(int a, int b) const {
    int ca = cls_of_[a], cb = cls_of_[b];
    if (ca == cb) return Pos::Eq;
    int lo = std::min(ca, cb), hi = std::max(ca, cb);
    bool w = false;
    for (int g = lo; g < hi; ++g) {
      if (gaps_[g] == TermRel::SuccW) {
        w = true;
        break;
      }
    }
    if (ca < cb) return w ? Pos::AboveW : Pos::AboveLex;
    return w ? Pos::BelowW : Pos::BelowLex;
  }

  bool inserted(int i) const { return cls_of_[i] >= 0; }

  bool local_ok(int k) const {
    for (const auto& e : edges_[k]) {
      if (inserted(e.other) && !meets(pos(k, e.other), e.req)) return false;
    }
    if (auto it = rev_.find(k); it != rev_.end()) {
      for (const auto& e : it->second) {
        if (inserted(e.other) && !meets(pos(e.other, k), e.req)) return false;
      }
    }
    return true;
  }

  // Congruence and lexicographic consistency between compound terms.
  bool structural_ok() const {
    for (std::size_t x = 0; x < compound_.size(); ++x) {
      int a = compound_[x];
      if (!inserted(a)) continue;
      for (std::size_t y = x + 1; y < compound_.size(); ++y) {
        int b = compound_[y];
        if (!inserted(b)) continue;
        if (!pair_ok(a, b)) return false;
      }
    }
    return true;
  }

  bool pair_ok(int a, int b) const {
    const Term& s = terms_[a];
    const Term& t = terms_[b];
    Pos p = pos(a, b);
    if (s.symbol() != t.symbol()) {
      if (p == Pos::Eq) return false;
      if (p == Pos::AboveLex) return p_.greater(s.symbol(), t.symbol());
      if (p == Pos::BelowLex) return p_.greater(t.symbol(), s.symbol());
      return true;
    }
    // Same head: first argument position where the classes differ.
    for (std::size_t i = 0; i < s.arity(); ++i) {
      int ai = index_.at(s.arg(i)), bi = index_.at(t.arg(i));
      if (!inserted(ai) || !inserted(bi)) return true;
      Pos q = pos(ai, bi);
      if (q == Pos::Eq) continue;
      if (p == Pos::Eq) return false;
      if (p == Pos::AboveLex) return above(q);
      if (p == Pos::BelowLex) return !above(q);
      return true;
    }
    return p == Pos::Eq;
  }

  LinSystem weight_system() const {
    LinSystem sys = base_;
    auto w = [&](int i) { return weight_lin(weight_of(p_, terms_[i])); };
    for (std::size_t c = 0; c < classes_.size(); ++c) {
      const auto& m = classes_[c];
      for (std::size_t j = 1; j < m.size(); ++j) sys.atoms.push_back(lin_eq(w(m[0]), w(m[j])));
      if (c + 1 < classes_.size()) {
        const int lower = classes_[c + 1][0];
        sys.atoms.push_back(gaps_[c] == TermRel::SuccW ? lin_gt(w(m[0]), w(lower)) : lin_eq(w(m[0]), w(lower)));
      }
    }
    return sys;
  }

  bool node_ok(int k, bool leaf) const {
    if (!local_ok(k)) return false;
    if (opts_.structural_pruning && !structural_ok()) return false;
    if (opts_.weight_pruning) {
      LinSystem sys = weight_system();
      if (!relaxation_feasible(sys)) return false;
      if (leaf && !feasible(sys)) return false;
    }
    return true;
  }

  Chain build() const {
    Chain c;
    for (std::size_t i = 0; i < classes_.size(); ++i) {
      std::vector<int> m = classes_[i];
      std::sort(m.begin(), m.end());
      for (std::size_t j = 0; j < m.size(); ++j) {
        if (!c.terms.empty()) c.links.push_back(j == 0 ? gaps_[i - 1] : TermRel::EqTA);
        c.terms.push_back(terms_[m[j]]);
      }
    }
    return c;
  }

  // Returns false when the visitor asked to stop.
  bool insert(std::size_t k) {
    if (k == terms_.size()) return visit_(build());
    const int t = order_[k];
    const bool leaf = k + 1 == terms_.size();
    auto descend = [&]() { return node_ok(t, leaf) ? insert(k + 1) : true; };

    // Join an existing class.
    for (std::size_t c = 0; c < classes_.size(); ++c) {
      classes_[c].push_back(t);
      cls_of_[t] = static_cast<int>(c);
      bool go = descend();
      classes_[c].pop_back();
      cls_of_[t] = -1;
      if (!go) return false;
    }
    // Open a new class before position c.
    const std::size_t n = classes_.size();
    for (std::size_t c = 0; c <= n; ++c) {
      std::vector<std::pair<TermRel, TermRel>> splits;  // (above new, below new)
      const TermRel W = TermRel::SuccW, L = TermRel::SuccLex;
      if (n == 0) {
        splits = {{W, W}};
      } else if (c == 0 || c == n) {
        splits = {{W, W}, {L, L}};
      } else if (gaps_[c - 1] == W) {
        splits = {{W, W}, {W, L}, {L, W}};
      } else {
        splits = {{L, L}};
      }
      for (auto [up, down] : splits) {
        auto saved_gaps = gaps_;
        if (n == 0) {
        } else if (c == 0) {
          gaps_.insert(gaps_.begin(), down);
        } else if (c == n) {
          gaps_.push_back(up);
        } else {
          gaps_[c - 1] = up;
          gaps_.insert(gaps_.begin() + static_cast<std::ptrdiff_t>(c), down);
        }
        classes_.insert(classes_.begin() + static_cast<std::ptrdiff_t>(c), std::vector<int>{t});
        for (std::size_t i = 0; i < classes_.size(); ++i) {
          for (int m : classes_[i]) cls_of_[m] = static_cast<int>(i);
        }
        bool go = descend();
        classes_.erase(classes_.begin() + static_cast<std::ptrdiff_t>(c));
        gaps_ = std::move(saved_gaps);
        cls_of_[t] = -1;
        for (std::size_t i = 0; i < classes_.size(); ++i) {
          for (int m : classes_[i]) cls_of_[m] = static_cast<int>(i);
        }
        if (!go) return false;
      }
    }
    return true;
  }

  const KboParams& p_;
  const WeightContext& ctx_;
  const ChainOptions& opts_;
  const ChainVisitor& visit_;
  std::vector<Term> terms_;
  std::map<Term, int> index_;
  std::vector<std::vector<Edge>> edges_;
  std::map<int, std::vector<Edge>> rev_;
  std::vector<int> compound_;
  std::vector<std::optional<Term>> value_;
  std::vector<int> order_;
  LinSystem base_;
  std::vector<std::vector<int>> classes_;
  std::vector<TermRel> gaps_;
  std::vector<int> cls_of_;
};

}  // namespace

bool chain_branches(const KboParams& params, const std::vector<TermAtom>& atoms,
                    const std::vector<Term>& extra_terms, const WeightContext& ctx,
                    const ChainOptions& opts, const ChainVisitor& visit) {
  Enumerator e(params, atoms, extra_terms, ctx, opts, visit);
  return e.run();
}

std::vector<Chain> chain_branches(const KboParams& params, const std::vector<TermAtom>& atoms,
                                  const ChainOptions& opts) {
  std::vector<Chain> out;
  chain_branches(params, atoms, {}, {}, opts, [&](const Chain& c) {
    out.push_back(c);
    return true;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Reference route.

std::optional<Chain> normalize_chain(const std::vector<TermAtom>& atoms) {
  std::vector<Term> terms = collect_terms(atoms, {});
  std::map<Term, int> idx;
  for (std::size_t i = 0; i < terms.size(); ++i) idx.emplace(terms[i], static_cast<int>(i));
  const int n = static_cast<int>(terms.size());

  // = cycles are harmless: merge classes.
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (const auto& a : atoms) {
    if (a.rel == TermRel::Succ) throw Error(ErrorCode::InvalidArgument, "normalize_chain: split > first");
    if (a.rel == TermRel::EqTA) parent[find(idx.at(a.left))] = find(idx.at(a.right));
  }
  std::vector<int> roots;
  for (int i = 0; i < n; ++i) {
    if (find(i) == i) roots.push_back(i);
  }
  // Strict edges between classes; a strict edge inside a class closes a
  // cycle through >.
  std::map<std::pair<int, int>, TermRel> edge;
  for (const auto& a : atoms) {
    if (a.rel == TermRel::EqTA) continue;
    int u = find(idx.at(a.left)), v = find(idx.at(a.right));
    if (u == v) return std::nullopt;
    auto [it, fresh] = edge.emplace(std::make_pair(u, v), a.rel);
    if (!fresh && it->second != a.rel) return std::nullopt;
  }
  // Kahn; a complete comparison leaves exactly one source each round.
  std::map<int, int> indeg;
  for (int r : roots) indeg[r] = 0;
  for (const auto& [uv, rel] : edge) ++indeg[uv.second];
  std::vector<int> order;
  std::set<int> done;
  while (order.size() < roots.size()) {
    std::vector<int> sources;
    for (int r : roots) {
      if (!done.count(r) && indeg[r] == 0) sources.push_back(r);
    }
    if (sources.empty()) return std::nullopt;  // cycle through >
    if (sources.size() > 1) {
      throw Error(ErrorCode::InvalidArgument, "normalize_chain: some pair of terms is not compared");
    }
    int s = sources[0];
    order.push_back(s);
    done.insert(s);
    for (const auto& [uv, rel] : edge) {
      if (uv.first == s) --indeg[uv.second];
    }
  }
  std::map<int, int> position;
  for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = static_cast<int>(i);
  std::vector<TermRel> gaps;
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    auto it = edge.find({order[i], order[i + 1]});
    if (it == edge.end()) throw Error(ErrorCode::InvalidArgument, "normalize_chain: neighbours not compared");
    gaps.push_back(it->second);
  }
  // Transitive subconstraints.
  for (const auto& [uv, rel] : edge) {
    int a = position[uv.first], b = position[uv.second];
    bool w = false;
    for (int g = a; g < b; ++g) w = w || gaps[g] == TermRel::SuccW;
    if (rel == TermRel::SuccW && !w) return std::nullopt;
    if (rel == TermRel::SuccLex && w) return std::nullopt;
  }
  Chain c;
  for (std::size_t i = 0; i < order.size(); ++i) {
    bool first = true;
    for (int m = 0; m < n; ++m) {
      if (find(m) != order[i]) continue;
      if (!c.terms.empty()) c.links.push_back(first ? gaps[i - 1] : TermRel::EqTA);
      c.terms.push_back(terms[m]);
      first = false;
    }
  }
  return c;
}

std::vector<Chain> saturate_and_normalize(const std::vector<TermAtom>& atoms) {
  std::vector<Term> terms = collect_terms(atoms, {});
  std::set<std::pair<Term, Term>> compared;
  for (const auto& a : atoms) {
    compared.insert({a.left, a.right});
    compared.insert({a.right, a.left});
  }
  std::vector<std::pair<Term, Term>> open;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    for (std::size_t j = i + 1; j < terms.size(); ++j) {
      if (!compared.count({terms[i], terms[j]})) open.emplace_back(terms[i], terms[j]);
    }
  }
  std::vector<Chain> out;
  std::vector<TermAtom> cur = atoms;
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == open.size()) {
      if (auto c = normalize_chain(cur)) out.push_back(*c);
      return;
    }
    const auto& [s, t] = open[k];
    const TermAtom cases[] = {{s, t, TermRel::SuccW},
                              {s, t, TermRel::SuccLex},
                              {s, t, TermRel::EqTA},
                              {t, s, TermRel::SuccW},
                              {t, s, TermRel::SuccLex}};
    for (const auto& a : cases) {
      cur.push_back(a);
      rec(k + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

}  // namespace kbo
