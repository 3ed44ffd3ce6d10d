#include "kbo/oracle.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace kbo {

// ---------------------------------------------------------------------------
// Enumeration by weight layers.

namespace {

// All ways to pick `arity` arguments whose weights sum to `rem`.
void build_args(const std::vector<std::vector<Term>>& layers, std::size_t arity, Weight rem,
                std::vector<Term>& prefix, const std::function<void(const std::vector<Term>&)>& emit) {
  if (prefix.size() == arity) {
    if (rem == 0) emit(prefix);
    return;
  }
  const std::size_t left = arity - prefix.size();
  // Each remaining argument weighs at least 1.
  for (Weight w = 1; w <= rem - static_cast<Weight>(left - 1); ++w) {
    if (w >= static_cast<Weight>(layers.size())) break;
    for (const auto& t : layers[w]) {
      prefix.push_back(t);
      build_args(layers, arity, rem - w, prefix, emit);
      prefix.pop_back();
    }
  }
}

}  // namespace

std::vector<Term> enum_terms(const KboParams& params, const EnumBound& bound) {
  std::vector<std::vector<Term>> layers(static_cast<std::size_t>(std::max<Weight>(bound.max_weight, 0)) + 1);
  auto f = params.zero_unary();
  for (Weight w = 1; w <= bound.max_weight; ++w) {
    std::vector<Term> base;
    for (SymbolId g = 0; g < params.size(); ++g) {
      const Symbol& s = params.symbol(g);
      if (f && *f == g) continue;
      if (s.arity == 0) {
        if (s.weight == w) base.push_back(Term::app(g));
        continue;
      }
      Weight rem = w - s.weight;
      if (rem < static_cast<Weight>(s.arity)) continue;
      std::vector<Term> prefix;
      build_args(layers, s.arity, rem, prefix,
                 [&](const std::vector<Term>& args) { base.push_back(Term::app(g, args)); });
    }
    auto& layer = layers[w];
    layer = base;
    if (f) {
      for (std::size_t h = 1; h <= bound.max_f_height; ++h) {
        for (const auto& b : base) layer.push_back(wrap(*f, h, b));
      }
    }
    std::sort(layer.begin(), layer.end(), [&](const Term& a, const Term& b) {
      return kbo_compare(params, a, b) == Order::LT;
    });
  }
  std::vector<Term> out;
  for (auto& l : layers) out.insert(out.end(), l.begin(), l.end());
  return out;
}

namespace {

Weight sat_mul(Weight a, Weight b, Weight cap) {
  if (a == 0 || b == 0) return 0;
  if (a > cap / b) return cap;
  return std::min(cap, a * b);
}

}  // namespace

Weight count_weight(const KboParams& params, Weight x, Weight cap) {
  if (x <= 0 || cap <= 0) return 0;
  auto f = params.zero_unary();
  std::vector<Weight> c(static_cast<std::size_t>(x) + 1, 0);
  for (Weight w = 1; w <= x; ++w) {
    Weight total = 0;
    for (SymbolId g = 0; g < params.size(); ++g) {
      const Symbol& s = params.symbol(g);
      if (f && *f == g) continue;
      Weight rem = w - s.weight;
      if (s.arity == 0) {
        if (rem == 0) total = std::min(cap, total + 1);
        continue;
      }
      if (rem < static_cast<Weight>(s.arity)) continue;
      // tuples[k][v]: number of k-tuples of terms of total weight v.
      std::vector<Weight> tuples(static_cast<std::size_t>(rem) + 1, 0);
      tuples[0] = 1;
      for (unsigned k = 0; k < s.arity; ++k) {
        std::vector<Weight> next(tuples.size(), 0);
        for (Weight v = 0; v <= rem; ++v) {
          if (tuples[v] == 0) continue;
          for (Weight a = 1; v + a <= rem; ++a) {
            if (a >= w) break;
            next[v + a] = std::min(cap, next[v + a] + sat_mul(tuples[v], c[a], cap));
          }
        }
        tuples = std::move(next);
      }
      total = std::min(cap, total + tuples[rem]);
    }
    c[w] = total;
  }
  if (f && c[x] > 0) return cap;
  return c[x];
}

// ---------------------------------------------------------------------------
// Brute force with interval narrowing. The universe is sorted by KBO, which
// also sorts it by weight, so atoms `v rel t` with t ground cut out an index
// interval for v.

namespace {

struct Universe {
  const KboParams& params;
  const std::vector<Term>& terms;
  std::vector<Weight> weights;

  Universe(const KboParams& p, const std::vector<Term>& t) : params(p), terms(t) {
    weights.reserve(t.size());
    for (const auto& x : t) weights.push_back(ground_weight(p, x));
  }

  std::size_t first_not_below(const Term& t) const {
    return static_cast<std::size_t>(
        std::partition_point(terms.begin(), terms.end(),
                             [&](const Term& u) { return kbo_compare(params, u, t) == Order::LT; }) -
        terms.begin());
  }
  std::size_t first_above(const Term& t) const {
    return static_cast<std::size_t>(
        std::partition_point(terms.begin(), terms.end(),
                             [&](const Term& u) { return kbo_compare(params, u, t) != Order::GT; }) -
        terms.begin());
  }
  std::size_t first_weight_at_least(Weight w) const {
    return static_cast<std::size_t>(std::lower_bound(weights.begin(), weights.end(), w) -
                                    weights.begin());
  }
};

struct Interval {
  std::size_t lo, hi;
  void meet(std::size_t l, std::size_t h) {
    lo = std::max(lo, l);
    hi = std::min(hi, h);
  }
};

Weight floor_div(Weight a, Weight b) {
  Weight q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}
Weight ceil_div(Weight a, Weight b) { return -floor_div(-a, b); }

class Search {
 public:
  Search(const Formula& f, const KboParams& params, const std::vector<Term>& universe,
         std::vector<std::string> vars, const std::function<bool(const Substitution&)>& visit)
      : f_(f), u_(params, universe), vars_(std::move(vars)), visit_(visit), root_(build(f)) {
    collect_conjuncts(f_);
    if (!u_.weights.empty()) {
      wmin_ = u_.weights.front();
      wmax_ = u_.weights.back();
    }
  }

  void run() {
    if (auto v = partial(root_); v && !*v) return;
    dfs(0);
  }

 private:
  void collect_conjuncts(const Formula& g) {
    if (g.kind() == Formula::Kind::Atom) {
      conj_.push_back(g.as_atom());
    } else if (g.kind() == Formula::Kind::And) {
      for (const auto& c : g.children()) collect_conjuncts(c);
    }
  }

  // Formula tree with the weight difference of each atom precomputed.
  struct Node {
    Formula::Kind kind;
    std::vector<Node> kids;
    const Atom* atom = nullptr;
    std::map<std::string, Weight> diff;  // left - right, per variable weight
    Weight diff_constant = 0;
  };

  Node build(const Formula& g) const {
    Node n{g.kind(), {}, nullptr, {}, 0};
    if (g.kind() != Formula::Kind::Atom) {
      for (const auto& c : g.children()) n.kids.push_back(build(c));
      return n;
    }
    n.atom = &g.as_atom();
    auto add = [&](const WeightExpr& e, Weight sign) {
      n.diff_constant += sign * e.constant;
      for (const auto& [v, c] : e.coeffs) n.diff[v] += sign * c;
    };
    if (const auto* t = std::get_if<TermAtom>(n.atom)) {
      add(weight_of(u_.params, t->left), 1);
      add(weight_of(u_.params, t->right), -1);
    } else {
      add(std::get<ArithAtom>(*n.atom).left, 1);
      add(std::get<ArithAtom>(*n.atom).right, -1);
    }
    return n;
  }

  // Three-valued evaluation under the current partial substitution. An atom
  // with unbound variables is still decided when the range of its weight
  // difference, each unbound variable ranging over the universe's weights,
  // already settles it.
  std::optional<bool> partial(const Node& n) const {
    switch (n.kind) {
      case Formula::Kind::Atom: return partial_atom(n);
      case Formula::Kind::Not: {
        auto v = partial(n.kids.front());
        return v ? std::optional<bool>(!*v) : std::nullopt;
      }
      case Formula::Kind::And:
      case Formula::Kind::Or: {
        const bool is_and = n.kind == Formula::Kind::And;
        bool open = false;
        for (const auto& k : n.kids) {
          auto v = partial(k);
          if (!v) {
            open = true;
          } else if (*v != is_and) {
            return !is_and;
          }
        }
        return open ? std::nullopt : std::optional<bool>(is_and);
      }
    }
    return std::nullopt;
  }

  std::optional<bool> partial_atom(const Node& n) const {
    Weight lo = n.diff_constant, hi = n.diff_constant;
    bool ground = true;
    for (const auto& [v, c] : n.diff) {
      if (c == 0) continue;
      auto it = subst_.find(v);
      if (it != subst_.end()) {
        const Weight w = c * ground_weight(u_.params, it->second);
        lo += w;
        hi += w;
        continue;
      }
      ground = false;
      lo += c > 0 ? c * wmin_ : c * wmax_;
      hi += c > 0 ? c * wmax_ : c * wmin_;
    }
    if (const auto* t = std::get_if<TermAtom>(n.atom)) {
      // Variables with zero net weight still matter for the order itself.
      if (ground) {
        ground = std::all_of(term_vars(*t).begin(), term_vars(*t).end(),
                             [&](const std::string& v) { return subst_.count(v) > 0; });
      }
      if (ground) return evaluate(*n.atom, u_.params, subst_);
      switch (t->rel) {
        case TermRel::Succ:
          if (hi < 0) return false;
          if (lo > 0) return true;
          break;
        case TermRel::SuccW:
          if (hi <= 0) return false;
          if (lo > 0) return true;
          break;
        case TermRel::SuccLex:
          if (lo > 0 || hi < 0) return false;
          break;
        case TermRel::EqTA:
          if (lo > 0 || hi < 0) return false;
          if (clash(apply(subst_, t->left), apply(subst_, t->right))) return false;
          break;
      }
      return std::nullopt;
    }
    switch (std::get<ArithAtom>(*n.atom).rel) {
      case ArithRel::Gt:
        if (lo > 0) return true;
        if (hi <= 0) return false;
        break;
      case ArithRel::Ge:
        if (lo >= 0) return true;
        if (hi < 0) return false;
        break;
      case ArithRel::Eq:
        if (lo == 0 && hi == 0) return true;
        if (lo > 0 || hi < 0) return false;
        break;
    }
    return std::nullopt;
  }

  // No ground instance makes s and t equal: head symbols differ somewhere, or
  // a variable would have to contain itself.
  static bool clash(const Term& s, const Term& t) {
    if (s.is_var() || t.is_var()) {
      if (s == t) return false;
      const Term& v = s.is_var() ? s : t;
      const Term& o = s.is_var() ? t : s;
      const auto vs = vars_of(o);
      return std::find(vs.begin(), vs.end(), v.var_name()) != vs.end();
    }
    if (s.symbol() != t.symbol()) return true;
    for (std::size_t i = 0; i < s.arity(); ++i) {
      if (clash(s.arg(i), t.arg(i))) return true;
    }
    return false;
  }

  const std::vector<std::string>& term_vars(const TermAtom& t) const {
    auto it = atom_vars_.find(&t);
    if (it != atom_vars_.end()) return it->second;
    auto vs = vars_of(t.left);
    for (const auto& v : vars_of(t.right)) {
      if (std::find(vs.begin(), vs.end(), v) == vs.end()) vs.push_back(v);
    }
    return atom_vars_.emplace(&t, std::move(vs)).first->second;
  }

  // Narrows the domain of `v` using conjunct atoms in which v is the only
  // unbound variable.
  Interval domain(const std::string& v) const {
    Interval iv{0, u_.terms.size()};
    for (const auto& a : conj_) {
      if (iv.lo >= iv.hi) break;
      if (const auto* t = std::get_if<TermAtom>(&a)) {
        narrow_term(*t, v, iv);
      } else {
        narrow_arith(std::get<ArithAtom>(a), v, iv);
      }
    }
    return iv;
  }

  void narrow_term(const TermAtom& a, const std::string& v, Interval& iv) const {
    bool left_is_v = a.left.is_var() && a.left.var_name() == v;
    bool right_is_v = a.right.is_var() && a.right.var_name() == v;
    if (left_is_v && right_is_v) {
      if (a.rel != TermRel::EqTA) iv.hi = iv.lo;
      return;
    }
    if (!left_is_v && !right_is_v) return;
    Term other = apply(subst_, left_is_v ? a.right : a.left);
    if (!other.is_ground()) return;
    const std::size_t n = u_.terms.size();
    const Weight w = ground_weight(u_.params, other);
    switch (a.rel) {
      case TermRel::EqTA:
        iv.meet(u_.first_not_below(other), u_.first_above(other));
        return;
      case TermRel::Succ:
        if (left_is_v) iv.meet(u_.first_above(other), n);
        else iv.meet(0, u_.first_not_below(other));
        return;
      case TermRel::SuccW:
        if (left_is_v) iv.meet(u_.first_weight_at_least(w + 1), n);
        else iv.meet(0, u_.first_weight_at_least(w));
        return;
      case TermRel::SuccLex:
        if (left_is_v) iv.meet(u_.first_above(other), u_.first_weight_at_least(w + 1));
        else iv.meet(u_.first_weight_at_least(w), u_.first_not_below(other));
        return;
    }
  }

  void narrow_arith(const ArithAtom& a, const std::string& v, Interval& iv) const {
    // left - right = c * |v| + k
    Weight c = 0, k = a.left.constant - a.right.constant;
    auto add = [&](const WeightExpr& e, Weight sign) {
      for (const auto& [name, coef] : e.coeffs) {
        if (name == v) {
          c += sign * coef;
          continue;
        }
        auto it = subst_.find(name);
        if (it == subst_.end()) return false;
        k += sign * coef * ground_weight(u_.params, it->second);
      }
      return true;
    };
    if (!add(a.left, 1) || !add(a.right, -1)) return;
    const std::size_t n = u_.terms.size();
    if (c == 0) {
      bool ok = a.rel == ArithRel::Gt ? k > 0 : a.rel == ArithRel::Ge ? k >= 0 : k == 0;
      if (!ok) iv.hi = iv.lo;
      return;
    }
    Weight need = a.rel == ArithRel::Gt ? 1 : 0;  // c*w + k >= need
    if (a.rel == ArithRel::Eq) {
      if ((-k) % c != 0) {
        iv.hi = iv.lo;
        return;
      }
      Weight w = -k / c;
      iv.meet(u_.first_weight_at_least(w), u_.first_weight_at_least(w + 1));
      return;
    }
    if (c > 0) {
      iv.meet(u_.first_weight_at_least(ceil_div(need - k, c)), n);
    } else {
      iv.meet(0, u_.first_weight_at_least(floor_div(k - need, -c) + 1));
    }
  }

  bool dfs(std::size_t i) {
    if (i == vars_.size()) {
      if (evaluate(f_, u_.params, subst_)) return visit_(subst_);
      return true;
    }
    const std::string& v = vars_[i];
    Interval iv = domain(v);
    for (std::size_t idx = iv.lo; idx < iv.hi; ++idx) {
      subst_.insert_or_assign(v, u_.terms[idx]);
      auto val = partial(root_);
      if (val && !*val) continue;
      if (!dfs(i + 1)) {
        subst_.erase(v);
        return false;
      }
    }
    subst_.erase(v);
    return true;
  }

  const Formula& f_;
  Universe u_;
  std::vector<std::string> vars_;
  const std::function<bool(const Substitution&)>& visit_;
  std::vector<Atom> conj_;
  Substitution subst_;
  Node root_;
  Weight wmin_ = 0, wmax_ = 0;
  mutable std::map<const TermAtom*, std::vector<std::string>> atom_vars_;
};

}  // namespace

void for_each_solution(const Formula& f, const KboParams& params, const std::vector<Term>& universe,
                       const std::vector<std::string>& vars,
                       const std::function<bool(const Substitution&)>& visit) {
  Search s(f, params, universe, vars, visit);
  s.run();
}

namespace {

void collect_atoms(const Formula& g, bool top, std::vector<std::pair<Atom, bool>>& out) {
  if (g.kind() == Formula::Kind::Atom) {
    out.emplace_back(g.as_atom(), top);
    return;
  }
  for (const auto& c : g.children()) collect_atoms(c, top && g.kind() == Formula::Kind::And, out);
}

// Binding order: a variable pinned by a top-level equation comes right after
// the variables of the other side; otherwise take a variable from the atom
// with the fewest unbound variables, so that atoms get decided early.
std::vector<std::string> search_order(const Formula& f) {
  const std::vector<std::string> first = vars_of(f);
  std::vector<std::pair<Atom, bool>> atoms;
  collect_atoms(f, true, atoms);
  std::vector<std::vector<std::string>> atom_vars;
  std::map<std::string, std::vector<std::vector<std::string>>> pins;
  for (const auto& [a, top] : atoms) {
    atom_vars.push_back(vars_of(Formula::atom(a)));
    const auto* t = std::get_if<TermAtom>(&a);
    if (!top || !t || t->rel != TermRel::EqTA) continue;
    for (const auto* side : {&t->left, &t->right}) {
      const Term& other = side == &t->left ? t->right : t->left;
      if (!side->is_var()) continue;
      auto ov = vars_of(Formula::atom(TermAtom{other, other, TermRel::EqTA}));
      if (std::find(ov.begin(), ov.end(), side->var_name()) == ov.end()) pins[side->var_name()].push_back(ov);
    }
  }
  std::set<std::string> placed;
  std::vector<std::string> order;
  auto unbound = [&](const std::vector<std::string>& vs) {
    return static_cast<std::size_t>(std::count_if(vs.begin(), vs.end(), [&](const auto& v) { return !placed.count(v); }));
  };
  while (order.size() < first.size()) {
    std::optional<std::string> next;
    for (const auto& v : first) {
      if (placed.count(v) || !pins.count(v)) continue;
      for (const auto& ov : pins[v]) {
        if (unbound(ov) == 0) next = v;
      }
      if (next) break;
    }
    if (!next) {
      const bool all_pinned = std::all_of(first.begin(), first.end(), [&](const auto& v) { return placed.count(v) || pins.count(v); });
      std::size_t best = SIZE_MAX;
      for (const auto& v : first) {
        if (placed.count(v) || (pins.count(v) && !all_pinned)) continue;
        for (const auto& av : atom_vars) {
          if (std::find(av.begin(), av.end(), v) == av.end()) continue;
          const std::size_t u = unbound(av);
          if (u < best) {
            best = u;
            next = v;
          }
        }
      }
    }
    placed.insert(*next);
    order.push_back(*next);
  }
  return order;
}

}  // namespace

OracleResult brute_force_check(const Formula& f, const KboParams& params,
                               const std::vector<Term>& universe) {
  OracleResult res;
  for_each_solution(f, params, universe, search_order(f), [&](const Substitution& s) {
    res.sat = true;
    res.witness = s;
    return false;
  });
  return res;
}

OracleResult brute_force_check(const Formula& f, const KboParams& params, const EnumBound& bound) {
  return brute_force_check(f, params, enum_terms(params, bound));
}

}  // namespace kbo
