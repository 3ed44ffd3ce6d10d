#include "kbo/counting.hpp"

#include <algorithm>
#include <functional>

namespace kbo {

SignatureStats signature_stats(const KboParams& params) {
  SignatureStats st;
  st.S = params.size();
  for (const auto& s : params.symbols()) {
    if (s.arity >= 2) ++st.B;
    if (s.arity >= 1) ++st.F;
    st.W = std::max(st.W, s.weight);
    st.A = std::max(st.A, s.arity);
  }
  return st;
}

SignatureClass classify(const KboParams& params) {
  if (params.zero_unary()) return SignatureClass::ZeroWeightUnary;
  std::size_t unary = 0;
  for (const auto& s : params.symbols()) {
    if (s.arity >= 2) return SignatureClass::Branching;
    if (s.arity == 1) ++unary;
  }
  if (unary == 0) return SignatureClass::ConstantsOnly;
  return unary == 1 ? SignatureClass::UnaryOnly : SignatureClass::Branching;
}

const char* class_name(SignatureClass c) {
  switch (c) {
    case SignatureClass::ZeroWeightUnary: return "zero-weight-unary";
    case SignatureClass::ConstantsOnly: return "constants-only";
    case SignatureClass::UnaryOnly: return "unary-only";
    case SignatureClass::Branching: return "branching";
  }
  return "?";
}

LinSystem exists_system(const KboParams& params, const LinExpr& x, const std::string& prefix) {
  LinExpr weight_sum;
  LinExpr shape = lin_const(1);
  for (const auto& s : params.symbols()) {
    const std::string n = prefix + s.name;
    weight_sum += lin_var(n, s.weight);
    shape += lin_var(n, static_cast<Weight>(s.arity) - 1);
  }
  LinSystem sys;
  for (const auto& s : params.symbols()) sys.vars.push_back(prefix + s.name);
  sys.atoms.push_back(lin_eq(x, weight_sum));
  sys.atoms.push_back(lin_eq(shape, lin_const(0)));
  return sys;
}

namespace {

void require_branching(const KboParams& params, const char* what) {
  if (classify(params) != SignatureClass::Branching) {
    throw Error(ErrorCode::WrongSignatureClass,
                std::string(what) + " needs a symbol of arity >= 2 or two unary symbols, and no "
                "zero-weight unary symbol; signature is " + class_name(classify(params)));
  }
}

}  // namespace

std::pair<Weight, Weight> thresholds(const KboParams& params) {
  require_branching(params, "thresholds");
  auto st = signature_stats(params);
  const Weight W = st.W;
  const Weight A = st.A;
  return {W * A, W * W * (A + 1) + W};
}

// ---------------------------------------------------------------------------
// tnt: enumerate feasible contents of weight M, then count terms with those
// contents by building them depth by depth. A level with N or more terms
// means at least N terms with the full contents exist.

namespace {

using Counts = std::vector<Weight>;

struct Built {
  Term term;
  Counts counts;
  std::size_t depth;
};

class ContentsCounter {
 public:
  ContentsCounter(const KboParams& p, const Counts& con, Weight N) : p_(p), con_(con), N_(N) {}

  Weight run() {
    std::size_t exact = 0;
    for (std::size_t depth = 1;; ++depth) {
      std::vector<Built> level;
      for (SymbolId g = 0; g < p_.size() && static_cast<Weight>(level.size()) < N_; ++g) {
        grow(g, depth, level);
      }
      if (static_cast<Weight>(level.size()) >= N_) return N_;
      if (level.empty()) return std::min<Weight>(N_, static_cast<Weight>(exact));
      for (auto& b : level) {
        if (b.counts == con_) ++exact;
        all_.push_back(std::move(b));
      }
    }
  }

 private:
  // Terms g(t1..tm) of exactly `depth`, args from earlier levels, contents
  // bounded by con_. Distinct argument tuples give distinct terms.
  void grow(SymbolId g, std::size_t depth, std::vector<Built>& out) {
    const Symbol& s = p_.symbol(g);
    Counts start(p_.size(), 0);
    start[g] = 1;
    if (start[g] > con_[g]) return;
    if (s.arity == 0) {
      if (depth == 1) out.push_back({Term::app(g), start, 1});
      return;
    }
    if (depth == 1) return;
    std::vector<Term> args;
    std::function<void(unsigned, Counts&, bool)> rec = [&](unsigned i, Counts& acc, bool deep) {
      if (static_cast<Weight>(out.size()) >= N_) return;
      if (i == s.arity) {
        if (deep) out.push_back({Term::app(g, args), acc, depth});
        return;
      }
      for (const auto& b : all_) {
        if (b.depth + 1 > depth) continue;
        bool ok = true;
        for (std::size_t k = 0; k < acc.size(); ++k) {
          if (acc[k] + b.counts[k] > con_[k]) {
            ok = false;
            break;
          }
        }
        if (!ok) continue;
        for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += b.counts[k];
        args.push_back(b.term);
        rec(i + 1, acc, deep || b.depth + 1 == depth);
        args.pop_back();
        for (std::size_t k = 0; k < acc.size(); ++k) acc[k] -= b.counts[k];
        if (static_cast<Weight>(out.size()) >= N_) return;
      }
    };
    rec(0, start, false);
  }

  const KboParams& p_;
  const Counts& con_;
  Weight N_;
  std::vector<Built> all_;
};

// Contents with sum w_i n_i = M and 1 + sum (arity_i - 1) n_i = 0; each n_i <= M.
void for_each_contents(const KboParams& p, Weight M, const std::function<bool(const Counts&)>& visit) {
  Counts n(p.size(), 0);
  std::function<bool(std::size_t, Weight, Weight)> rec = [&](std::size_t i, Weight wsum, Weight shape) {
    if (i == p.size()) {
      if (wsum == M && shape == 0) return visit(n);
      return true;
    }
    const Symbol& s = p.symbol(static_cast<SymbolId>(i));
    for (Weight k = 0; k <= M; ++k) {
      Weight w = wsum + k * s.weight;
      if (w > M) break;
      n[i] = k;
      if (!rec(i + 1, w, shape + k * (static_cast<Weight>(s.arity) - 1))) return false;
    }
    n[i] = 0;
    return true;
  };
  rec(0, 0, 1);
}

}  // namespace

Weight tnt(Weight N, Weight M, const KboParams& params) {
  require_branching(params, "tnt");
  if (N <= 0 || M <= 0) return 0;
  Weight total = 0;
  for_each_contents(params, M, [&](const Counts& con) {
    ContentsCounter c(params, con, N - total);
    total += c.run();
    return total < N;
  });
  return std::min(total, N);
}

// ---------------------------------------------------------------------------

namespace {

ArithFormula system_formula(const LinSystem& s) {
  std::vector<ArithFormula> parts;
  for (const auto& a : s.atoms) parts.push_back(ArithFormula::atom(a));
  return ArithFormula::conj(std::move(parts));
}

// Every N-element subset of `items`, in lexicographic index order.
void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> pick;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (pick.size() == k) {
      f(pick);
      return;
    }
    for (std::size_t i = start; i + (k - pick.size()) <= n; ++i) {
      pick.push_back(i);
      rec(i + 1);
      pick.pop_back();
    }
  };
  rec(0);
}

}  // namespace

ArithFormula at_least(Weight N, const KboParams& params, const LinExpr& x, const std::string& prefix) {
  if (N <= 0) return ArithFormula::truth();
  const SignatureClass cls = classify(params);
  // One term of weight x exists iff the contents equations are solvable;
  // with f, one term already gives infinitely many.
  if (N == 1 || cls == SignatureClass::ZeroWeightUnary) {
    return system_formula(exists_system(params, x, prefix));
  }
  if (cls == SignatureClass::UnaryOnly || cls == SignatureClass::ConstantsOnly) {
    // Terms are g^k(c). Pick N constants each reachable at weight x.
    std::vector<SymbolId> consts;
    std::optional<SymbolId> g;
    for (SymbolId i = 0; i < params.size(); ++i) {
      if (params.symbol(i).arity == 0) consts.push_back(i);
      else g = i;
    }
    if (static_cast<std::size_t>(N) > consts.size()) return ArithFormula::falsity();
    std::vector<ArithFormula> options;
    for_each_subset(consts.size(), static_cast<std::size_t>(N), [&](const std::vector<std::size_t>& q) {
      std::vector<ArithFormula> reach;
      for (auto idx : q) {
        const Symbol& c = params.symbol(consts[idx]);
        LinExpr rhs = lin_const(c.weight);
        if (g) rhs += lin_var(prefix + "k_" + c.name, params.symbol(*g).weight);
        reach.push_back(ArithFormula::atom(lin_eq(rhs, x)));
      }
      options.push_back(ArithFormula::conj(std::move(reach)));
    });
    return ArithFormula::disj(std::move(options));
  }
  auto [N1, N2] = thresholds(params);
  const Weight M = N * N1 + N2;
  // Small weights first, so the first solvable disjunct gives small terms.
  std::vector<ArithFormula> options;
  for (Weight m = 1; m <= M; ++m) {
    if (tnt(N, m, params) >= N) options.push_back(ArithFormula::atom(lin_eq(x, lin_const(m))));
  }
  auto big = exists_system(params, x, prefix);
  big.atoms.push_back(lin_gt(x, lin_const(M)));
  options.push_back(system_formula(big));
  return ArithFormula::disj(std::move(options));
}

}  // namespace kbo
