#pragma once

// Slow, obviously-correct reference checks shared by unit and acceptance
// tests.

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kbo/isolation.hpp"
#include "kbo/lia.hpp"

namespace kbo::testing {

/// Does some solution of f give x this value?
inline bool holds_at(const ArithFormula& f, Weight x, const std::string& var = "x") {
  LinSystem base{{var}, {lin_eq(lin_var(var), lin_const(x))}};
  bool found = false;
  expand_to_systems(f, base, [&](const LinSystem& s) {
    found = feasible(s);
    return !found;
  });
  return found;
}

// Lexicographically least solution in the box [0, bound]^n, names sorted.
inline std::optional<Assignment> exhaustive(const LinSystem& s, Weight bound) {
  auto names = system_vars(s);
  Assignment a;
  for (const auto& n : names) a[n] = 0;
  for (;;) {
    if (satisfies(s, a)) return a;
    // Odometer with the last name varying fastest keeps lexicographic order.
    std::size_t i = names.size();
    while (i > 0) {
      --i;
      if (a[names[i]] < bound) {
        ++a[names[i]];
        for (std::size_t k = i + 1; k < names.size(); ++k) a[names[k]] = 0;
        break;
      }
      if (i == 0) return std::nullopt;
    }
    if (names.empty()) return std::nullopt;
  }
}

// Binds the variables of `pat` so that it equals the ground term `g`.
inline bool match(const Term& pat, const Term& g, Substitution& s) {
  if (pat.is_var()) {
    auto it = s.find(pat.var_name());
    if (it != s.end()) return it->second == g;
    s.insert_or_assign(pat.var_name(), g);
    return true;
  }
  if (g.is_var() || pat.symbol() != g.symbol()) return false;
  for (std::size_t i = 0; i < pat.arity(); ++i) {
    if (!match(pat.arg(i), g.arg(i), s)) return false;
  }
  return true;
}

// Does the isolated form have a solution agreeing with theta on theta's
// variables? Values of the other variables are read off through triang
// where possible and searched over `universe` otherwise.
inline bool extends(const KboParams& p, const IsolatedForm& f, const Substitution& theta,
             const std::vector<Term>& universe) {
  Substitution s = theta;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& e : f.triang) {
      auto it = s.find(e.var);
      if (it != s.end()) {
        auto before = s.size();
        if (!match(e.term, it->second, s)) return false;
        changed = changed || s.size() != before;
      } else {
        bool bound = true;
        for (const auto& v : vars_of(e.term)) bound = bound && s.count(v);
        if (bound) {
          s.insert_or_assign(e.var, kbo::apply(s, e.term));
          changed = true;
        }
      }
    }
  }
  Constraint c = isolated_constraint(f);
  std::vector<std::string> open;
  for (const auto& v : vars_of(c)) {
    if (!s.count(v)) open.push_back(v);
  }
  Formula rest = Formula::from_constraint(c);
  bool found = false;
  Substitution cur = s;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (found) return;
    if (i == open.size()) {
      found = evaluate(rest, p, cur);
      return;
    }
    for (const auto& t : universe) {
      cur.insert_or_assign(open[i], t);
      auto v = evaluate_partial(rest, p, cur);
      if (v && !*v) continue;
      rec(i + 1);
      if (found) return;
    }
    cur.erase(open[i]);
  };
  rec(0);
  return found;
}

}  // namespace kbo::testing
