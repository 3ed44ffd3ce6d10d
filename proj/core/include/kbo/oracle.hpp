#pragma once

// Brute-force ground-term enumeration and direct constraint checking, used as
// an independent reference by the tests.

#include <functional>
#include <optional>
#include <vector>

#include "kbo/formula.hpp"

namespace kbo {

struct EnumBound {
  Weight max_weight = 0;
  /// Only meaningful when the signature has a zero-weight unary symbol.
  std::size_t max_f_height = 0;
};

/// All ground terms within the bound, each once, sorted by (weight, KBO).
std::vector<Term> enum_terms(const KboParams& params, const EnumBound& bound);

/// min(cap, number of ground terms of weight x). With a zero-weight unary the
/// count is infinite whenever nonzero, so cap is returned.
Weight count_weight(const KboParams& params, Weight x, Weight cap);

struct OracleResult {
  bool sat = false;  // false means no witness within the bound (inconclusive)
  Substitution witness;
};

/// First satisfying substitution in enumeration order. Variables are bound
/// in a fixed order picked so that atoms are decided as early as possible
/// (the first variable varies slowest).
OracleResult brute_force_check(const Formula& f, const KboParams& params, const EnumBound& bound);
OracleResult brute_force_check(const Formula& f, const KboParams& params,
                               const std::vector<Term>& universe);

/// Every satisfying substitution over `universe` for the given variables
/// (all variables of f must be listed). Stops when the visitor returns false.
void for_each_solution(const Formula& f, const KboParams& params, const std::vector<Term>& universe,
                       const std::vector<std::string>& vars,
                       const std::function<bool(const Substitution&)>& visit);

}  // namespace kbo
