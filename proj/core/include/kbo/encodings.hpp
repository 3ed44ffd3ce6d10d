#pragma once

// Linear Diophantine systems as ordering constraints over {h/2, g/1, s/1, c/0},
// all of weight 1, h > g > s > c. A term t stands for the number |t| - 1.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "kbo/formula.hpp"
#include "kbo/lia.hpp"

namespace kbo {

/// x1 + ... + xn + k = x0.
struct DioEquation {
  std::vector<std::string> summands;
  Weight constant = 0;
  std::string target;
  friend bool operator==(const DioEquation&, const DioEquation&) = default;
};

/// The fixed encoding signature.
const KboParams& dio_signature();

/// g(x) > s(y) & g(y) > s(x): holds iff |x| = |y|.
Formula gadget_equal_weight(const Term& x, const Term& y);
/// s(x) > g(y): holds iff |x| > |y|.
Formula gadget_greater_weight(const Term& x, const Term& y);

/// Throws MalformedEquation for an empty sum, repeated summands, a negative
/// constant, or a variable named like a signature symbol. The target may
/// also be a summand.
void check_equation(const DioEquation& e);

/// One equal-weight gadget per equation:
///   s^(k+2)(h(x1, h(x2, ... h(x(n-1), xn)))) vs s^(2n)(x0).
Formula encode_dio(const std::vector<DioEquation>& system);

/// |t| - 1 for each binding.
std::map<std::string, Weight> decode_witness(const Substitution& w);

/// The system itself, for checking against the encoding.
LinSystem dio_system(const std::vector<DioEquation>& system);
bool satisfies(const std::vector<DioEquation>& system, const std::map<std::string, Weight>& values);

/// `x1 + x2 + 3 = x0; y + 1 = z`. At most one constant addend per equation.
std::vector<DioEquation> parse_dio(std::string_view text);
std::string print_dio(const std::vector<DioEquation>& system);

}  // namespace kbo
