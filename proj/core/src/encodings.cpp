#include "kbo/encodings.hpp"

#include <cctype>
#include <charconv>
#include <set>

#include "kbo/error.hpp"

namespace kbo {

namespace {

const char* kDioSignature =
    "symbol h 2 1\n"
    "symbol g 1 1\n"
    "symbol s 1 1\n"
    "symbol c 0 1\n"
    "precedence h > g > s > c\n";

Term sym(const char* name, std::vector<Term> args = {}) {
  return Term::app(dio_signature().id_of(name), std::move(args));
}

Formula gt(Term l, Term r) { return Formula::atom(TermAtom{std::move(l), std::move(r), TermRel::Succ}); }

[[noreturn]] void malformed(const std::string& msg) { throw Error(ErrorCode::MalformedEquation, msg); }

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_ident(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char ch : s) {
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_') return false;
  }
  return true;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  for (;;) {
    auto at = s.find(sep);
    out.push_back(s.substr(0, at));
    if (at == std::string_view::npos) return out;
    s.remove_prefix(at + 1);
  }
}

DioEquation parse_equation(std::string_view text) {
  auto sides = split(text, '=');
  if (sides.size() != 2) malformed("expected exactly one '=' in '" + std::string(text) + "'");
  DioEquation e;
  e.target = std::string(trim(sides[1]));
  if (!is_ident(e.target)) malformed("right-hand side must be a single variable: '" + std::string(text) + "'");
  bool have_constant = false;
  for (auto piece : split(sides[0], '+')) {
    piece = trim(piece);
    if (piece.empty()) malformed("empty addend in '" + std::string(text) + "'");
    if (std::isdigit(static_cast<unsigned char>(piece[0]))) {
      if (have_constant) malformed("more than one constant addend in '" + std::string(text) + "'");
      auto [end, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), e.constant);
      if (ec != std::errc{} || end != piece.data() + piece.size()) {
        malformed("bad constant '" + std::string(piece) + "'");
      }
      have_constant = true;
    } else if (is_ident(piece)) {
      e.summands.emplace_back(piece);
    } else {
      malformed("bad addend '" + std::string(piece) + "'");
    }
  }
  check_equation(e);
  return e;
}

}  // namespace

const KboParams& dio_signature() {
  static const KboParams params = load_signature(kDioSignature);
  return params;
}

Formula gadget_equal_weight(const Term& x, const Term& y) {
  return Formula::conj({gt(sym("g", {x}), sym("s", {y})), gt(sym("g", {y}), sym("s", {x}))});
}

Formula gadget_greater_weight(const Term& x, const Term& y) { return gt(sym("s", {x}), sym("g", {y})); }

void check_equation(const DioEquation& e) {
  if (e.summands.empty()) malformed("an equation needs at least one summand variable");
  if (e.constant < 0) malformed("negative constant");
  std::set<std::string> seen;
  auto check_name = [&](const std::string& v) {
    if (!is_ident(v)) malformed("bad variable name '" + v + "'");
    if (dio_signature().find(v)) malformed("variable '" + v + "' clashes with a symbol of the encoding signature");
  };
  for (const auto& v : e.summands) {
    check_name(v);
    if (!seen.insert(v).second) malformed("summand '" + v + "' repeated");
  }
  check_name(e.target);
}

Formula encode_dio(const std::vector<DioEquation>& system) {
  if (system.empty()) malformed("empty system");
  const SymbolId s = dio_signature().id_of("s");
  std::vector<Formula> parts;
  for (const auto& e : system) {
    check_equation(e);
    const std::size_t n = e.summands.size();
    Term nest = Term::var(e.summands.back());
    for (std::size_t i = n - 1; i-- > 0;) nest = sym("h", {Term::var(e.summands[i]), nest});
    Term left = wrap(s, static_cast<std::size_t>(e.constant) + 2, nest);
    Term right = wrap(s, 2 * n, Term::var(e.target));
    parts.push_back(gadget_equal_weight(left, right));
  }
  return parts.size() == 1 ? parts.front() : Formula::conj(std::move(parts));
}

std::map<std::string, Weight> decode_witness(const Substitution& w) {
  std::map<std::string, Weight> out;
  for (const auto& [v, t] : w) out[v] = ground_weight(dio_signature(), t) - 1;
  return out;
}

LinSystem dio_system(const std::vector<DioEquation>& system) {
  LinSystem out;
  std::set<std::string> vars;
  for (const auto& e : system) {
    LinExpr lhs = lin_const(e.constant);
    for (const auto& v : e.summands) {
      lhs += lin_var(v);
      vars.insert(v);
    }
    vars.insert(e.target);
    out.atoms.push_back(lin_eq(lhs, lin_var(e.target)));
  }
  out.vars.assign(vars.begin(), vars.end());
  return out;
}

bool satisfies(const std::vector<DioEquation>& system, const std::map<std::string, Weight>& values) {
  for (const auto& e : system) {
    Weight sum = e.constant;
    for (const auto& v : e.summands) {
      auto it = values.find(v);
      if (it == values.end()) return false;
      sum += it->second;
    }
    auto it = values.find(e.target);
    if (it == values.end() || it->second != sum) return false;
  }
  return true;
}

std::vector<DioEquation> parse_dio(std::string_view text) {
  std::vector<DioEquation> out;
  for (auto piece : split(text, ';')) {
    if (trim(piece).empty()) continue;
    out.push_back(parse_equation(piece));
  }
  if (out.empty()) malformed("no equations");
  return out;
}

std::string print_dio(const std::vector<DioEquation>& system) {
  std::string out;
  for (const auto& e : system) {
    if (!out.empty()) out += "; ";
    for (const auto& v : e.summands) out += v + " + ";
    out += std::to_string(e.constant) + " = " + e.target;
  }
  return out;
}

}  // namespace kbo
