#include "kbo/term.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace kbo {

namespace {

std::size_t mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  });
}

}  // namespace

// ---------------------------------------------------------------------------
// KboParams

std::optional<SymbolId> KboParams::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SymbolId KboParams::id_of(std::string_view name) const {
  if (auto id = find(name)) return *id;
  throw Error(ErrorCode::UnknownSymbol, "unknown symbol '" + std::string(name) + "'");
}

bool KboParams::constants_only() const {
  return std::all_of(symbols_.begin(), symbols_.end(),
                     [](const Symbol& s) { return s.arity == 0; });
}

Weight KboParams::min_constant_weight() const {
  Weight best = 0;
  for (const auto& s : symbols_) {
    if (s.arity == 0 && (best == 0 || s.weight < best)) best = s.weight;
  }
  return best;
}

KboParams validate_params(const RawSignature& raw) {
  std::vector<Error::Diagnostic> diags;
  KboParams p;

  for (const auto& s : raw.symbols) {
    if (!is_identifier(s.name)) {
      diags.push_back({ErrorCode::InvalidSignature, "bad symbol name '" + s.name + "'"});
      continue;
    }
    if (p.index_.count(s.name)) {
      diags.push_back({ErrorCode::InvalidSignature, "symbol '" + s.name + "' declared twice"});
      continue;
    }
    if (s.weight < 0) {
      diags.push_back({ErrorCode::InvalidSignature, "negative weight for '" + s.name + "'"});
    }
    p.index_.emplace(s.name, static_cast<SymbolId>(p.symbols_.size()));
    p.symbols_.push_back(s);
  }

  bool has_constant = false;
  std::vector<SymbolId> zero_unaries;
  for (SymbolId id = 0; id < p.symbols_.size(); ++id) {
    const auto& s = p.symbols_[id];
    if (s.arity == 0) {
      has_constant = true;
      if (s.weight <= 0) {
        diags.push_back({ErrorCode::ZeroWeightConstant,
                         "constant '" + s.name + "' must have positive weight"});
      }
    }
    if (s.arity == 1 && s.weight == 0) zero_unaries.push_back(id);
  }
  if (!has_constant) diags.push_back({ErrorCode::NoConstant, "signature has no constant"});
  if (zero_unaries.size() > 1) {
    diags.push_back({ErrorCode::TwoZeroWeightUnaries,
                     "more than one unary symbol of weight 0"});
  }

  // Precedence: every declared symbol exactly once.
  bool total = true;
  std::vector<int> seen(p.symbols_.size(), 0);
  std::vector<SymbolId> order;
  for (const auto& name : raw.precedence) {
    auto it = p.index_.find(name);
    if (it == p.index_.end()) {
      diags.push_back({ErrorCode::NotTotalOrder,
                       "precedence mentions undeclared symbol '" + name + "'"});
      total = false;
      continue;
    }
    if (seen[it->second]++) {
      diags.push_back({ErrorCode::NotTotalOrder, "precedence lists '" + name + "' twice"});
      total = false;
      continue;
    }
    order.push_back(it->second);
  }
  for (SymbolId id = 0; id < p.symbols_.size(); ++id) {
    if (!seen[id]) {
      diags.push_back({ErrorCode::NotTotalOrder,
                       "precedence omits symbol '" + p.symbols_[id].name + "'"});
      total = false;
    }
  }

  if (zero_unaries.size() == 1) {
    p.zero_unary_ = zero_unaries.front();
    if (total && order.front() != zero_unaries.front()) {
      diags.push_back({ErrorCode::IncompatiblePrecedence,
                       "zero-weight unary '" + p.symbols_[zero_unaries.front()].name +
                           "' must be the greatest symbol"});
    }
  }

  if (!diags.empty()) throw Error(std::move(diags));

  p.by_precedence_ = order;
  p.rank_.assign(p.symbols_.size(), 0);
  for (std::size_t i = 0; i < order.size(); ++i) {
    p.rank_[order[i]] = static_cast<unsigned>(order.size() - i);
  }
  return p;
}

RawSignature parse_signature(std::string_view text) {
  RawSignature raw;
  bool saw_precedence = false;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorCode::InvalidSignature, "line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string directive;
    if (!(ls >> directive)) continue;
    if (directive == "symbol") {
      Symbol s;
      long long arity = -1, weight = -1;
      if (!(ls >> s.name >> arity >> weight)) fail("expected 'symbol <name> <arity> <weight>'");
      std::string extra;
      if (ls >> extra) fail("trailing text after symbol declaration");
      if (arity < 0) fail("negative arity");
      s.arity = static_cast<unsigned>(arity);
      s.weight = weight;
      raw.symbols.push_back(std::move(s));
    } else if (directive == "precedence") {
      if (saw_precedence) fail("precedence given twice");
      saw_precedence = true;
      std::string tok;
      bool expect_name = true;
      while (ls >> tok) {
        // Allow "a>b" as well as "a > b".
        std::size_t pos = 0;
        while (pos <= tok.size()) {
          auto gt = tok.find('>', pos);
          std::string piece = tok.substr(pos, gt == std::string::npos ? std::string::npos : gt - pos);
          if (!piece.empty()) {
            if (!expect_name) fail("expected '>' between precedence names");
            raw.precedence.push_back(piece);
            expect_name = false;
          }
          if (gt == std::string::npos) break;
          if (expect_name) fail("unexpected '>' in precedence");
          expect_name = true;
          pos = gt + 1;
        }
      }
      if (expect_name && !raw.precedence.empty()) fail("precedence ends with '>'");
    } else {
      fail("unknown directive '" + directive + "'");
    }
  }
  if (!saw_precedence) {
    throw Error(ErrorCode::NotTotalOrder, "signature has no precedence line");
  }
  return raw;
}

KboParams load_signature(std::string_view text) { return validate_params(parse_signature(text)); }

KboParams load_signature_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open signature file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return load_signature(buf.str());
}

std::string print_signature(const KboParams& params) {
  std::ostringstream out;
  for (const auto& s : params.symbols()) {
    out << "symbol " << s.name << ' ' << s.arity << ' ' << s.weight << '\n';
  }
  out << "precedence";
  bool first = true;
  for (SymbolId id : params.by_precedence()) {
    out << (first ? " " : " > ") << params.symbol(id).name;
    first = false;
  }
  out << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// Term

Term Term::var(std::string name) {
  auto n = std::make_shared<Node>();
  n->is_var = true;
  n->ground = false;
  n->hash = mix(0x51ed27, std::hash<std::string>{}(name));
  n->name = std::move(name);
  return Term(std::move(n));
}

Term Term::app(SymbolId symbol, std::vector<Term> args) {
  auto n = std::make_shared<Node>();
  n->symbol = symbol;
  std::size_t h = mix(0x7a3b, symbol);
  for (const auto& a : args) {
    n->ground = n->ground && a.is_ground();
    n->size += a.size();
    h = mix(h, a.hash());
  }
  n->hash = h;
  n->args = std::move(args);
  return Term(std::move(n));
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.size() != b.size()) return false;
  return (a <=> b) == std::strong_ordering::equal;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (a.is_var() != b.is_var()) {
    return a.is_var() ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  if (a.is_var()) return a.var_name() <=> b.var_name();
  if (auto c = a.symbol() <=> b.symbol(); c != 0) return c;
  if (auto c = a.arity() <=> b.arity(); c != 0) return c;
  for (std::size_t i = 0; i < a.arity(); ++i) {
    if (auto c = a.arg(i) <=> b.arg(i); c != 0) return c;
  }
  return std::strong_ordering::equal;
}

Term wrap(SymbolId symbol, std::size_t times, Term t) {
  for (std::size_t i = 0; i < times; ++i) t = Term::app(symbol, {std::move(t)});
  return t;
}

void collect_vars(const Term& t, std::vector<std::string>& out) {
  if (t.is_var()) {
    if (std::find(out.begin(), out.end(), t.var_name()) == out.end()) out.push_back(t.var_name());
    return;
  }
  if (t.is_ground()) return;
  for (const auto& a : t.args()) collect_vars(a, out);
}

std::vector<std::string> vars_of(const Term& t) {
  std::vector<std::string> out;
  collect_vars(t, out);
  return out;
}

bool occurs(const std::string& var, const Term& t) {
  if (t.is_var()) return t.var_name() == var;
  if (t.is_ground()) return false;
  return std::any_of(t.args().begin(), t.args().end(),
                     [&](const Term& a) { return occurs(var, a); });
}

void check_term(const KboParams& params, const Term& t) {
  if (t.is_var()) return;
  if (t.symbol() >= params.size()) {
    throw Error(ErrorCode::UnknownSymbol, "symbol id " + std::to_string(t.symbol()));
  }
  const auto& s = params.symbol(t.symbol());
  if (s.arity != t.arity()) {
    throw Error(ErrorCode::ArityMismatch, "'" + s.name + "' expects " + std::to_string(s.arity) +
                                              " arguments, got " + std::to_string(t.arity()));
  }
  for (const auto& a : t.args()) check_term(params, a);
}

namespace {

void print_term(const KboParams& params, const Term& t, std::string& out) {
  if (t.is_var()) {
    out += t.var_name();
    return;
  }
  out += params.symbol(t.symbol()).name;
  if (t.arity() == 0) return;
  out += '(';
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i) out += ',';
    print_term(params, t.arg(i), out);
  }
  out += ')';
}

}  // namespace

std::string to_string(const KboParams& params, const Term& t) {
  std::string out;
  print_term(params, t, out);
  return out;
}

// ---------------------------------------------------------------------------
// Weights

WeightExpr& WeightExpr::operator+=(const WeightExpr& other) {
  constant += other.constant;
  for (const auto& [v, c] : other.coeffs) coeffs[v] += c;
  return *this;
}

Weight WeightExpr::evaluate(const std::map<std::string, Weight>& var_weights) const {
  Weight total = constant;
  for (const auto& [v, c] : coeffs) {
    auto it = var_weights.find(v);
    if (it == var_weights.end()) {
      throw Error(ErrorCode::InvalidArgument, "no weight for variable '" + v + "'");
    }
    total += c * it->second;
  }
  return total;
}

namespace {

void accumulate_weight(const KboParams& params, const Term& t, WeightExpr& out) {
  if (t.is_var()) {
    out.coeffs[t.var_name()] += 1;
    return;
  }
  if (t.symbol() >= params.size()) {
    throw Error(ErrorCode::UnknownSymbol, "symbol id " + std::to_string(t.symbol()));
  }
  out.constant += params.symbol(t.symbol()).weight;
  for (const auto& a : t.args()) accumulate_weight(params, a, out);
}

}  // namespace

WeightExpr weight_of(const KboParams& params, const Term& t) {
  WeightExpr e;
  accumulate_weight(params, t, e);
  return e;
}

Weight ground_weight(const KboParams& params, const Term& t) {
  if (t.is_var()) {
    throw Error(ErrorCode::InvalidArgument, "weight of non-ground term requested");
  }
  Weight w = params.symbol(t.symbol()).weight;
  for (const auto& a : t.args()) w += ground_weight(params, a);
  return w;
}

const char* order_name(Order o) {
  switch (o) {
    case Order::LT: return "LT";
    case Order::EQ: return "EQ";
    case Order::GT: return "GT";
  }
  return "?";
}

namespace {

Order compare_known(const KboParams& params, const Term& s, Weight ws, const Term& t, Weight wt) {
  if (ws != wt) return ws > wt ? Order::GT : Order::LT;
  if (s == t) return Order::EQ;
  if (s.symbol() != t.symbol()) {
    return params.greater(s.symbol(), t.symbol()) ? Order::GT : Order::LT;
  }
  for (std::size_t i = 0; i < s.arity(); ++i) {
    if (s.arg(i) == t.arg(i)) continue;
    return compare_known(params, s.arg(i), ground_weight(params, s.arg(i)), t.arg(i),
                         ground_weight(params, t.arg(i)));
  }
  return Order::EQ;
}

}  // namespace

Order kbo_compare(const KboParams& params, const Term& s, const Term& t) {
  if (!s.is_ground() || !t.is_ground()) {
    throw Error(ErrorCode::InvalidArgument, "kbo_compare needs ground terms");
  }
  check_term(params, s);
  check_term(params, t);
  return compare_known(params, s, ground_weight(params, s), t, ground_weight(params, t));
}

std::size_t f_height(const KboParams& params, const Term& t) {
  auto f = params.zero_unary();
  if (!f) return 0;
  std::size_t n = 0;
  const Term* cur = &t;
  while (!cur->is_var() && cur->symbol() == *f) {
    ++n;
    cur = &cur->arg(0);
  }
  return n;
}

const Term& f_base(const KboParams& params, const Term& t) {
  auto f = params.zero_unary();
  const Term* cur = &t;
  while (f && !cur->is_var() && cur->symbol() == *f) cur = &cur->arg(0);
  return *cur;
}

FMetrics f_metrics(const KboParams& params, const Term& s, const Term& t) {
  FMetrics m;
  m.height_s = f_height(params, s);
  m.height_t = f_height(params, t);
  m.distance = static_cast<std::int64_t>(m.height_s) - static_cast<std::int64_t>(m.height_t);
  return m;
}

namespace {

void count_symbols(const Term& t, Contents& c) {
  if (t.is_var()) {
    throw Error(ErrorCode::InvalidArgument, "contents of non-ground term requested");
  }
  if (t.symbol() >= c.counts.size()) {
    throw Error(ErrorCode::UnknownSymbol, "symbol id " + std::to_string(t.symbol()));
  }
  c.counts[t.symbol()] += 1;
  for (const auto& a : t.args()) count_symbols(a, c);
}

}  // namespace

Contents contents_of(const KboParams& params, const Term& t) {
  Contents c;
  c.counts.assign(params.size(), 0);
  count_symbols(t, c);
  return c;
}

// ---------------------------------------------------------------------------
// Substitution

Term apply(const Substitution& subst, const Term& t) {
  if (t.is_var()) {
    auto it = subst.find(t.var_name());
    return it == subst.end() ? t : it->second;
  }
  if (t.is_ground() || subst.empty()) return t;
  std::vector<Term> args;
  args.reserve(t.arity());
  bool changed = false;
  for (const auto& a : t.args()) {
    args.push_back(apply(subst, a));
    changed = changed || !(args.back() == a);
  }
  return changed ? Term::app(t.symbol(), std::move(args)) : t;
}

Term replace_var(const Term& t, const std::string& var, const Term& by) {
  if (t.is_var()) return t.var_name() == var ? by : t;
  if (t.is_ground() || !occurs(var, t)) return t;
  std::vector<Term> args;
  args.reserve(t.arity());
  for (const auto& a : t.args()) args.push_back(replace_var(a, var, by));
  return Term::app(t.symbol(), std::move(args));
}

}  // namespace kbo
