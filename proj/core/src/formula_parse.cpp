#include <cctype>

#include "kbo/formula.hpp"

namespace kbo {

namespace {

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

enum class Tok { Ident, Number, LParen, RParen, Comma, And, Or, Not, Gt, Ge, Eq, GtW, GtLex, Plus, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  Token next() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    Token t;
    t.pos = i_;
    if (i_ >= s_.size()) return t;
    char c = s_[i_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i_;
      while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
      t.kind = Tok::Number;
      t.text = std::string(s_.substr(i_, j - i_));
      i_ = j;
      return t;
    }
    if (ident_char(c)) {
      std::size_t j = i_;
      while (j < s_.size() && ident_char(s_[j])) ++j;
      t.kind = Tok::Ident;
      t.text = std::string(s_.substr(i_, j - i_));
      i_ = j;
      return t;
    }
    ++i_;
    switch (c) {
      case '(': t.kind = Tok::LParen; return t;
      case ')': t.kind = Tok::RParen; return t;
      case ',': t.kind = Tok::Comma; return t;
      case '&': t.kind = Tok::And; return t;
      case '|': t.kind = Tok::Or; return t;
      case '!': t.kind = Tok::Not; return t;
      case '=': t.kind = Tok::Eq; return t;
      case '+': t.kind = Tok::Plus; return t;
      case '>': {
        if (i_ < s_.size() && s_[i_] == '=') {
          ++i_;
          t.kind = Tok::Ge;
          return t;
        }
        // `>w(` is `>` followed by a weight term, `>wx` is `>` and a variable.
        if (starts("w") && !ident_at(i_ + 1) && !char_at(i_ + 1, '(')) {
          i_ += 1;
          t.kind = Tok::GtW;
          return t;
        }
        if (starts("lex") && !ident_at(i_ + 3)) {
          i_ += 3;
          t.kind = Tok::GtLex;
          return t;
        }
        t.kind = Tok::Gt;
        return t;
      }
      default:
        throw SyntaxError(std::string("unexpected character '") + c + "'", t.pos);
    }
  }

 private:
  bool starts(std::string_view p) const { return s_.substr(i_).starts_with(p); }
  bool ident_at(std::size_t k) const { return k < s_.size() && ident_char(s_[k]); }
  bool char_at(std::size_t k, char c) const { return k < s_.size() && s_[k] == c; }

  std::string_view s_;
  std::size_t i_ = 0;
};

class Parser {
 public:
  Parser(std::string_view text, const KboParams& params) : lex_(text), params_(params) {
    cur_ = lex_.next();
    peek_ = lex_.next();
  }

  Formula formula() {
    std::vector<Formula> parts{conjunction()};
    while (cur_.kind == Tok::Or) {
      advance();
      parts.push_back(conjunction());
    }
    return Formula::disj(std::move(parts));
  }

  Term term() {
    if (cur_.kind != Tok::Ident) fail("expected a term");
    Token name = cur_;
    advance();
    auto id = params_.find(name.text);
    if (cur_.kind != Tok::LParen) {
      if (!id) return Term::var(name.text);
      if (params_.symbol(*id).arity != 0) {
        throw Error(ErrorCode::ArityMismatch, "symbol '" + name.text + "' expects " +
                                                  std::to_string(params_.symbol(*id).arity) +
                                                  " arguments, got 0");
      }
      return Term::app(*id);
    }
    if (!id) {
      throw Error(ErrorCode::UnknownSymbol, "undeclared function symbol '" + name.text + "'");
    }
    advance();
    std::vector<Term> args{term()};
    while (cur_.kind == Tok::Comma) {
      advance();
      args.push_back(term());
    }
    expect(Tok::RParen, "expected ')'");
    if (args.size() != params_.symbol(*id).arity) {
      throw Error(ErrorCode::ArityMismatch, "symbol '" + name.text + "' expects " +
                                                std::to_string(params_.symbol(*id).arity) +
                                                " arguments, got " + std::to_string(args.size()));
    }
    return Term::app(*id, std::move(args));
  }

  bool at_end() const { return cur_.kind == Tok::End; }
  void expect_end() {
    if (!at_end()) fail("trailing input");
  }

 private:
  void advance() {
    cur_ = peek_;
    peek_ = lex_.next();
  }
  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(msg, cur_.pos); }
  void expect(Tok k, const char* msg) {
    if (cur_.kind != k) fail(msg);
    advance();
  }

  Formula conjunction() {
    std::vector<Formula> parts{literal()};
    while (cur_.kind == Tok::And) {
      advance();
      parts.push_back(literal());
    }
    return Formula::conj(std::move(parts));
  }

  Formula literal() {
    if (cur_.kind == Tok::Not) {
      advance();
      return Formula::negate(literal());
    }
    if (cur_.kind == Tok::LParen) {
      advance();
      Formula f = formula();
      expect(Tok::RParen, "expected ')'");
      return f;
    }
    return atom();
  }

  bool weight_start() const {
    if (cur_.kind == Tok::Number) return true;
    return cur_.kind == Tok::Ident && cur_.text == "w" && peek_.kind == Tok::LParen &&
           !params_.find("w");
  }

  WeightExpr weight_expr() {
    WeightExpr e;
    for (;;) {
      if (cur_.kind == Tok::Number) {
        try {
          e.constant += std::stoll(cur_.text);
        } catch (const std::out_of_range&) {
          fail("number out of range");
        }
        advance();
      } else if (weight_start()) {
        advance();
        advance();
        e += weight_of(params_, term());
        expect(Tok::RParen, "expected ')' after weight term");
      } else {
        fail("expected a weight term");
      }
      if (cur_.kind != Tok::Plus) return e;
      advance();
    }
  }

  Formula atom() {
    if (weight_start()) {
      WeightExpr l = weight_expr();
      ArithRel rel;
      switch (cur_.kind) {
        case Tok::Gt: rel = ArithRel::Gt; break;
        case Tok::Ge: rel = ArithRel::Ge; break;
        case Tok::Eq: rel = ArithRel::Eq; break;
        default: fail("expected '>', '>=' or '=' between weights");
      }
      advance();
      if (!weight_start()) fail("expected a weight expression");
      WeightExpr r = weight_expr();
      return Formula::atom(ArithAtom{std::move(l), std::move(r), rel});
    }
    Term l = term();
    TermRel rel;
    switch (cur_.kind) {
      case Tok::Gt: rel = TermRel::Succ; break;
      case Tok::Eq: rel = TermRel::EqTA; break;
      case Tok::GtW: rel = TermRel::SuccW; break;
      case Tok::GtLex: rel = TermRel::SuccLex; break;
      default: fail("expected a relation between terms");
    }
    advance();
    if (weight_start()) fail("cannot compare a term with a weight");
    Term r = term();
    return Formula::atom(TermAtom{std::move(l), std::move(r), rel});
  }

  Lexer lex_;
  const KboParams& params_;
  Token cur_;
  Token peek_;
};

}  // namespace

Formula parse_formula(std::string_view text, const KboParams& params) {
  Parser p(text, params);
  if (p.at_end()) return Formula::conj({});
  Formula f = p.formula();
  p.expect_end();
  return f;
}

Term parse_term(std::string_view text, const KboParams& params) {
  Parser p(text, params);
  Term t = p.term();
  p.expect_end();
  return t;
}

}  // namespace kbo
