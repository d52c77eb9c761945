#include "minerl/parser.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <set>

namespace minerl {

ParseError::ParseError(int line, int col, std::string message, std::vector<std::string> expected)
    : std::runtime_error(std::move(message)),
      line_(line),
      col_(col),
      expected_(std::move(expected)) {}

namespace {

enum class Tok {
  Ident,
  TyVar,
  Integer,
  Float,
  Arrow,
  LParen,
  RParen,
  Comma,
  Semi,
  Colon,
  Equals,
  Bar,
  Amp,
  Bang,
  Backslash,
  Dot,
  Underscore,
  Caret,
  End,  // end of input
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

const std::set<std::string>& keywords() {
  static const std::set<std::string> k = {
      "fun",   "case",     "of",      "end",    "in",     "when",   "forall",
      "rec",   "oracle",   "true",    "is_int", "is_float", "is_pair", "is_fun",
      "Int",   "Float",    "Any",     "Empty"};
  return k;
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::Ident:
    case Tok::Integer:
    case Tok::Float: return "'" + t.text + "'";
    case Tok::TyVar: return "'" + t.text;
    default: return "'" + t.text + "'";
  }
}

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  std::vector<Token> run(std::set<int>& pragma_lines) {
    std::vector<Token> out;
    for (;;) {
      skip_space(pragma_lines);
      int line = line_, col = col_;
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "", line, col});
        return out;
      }
      char c = src_[pos_];
      auto single = [&](Tok k) {
        advance();
        out.push_back({k, std::string(1, c), line, col});
      };
      if (c == '-' && peek(1) == '>') {
        advance();
        advance();
        out.push_back({Tok::Arrow, "->", line, col});
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '-' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
        out.push_back(number(line, col));
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string id = ident();
        out.push_back({id == "_" ? Tok::Underscore : Tok::Ident, id, line, col});
      } else if (c == '\'') {
        advance();
        if (pos_ >= src_.size() ||
            !(std::isalpha(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          throw ParseError(line, col, "expected a type variable name after '");
        out.push_back({Tok::TyVar, ident(), line, col});
      } else {
        switch (c) {
          case '(': single(Tok::LParen); break;
          case ')': single(Tok::RParen); break;
          case ',': single(Tok::Comma); break;
          case ';': single(Tok::Semi); break;
          case ':': single(Tok::Colon); break;
          case '=': single(Tok::Equals); break;
          case '|': single(Tok::Bar); break;
          case '&': single(Tok::Amp); break;
          case '!': single(Tok::Bang); break;
          case '\\': single(Tok::Backslash); break;
          case '.': single(Tok::Dot); break;
          case '^': single(Tok::Caret); break;
          default:
            throw ParseError(line, col, std::string("unexpected character '") + c + "'");
        }
      }
    }
  }

 private:
  char peek(std::size_t k) const {
    return pos_ + k < src_.size() ? src_[pos_ + k] : '\0';
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space(std::set<int>& pragma_lines) {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        int line = line_;
        std::string text;
        while (pos_ < src_.size() && src_[pos_] != '\n') {
          text += src_[pos_];
          advance();
        }
        std::size_t b = text.find_first_not_of("# \t");
        std::size_t e = text.find_last_not_of(" \t\r");
        if (b != std::string::npos && text.substr(b, e - b + 1) == "no_exhaustiveness")
          pragma_lines.insert(line);
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string ident() {
    std::string s;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      s += src_[pos_];
      advance();
    }
    return s;
  }

  Token number(int line, int col) {
    std::string s;
    if (src_[pos_] == '-') {
      s += '-';
      advance();
    }
    auto digits = [&] {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        s += src_[pos_];
        advance();
      }
    };
    digits();
    bool is_float = false;
    if (peek(0) == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      is_float = true;
      s += '.';
      advance();
      digits();
      if ((peek(0) == 'e' || peek(0) == 'E') &&
          (std::isdigit(static_cast<unsigned char>(peek(1))) ||
           ((peek(1) == '+' || peek(1) == '-') &&
            std::isdigit(static_cast<unsigned char>(peek(2)))))) {
        s += 'e';
        advance();
        if (peek(0) == '+' || peek(0) == '-') {
          s += peek(0);
          advance();
        }
        digits();
      }
    }
    if (is_float) {
      double d = std::strtod(s.c_str(), nullptr);
      if (!std::isfinite(d)) throw ParseError(line, col, "float literal out of range");
    }
    return {is_float ? Tok::Float : Tok::Integer, s, line, col};
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  Parser(const std::string& text, TypeStore* store) : store_(store) {
    toks_ = Lexer(text).run(pragma_lines_);
  }

  Program program() {
    Program p;
    std::set<std::string> names;
    while (!is_keyword("in")) {
      Def d = def();
      if (!names.insert(d.name).second)
        throw ParseError(d.span.line, d.span.col, "duplicate definition of '" + d.name + "'");
      p.defs.push_back(std::move(d));
    }
    next();
    p.main = expr();
    expect_end();
    return p;
  }

  ExprPtr standalone_expr() {
    ExprPtr e = expr();
    expect_end();
    return e;
  }

  TypeRef standalone_type(std::map<std::string, TypeVarId>& vars) {
    tyvars_ = &vars;
    TypeRef t = type();
    expect_end();
    return t;
  }

  TypeScheme standalone_scheme() {
    TypeScheme s = scheme();
    expect_end();
    return s;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  const Token& look(std::size_t k) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  Token next() {
    Token t = cur();
    if (t.kind != Tok::End) ++pos_;
    return t;
  }
  Span span() const { return Span{cur().line, cur().col}; }

  [[noreturn]] void fail(std::vector<std::string> expected) {
    std::string msg = "unexpected " + describe(cur()) + ", expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) msg += i + 1 == expected.size() ? " or " : ", ";
      msg += expected[i];
    }
    throw ParseError(cur().line, cur().col, msg, std::move(expected));
  }

  bool is_keyword(const char* k) const { return cur().kind == Tok::Ident && cur().text == k; }

  void expect_keyword(const char* k) {
    if (!is_keyword(k)) fail({std::string("'") + k + "'"});
    next();
  }

  Token expect(Tok k, const char* what) {
    if (cur().kind != k) fail({what});
    return next();
  }

  void expect_end() {
    if (cur().kind != Tok::End) fail({"end of input"});
  }

  std::string ident(const char* what) {
    if (cur().kind != Tok::Ident || keywords().count(cur().text)) fail({what});
    return next().text;
  }

  // ------------------------------------------------------------------ defs

  Def def() {
    Def d;
    d.span = span();
    d.no_exhaustiveness = pragma_lines_.count(cur().line - 1) != 0;
    if (cur().kind != Tok::Ident || keywords().count(cur().text)) fail({"a definition", "'in'"});
    d.name = next().text;
    if (cur().kind == Tok::Colon) {
      next();
      d.annotation = scheme();
    }
    expect(Tok::Equals, "'='");
    expect_keyword("fun");
    d.binder = ident("a parameter name");
    expect(Tok::Arrow, "'->'");
    d.body = expr();
    return d;
  }

  // ----------------------------------------------------------------- types

  TypeScheme scheme() {
    if (!store_) fail({"an expression"});
    std::map<std::string, TypeVarId> vars;
    std::vector<TypeVarId> quantified;
    if (is_keyword("forall")) {
      next();
      if (cur().kind != Tok::TyVar) fail({"a type variable"});
      while (cur().kind == Tok::TyVar) {
        Token t = next();
        if (vars.count(t.text))
          throw ParseError(t.line, t.col, "type variable '" + t.text + " quantified twice");
        TypeVarId v = store_->fresh_var(t.text);
        vars.emplace(t.text, v);
        quantified.push_back(v);
      }
      expect(Tok::Dot, "'.'");
    }
    auto* saved = tyvars_;
    tyvars_ = &vars;
    TypeRef body = type();
    tyvars_ = saved;
    return make_scheme(*store_, quantified, body);
  }

  TypeRef type() {
    TypeRef t = ty_inter();
    while (cur().kind == Tok::Bar) {
      next();
      t = store_->mk_union(t, ty_inter());
    }
    return t;
  }

  TypeRef ty_inter() {
    TypeRef t = ty_neg();
    for (;;) {
      if (cur().kind == Tok::Amp) {
        next();
        t = store_->mk_inter(t, ty_neg());
      } else if (cur().kind == Tok::Backslash) {
        next();
        t = store_->mk_diff(t, ty_neg());
      } else {
        return t;
      }
    }
  }

  TypeRef ty_neg() {
    if (cur().kind == Tok::Bang) {
      next();
      return store_->mk_neg(ty_arrow());
    }
    return ty_arrow();
  }

  TypeRef ty_arrow() {
    TypeRef t = ty_prim();
    if (cur().kind == Tok::Arrow) {
      next();
      return store_->mk_arrow(t, type());
    }
    return t;
  }

  TypeRef ty_prim() {
    const Token t = cur();
    switch (t.kind) {
      case Tok::Integer: next(); return store_->mk_singleton(BigInt(t.text));
      case Tok::TyVar: {
        Token v = next();
        auto it = tyvars_->find(v.text);
        if (it != tyvars_->end()) return store_->mk_var(it->second);
        TypeVarId id = store_->fresh_var(v.text);
        tyvars_->emplace(v.text, id);
        return store_->mk_var(id);
      }
      case Tok::LParen: {
        next();
        TypeRef a = type();
        if (cur().kind == Tok::Comma) {
          next();
          TypeRef b = type();
          expect(Tok::RParen, "')'");
          return store_->mk_pair(a, b);
        }
        if (cur().kind != Tok::RParen) fail({"','", "')'"});
        next();
        return a;
      }
      case Tok::Ident: {
        if (t.text == "Int") return next(), store_->mk_int();
        if (t.text == "Float") return next(), store_->mk_float();
        if (t.text == "Any") return next(), store_->top();
        if (t.text == "Empty") return next(), store_->bottom();
        if (t.text == "rec") return rec_type();
        if (std::isupper(static_cast<unsigned char>(t.text[0])) && !keywords().count(t.text)) {
          for (auto it = recnames_.rbegin(); it != recnames_.rend(); ++it)
            if (it->first == t.text) return next(), it->second;
          throw ParseError(t.line, t.col, "unbound recursive type name '" + t.text + "'");
        }
        break;
      }
      default: break;
    }
    fail({"a type"});
  }

  TypeRef rec_type() {
    Token kw = next();
    Token name = cur();
    if (name.kind != Tok::Ident || !std::isupper(static_cast<unsigned char>(name.text[0])) ||
        keywords().count(name.text))
      fail({"a recursive type name"});
    next();
    expect(Tok::Dot, "'.'");
    try {
      return store_->mk_rec([&](TypeRef self) {
        recnames_.emplace_back(name.text, self);
        TypeRef body = type();
        recnames_.pop_back();
        return body;
      });
    } catch (const ContractivenessViolation& e) {
      throw ParseError(kw.line, kw.col, e.what());
    }
  }

  // ----------------------------------------------------------- expressions

  ExprPtr expr() {
    Span s = span();
    if (is_keyword("fun")) {
      next();
      std::string x = ident("a parameter name");
      expect(Tok::Arrow, "'->'");
      return abs_expr(x, expr(), s);
    }
    if (is_keyword("case")) {
      next();
      ExprPtr scrut = expr();
      expect_keyword("of");
      std::vector<Clause> cls;
      cls.push_back(clause_());
      while (cur().kind == Tok::Semi) {
        next();
        cls.push_back(clause_());
      }
      expect_keyword("end");
      return case_expr(scrut, std::move(cls), s);
    }
    return app();
  }

  bool atom_start() const {
    switch (cur().kind) {
      case Tok::Integer:
      case Tok::Float:
      case Tok::LParen: return true;
      case Tok::Ident:
        if (keywords().count(cur().text)) return false;
        // An identifier followed by ':' or '=' starts the next definition.
        return look(1).kind != Tok::Colon && look(1).kind != Tok::Equals;
      default: return false;
    }
  }

  ExprPtr app() {
    Span s = span();
    if (!atom_start()) fail({"an expression"});
    ExprPtr e = atom();
    while (atom_start()) e = app_expr(e, atom(), s);
    return e;
  }

  Const literal(const Token& t) {
    if (t.kind == Tok::Integer) return Const(BigInt(t.text));
    return Const(std::strtod(t.text.c_str(), nullptr));
  }

  ExprPtr atom() {
    Span s = span();
    switch (cur().kind) {
      case Tok::Integer:
      case Tok::Float: return const_expr(literal(next()), s);
      case Tok::Ident: return var_expr(next().text, s);
      case Tok::LParen: {
        next();
        ExprPtr a = expr();
        if (cur().kind == Tok::Comma) {
          next();
          ExprPtr b = expr();
          expect(Tok::RParen, "')'");
          return pair_expr(a, b, s);
        }
        if (cur().kind != Tok::RParen) fail({"','", "')'"});
        next();
        return a;
      }
      default: fail({"an expression"});
    }
  }

  Clause clause_() {
    Span s = span();
    PatternPtr p = pattern();
    GuardPtr g;
    if (is_keyword("when")) {
      next();
      g = guard();
    }
    expect(Tok::Arrow, "'->'");
    Clause c = clause(p, g, expr());
    c.span = s;
    return c;
  }

  PatternPtr pattern() {
    Span s = span();
    switch (cur().kind) {
      case Tok::Underscore: next(); return wild_pat(s);
      case Tok::Caret: next(); return capture_pat(ident("a variable name"), s);
      case Tok::Integer:
      case Tok::Float: return val_pat(const_expr(literal(next()), s), s);
      case Tok::Ident:
        if (!keywords().count(cur().text)) return bind_pat(next().text, s);
        break;
      case Tok::LParen: {
        next();
        PatternPtr a = pattern();
        expect(Tok::Comma, "','");
        PatternPtr b = pattern();
        expect(Tok::RParen, "')'");
        return pair_pat(a, b, s);
      }
      default: break;
    }
    fail({"a pattern"});
  }

  GuardPtr guard() {
    Span s = span();
    GuardPtr g = guard_atom();
    if (cur().kind == Tok::Comma) {
      next();
      return and_guard(g, guard(), s);
    }
    return g;
  }

  GuardPtr guard_atom() {
    Span s = span();
    if (is_keyword("oracle")) return next(), oracle_guard(s);
    if (is_keyword("true")) return next(), true_guard(s);
    static const std::pair<const char*, GuardType> tests[] = {
        {"is_int", GuardType::IsInt},
        {"is_float", GuardType::IsFloat},
        {"is_pair", GuardType::IsPair},
        {"is_fun", GuardType::IsFun}};
    for (auto [kw, ty] : tests) {
      if (!is_keyword(kw)) continue;
      next();
      if (cur().kind == Tok::Ident && !keywords().count(cur().text))
        return test_var(ty, next().text, s);
      return test_val(ty, guard_value(), s);
    }
    fail({"'is_int'", "'is_float'", "'is_pair'", "'is_fun'", "'oracle'", "'true'"});
  }

  // Literal values allowed after a type test: constants, pairs of values,
  // and parenthesized lambdas.
  ExprPtr guard_value() {
    Span s = span();
    if (cur().kind == Tok::Integer || cur().kind == Tok::Float)
      return const_expr(literal(next()), s);
    if (cur().kind == Tok::LParen) {
      next();
      if (is_keyword("fun")) {
        ExprPtr f = expr();
        expect(Tok::RParen, "')'");
        return f;
      }
      ExprPtr a = guard_value();
      expect(Tok::Comma, "','");
      ExprPtr b = guard_value();
      expect(Tok::RParen, "')'");
      return pair_expr(a, b, s);
    }
    fail({"a variable", "a value"});
  }

  TypeStore* store_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::set<int> pragma_lines_;
  std::map<std::string, TypeVarId>* tyvars_ = nullptr;
  std::vector<std::pair<std::string, TypeRef>> recnames_;
};

}  // namespace

Program parse_program(const std::string& text, TypeStore& store) {
  return Parser(text, &store).program();
}

TypeRef parse_type(const std::string& text, TypeStore& store,
                   std::map<std::string, TypeVarId>& vars) {
  return Parser(text, &store).standalone_type(vars);
}

TypeScheme parse_scheme(const std::string& text, TypeStore& store) {
  return Parser(text, &store).standalone_scheme();
}

ExprPtr parse_expr(const std::string& text) { return Parser(text, nullptr).standalone_expr(); }

}  // namespace minerl
