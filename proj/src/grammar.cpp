// SPDX-License-Identifier: Apache-2.0
#include "logprep/grammar.hpp"

#include <cctype>
#include <sstream>
#include <vector>

namespace logprep {

namespace {

enum class Tok { Number, Ident, Sym, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t start = 0;
  std::size_t end = 0;
};

const char* const kSymbols[] = {"->", "<=", ">=", "==", "!=", "&&", "+", "-", "*", "/", "^",
                                "(",  ")",  ",",  ";",  "{",  "}",  "<", ">"};

class Parser {
public:
  Parser(std::string_view text, const VarContext& ctx, const SeriesRegistry& reg)
      : text_(text), ctx_(ctx), reg_(reg) {
    lex();
  }

  Term parse() {
    Term t = expr();
    if (peek().kind != Tok::End) fail("end of input or operator");
    return t;
  }

private:
  void lex() {
    std::size_t i = 0;
    while (i < text_.size()) {
      char c = text_[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      Token tok;
      tok.start = i;
      if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i + 1 < text_.size() &&
                                                          std::isdigit(static_cast<unsigned char>(text_[i + 1])))) {
        while (i < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i]))) ++i;
        if (i < text_.size() && text_[i] == '.') {
          ++i;
          while (i < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i]))) ++i;
        }
        tok.kind = Tok::Number;
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        while (i < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[i])) || text_[i] == '_')) ++i;
        tok.kind = Tok::Ident;
      } else {
        bool matched = false;
        for (const char* s : kSymbols) {
          std::string_view sv(s);
          if (text_.substr(i, sv.size()) == sv) {
            i += sv.size();
            matched = true;
            break;
          }
        }
        if (!matched) {
          SourceSpan sp = span_at(i, i + 1);
          throw ParseError(sp, "token", std::string(1, c));
        }
        tok.kind = Tok::Sym;
      }
      tok.end = i;
      tok.text = std::string(text_.substr(tok.start, tok.end - tok.start));
      toks_.push_back(tok);
    }
    Token end;
    end.kind = Tok::End;
    end.start = end.end = text_.size();
    toks_.push_back(end);
  }

  SourceSpan span_at(std::size_t start, std::size_t end) const {
    SourceSpan sp;
    sp.start = std::min(start, text_.size());
    sp.end = std::min(std::max(end, sp.start), text_.size());
    for (std::size_t i = 0; i < sp.start; ++i) {
      if (text_[i] == '\n') {
        ++sp.line;
        sp.column = 1;
      } else {
        ++sp.column;
      }
    }
    return sp;
  }

  [[noreturn]] void fail(const std::string& expected) const {
    const Token& t = toks_[pos_];
    throw ParseError(span_at(t.start, t.end), expected, t.kind == Tok::End ? "end of input" : t.text);
  }

  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  bool is_sym(const char* s, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Sym && peek(ahead).text == s;
  }
  bool accept(const char* s) {
    if (!is_sym(s)) return false;
    ++pos_;
    return true;
  }
  void expect(const char* s) {
    if (!accept(s)) fail(std::string("'") + s + "'");
  }
  bool prev_is_slash() const { return pos_ > 0 && toks_[pos_ - 1].kind == Tok::Sym && toks_[pos_ - 1].text == "/"; }

  Rational number_value(const Token& t) const {
    try {
      return Rational::parse(t.text);
    } catch (const std::exception&) {
      throw ParseError(span_at(t.start, t.end), "representable number", t.text);
    }
  }

  // number ["/" number]; the slash is folded only for a pair of bare literals.
  Rational literal() {
    Token a = peek();
    if (a.kind != Tok::Number) fail("number");
    ++pos_;
    Rational r = number_value(a);
    if (is_sym("/") && peek(1).kind == Tok::Number) {
      Token b = peek(1);
      pos_ += 2;
      Rational d = number_value(b);
      if (d.is_zero()) throw ParseError(span_at(b.start, b.end), "nonzero denominator", b.text);
      r = r / d;
    }
    return r;
  }

  Rational signed_literal() {
    bool neg = accept("-");
    Rational r = literal();
    return neg ? -r : r;
  }

  int integer_literal() {
    Token t = peek();
    if (t.kind != Tok::Number || t.text.find('.') != std::string::npos) fail("integer");
    ++pos_;
    Rational r = number_value(t);
    if (r.num() > 1000000) throw ParseError(span_at(t.start, t.end), "small integer", t.text);
    return static_cast<int>(r.num());
  }

  Term expr() {
    Term lhs = mulexpr();
    while (true) {
      if (accept("+")) {
        lhs = Add(lhs, mulexpr());
      } else if (accept("-")) {
        lhs = Add(lhs, Neg(mulexpr()));
      } else {
        return lhs;
      }
    }
  }

  Term mulexpr() {
    bool bare_one = peek().kind == Tok::Number && peek().text == "1" && is_sym("/", 1) &&
                    peek(2).kind != Tok::Number;
    Term lhs;
    if (bare_one) {
      pos_ += 2;
      lhs = Inv(unary());
    } else {
      lhs = unary();
    }
    while (true) {
      if (accept("*")) {
        lhs = Mul(lhs, unary());
      } else if (accept("/")) {
        lhs = Mul(lhs, Inv(unary()));
      } else {
        return lhs;
      }
    }
  }

  // After a literal, decides whether a following "^" binds to it.
  bool literal_followed_by_pow() const {
    std::size_t k = 1;
    if (is_sym("/", 1) && peek(2).kind == Tok::Number) k = 3;
    return is_sym("^", k);
  }

  Term unary() {
    if (is_sym("-")) {
      if (peek(1).kind == Tok::Number && !prev_is_slash()) {
        ++pos_;
        if (!literal_followed_by_pow()) return Const(-literal());
        return Neg(unary());
      }
      ++pos_;
      return Neg(unary());
    }
    return power();
  }

  Term power() {
    Term base = primary();
    if (accept("^")) {
      expect("(");
      bool neg = accept("-");
      Token n = peek();
      int p = integer_literal();
      int q = 1;
      if (accept("/")) {
        Token d = peek();
        q = integer_literal();
        if (q == 0) throw ParseError(span_at(d.start, d.end), "nonzero denominator", d.text);
      }
      (void)n;
      expect(")");
      base = Pow(base, Rational(neg ? -p : p, q));
    }
    return base;
  }

  Term variable(const Token& t) {
    if (t.text == "x") return Var(ctx_.x_index());
    if (t.text.size() > 1 && t.text[0] == 't') {
      bool digits = true;
      for (std::size_t i = 1; i < t.text.size(); ++i) digits = digits && std::isdigit(static_cast<unsigned char>(t.text[i]));
      if (digits && t.text.size() < 9) {
        int k = std::stoi(t.text.substr(1));
        if (k >= 1 && k <= ctx_.n) return Var(k - 1);
        throw ParseError(span_at(t.start, t.end), "variable t1..t" + std::to_string(ctx_.n) + " or x", t.text);
      }
    }
    throw ParseError(span_at(t.start, t.end), "variable, function or series name", t.text);
  }

  std::vector<Term> args_until_close() {
    std::vector<Term> out;
    if (accept(")")) return out;
    out.push_back(expr());
    while (accept(",")) out.push_back(expr());
    expect(")");
    return out;
  }

  Term trunc_call(bool is_log) {
    expect("(");
    Rational a = signed_literal();
    expect(",");
    Rational lo, hi;
    Term arg;
    std::size_t save = pos_;
    bool three = false;
    if (is_sym("-") || peek().kind == Tok::Number) {
      // Three-argument form when a literal is followed by a comma.
      Rational b;
      try {
        b = signed_literal();
        three = is_sym(",");
      } catch (const ParseError&) {
        three = false;
      }
      if (three) {
        ++pos_;
        lo = a;
        hi = b;
      } else {
        pos_ = save;
      }
    }
    if (!three) {
      if (is_log) {
        if (a.sign() <= 0) fail("positive lambda");
        lo = Rational(1) / a < a ? Rational(1) / a : a;
        hi = Rational(1) / a < a ? a : Rational(1) / a;
      } else {
        lo = -abs(a);
        hi = abs(a);
      }
    }
    arg = expr();
    expect(")");
    try {
      return is_log ? TruncLog(lo, hi, arg) : TruncExp(lo, hi, arg);
    } catch (const Error& e) {
      fail(e.what());
    }
  }

  Term series_call(SeriesPtr def, const Token& name) {
    std::vector<Term> args = args_until_close();
    if (static_cast<int>(args.size()) != def->arity) {
      throw ParseError(span_at(name.start, toks_[pos_ - 1].end), std::to_string(def->arity) + " series arguments",
                       std::to_string(args.size()) + " arguments");
    }
    return Series(def, std::move(args));
  }

  Atom condition_atom() {
    Atom a;
    a.lhs = expr();
    static const std::pair<const char*, Cmp> cmps[] = {{"<=", Cmp::Le}, {">=", Cmp::Ge}, {"==", Cmp::Eq},
                                                       {"!=", Cmp::Ne}, {"<", Cmp::Lt},  {">", Cmp::Gt}};
    bool found = false;
    for (const auto& [s, c] : cmps) {
      if (accept(s)) {
        a.cmp = c;
        found = true;
        break;
      }
    }
    if (!found) fail("comparison operator");
    a.rhs = expr();
    return a;
  }

  Term piece() {
    expect("{");
    std::vector<Branch> branches;
    while (true) {
      Branch b;
      if (peek().kind == Tok::Ident && peek().text == "else") {
        ++pos_;
        b.otherwise = true;
      } else {
        b.guard.push_back(condition_atom());
        while (accept("&&")) b.guard.push_back(condition_atom());
      }
      expect("->");
      b.value = expr();
      branches.push_back(std::move(b));
      if (accept("}")) break;
      expect(";");
    }
    try {
      return Guarded(std::move(branches));
    } catch (const Error& e) {
      fail(e.what());
    }
  }

  Term primary() {
    Token t = peek();
    if (t.kind == Tok::Number) {
      bool fold = !prev_is_slash();
      if (fold) return Const(literal());
      ++pos_;
      return Const(number_value(t));
    }
    if (accept("(")) {
      Term e = expr();
      expect(")");
      return e;
    }
    if (t.kind != Tok::Ident) fail("expression");
    ++pos_;
    const std::string& id = t.text;
    if (id == "piece") return piece();
    if (!is_sym("(")) return variable(t);
    if (id == "logstar" || id == "expstar") return trunc_call(id == "logstar");
    expect("(");
    if (id == "abs" || id == "log" || id == "exp") {
      Term a = expr();
      expect(")");
      if (id == "abs") return Abs(a);
      return id == "log" ? Log(a) : Exp(a);
    }
    if (id == "min" || id == "max") {
      Term a = expr();
      expect(",");
      Term b = expr();
      expect(")");
      return id == "min" ? Min(a, b) : Max(a, b);
    }
    if (id == "root") {
      Token d = peek();
      int n = integer_literal();
      if (n < 2) throw ParseError(span_at(d.start, d.end), "root degree >= 2", d.text);
      expect(",");
      Term a = expr();
      expect(")");
      return Root(n, a);
    }
    if (id == "series") {
      Token name = peek();
      if (name.kind != Tok::Ident) fail("series name");
      ++pos_;
      SeriesPtr def = reg_.find(name.text);
      if (!def) throw ParseError(span_at(name.start, name.end), "known series name", name.text);
      expect(";");
      return series_call(def, name);
    }
    if (SeriesPtr def = reg_.find(id)) return series_call(def, t);
    throw ParseError(span_at(t.start, t.end), "function or known series name", id);
  }

  std::string_view text_;
  const VarContext& ctx_;
  const SeriesRegistry& reg_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// Printer precedence: 1 sum, 2 product, 3 unary minus, 4 power, 5 atom.
int prec(const Term& t) {
  switch (t.op()) {
    case Op::Add: return 1;
    case Op::Mul:
    case Op::Inv: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    case Op::Const: return t->q.sign() < 0 || !t->q.is_integer() ? 2 : 5;
    default: return 5;
  }
}

class Printer {
public:
  explicit Printer(const VarContext& ctx) : ctx_(ctx) {}

  std::string print(const Term& t) {
    const Node& n = t.node();
    switch (n.op) {
      case Op::Const: return n.q.str();
      case Op::Var: return n.index == ctx_.x_index() ? "x" : "t" + std::to_string(n.index + 1);
      case Op::Add: {
        std::string lhs = print(n.kids[0]);
        const Term& b = n.kids[1];
        if (b.op() == Op::Neg) {
          const Term& c = b.kid(0);
          return lhs + " - " + wrap(c, prec(c) < 2);
        }
        return lhs + " + " + wrap(b, prec(b) <= 1);
      }
      case Op::Mul: {
        const Term& a = n.kids[0];
        const Term& b = n.kids[1];
        bool a_is_one = a.op() == Op::Const && a->q == Rational(1);
        if (b.op() == Op::Inv) {
          std::string lhs = wrap(a, prec(a) < 2 || a_is_one);
          return lhs + " / " + denominator(b.kid(0));
        }
        std::string lhs = wrap(a, prec(a) < 2);
        bool paren = prec(b) <= 2 || b.op() == Op::Const;
        if (b.op() == Op::Const && b->q.is_integer() && b->q.sign() >= 0) paren = false;
        return lhs + " * " + wrap(b, paren);
      }
      case Op::Inv: return "1 / " + denominator(n.kids[0]);
      case Op::Neg: {
        const Term& a = n.kids[0];
        bool paren = prec(a) < 3 || a.op() == Op::Const;
        return "-" + wrap(a, paren);
      }
      case Op::Pow: {
        const Term& a = n.kids[0];
        bool paren = prec(a) < 5 || a.op() == Op::Const;
        std::string e = n.q.is_integer() ? n.q.str() + "/1" : n.q.str();
        return wrap(a, paren) + "^(" + e + ")";
      }
      case Op::Root: return "root(" + std::to_string(n.index) + ", " + print(n.kids[0]) + ")";
      case Op::Abs: return "abs(" + print(n.kids[0]) + ")";
      case Op::Log: return "log(" + print(n.kids[0]) + ")";
      case Op::Exp: return "exp(" + print(n.kids[0]) + ")";
      case Op::Min: return "min(" + print(n.kids[0]) + ", " + print(n.kids[1]) + ")";
      case Op::Max: return "max(" + print(n.kids[0]) + ", " + print(n.kids[1]) + ")";
      case Op::TruncLog:
      case Op::TruncExp:
        return std::string(n.op == Op::TruncLog ? "logstar(" : "expstar(") + n.q.str() + ", " + n.q2.str() + ", " +
               print(n.kids[0]) + ")";
      case Op::Series: {
        std::string s = "series(" + n.series->name + ";";
        for (std::size_t i = 0; i < n.kids.size(); ++i) s += (i ? ", " : " ") + print(n.kids[i]);
        return s + ")";
      }
      case Op::Guarded: {
        std::string s = "piece { ";
        for (std::size_t i = 0; i < n.branches.size(); ++i) {
          const Branch& b = n.branches[i];
          if (i) s += " ; ";
          if (b.otherwise) {
            s += "else";
          } else {
            for (std::size_t j = 0; j < b.guard.size(); ++j) {
              if (j) s += " && ";
              s += print(b.guard[j].lhs) + " " + to_string(b.guard[j].cmp) + " " + print(b.guard[j].rhs);
            }
          }
          s += " -> " + print(b.value);
        }
        return s + " }";
      }
    }
    return "?";
  }

private:
  std::string wrap(const Term& t, bool paren) {
    std::string s = print(t);
    return paren ? "(" + s + ")" : s;
  }

  std::string denominator(const Term& c) { return wrap(c, prec(c) < 3 || c.op() == Op::Const); }

  const VarContext& ctx_;
};

}  // namespace

Term parse_term(std::string_view text, const VarContext& ctx, const SeriesRegistry& registry) {
  Parser p(text, ctx, registry);
  return p.parse();
}

std::string print_term(const Term& t, const VarContext& ctx) {
  Printer p(ctx);
  return p.print(t);
}

std::string to_string(Cmp c) {
  switch (c) {
    case Cmp::Lt: return "<";
    case Cmp::Le: return "<=";
    case Cmp::Gt: return ">";
    case Cmp::Ge: return ">=";
    case Cmp::Eq: return "==";
    case Cmp::Ne: return "!=";
  }
  return "?";
}

}  // namespace logprep
