#include "gpl/dsl.hpp"

#include <cctype>
#include <charconv>

namespace gpl::dsl {

namespace {

std::string located(const Span& s, const std::string& message) {
  return "line " + std::to_string(s.line) + ", column " + std::to_string(s.column) + ": " + message;
}

enum class Tok { Ident, Number, Symbol, CircOp, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  Span span;
};

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  Span at;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      const auto c = static_cast<unsigned char>(src[i]);
      if (c == '\n') {
        ++at.line;
        at.column = 1;
      } else if ((c & 0xC0) != 0x80) {
        ++at.column;
      }
    }
  };
  while (i < src.size()) {
    const auto c = static_cast<unsigned char>(src[i]);
    if (std::isspace(c)) {
      advance(1);
      continue;
    }
    Token t;
    t.span = at;
    std::size_t n = 1;
    if (std::isalpha(c)) {
      while (i + n < src.size() && (std::isalnum(static_cast<unsigned char>(src[i + n])) || src[i + n] == '_')) ++n;
      t.kind = Tok::Ident;
    } else if (std::isdigit(c)) {
      while (i + n < src.size() && std::isdigit(static_cast<unsigned char>(src[i + n]))) ++n;
      if (i + n + 1 < src.size() && src[i + n] == '/' && std::isdigit(static_cast<unsigned char>(src[i + n + 1]))) {
        ++n;
        while (i + n < src.size() && std::isdigit(static_cast<unsigned char>(src[i + n]))) ++n;
      }
      t.kind = Tok::Number;
    } else if (src.compare(i, 3, "(.)") == 0) {
      n = 3;
      t.kind = Tok::CircOp;
    } else if (std::string_view("+-*(){}[],_^").find(static_cast<char>(c)) != std::string_view::npos) {
      t.kind = Tok::Symbol;
    } else {
      throw SourceError(Errc::SyntaxError, at, "unexpected character '" + src.substr(i, 1) + "'");
    }
    t.text = src.substr(i, n);
    advance(n);
    out.push_back(std::move(t));
  }
  out.push_back(Token{Tok::End, "", at});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  ExprPtr run() {
    auto e = expr();
    if (peek().kind != Tok::End) error(peek(), "unexpected " + describe(peek()));
    return e;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  const Token& take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool is(const char* sym, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Tok::Symbol && t.text == sym;
  }
  static std::string describe(const Token& t) { return t.kind == Tok::End ? "end of input" : "'" + t.text + "'"; }
  [[noreturn]] static void error(const Token& t, const std::string& message) {
    throw SourceError(Errc::SyntaxError, t.span, message);
  }
  const Token& expect(const char* sym) {
    if (!is(sym)) error(peek(), std::string("expected '") + sym + "' but found " + describe(peek()));
    return take();
  }
  int integer(const char* what) {
    const Token& t = peek();
    int v = 0;
    const auto [end, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (t.kind != Tok::Number || ec != std::errc() || end != t.text.data() + t.text.size())
      error(t, std::string("expected ") + what + " but found " + describe(t));
    take();
    return v;
  }
  static ExprPtr make(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

  ExprPtr expr() {
    const Span start = peek().span;
    auto first = circ();
    if (!is("+") && !is("-")) return first;
    Expr sum{Node::Sum, start, {}, {first}, {1}, {}, 0};
    while (is("+") || is("-")) {
      sum.signs.push_back(take().text == "+" ? 1 : -1);
      sum.children.push_back(circ());
    }
    return make(std::move(sum));
  }

  ExprPtr circ() {
    auto left = product();
    while (peek().kind == Tok::CircOp) {
      const Span s = take().span;
      left = make(Expr{Node::Circ, s, {}, {left, product()}, {}, {}, 0});
    }
    return left;
  }

  ExprPtr product() {
    auto left = unary();
    while (is("*")) {
      const Span s = take().span;
      left = make(Expr{Node::Times, s, {}, {left, unary()}, {}, {}, 0});
    }
    return left;
  }

  ExprPtr unary() {
    if (is("-")) {
      const Span s = take().span;
      return make(Expr{Node::Negate, s, {}, {unary()}, {}, {}, 0});
    }
    return postfix();
  }

  ExprPtr postfix() {
    auto e = primary();
    for (;;) {
      if (is("{")) {
        const Span s = take().span;
        Expr b{Node::Brace, s, {}, {e}, {}, {}, 0};
        if (!is("}")) {
          b.children.push_back(expr());
          while (is(",")) {
            take();
            b.children.push_back(expr());
          }
        }
        expect("}");
        const Token& underscore = expect("_");
        if (is("{")) {
          take();
          if (!is("}")) {
            b.weights.push_back(integer("a weight"));
            while (is(",")) {
              take();
              b.weights.push_back(integer("a weight"));
            }
          }
          expect("}");
        } else {
          b.weights.push_back(integer("a weight"));
        }
        if (b.weights.size() + 1 != b.children.size())
          error(underscore, std::to_string(b.children.size() - 1) + " arguments but " + std::to_string(b.weights.size()) + " weights");
        e = make(std::move(b));
      } else if (is("^")) {
        const Span s = take().span;
        if (is("(")) {
          take();
          expect("-");
          if (peek().text != "1") error(peek(), "only the exponent -1 is supported");
          take();
          expect(")");
          e = make(Expr{Node::CircInverse, s, {}, {e}, {}, {}, 0});
        } else {
          e = make(Expr{Node::Power, s, {}, {e}, {}, {}, integer("an exponent")});
        }
      } else {
        return e;
      }
    }
  }

  ExprPtr primary() {
    const Token& t = peek();
    if (t.kind == Tok::Number) {
      take();
      return make(Expr{t.text == "1" ? Node::One : Node::Number, t.span, t.text == "1" ? "" : t.text, {}, {}, {}, 0});
    }
    if (t.kind == Tok::Ident) {
      take();
      if (t.text == "d" && is("(")) {
        take();
        auto inner = expr();
        expect(")");
        return make(Expr{Node::Differential, t.span, {}, {inner}, {}, {}, 0});
      }
      if (t.text == "act" && is("(")) {
        take();
        auto g = expr();
        expect(",");
        auto a = expr();
        expect(")");
        return make(Expr{Node::GaugeAct, t.span, {}, {g, a}, {}, {}, 0});
      }
      if (is("[")) return make(Expr{Node::Tree, t.span, t.text + tree_body(), {}, {}, {}, 0});
      return make(Expr{Node::Generator, t.span, t.text, {}, {}, {}, 0});
    }
    if (is("(")) {
      take();
      auto inner = expr();
      expect(")");
      return inner;
    }
    error(t, "expected an expression but found " + describe(t));
  }

  // Raw bracketed part of a tree literal, whitespace dropped.
  std::string tree_body() {
    std::string out;
    int depth = 0;
    do {
      const Token& t = peek();
      if (t.kind == Tok::End) error(t, "unterminated tree literal");
      if (!(t.kind == Tok::Ident || is("[") || is("]") || is(",")))
        error(t, "unexpected " + describe(t) + " in tree literal");
      if (is("[")) ++depth;
      if (is("]")) --depth;
      out += take().text;
    } while (depth > 0);
    return out;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

int precedence(Node n) {
  switch (n) {
    case Node::Sum: return 1;
    case Node::Circ: return 2;
    case Node::Times: return 3;
    case Node::Negate: return 4;
    case Node::Brace:
    case Node::Power:
    case Node::CircInverse: return 5;
    default: return 6;
  }
}

std::string wrap(const Expr& e, int at_least) {
  return precedence(e.node) < at_least ? "(" + print(e) + ")" : print(e);
}

}  // namespace

SourceError::SourceError(Errc code, Span span, const std::string& message)
    : Error(code, located(span, message)), span_(span) {}

const char* node_name(Node n) {
  switch (n) {
    case Node::Generator: return "Generator";
    case Node::One: return "One";
    case Node::Number: return "Number";
    case Node::Tree: return "Tree";
    case Node::Negate: return "Negate";
    case Node::Sum: return "Sum";
    case Node::Times: return "Times";
    case Node::Power: return "Power";
    case Node::Brace: return "Brace";
    case Node::Circ: return "Circ";
    case Node::CircInverse: return "CircInverse";
    case Node::Differential: return "Differential";
    case Node::GaugeAct: return "GaugeAct";
  }
  return "?";
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node != b.node || a.text != b.text || a.signs != b.signs || a.weights != b.weights ||
      a.exponent != b.exponent || a.children.size() != b.children.size())
    return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!(*a.children[i] == *b.children[i])) return false;
  return true;
}

ExprPtr parse(const std::string& source) { return Parser(lex(source)).run(); }

std::string print(const Expr& e) {
  const auto& c = e.children;
  switch (e.node) {
    case Node::Generator:
    case Node::Number:
    case Node::Tree: return e.text;
    case Node::One: return "1";
    case Node::Negate: return "-" + wrap(*c[0], 4);
    case Node::Sum: {
      std::string s = wrap(*c[0], 2);
      for (std::size_t i = 1; i < c.size(); ++i) s += (e.signs[i] < 0 ? " - " : " + ") + wrap(*c[i], 2);
      return s;
    }
    case Node::Times: return wrap(*c[0], 3) + "*" + wrap(*c[1], 4);
    case Node::Circ: return wrap(*c[0], 2) + " (.) " + wrap(*c[1], 3);
    case Node::Power: return wrap(*c[0], 5) + "^" + std::to_string(e.exponent);
    case Node::CircInverse: return "(" + print(*c[0]) + ")^(-1)";
    case Node::Brace: {
      std::string s = wrap(*c[0], 5) + "{", w;
      for (std::size_t i = 1; i < c.size(); ++i) {
        s += (i > 1 ? "," : "") + print(*c[i]);
        w += (i > 1 ? "," : "") + std::to_string(e.weights[i - 1]);
      }
      return s + "}_{" + w + "}";
    }
    case Node::Differential: return "d(" + print(*c[0]) + ")";
    case Node::GaugeAct: return "act(" + print(*c[0]) + ", " + print(*c[1]) + ")";
  }
  return "";
}

namespace detail {

void relocate(const Error& e, const Span& span) {
  std::string message = e.what();
  const std::string prefix = std::string(errc_name(e.code())) + ": ";
  if (message.starts_with(prefix)) message.erase(0, prefix.size());
  throw SourceError(e.code(), span, message);
}

void fail_at(Errc code, const Span& span, const std::string& message) { throw SourceError(code, span, message); }

}  // namespace detail

AlgebraElement evaluate(const Expr& e, const FreeModel& m) { return Evaluator<FreeModel>(m)(e); }

AlgebraElement evaluate(const std::string& source, const SpecPtr& spec) {
  return evaluate(*parse(source), FreeModel(spec));
}

}  // namespace gpl::dsl
