#pragma once

#include <concepts>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "gpl/algebra.hpp"
#include "gpl/error.hpp"
#include "gpl/gauge.hpp"
#include "gpl/identities.hpp"

// Expression language for algebra elements.
//
//   expr    := circ (('+' | '-') circ)*
//   circ    := product ('(.)' product)*
//   product := unary ('*' unary)*
//   unary   := '-' unary | postfix
//   postfix := primary ('{' [expr (',' expr)*] '}' '_' (INT | '{' [INT (',' INT)*] '}') | '^' INT | '^(-1)')*
//   primary := '1' | NUMBER | IDENT | IDENT '[' ... ']' | 'd(' expr ')' | 'act(' expr ',' expr ')' | '(' expr ')'
//
// NUMBER is an integer or a fraction a/b. IDENT '[...]' is a tree literal as printed by AlgebraElement.
// Over a local ring the identifier t is the ring parameter unless a generator carries that name.
// a*b is a scalar multiple when either side is a scalar and the star product a{b}_1 otherwise.
// a (.) b needs b = 1 + mu; so does b^(-1), the gauge inverse.

namespace gpl::dsl {

struct Span {
  int line = 1;
  int column = 1;
};

/// Domain or syntax failure tied to a source position.
class SourceError : public Error {
 public:
  SourceError(Errc code, Span span, const std::string& message);
  const Span& span() const { return span_; }

 private:
  Span span_;
};

enum class Node { Generator, One, Number, Tree, Negate, Sum, Times, Power, Brace, Circ, CircInverse, Differential, GaugeAct };

const char* node_name(Node n);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  Node node = Node::One;
  Span span;
  std::string text;               // Generator, Number, Tree
  std::vector<ExprPtr> children;  // Brace: head then arguments; Circ, Times, GaugeAct: two operands
  std::vector<int> signs;         // Sum: +1 or -1 per child
  std::vector<int> weights;       // Brace
  int exponent = 0;               // Power
};

/// Structural equality; spans are ignored.
bool operator==(const Expr& a, const Expr& b);

/// SourceError(SyntaxError) with line and column on malformed input.
ExprPtr parse(const std::string& source);
/// Canonical text; parse(print(e)) == e.
std::string print(const Expr& e);

using Value = std::variant<Scalar, AlgebraElement>;

template <class M>
concept ElementModel = GaugeModel<M> && std::same_as<typename M::Element, AlgebraElement>;

namespace detail {
[[noreturn]] void relocate(const Error& e, const Span& span);
[[noreturn]] void fail_at(Errc code, const Span& span, const std::string& message);
}  // namespace detail

/// Evaluates expressions through the operations of the model.
template <ElementModel M>
class Evaluator {
 public:
  explicit Evaluator(const M& m) : m_(m), spec_(m.zero().spec()) {}

  AlgebraElement operator()(const Expr& e) const { return element(value(e)); }
  Value value(const Expr& e) const {
    try {
      return dispatch(e);
    } catch (const SourceError&) {
      throw;
    } catch (const Error& err) {
      detail::relocate(err, e.span);
    }
  }

 private:
  using E = AlgebraElement;

  E element(const Value& v) const {
    if (const auto* s = std::get_if<Scalar>(&v)) return E::one(spec_).scaled(*s);
    return std::get<E>(v);
  }
  E operand(const ExprPtr& e) const { return element(value(*e)); }
  // Splits 1 + mu; NotUnital otherwise.
  E gauge_part(const Value& v, const Span& span) const {
    const E g = element(v);
    if (!g.unit().is_one()) detail::fail_at(Errc::NotUnital, span, "expected an element of the form 1 + mu");
    return g.without_unit();
  }

  Value dispatch(const Expr& e) const {
    const Ring& ring = spec_->ring();
    const auto& c = e.children;
    switch (e.node) {
      case Node::Generator:
        if (spec_->find(e.text) >= 0) return E::generator(spec_, e.text);
        if (e.text == "t" && ring.is_local()) return Scalar::t_power(1, ring);
        detail::fail_at(Errc::UnknownIdentifier, e.span, e.text);
      case Node::One:
        return Scalar::one(ring);
      case Node::Number:
        return parse_scalar(e.text, ring);
      case Node::Tree:
        return E::parse_tree(spec_, e.text);
      case Node::Negate: {
        const Value v = value(*c[0]);
        if (const auto* s = std::get_if<Scalar>(&v)) return -*s;
        return -std::get<E>(v);
      }
      case Node::Sum: {
        Value acc = Scalar::zero(ring);
        for (std::size_t i = 0; i < c.size(); ++i) {
          const Value v = value(*c[i]);
          const auto* a = std::get_if<Scalar>(&acc);
          const auto* b = std::get_if<Scalar>(&v);
          if (a && b) acc = e.signs[i] < 0 ? *a - *b : *a + *b;
          else acc = e.signs[i] < 0 ? element(acc) - element(v) : element(acc) + element(v);
        }
        return acc;
      }
      case Node::Times: {
        const Value a = value(*c[0]), b = value(*c[1]);
        const auto* sa = std::get_if<Scalar>(&a);
        const auto* sb = std::get_if<Scalar>(&b);
        if (sa && sb) return *sa * *sb;
        if (sa) return std::get<E>(b).scaled(*sa);
        if (sb) return std::get<E>(a).scaled(*sb);
        return m_.brace(std::get<E>(a), {{std::get<E>(b), 1}});
      }
      case Node::Power: {
        const Value v = value(*c[0]);
        const auto* s = std::get_if<Scalar>(&v);
        if (!s) detail::fail_at(Errc::SyntaxError, e.span, "powers apply to ring scalars only");
        return s->pow(static_cast<unsigned>(e.exponent));
      }
      case Node::Brace: {
        std::vector<std::pair<E, int>> args;
        for (std::size_t i = 1; i < c.size(); ++i) args.emplace_back(operand(c[i]), e.weights[i - 1]);
        return m_.brace(operand(c[0]), args);
      }
      case Node::Circ:
        return circ(m_, operand(c[0]), gauge_part(value(*c[1]), c[1]->span));
      case Node::CircInverse: {
        const Value v = value(*c[0]);
        if (const auto* s = std::get_if<Scalar>(&v)) return s->inverse();
        return E::one(spec_) + gauge_inverse(m_, gauge_part(v, c[0]->span));
      }
      case Node::Differential:
        return m_.differentiate(operand(c[0]));
      case Node::GaugeAct:
        return gauge_act(m_, gauge_part(value(*c[0]), c[0]->span), operand(c[1]));
    }
    detail::fail_at(Errc::InternalInvariant, e.span, "unhandled node");
  }

  const M& m_;
  SpecPtr spec_;
};

AlgebraElement evaluate(const Expr& e, const FreeModel& m);
AlgebraElement evaluate(const std::string& source, const SpecPtr& spec);

}  // namespace gpl::dsl
