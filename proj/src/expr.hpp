#ifndef HORIZON_EXPR_HPP
#define HORIZON_EXPR_HPP

#include <memory>
#include <string>
#include <vector>

#include "common.hpp"

namespace horizon::expr {

/* Scale-factor / warp expression language.
 *
 *   expression ::= term { ("+" | "-") term }
 *   term       ::= unary { ("*" | "/") unary }
 *   unary      ::= "-" unary | power
 *   power      ::= primary [ "^" unary ]
 *   primary    ::= number | variable | func "(" args ")" | "(" expression ")"
 *   variable   ::= "t" | "r" | "x"
 *   func       ::= "exp" | "log" | "sqrt" | "piecewise"
 *
 * piecewise(e0, b1, e1, b2, e2, ...) evaluates e0 for x <= b1, e1 for
 * b1 < x <= b2, and so on; breakpoints must be strictly increasing
 * constants.
 */

// Leading behavior of an expression at an infinite end: C * |x|^p * log(|x|)^q,
// or an exponential class that dominates every power.
struct Asymptotic {
  enum Kind { Poly, ExpGrowth, ExpDecay, Indeterminate } kind = Indeterminate;
  double coeff = 0.0;
  double exponent = 0.0;
  int log_power = 0;

  static Asymptotic poly(double c, double p, int q = 0) {
    return {Poly, c, p, q};
  }
  static Asymptotic of(Kind k) { return {k, 0.0, 0.0, 0}; }
};

class Node;
using NodePtr = std::shared_ptr<const Node>;

class Node {
 public:
  enum Op { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Exp, Log, Sqrt, Piecewise };

  Op op = Const;
  double value = 0.0;             // Const
  std::vector<NodePtr> kids;      // operands; Piecewise: e0, e1, ... eN
  std::vector<double> breaks;     // Piecewise breakpoints (N of them)

  double eval(double x) const;
  Asymptotic asymptotic(bool toward_plus_infinity) const;
};

struct Expression {
  NodePtr root;
  std::string text;  // original source, kept for serialization

  double operator()(double x) const { return root->eval(x); }
  Asymptotic asymptotic(bool toward_plus_infinity) const {
    return root->asymptotic(toward_plus_infinity);
  }
};

// Throws Error(ParseError) with a position-annotated message on bad input.
Expression parse(const std::string& source);

}  // namespace horizon::expr

#endif  // HORIZON_EXPR_HPP
