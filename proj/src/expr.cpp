#include "expr.hpp"

#include <cctype>
#include <cmath>

namespace horizon::expr {

double Node::eval(double x) const {
  switch (op) {
    case Const: return value;
    case Var: return x;
    case Add: return kids[0]->eval(x) + kids[1]->eval(x);
    case Sub: return kids[0]->eval(x) - kids[1]->eval(x);
    case Mul: return kids[0]->eval(x) * kids[1]->eval(x);
    case Div: return kids[0]->eval(x) / kids[1]->eval(x);
    case Neg: return -kids[0]->eval(x);
    case Pow: return std::pow(kids[0]->eval(x), kids[1]->eval(x));
    case Exp: return std::exp(kids[0]->eval(x));
    case Log: return std::log(kids[0]->eval(x));
    case Sqrt: return std::sqrt(kids[0]->eval(x));
    case Piecewise: {
      std::size_t i = 0;
      while (i < breaks.size() && x > breaks[i]) ++i;
      return kids[i]->eval(x);
    }
  }
  return 0.0;
}

namespace {

bool is_const(const Asymptotic& a) {
  return a.kind == Asymptotic::Poly && a.exponent == 0.0 && a.log_power == 0;
}

// Compares dominance: returns +1 if a dominates b in magnitude at the end,
// -1 if b dominates, 0 if same order.
int dominance(const Asymptotic& a, const Asymptotic& b) {
  auto rank = [](const Asymptotic& s) {
    if (s.kind == Asymptotic::ExpGrowth) return 2;
    if (s.kind == Asymptotic::ExpDecay) return -2;
    return 0;
  };
  if (rank(a) != rank(b)) return rank(a) > rank(b) ? 1 : -1;
  if (a.kind != Asymptotic::Poly || b.kind != Asymptotic::Poly) return 0;
  if (a.exponent != b.exponent) return a.exponent > b.exponent ? 1 : -1;
  if (a.log_power != b.log_power) return a.log_power > b.log_power ? 1 : -1;
  return 0;
}

Asymptotic indeterminate() { return Asymptotic::of(Asymptotic::Indeterminate); }

}  // namespace

Asymptotic Node::asymptotic(bool plus) const {
  switch (op) {
    case Const: return Asymptotic::poly(value, 0.0);
    case Var: return Asymptotic::poly(plus ? 1.0 : -1.0, 1.0);
    case Neg: {
      Asymptotic a = kids[0]->asymptotic(plus);
      if (a.kind == Asymptotic::Poly) a.coeff = -a.coeff;
      return a;
    }
    case Add:
    case Sub: {
      Asymptotic a = kids[0]->asymptotic(plus);
      Asymptotic b = kids[1]->asymptotic(plus);
      if (op == Sub && b.kind == Asymptotic::Poly) b.coeff = -b.coeff;
      if (a.kind == Asymptotic::Indeterminate || b.kind == Asymptotic::Indeterminate)
        return indeterminate();
      int d = dominance(a, b);
      if (d > 0) return a;
      if (d < 0) return b;
      if (a.kind == Asymptotic::Poly && b.kind == Asymptotic::Poly) {
        double c = a.coeff + b.coeff;
        if (c != 0.0) return Asymptotic::poly(c, a.exponent, a.log_power);
        return indeterminate();  // exact cancellation of the leading order
      }
      return indeterminate();
    }
    case Mul: {
      Asymptotic a = kids[0]->asymptotic(plus);
      Asymptotic b = kids[1]->asymptotic(plus);
      if (a.kind == Asymptotic::Indeterminate || b.kind == Asymptotic::Indeterminate)
        return indeterminate();
      if (a.kind == Asymptotic::Poly && b.kind == Asymptotic::Poly)
        return Asymptotic::poly(a.coeff * b.coeff, a.exponent + b.exponent,
                                a.log_power + b.log_power);
      if (a.kind == Asymptotic::ExpGrowth || b.kind == Asymptotic::ExpGrowth) {
        // growth * decay is indeterminate without rate comparison
        if (a.kind == Asymptotic::ExpDecay || b.kind == Asymptotic::ExpDecay)
          return indeterminate();
        return Asymptotic::of(Asymptotic::ExpGrowth);
      }
      return Asymptotic::of(Asymptotic::ExpDecay);
    }
    case Div: {
      Asymptotic a = kids[0]->asymptotic(plus);
      Asymptotic b = kids[1]->asymptotic(plus);
      if (a.kind == Asymptotic::Indeterminate || b.kind == Asymptotic::Indeterminate)
        return indeterminate();
      if (b.kind == Asymptotic::Poly) {
        if (b.coeff == 0.0) return indeterminate();
        if (a.kind == Asymptotic::Poly)
          return Asymptotic::poly(a.coeff / b.coeff, a.exponent - b.exponent,
                                  a.log_power - b.log_power);
        return a;  // exp class divided by a power keeps its class
      }
      // dividing by an exponential class
      if (a.kind == Asymptotic::Poly)
        return Asymptotic::of(b.kind == Asymptotic::ExpGrowth
                                  ? Asymptotic::ExpDecay
                                  : Asymptotic::ExpGrowth);
      return indeterminate();
    }
    case Pow: {
      Asymptotic base = kids[0]->asymptotic(plus);
      Asymptotic ex = kids[1]->asymptotic(plus);
      if (!is_const(ex) || base.kind == Asymptotic::Indeterminate)
        return indeterminate();
      double q = ex.coeff;
      if (base.kind == Asymptotic::Poly) {
        if (base.coeff <= 0.0 && base.exponent != 0.0) return indeterminate();
        return Asymptotic::poly(std::pow(base.coeff, q), base.exponent * q,
                                base.log_power * static_cast<int>(q));
      }
      if (q == 0.0) return Asymptotic::poly(1.0, 0.0);
      bool grows = (base.kind == Asymptotic::ExpGrowth) == (q > 0.0);
      return Asymptotic::of(grows ? Asymptotic::ExpGrowth : Asymptotic::ExpDecay);
    }
    case Exp: {
      Asymptotic a = kids[0]->asymptotic(plus);
      if (a.kind == Asymptotic::Indeterminate) return indeterminate();
      if (a.kind == Asymptotic::Poly) {
        if (a.exponent == 0.0 && a.log_power == 0)
          return Asymptotic::poly(std::exp(a.coeff), 0.0);
        if (a.exponent > 0.0 || (a.exponent == 0.0 && a.log_power > 0))
          return Asymptotic::of(a.coeff > 0.0 ? Asymptotic::ExpGrowth
                                              : Asymptotic::ExpDecay);
        return Asymptotic::poly(1.0, 0.0);  // argument -> 0
      }
      if (a.kind == Asymptotic::ExpDecay) return Asymptotic::poly(1.0, 0.0);
      return indeterminate();  // exp(exp-growth): sign of argument unknown
    }
    case Log: {
      Asymptotic a = kids[0]->asymptotic(plus);
      if (a.kind != Asymptotic::Poly || a.coeff <= 0.0) return indeterminate();
      if (a.exponent == 0.0 && a.log_power == 0)
        return Asymptotic::poly(std::log(a.coeff), 0.0);
      if (a.exponent > 0.0) return Asymptotic::poly(a.exponent, 0.0, 1);
      return indeterminate();  // argument -> 0: log diverges to -inf
    }
    case Sqrt: {
      Asymptotic a = kids[0]->asymptotic(plus);
      if (a.kind == Asymptotic::Poly) {
        if (a.coeff < 0.0) return indeterminate();
        return Asymptotic::poly(std::sqrt(a.coeff), a.exponent / 2.0,
                                a.log_power / 2);
      }
      if (a.kind == Asymptotic::Indeterminate) return indeterminate();
      return a;
    }
    case Piecewise:
      // at an infinite end only the outermost piece is active
      return plus ? kids.back()->asymptotic(plus) : kids.front()->asymptotic(plus);
  }
  return indeterminate();
}

namespace {

class Parser {
 public:
  explicit Parser(const std::string& s) : src_(s) {}

  NodePtr run() {
    NodePtr e = expression();
    skip_space();
    if (pos_ != src_.size()) err("trailing input");
    return e;
  }

 private:
  const std::string& src_;
  std::size_t pos_ = 0;

  [[noreturn]] void err(const std::string& what) {
    fail(ErrorCode::ParseError,
         "expression parse error at column " + std::to_string(pos_ + 1) + ": " + what);
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  char peek() {
    skip_space();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  bool accept(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) err(std::string("expected '") + c + "'");
  }

  static NodePtr make(Node::Op op, std::vector<NodePtr> kids) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->kids = std::move(kids);
    return n;
  }

  NodePtr expression() {
    NodePtr a = term();
    for (;;) {
      if (accept('+'))
        a = make(Node::Add, {a, term()});
      else if (accept('-'))
        a = make(Node::Sub, {a, term()});
      else
        return a;
    }
  }

  NodePtr term() {
    NodePtr a = unary();
    for (;;) {
      if (accept('*'))
        a = make(Node::Mul, {a, unary()});
      else if (accept('/'))
        a = make(Node::Div, {a, unary()});
      else
        return a;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Node::Neg, {unary()});
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Node::Pow, {base, unary()});
    return base;
  }

  NodePtr primary() {
    char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    if (accept('(')) {
      NodePtr e = expression();
      expect(')');
      return e;
    }
    err("expected number, name or '('");
  }

  NodePtr number() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
      ++pos_;
    // exponent suffix
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      } else {
        pos_ = save;
      }
    }
    auto n = std::make_shared<Node>();
    n->op = Node::Const;
    try {
      n->value = std::stod(src_.substr(start, pos_ - start));
    } catch (const std::exception&) {
      err("malformed number");
    }
    return n;
  }

  NodePtr identifier() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                  src_[pos_] == '_'))
      ++pos_;
    std::string name = src_.substr(start, pos_ - start);
    if (name == "t" || name == "r" || name == "x") {
      auto n = std::make_shared<Node>();
      n->op = Node::Var;
      return n;
    }
    if (name == "pi") {
      auto n = std::make_shared<Node>();
      n->op = Node::Const;
      n->value = 3.14159265358979323846;
      return n;
    }
    if (name == "exp" || name == "log" || name == "sqrt") {
      expect('(');
      NodePtr arg = expression();
      expect(')');
      Node::Op op = name == "exp" ? Node::Exp : name == "log" ? Node::Log : Node::Sqrt;
      return make(op, {arg});
    }
    if (name == "piecewise") {
      expect('(');
      auto n = std::make_shared<Node>();
      n->op = Node::Piecewise;
      n->kids.push_back(expression());
      while (accept(',')) {
        NodePtr brk = expression();
        if (brk->op != Node::Const && !(brk->op == Node::Neg && brk->kids[0]->op == Node::Const))
          err("piecewise breakpoints must be constants");
        double b = brk->eval(0.0);
        if (!n->breaks.empty() && b <= n->breaks.back())
          err("piecewise breakpoints must be strictly increasing");
        expect(',');
        n->breaks.push_back(b);
        n->kids.push_back(expression());
      }
      expect(')');
      return n;
    }
    err("unknown name '" + name + "'");
  }
};

}  // namespace

Expression parse(const std::string& source) {
  Parser p(source);
  return Expression{p.run(), source};
}

}  // namespace horizon::expr
