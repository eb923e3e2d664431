#include "specdisc/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "specdisc/errors.hpp"

namespace specdisc {

enum class Op { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Exp, Log, Sqrt, Abs, Sign, Sin, Cos };

struct Expr::Node {
  Op op = Op::Const;
  double value = 0.0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make_const(double v) {
  auto n = std::make_shared<Expr::Node>();
  n->op = Op::Const;
  n->value = v;
  return n;
}

NodePtr make_var() {
  auto n = std::make_shared<Expr::Node>();
  n->op = Op::Var;
  return n;
}

NodePtr make_unary(Op op, NodePtr arg) {
  auto n = std::make_shared<Expr::Node>();
  n->op = op;
  n->lhs = std::move(arg);
  return n;
}

NodePtr make_binary(Op op, NodePtr lhs, NodePtr rhs) {
  auto n = std::make_shared<Expr::Node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

double eval(const Expr::Node& n, double t) {
  switch (n.op) {
    case Op::Const: return n.value;
    case Op::Var: return t;
    case Op::Neg: return -eval(*n.lhs, t);
    case Op::Add: return eval(*n.lhs, t) + eval(*n.rhs, t);
    case Op::Sub: return eval(*n.lhs, t) - eval(*n.rhs, t);
    case Op::Mul: return eval(*n.lhs, t) * eval(*n.rhs, t);
    case Op::Div: return eval(*n.lhs, t) / eval(*n.rhs, t);
    case Op::Pow: return std::pow(eval(*n.lhs, t), eval(*n.rhs, t));
    case Op::Exp: return std::exp(eval(*n.lhs, t));
    case Op::Log: return std::log(eval(*n.lhs, t));
    case Op::Sqrt: return std::sqrt(eval(*n.lhs, t));
    case Op::Abs: return std::fabs(eval(*n.lhs, t));
    case Op::Sin: return std::sin(eval(*n.lhs, t));
    case Op::Cos: return std::cos(eval(*n.lhs, t));
    case Op::Sign: {
      const double v = eval(*n.lhs, t);
      return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0);
    }
  }
  return 0.0;
}

NodePtr substitute_shift(const NodePtr& n, double k) {
  switch (n->op) {
    case Op::Const: return n;
    case Op::Var: return make_binary(Op::Add, make_var(), make_const(k));
    default: break;
  }
  auto copy = std::make_shared<Expr::Node>(*n);
  if (n->lhs) copy->lhs = substitute_shift(n->lhs, k);
  if (n->rhs) copy->rhs = substitute_shift(n->rhs, k);
  return copy;
}

bool contains_var(const Expr::Node& n) {
  if (n.op == Op::Var) return true;
  if (n.lhs && contains_var(*n.lhs)) return true;
  if (n.rhs && contains_var(*n.rhs)) return true;
  return false;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  // Prefer the shortest representation that round-trips.
  for (int prec = 1; prec < 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) {
      s = buf;
      break;
    }
  }
  return s;
}

int precedence(Op op) {
  switch (op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    default: return 5;
  }
}

std::string print(const Expr::Node& n, const std::string& var) {
  auto wrap = [&](const Expr::Node& child, bool strict, int prec) {
    std::string s = print(child, var);
    const int cp = precedence(child.op);
    const bool negative_literal = child.op == Op::Const && child.value < 0;
    if (cp < prec || (strict && cp == prec) || negative_literal) return "(" + s + ")";
    return s;
  };
  switch (n.op) {
    case Op::Const: return format_number(n.value);
    case Op::Var: return var;
    case Op::Neg: return "-" + wrap(*n.lhs, false, precedence(Op::Pow));
    case Op::Add: return wrap(*n.lhs, false, 1) + " + " + wrap(*n.rhs, false, 1);
    case Op::Sub: return wrap(*n.lhs, false, 1) + " - " + wrap(*n.rhs, true, 1);
    case Op::Mul: return wrap(*n.lhs, false, 2) + "*" + wrap(*n.rhs, false, 2);
    case Op::Div: return wrap(*n.lhs, false, 2) + "/" + wrap(*n.rhs, true, 2);
    case Op::Pow: return wrap(*n.lhs, true, 4) + "^" + wrap(*n.rhs, false, 4);
    case Op::Exp: return "exp(" + print(*n.lhs, var) + ")";
    case Op::Log: return "log(" + print(*n.lhs, var) + ")";
    case Op::Sqrt: return "sqrt(" + print(*n.lhs, var) + ")";
    case Op::Abs: return "abs(" + print(*n.lhs, var) + ")";
    case Op::Sign: return "sign(" + print(*n.lhs, var) + ")";
    case Op::Sin: return "sin(" + print(*n.lhs, var) + ")";
    case Op::Cos: return "cos(" + print(*n.lhs, var) + ")";
  }
  return {};
}

class Parser {
 public:
  Parser(std::string_view text, std::string_view var) : text_(text), var_(var) {}

  NodePtr parse() {
    NodePtr n = parse_sum();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw InputError("expression \"" + std::string(text_) + "\": " + what + " at offset " +
                     std::to_string(pos_));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_sum() {
    NodePtr lhs = parse_product();
    for (;;) {
      if (accept('+')) {
        lhs = make_binary(Op::Add, lhs, parse_product());
      } else if (accept('-')) {
        lhs = make_binary(Op::Sub, lhs, parse_product());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_product() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_binary(Op::Mul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = make_binary(Op::Div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  // Unary minus binds looser than ^, so -n^2 means -(n^2).
  NodePtr parse_unary() {
    if (accept('-')) return make_unary(Op::Neg, parse_unary());
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (accept('^')) return make_binary(Op::Pow, base, parse_unary());
    return base;
  }

  NodePtr parse_atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_sum();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      const std::string_view name = text_.substr(start, pos_ - start);
      if (name == var_) return make_var();
      if (name == "pi") return make_const(std::numbers::pi);
      if (name == "e") return make_const(std::numbers::e);
      Op op;
      if (name == "exp") {
        op = Op::Exp;
      } else if (name == "log") {
        op = Op::Log;
      } else if (name == "sqrt") {
        op = Op::Sqrt;
      } else if (name == "abs") {
        op = Op::Abs;
      } else if (name == "sign") {
        op = Op::Sign;
      } else if (name == "sin") {
        op = Op::Sin;
      } else if (name == "cos") {
        op = Op::Cos;
      } else {
        pos_ = start;
        fail("unknown identifier '" + std::string(name) + "' (variable is '" + std::string(var_) +
             "')");
      }
      if (!accept('(')) fail("expected '(' after function name");
      NodePtr arg = parse_sum();
      if (!accept(')')) fail("expected ')'");
      return make_unary(op, arg);
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  NodePtr parse_number() {
    const std::string rest(text_.substr(pos_));
    char* end = nullptr;
    const double v = std::strtod(rest.c_str(), &end);
    if (end == rest.c_str()) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - rest.c_str());
    return make_const(v);
  }

  std::string_view text_;
  std::string_view var_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr::Expr() : root_(make_const(0.0)), variable_("n") {}

Expr::Expr(std::shared_ptr<const Node> root, std::string variable)
    : root_(std::move(root)), variable_(std::move(variable)) {}

Expr Expr::parse(std::string_view text, std::string_view variable) {
  Parser p(text, variable);
  return Expr(p.parse(), std::string(variable));
}

Expr Expr::constant(double value, std::string_view variable) {
  return Expr(make_const(value), std::string(variable));
}

double Expr::operator()(double t) const { return eval(*root_, t); }

Expr Expr::shifted(double k) const {
  if (k == 0.0) return *this;
  return Expr(substitute_shift(root_, k), variable_);
}

std::string Expr::to_string() const { return print(*root_, variable_); }

bool Expr::is_constant() const { return !contains_var(*root_); }

}  // namespace specdisc
