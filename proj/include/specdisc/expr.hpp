#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace specdisc {

/// Real-valued expression in one variable, parsed from text such as
/// "5 + 10/(5*n - 12)" or "(1+x)^(0.3)".
///
/// Grammar: + - * / ^ (right-associative), unary minus, parentheses,
/// numeric literals, the variable, the constants pi and e, and the
/// functions exp, log, sqrt, abs, sign, sin, cos.
class Expr {
 public:
  Expr();  // the constant 0

  static Expr parse(std::string_view text, std::string_view variable = "n");
  static Expr constant(double value, std::string_view variable = "n");

  double operator()(double t) const;

  /// The expression with its variable replaced by (variable + k).
  Expr shifted(double k) const;

  const std::string& variable() const { return variable_; }
  std::string to_string() const;
  bool is_constant() const;

  struct Node;

 private:
  Expr(std::shared_ptr<const Node> root, std::string variable);

  std::shared_ptr<const Node> root_;
  std::string variable_;
};

}  // namespace specdisc
