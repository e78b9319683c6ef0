#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rsl {

/// Parsed arithmetic expression in the single variable `x`.
///
/// Grammar:
///   expr   := term (("+"|"-") term)*
///   term   := factor (("*"|"/") factor)*
///   factor := unary ("^" factor)?
///   unary  := "-" unary | atom
///   atom   := NUMBER | "x" | "pi" | FUNC "(" expr ")" | "(" expr ")"
///   FUNC   := "sin" | "cos" | "exp" | "abs" | "sqrt"
///
/// `^` is right-associative and unary minus binds tighter than the base of `^`,
/// so `-x^2` is `(-x)^2`. Nodes live in a flat arena; the object is immutable
/// after parsing and safe to share between threads.
class CoefficientExpr {
 public:
  enum class Op : std::uint8_t {
    Number, Var, Pi, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Abs, Sqrt
  };

  struct Node {
    Op op;
    double value;  // Number only
    int lhs;       // operand of unary ops and functions
    int rhs;
  };

  /// Constant-zero expression.
  CoefficientExpr();

  /// Throws EvalError on a domain violation or a non-finite result.
  double operator()(double x) const;

  /// Fully parenthesized infix text that parses back to the same tree.
  std::string to_string() const;
  /// Prefix form, e.g. `(+ (sin x) (* 0.5 (^ x 2)))`.
  std::string sexpr() const;
  /// Text the expression was parsed from.
  const std::string& source() const { return source_; }

  bool is_constant() const;
  std::size_t size() const { return nodes_.size(); }

  /// Structural comparison; the source text is ignored.
  friend bool operator==(const CoefficientExpr& a, const CoefficientExpr& b);

 private:
  friend class ExprParser;

  double eval(int index, double x) const;
  void print(int index, std::string& out) const;
  void print_prefix(int index, std::string& out) const;
  bool depends_on_x(int index) const;
  static bool equal(const CoefficientExpr& a, int ia, const CoefficientExpr& b, int ib);

  std::vector<Node> nodes_;
  int root_ = 0;
  std::string source_;
};

CoefficientExpr parse_expression(std::string_view text);

inline double eval_expression(const CoefficientExpr& expr, double x) { return expr(x); }

}  // namespace rsl
