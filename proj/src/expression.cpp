#include "rsl/expression.hpp"

#include <array>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <utility>

#include "rsl/constants.hpp"
#include "rsl/errors.hpp"

namespace rsl {

namespace {

using Op = CoefficientExpr::Op;

struct FuncName {
  std::string_view name;
  Op op;
};

constexpr std::array<FuncName, 5> kFunctions{{
    {"sin", Op::Sin}, {"cos", Op::Cos}, {"exp", Op::Exp}, {"abs", Op::Abs}, {"sqrt", Op::Sqrt}}};

bool is_function(Op op) {
  return op == Op::Sin || op == Op::Cos || op == Op::Exp || op == Op::Abs || op == Op::Sqrt;
}

bool is_binary(Op op) {
  return op == Op::Add || op == Op::Sub || op == Op::Mul || op == Op::Div || op == Op::Pow;
}

std::string_view op_symbol(Op op) {
  switch (op) {
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Div: return "/";
    case Op::Pow: return "^";
    case Op::Neg: return "-";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Exp: return "exp";
    case Op::Abs: return "abs";
    case Op::Sqrt: return "sqrt";
    default: return "?";
  }
}

void append_number(std::string& out, double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  out.append(buf.data(), end);
}

}  // namespace

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : text_(text) {}

  CoefficientExpr run() {
    skip_ws();
    if (pos_ >= text_.size()) {
      throw ParseError(ParseError::Kind::Syntax, pos_, "empty expression");
    }
    int root = expr();
    skip_ws();
    if (pos_ < text_.size()) {
      if (text_[pos_] == ',') {
        throw ParseError(ParseError::Kind::Arity, pos_, "unexpected ',' (functions take one argument)");
      }
      throw ParseError(ParseError::Kind::Syntax, pos_,
                       std::string("unexpected '") + text_[pos_] + "'");
    }
    out_.root_ = root;
    out_.source_ = std::string(text_);
    return std::move(out_);
  }

 private:
  int push(Op op, double value = 0.0, int lhs = -1, int rhs = -1) {
    out_.nodes_.push_back({op, value, lhs, rhs});
    return static_cast<int>(out_.nodes_.size()) - 1;
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return;
    }
    if (c == ')' && pos_ < text_.size() && text_[pos_] == ',') {
      throw ParseError(ParseError::Kind::Arity, pos_, "too many arguments (functions take one)");
    }
    throw ParseError(ParseError::Kind::Syntax, pos_, std::string("expected '") + c + "'");
  }

  int expr() {
    int lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = push(Op::Add, 0.0, lhs, term());
      } else if (accept('-')) {
        lhs = push(Op::Sub, 0.0, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  int term() {
    int lhs = factor();
    for (;;) {
      if (accept('*')) {
        lhs = push(Op::Mul, 0.0, lhs, factor());
      } else if (accept('/')) {
        lhs = push(Op::Div, 0.0, lhs, factor());
      } else {
        return lhs;
      }
    }
  }

  int factor() {
    int base = unary();
    if (accept('^')) {
      int exponent = factor();
      return push(Op::Pow, 0.0, base, exponent);
    }
    return base;
  }

  int unary() {
    if (accept('-')) {
      int operand = unary();
      return push(Op::Neg, 0.0, operand);
    }
    return atom();
  }

  int atom() {
    skip_ws();
    if (pos_ >= text_.size()) {
      throw ParseError(ParseError::Kind::Syntax, pos_, "unexpected end of expression");
    }
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      if (accept(')')) {
        throw ParseError(ParseError::Kind::Syntax, pos_ - 1, "empty parentheses");
      }
      int inner = expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw ParseError(ParseError::Kind::Syntax, pos_, std::string("unexpected '") + c + "'");
  }

  int number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        digits();
      } else {
        pos_ = save;  // not an exponent; let the caller report the stray letter
      }
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc() || ptr != text_.data() + pos_) {
      throw ParseError(ParseError::Kind::Syntax, start, "malformed number");
    }
    return push(Op::Number, value);
  }

  int identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    std::string_view name = text_.substr(start, pos_ - start);
    if (name == "x") return push(Op::Var);
    if (name == "pi") return push(Op::Pi);
    for (const auto& f : kFunctions) {
      if (name == f.name) {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != '(') {
          throw ParseError(ParseError::Kind::Syntax, pos_,
                           "expected '(' after function '" + std::string(name) + "'");
        }
        ++pos_;
        if (accept(')')) {
          throw ParseError(ParseError::Kind::Arity, pos_ - 1,
                           "function '" + std::string(name) + "' takes one argument");
        }
        int arg = expr();
        expect(')');
        return push(f.op, 0.0, arg);
      }
    }
    throw ParseError(ParseError::Kind::UnknownIdentifier, start,
                     "unknown identifier '" + std::string(name) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  CoefficientExpr out_{};
};

CoefficientExpr::CoefficientExpr() : nodes_{{Op::Number, 0.0, -1, -1}}, root_(0), source_("0") {}

CoefficientExpr parse_expression(std::string_view text) {
  ExprParser parser(text);
  return parser.run();
}

double CoefficientExpr::operator()(double x) const {
  const double v = eval(root_, x);
  if (!std::isfinite(v)) throw EvalError(x, "non-finite value of '" + source_ + "'");
  return v;
}

double CoefficientExpr::eval(int index, double x) const {
  const Node& n = nodes_[static_cast<std::size_t>(index)];
  switch (n.op) {
    case Op::Number: return n.value;
    case Op::Var: return x;
    case Op::Pi: return kPi;
    case Op::Neg: return -eval(n.lhs, x);
    case Op::Add: return eval(n.lhs, x) + eval(n.rhs, x);
    case Op::Sub: return eval(n.lhs, x) - eval(n.rhs, x);
    case Op::Mul: return eval(n.lhs, x) * eval(n.rhs, x);
    case Op::Div: {
      const double num = eval(n.lhs, x);
      const double den = eval(n.rhs, x);
      if (den == 0.0) throw EvalError(x, "division by zero in '" + source_ + "'");
      return num / den;
    }
    case Op::Pow: {
      const double v = std::pow(eval(n.lhs, x), eval(n.rhs, x));
      if (std::isnan(v)) throw EvalError(x, "invalid power in '" + source_ + "'");
      return v;
    }
    case Op::Sin: return std::sin(eval(n.lhs, x));
    case Op::Cos: return std::cos(eval(n.lhs, x));
    case Op::Exp: return std::exp(eval(n.lhs, x));
    case Op::Abs: return std::abs(eval(n.lhs, x));
    case Op::Sqrt: {
      const double v = eval(n.lhs, x);
      if (v < 0.0) throw EvalError(x, "sqrt of negative value in '" + source_ + "'");
      return std::sqrt(v);
    }
  }
  return 0.0;
}

std::string CoefficientExpr::to_string() const {
  std::string out;
  print(root_, out);
  return out;
}

std::string CoefficientExpr::sexpr() const {
  std::string out;
  print_prefix(root_, out);
  return out;
}

void CoefficientExpr::print(int index, std::string& out) const {
  const Node& n = nodes_[static_cast<std::size_t>(index)];
  if (n.op == Op::Number) {
    append_number(out, n.value);
  } else if (n.op == Op::Var) {
    out += 'x';
  } else if (n.op == Op::Pi) {
    out += "pi";
  } else if (n.op == Op::Neg) {
    out += "(-";
    print(n.lhs, out);
    out += ')';
  } else if (is_function(n.op)) {
    out += op_symbol(n.op);
    out += '(';
    print(n.lhs, out);
    out += ')';
  } else {
    out += '(';
    print(n.lhs, out);
    out += ' ';
    out += op_symbol(n.op);
    out += ' ';
    print(n.rhs, out);
    out += ')';
  }
}

void CoefficientExpr::print_prefix(int index, std::string& out) const {
  const Node& n = nodes_[static_cast<std::size_t>(index)];
  if (n.op == Op::Number) {
    append_number(out, n.value);
  } else if (n.op == Op::Var) {
    out += 'x';
  } else if (n.op == Op::Pi) {
    out += "pi";
  } else {
    out += '(';
    out += op_symbol(n.op);
    out += ' ';
    print_prefix(n.lhs, out);
    if (is_binary(n.op)) {
      out += ' ';
      print_prefix(n.rhs, out);
    }
    out += ')';
  }
}

bool CoefficientExpr::depends_on_x(int index) const {
  const Node& n = nodes_[static_cast<std::size_t>(index)];
  if (n.op == Op::Var) return true;
  if (n.lhs >= 0 && depends_on_x(n.lhs)) return true;
  return n.rhs >= 0 && depends_on_x(n.rhs);
}

bool CoefficientExpr::is_constant() const { return !depends_on_x(root_); }

bool CoefficientExpr::equal(const CoefficientExpr& a, int ia, const CoefficientExpr& b, int ib) {
  const Node& na = a.nodes_[static_cast<std::size_t>(ia)];
  const Node& nb = b.nodes_[static_cast<std::size_t>(ib)];
  if (na.op != nb.op) return false;
  if (na.op == Op::Number) return std::bit_cast<std::uint64_t>(na.value) == std::bit_cast<std::uint64_t>(nb.value);
  if ((na.lhs < 0) != (nb.lhs < 0) || (na.rhs < 0) != (nb.rhs < 0)) return false;
  if (na.lhs >= 0 && !equal(a, na.lhs, b, nb.lhs)) return false;
  return na.rhs < 0 || equal(a, na.rhs, b, nb.rhs);
}

bool operator==(const CoefficientExpr& a, const CoefficientExpr& b) {
  return CoefficientExpr::equal(a, a.root_, b, b.root_);
}

}  // namespace rsl
