#pragma once

// One-variable closed-form expressions: parsing, printing, symbolic
// differentiation and evaluation.
//
// Grammar (whitespace insignificant):
//   expr  := term (('+'|'-') term)*
//   term  := unary (('*'|'/') unary)*
//   unary := '-' unary | power
//   power := atom ('^' unary)?            right-associative through unary
//   atom  := number | ident | ident '(' expr ')' | '(' expr ')'
//
// Trees are immutable and shared; every node is built through the smart
// constructors below, which apply the only simplifications the library
// performs: 0/1 identities, folding of constant subtrees, and removal of
// double negation.

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <system_error>

#include "sepsurf/errors.hpp"

namespace sepsurf {

enum class Op : std::uint8_t {
  Const,
  Var,
  // unary
  Neg,
  Sin,
  Cos,
  Sinh,
  Cosh,
  Tanh,
  Exp,
  Log,
  Sqrt,
  Abs,
  Sign,  // only produced by differentiating abs; also accepted by the parser
  // binary
  Add,
  Sub,
  Mul,
  Div,
  Pow,
};

struct Node;
using Ast = std::shared_ptr<const Node>;

struct Node {
  Op op;
  double value = 0.0;  // Const only
  Ast lhs;             // unary argument, or left operand
  Ast rhs;             // right operand
};

inline bool is_unary(Op op) { return op >= Op::Neg && op <= Op::Sign; }
inline bool is_binary(Op op) { return op >= Op::Add; }

inline const char* function_name(Op op) {
  switch (op) {
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Sinh: return "sinh";
    case Op::Cosh: return "cosh";
    case Op::Tanh: return "tanh";
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Sqrt: return "sqrt";
    case Op::Abs: return "abs";
    case Op::Sign: return "sign";
    default: return nullptr;
  }
}

inline bool function_from_name(std::string_view name, Op& out) {
  static constexpr std::array<Op, 10> kFuncs{Op::Sin,  Op::Cos, Op::Sinh, Op::Cosh, Op::Tanh,
                                             Op::Exp,  Op::Log, Op::Sqrt, Op::Abs,  Op::Sign};
  for (Op op : kFuncs) {
    if (name == function_name(op)) {
      out = op;
      return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace detail {

inline bool is_integer_exponent(double p) {
  return std::isfinite(p) && std::nearbyint(p) == p && std::abs(p) <= 1048576.0;
}

inline double int_pow(double base, double p) {
  auto n = static_cast<std::int64_t>(p);
  if (n < 0) {
    if (base == 0.0) throw DomainError("zero raised to a negative power");
    return 1.0 / int_pow(base, static_cast<double>(-n));
  }
  double result = 1.0;
  double b = base;
  while (n > 0) {
    if (n & 1) result *= b;
    b *= b;
    n >>= 1;
  }
  return result;
}

inline double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string("non-finite result in ") + what);
  return v;
}

}  // namespace detail

/// Real power with the library's branch rule: integer exponents accept any
/// base sign, fractional exponents require a positive base.
inline double real_pow(double base, double p) {
  if (detail::is_integer_exponent(p)) return detail::checked(detail::int_pow(base, p), "pow");
  if (base > 0.0) return detail::checked(std::pow(base, p), "pow");
  if (base == 0.0 && p > 0.0) return 0.0;
  throw DomainError("pow of non-positive base with non-integer exponent");
}

inline double apply_unary(Op op, double a) {
  switch (op) {
    case Op::Neg: return -a;
    case Op::Sin: return std::sin(a);
    case Op::Cos: return std::cos(a);
    case Op::Sinh: return detail::checked(std::sinh(a), "sinh");
    case Op::Cosh: return detail::checked(std::cosh(a), "cosh");
    case Op::Tanh: return std::tanh(a);
    case Op::Exp: return detail::checked(std::exp(a), "exp");
    case Op::Log:
      if (!(a > 0.0)) throw DomainError("log of non-positive argument");
      return std::log(a);
    case Op::Sqrt:
      if (a < 0.0) throw DomainError("sqrt of negative argument");
      return std::sqrt(a);
    case Op::Abs: return std::abs(a);
    case Op::Sign:
      if (a == 0.0) throw DomainError("derivative of abs at zero");
      return a > 0.0 ? 1.0 : -1.0;
    default: throw Error("apply_unary: not a unary operator");
  }
}

inline double apply_binary(Op op, double a, double b) {
  switch (op) {
    case Op::Add: return detail::checked(a + b, "add");
    case Op::Sub: return detail::checked(a - b, "sub");
    case Op::Mul: return detail::checked(a * b, "mul");
    case Op::Div:
      if (b == 0.0) throw DomainError("division by zero");
      return detail::checked(a / b, "div");
    case Op::Pow: return real_pow(a, b);
    default: throw Error("apply_binary: not a binary operator");
  }
}

inline double eval(const Ast& ast, double x) {
  const Node& n = *ast;
  switch (n.op) {
    case Op::Const: return n.value;
    case Op::Var: return x;
    default: break;
  }
  if (is_unary(n.op)) return apply_unary(n.op, eval(n.lhs, x));
  return apply_binary(n.op, eval(n.lhs, x), eval(n.rhs, x));
}

// ---------------------------------------------------------------------------
// Smart constructors

inline Ast constant(double v) { return std::make_shared<const Node>(Node{Op::Const, v, nullptr, nullptr}); }
inline Ast variable() { return std::make_shared<const Node>(Node{Op::Var, 0.0, nullptr, nullptr}); }

inline bool is_const(const Ast& a) { return a->op == Op::Const; }
inline bool is_const(const Ast& a, double v) { return a->op == Op::Const && a->value == v; }

inline Ast unary(Op op, Ast a) {
  if (is_const(a)) {
    try {
      double v = apply_unary(op, a->value);
      if (std::isfinite(v)) return constant(v);
    } catch (const DomainError&) {
      // left unfolded; the error surfaces at evaluation time
    }
  }
  if (op == Op::Neg && a->op == Op::Neg) return a->lhs;
  return std::make_shared<const Node>(Node{op, 0.0, std::move(a), nullptr});
}

inline Ast binary(Op op, Ast a, Ast b) {
  if (is_const(a) && is_const(b)) {
    try {
      double v = apply_binary(op, a->value, b->value);
      if (std::isfinite(v)) return constant(v);
    } catch (const DomainError&) {
    }
  }
  switch (op) {
    case Op::Add:
      if (is_const(a, 0.0)) return b;
      if (is_const(b, 0.0)) return a;
      break;
    case Op::Sub:
      if (is_const(b, 0.0)) return a;
      if (is_const(a, 0.0)) return unary(Op::Neg, std::move(b));
      break;
    case Op::Mul:
      if (is_const(a, 0.0) || is_const(b, 0.0)) return constant(0.0);
      if (is_const(a, 1.0)) return b;
      if (is_const(b, 1.0)) return a;
      break;
    case Op::Div:
      if (is_const(b, 1.0)) return a;
      if (is_const(a, 0.0)) return constant(0.0);
      break;
    case Op::Pow:
      if (is_const(b, 1.0)) return a;
      if (is_const(b, 0.0) || is_const(a, 1.0)) return constant(1.0);
      break;
    default: break;
  }
  return std::make_shared<const Node>(Node{op, 0.0, std::move(a), std::move(b)});
}

inline Ast operator+(Ast a, Ast b) { return binary(Op::Add, std::move(a), std::move(b)); }
inline Ast operator-(Ast a, Ast b) { return binary(Op::Sub, std::move(a), std::move(b)); }
inline Ast operator*(Ast a, Ast b) { return binary(Op::Mul, std::move(a), std::move(b)); }
inline Ast operator/(Ast a, Ast b) { return binary(Op::Div, std::move(a), std::move(b)); }
inline Ast operator-(Ast a) { return unary(Op::Neg, std::move(a)); }
inline Ast pow(Ast a, Ast b) { return binary(Op::Pow, std::move(a), std::move(b)); }

/// Structural equality (constants compared bitwise-equal as doubles).
inline bool equal(const Ast& a, const Ast& b) {
  if (a == b) return true;
  if (!a || !b || a->op != b->op) return false;
  if (a->op == Op::Const) return a->value == b->value;
  if (a->op == Op::Var) return true;
  if (is_unary(a->op)) return equal(a->lhs, b->lhs);
  return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
}

inline std::size_t node_count(const Ast& a) {
  if (!a) return 0;
  return 1 + node_count(a->lhs) + node_count(a->rhs);
}

// ---------------------------------------------------------------------------
// Differentiation

inline Ast differentiate(const Ast& ast) {
  const Node& n = *ast;
  switch (n.op) {
    case Op::Const: return constant(0.0);
    case Op::Var: return constant(1.0);
    default: break;
  }
  if (is_unary(n.op)) {
    const Ast& a = n.lhs;
    Ast da = differentiate(a);
    if (n.op == Op::Neg) return -da;
    if (n.op == Op::Sign) return constant(0.0);
    if (is_const(da, 0.0)) return constant(0.0);
    Ast outer;
    switch (n.op) {
      case Op::Sin: outer = unary(Op::Cos, a); break;
      case Op::Cos: outer = -unary(Op::Sin, a); break;
      case Op::Sinh: outer = unary(Op::Cosh, a); break;
      case Op::Cosh: outer = unary(Op::Sinh, a); break;
      case Op::Tanh: outer = constant(1.0) - pow(unary(Op::Tanh, a), constant(2.0)); break;
      case Op::Exp: outer = ast; break;
      case Op::Log: return da / a;
      case Op::Sqrt: return da / (constant(2.0) * ast);
      case Op::Abs: outer = unary(Op::Sign, a); break;
      default: throw Error("differentiate: unexpected unary operator");
    }
    return outer * da;
  }

  const Ast& a = n.lhs;
  const Ast& b = n.rhs;
  switch (n.op) {
    case Op::Add: return differentiate(a) + differentiate(b);
    case Op::Sub: return differentiate(a) - differentiate(b);
    case Op::Mul: return differentiate(a) * b + a * differentiate(b);
    case Op::Div: {
      Ast da = differentiate(a);
      Ast db = differentiate(b);
      if (is_const(db, 0.0)) return da / b;
      return (da * b - a * db) / pow(b, constant(2.0));
    }
    case Op::Pow: {
      Ast da = differentiate(a);
      Ast db = differentiate(b);
      if (is_const(db, 0.0)) {
        // c * a^(c-1) * a'
        return b * pow(a, b - constant(1.0)) * da;
      }
      // a^b * (b' log a + b a' / a)
      return ast * (db * unary(Op::Log, a) + b * da / a);
    }
    default: throw Error("differentiate: unexpected binary operator");
  }
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline int precedence(const Node& n) {
  switch (n.op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    default: return 5;
  }
}

inline std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw Error("format_number failed");
  return std::string(buf.data(), end);
}

inline void print(const Ast& ast, std::string_view var, int min_prec, std::string& out) {
  const Node& n = *ast;
  bool paren = precedence(n) < min_prec;
  if (paren) out += '(';
  switch (n.op) {
    case Op::Const:
      if (std::signbit(n.value)) {
        out += '(';
        out += format_number(n.value);
        out += ')';
      } else {
        out += format_number(n.value);
      }
      break;
    case Op::Var: out += var; break;
    case Op::Neg:
      out += '-';
      print(n.lhs, var, 3, out);
      break;
    case Op::Add:
    case Op::Sub:
      print(n.lhs, var, 1, out);
      out += n.op == Op::Add ? " + " : " - ";
      print(n.rhs, var, 2, out);
      break;
    case Op::Mul:
    case Op::Div:
      print(n.lhs, var, 2, out);
      out += n.op == Op::Mul ? "*" : "/";
      print(n.rhs, var, 3, out);
      break;
    case Op::Pow:
      print(n.lhs, var, 5, out);
      out += '^';
      print(n.rhs, var, 3, out);
      break;
    default:
      out += function_name(n.op);
      out += '(';
      print(n.lhs, var, 0, out);
      out += ')';
      break;
  }
  if (paren) out += ')';
}

}  // namespace detail

inline std::string to_string(const Ast& ast, std::string_view var_name = "x") {
  std::string out;
  detail::print(ast, var_name, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

class Parser {
 public:
  Parser(std::string_view src, std::string_view var) : src_(src), var_(var) {}

  Ast parse() {
    Ast e = expr();
    skip_ws();
    if (pos_ != src_.size()) fail_syntax("unexpected '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

 private:
  std::string_view src_;
  std::string_view var_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail_syntax(const std::string& msg) {
    throw ParseError(ParseError::Kind::Syntax, pos_, msg);
  }

  void skip_ws() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' ||
                                  src_[pos_] == '\r'))
      ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  Ast expr() {
    Ast lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = std::move(lhs) + term();
      } else if (accept('-')) {
        lhs = std::move(lhs) - term();
      } else {
        return lhs;
      }
    }
  }

  Ast term() {
    Ast lhs = unary_expr();
    for (;;) {
      if (accept('*')) {
        lhs = std::move(lhs) * unary_expr();
      } else if (accept('/')) {
        lhs = std::move(lhs) / unary_expr();
      } else {
        return lhs;
      }
    }
  }

  Ast unary_expr() {
    if (accept('-')) return -unary_expr();
    return power();
  }

  Ast power() {
    Ast base = atom();
    if (accept('^')) return pow(std::move(base), unary_expr());
    return base;
  }

  static bool ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }
  static bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
  static bool digit(char c) { return c >= '0' && c <= '9'; }

  Ast atom() {
    char c = peek();
    if (c == '\0') fail_syntax("unexpected end of input");
    if (c == '(') {
      ++pos_;
      Ast inner = expr();
      if (!accept(')')) fail_syntax("expected ')'");
      return inner;
    }
    if (digit(c) || c == '.') return number();
    if (ident_start(c)) return identifier();
    fail_syntax("unexpected '" + std::string(1, c) + "'");
  }

  Ast number() {
    std::size_t start = pos_;
    std::size_t p = pos_;
    bool any_digit = false;
    while (p < src_.size() && digit(src_[p])) ++p, any_digit = true;
    if (p < src_.size() && src_[p] == '.') {
      ++p;
      while (p < src_.size() && digit(src_[p])) ++p, any_digit = true;
    }
    if (!any_digit) fail_syntax("malformed number");
    if (p < src_.size() && (src_[p] == 'e' || src_[p] == 'E')) {
      std::size_t q = p + 1;
      if (q < src_.size() && (src_[q] == '+' || src_[q] == '-')) ++q;
      if (q < src_.size() && digit(src_[q])) {
        while (q < src_.size() && digit(src_[q])) ++q;
        p = q;
      }
    }
    double v = 0.0;
    auto [end, ec] = std::from_chars(src_.data() + start, src_.data() + p, v);
    if (ec != std::errc() || end != src_.data() + p) fail_syntax("malformed number");
    pos_ = p;
    return constant(v);
  }

  Ast identifier() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && ident_char(src_[pos_])) ++pos_;
    std::string_view name = src_.substr(start, pos_ - start);
    if (name == var_) {
      if (peek() == '(') {
        throw ParseError(ParseError::Kind::Arity, start,
                         "variable '" + std::string(name) + "' is not a function");
      }
      return variable();
    }
    Op op{};
    if (!function_from_name(name, op)) {
      throw ParseError(ParseError::Kind::UnknownIdentifier, start,
                       "unknown identifier '" + std::string(name) + "'");
    }
    if (!accept('(')) {
      throw ParseError(ParseError::Kind::Arity, start,
                       "function '" + std::string(name) + "' expects one parenthesized argument");
    }
    if (peek() == ')') {
      throw ParseError(ParseError::Kind::Arity, pos_,
                       "function '" + std::string(name) + "' expects one argument, got none");
    }
    Ast arg = expr();
    if (peek() == ',') {
      throw ParseError(ParseError::Kind::Arity, pos_,
                       "function '" + std::string(name) + "' expects one argument");
    }
    if (!accept(')')) fail_syntax("expected ')'");
    return unary(op, std::move(arg));
  }
};

}  // namespace detail

inline Ast parse_expr(std::string_view src, std::string_view var_name = "x") {
  Op dummy{};
  if (var_name.empty() || function_from_name(var_name, dummy))
    throw InvalidParameter("invalid variable name '" + std::string(var_name) + "'");
  return detail::Parser(src, var_name).parse();
}

// ---------------------------------------------------------------------------
// Func1D and jets

/// Open interval (lo, hi); infinite ends allowed.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double x) const { return x > lo && x < hi; }
  bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
};

/// Value and first three derivatives at a point.
struct Jet3 {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
};

/// A smooth one-variable function: expression tree, domain, and its first
/// three symbolic derivatives (computed once at construction).
class Func1D {
 public:
  Func1D() : Func1D(constant(0.0)) {}

  explicit Func1D(Ast ast, Interval domain = {}, std::string var_name = "x")
      : domain_(domain), var_(std::move(var_name)) {
    if (!(domain_.lo < domain_.hi)) throw InvalidParameter("empty function domain");
    trees_[0] = std::move(ast);
    for (int i = 1; i < 4; ++i) trees_[i] = differentiate(trees_[i - 1]);
  }

  static Func1D parse(std::string_view src, std::string var_name = "x", Interval domain = {}) {
    Ast ast = parse_expr(src, var_name);
    return Func1D(std::move(ast), domain, std::move(var_name));
  }

  const Ast& ast() const { return trees_[0]; }
  /// order in 0..3
  const Ast& derivative(int order) const { return trees_.at(static_cast<std::size_t>(order)); }
  const Interval& domain() const { return domain_; }
  const std::string& var_name() const { return var_; }
  bool is_constant() const { return is_const(trees_[0]); }
  std::string str() const { return to_string(trees_[0], var_); }

  double value(double x) const {
    require_interior(x);
    return sepsurf::eval(trees_[0], x);
  }

  Jet3 jet(double x) const {
    require_interior(x);
    return {sepsurf::eval(trees_[0], x), sepsurf::eval(trees_[1], x), sepsurf::eval(trees_[2], x),
            sepsurf::eval(trees_[3], x)};
  }

 private:
  std::array<Ast, 4> trees_;
  Interval domain_;
  std::string var_;

  void require_interior(double x) const {
    if (!domain_.contains(x)) throw DomainError("point outside function domain");
  }
};

inline Jet3 eval_jet3(const Func1D& f, double x) { return f.jet(x); }

}  // namespace sepsurf
