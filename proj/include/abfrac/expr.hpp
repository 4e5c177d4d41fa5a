#pragma once

// Closed-form forcing expressions in the variables t and x.
//
// Grammar (recursive descent, '^' right-associative, no implicit products):
//   expr    := term (('+' | '-') term)*
//   term    := factor (('*' | '/') factor)*
//   factor  := unary ('^' factor)?
//   unary   := '-'? primary
//   primary := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'
//
// Identifiers: variables t, x; constants pi, e; functions sin, cos, exp,
// sqrt, abs, gamma (one argument) and pow (two arguments).

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "abfrac/errors.hpp"

namespace abfrac::expr {

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, std::vector<std::string> expected, const std::string& what);
  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

class UnknownIdentifier : public Error {
 public:
  UnknownIdentifier(std::size_t offset, std::string name);
  std::size_t offset() const { return offset_; }
  const std::string& name() const { return name_; }

 private:
  std::size_t offset_;
  std::string name_;
};

class EvalError : public Error {
 public:
  using Error::Error;
};

inline constexpr std::size_t kMaxSourceBytes = 64 * 1024;

enum class Op { kAdd, kSub, kMul, kDiv, kPow };
enum class Var { kT, kX };
enum class Constant { kPi, kE };
enum class Func { kSin, kCos, kExp, kSqrt, kAbs, kPow, kGamma };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Number {
  double value;
};
struct Variable {
  Var var;
};
struct Named {
  Constant constant;
};
struct Binary {
  Op op;
  NodePtr lhs;
  NodePtr rhs;
};
struct Negate {
  NodePtr operand;
};
struct Call {
  Func fn;
  std::vector<NodePtr> args;
};

struct Node {
  std::variant<Number, Variable, Named, Binary, Negate, Call> v;
};

/// Immutable parsed expression; cheap to copy and safe to share across threads.
class Expr {
 public:
  Expr();  // the literal 0

  double eval(double t, double x = 0.0) const;
  /// Fully parenthesized form that parses back to the same tree.
  std::string to_string() const;
  bool uses_x() const;
  const Node& root() const { return *root_; }

 private:
  friend Expr parse(std::string_view src);
  explicit Expr(NodePtr root) : root_(std::move(root)) {}
  NodePtr root_;
};

Expr parse(std::string_view src);

inline double eval(const Expr& e, double t, double x = 0.0) { return e.eval(t, x); }

}  // namespace abfrac::expr
