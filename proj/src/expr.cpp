#include "abfrac/expr.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <utility>

#include "abfrac/specfun.hpp"

namespace abfrac::expr {

namespace {

constexpr int kMaxDepth = 200;

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  return out;
}

enum class Tok { kNumber, kIdent, kPlus, kMinus, kStar, kSlash, kCaret, kLParen, kRParen, kComma, kEnd };

struct Token {
  Tok kind = Tok::kEnd;
  std::size_t offset = 0;
  std::string_view text;
  double number = 0.0;
};

struct FuncInfo {
  std::string_view name;
  Func fn;
  std::size_t arity;
};

constexpr FuncInfo kFunctions[] = {
    {"sin", Func::kSin, 1},   {"cos", Func::kCos, 1}, {"exp", Func::kExp, 1},
    {"sqrt", Func::kSqrt, 1}, {"abs", Func::kAbs, 1}, {"pow", Func::kPow, 2},
    {"gamma", Func::kGamma, 1},
};

std::optional<FuncInfo> find_function(std::string_view name) {
  for (const auto& f : kFunctions) {
    if (f.name == name) return f;
  }
  return std::nullopt;
}

std::string_view function_name(Func fn) {
  for (const auto& f : kFunctions) {
    if (f.fn == fn) return f.name;
  }
  return "?";
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) { advance(); }

  NodePtr parse_all() {
    NodePtr root = parse_expr(0);
    if (tok_.kind != Tok::kEnd) fail({"operator", "end of input"}, "unexpected token");
    return root;
  }

 private:
  [[noreturn]] void fail(std::vector<std::string> expected, const std::string& what) const {
    fail_at(tok_.offset, std::move(expected), what);
  }

  [[noreturn]] void fail_at(std::size_t offset, std::vector<std::string> expected,
                            const std::string& what) const {
    // end-of-input errors point at the last byte so the offset stays inside the source
    if (!src_.empty() && offset >= src_.size()) offset = src_.size() - 1;
    std::string msg = what + " at byte " + std::to_string(offset);
    if (!expected.empty()) msg += " (expected " + join(expected) + ")";
    throw SyntaxError(offset, std::move(expected), msg);
  }

  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    tok_ = Token{};
    tok_.offset = pos_;
    if (pos_ >= src_.size()) {
      tok_.kind = Tok::kEnd;
      return;
    }
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      lex_number();
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        ++pos_;
      }
      tok_.kind = Tok::kIdent;
      tok_.text = src_.substr(start, pos_ - start);
      return;
    }
    ++pos_;
    switch (c) {
      case '+': tok_.kind = Tok::kPlus; break;
      case '-': tok_.kind = Tok::kMinus; break;
      case '*': tok_.kind = Tok::kStar; break;
      case '/': tok_.kind = Tok::kSlash; break;
      case '^': tok_.kind = Tok::kCaret; break;
      case '(': tok_.kind = Tok::kLParen; break;
      case ')': tok_.kind = Tok::kRParen; break;
      case ',': tok_.kind = Tok::kComma; break;
      default:
        fail_at(tok_.offset, {"number", "identifier", "operator", "'('", "')'", "','"},
                std::string("unexpected character '") + c + "'");
    }
  }

  void lex_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) fail_at(start, {"digit"}, "malformed number");
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) fail_at(pos_, {"exponent digits"}, "malformed number exponent");
    }
    const std::string text(src_.substr(start, pos_ - start));
    errno = 0;
    const double value = std::strtod(text.c_str(), nullptr);
    if (!std::isfinite(value)) fail_at(start, {}, "number out of range");
    tok_.kind = Tok::kNumber;
    tok_.text = src_.substr(start, pos_ - start);
    tok_.number = value;
  }

  void expect(Tok kind, const char* what) {
    if (tok_.kind != kind) fail({what}, "unexpected token");
    advance();
  }

  void enter(int depth) const {
    if (depth > kMaxDepth) fail({}, "expression nested too deeply");
  }

  NodePtr parse_expr(int depth) {
    enter(depth);
    NodePtr lhs = parse_term(depth + 1);
    while (tok_.kind == Tok::kPlus || tok_.kind == Tok::kMinus) {
      const Op op = tok_.kind == Tok::kPlus ? Op::kAdd : Op::kSub;
      advance();
      NodePtr rhs = parse_term(depth + 1);
      lhs = std::make_shared<const Node>(Node{Binary{op, std::move(lhs), std::move(rhs)}});
    }
    return lhs;
  }

  NodePtr parse_term(int depth) {
    enter(depth);
    NodePtr lhs = parse_factor(depth + 1);
    while (tok_.kind == Tok::kStar || tok_.kind == Tok::kSlash) {
      const Op op = tok_.kind == Tok::kStar ? Op::kMul : Op::kDiv;
      advance();
      NodePtr rhs = parse_factor(depth + 1);
      lhs = std::make_shared<const Node>(Node{Binary{op, std::move(lhs), std::move(rhs)}});
    }
    return lhs;
  }

  NodePtr parse_factor(int depth) {
    enter(depth);
    NodePtr base = parse_unary(depth + 1);
    if (tok_.kind == Tok::kCaret) {
      advance();
      NodePtr exponent = parse_factor(depth + 1);
      return std::make_shared<const Node>(Node{Binary{Op::kPow, std::move(base), std::move(exponent)}});
    }
    return base;
  }

  NodePtr parse_unary(int depth) {
    enter(depth);
    if (tok_.kind == Tok::kMinus) {
      advance();
      NodePtr operand = parse_primary(depth + 1);
      return std::make_shared<const Node>(Node{Negate{std::move(operand)}});
    }
    return parse_primary(depth + 1);
  }

  NodePtr parse_primary(int depth) {
    enter(depth);
    switch (tok_.kind) {
      case Tok::kNumber: {
        const double v = tok_.number;
        advance();
        return std::make_shared<const Node>(Node{Number{v}});
      }
      case Tok::kLParen: {
        advance();
        NodePtr inner = parse_expr(depth + 1);
        expect(Tok::kRParen, "')'");
        return inner;
      }
      case Tok::kIdent:
        return parse_identifier(depth);
      default:
        fail({"number", "identifier", "'('"}, "unexpected token");
    }
  }

  NodePtr parse_identifier(int depth) {
    const Token id = tok_;
    advance();
    if (auto fn = find_function(id.text)) {
      if (tok_.kind != Tok::kLParen) fail({"'('"}, "function name must be followed by '('");
      advance();
      std::vector<NodePtr> args;
      args.push_back(parse_expr(depth + 1));
      while (tok_.kind == Tok::kComma) {
        advance();
        args.push_back(parse_expr(depth + 1));
      }
      if (tok_.kind != Tok::kRParen) fail({"','", "')'"}, "unterminated argument list");
      if (args.size() != fn->arity) {
        fail_at(id.offset, {},
                "function '" + std::string(id.text) + "' expects " + std::to_string(fn->arity) +
                    " argument(s), got " + std::to_string(args.size()));
      }
      advance();
      return std::make_shared<const Node>(Node{Call{fn->fn, std::move(args)}});
    }
    if (id.text == "t") return std::make_shared<const Node>(Node{Variable{Var::kT}});
    if (id.text == "x") return std::make_shared<const Node>(Node{Variable{Var::kX}});
    if (id.text == "pi") return std::make_shared<const Node>(Node{Named{Constant::kPi}});
    if (id.text == "e") return std::make_shared<const Node>(Node{Named{Constant::kE}});
    throw UnknownIdentifier(id.offset, std::string(id.text));
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  Token tok_;
};

double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw EvalError(std::string("non-finite result in ") + what);
  return v;
}

double eval_node(const Node& node, double t, double x);

struct Evaluator {
  double t;
  double x;

  double operator()(const Number& n) const { return n.value; }
  double operator()(const Variable& v) const { return v.var == Var::kT ? t : x; }
  double operator()(const Named& c) const {
    return c.constant == Constant::kPi ? std::numbers::pi : std::numbers::e;
  }
  double operator()(const Negate& n) const { return -eval_node(*n.operand, t, x); }

  double operator()(const Binary& b) const {
    const double l = eval_node(*b.lhs, t, x);
    const double r = eval_node(*b.rhs, t, x);
    switch (b.op) {
      case Op::kAdd: return checked(l + r, "addition");
      case Op::kSub: return checked(l - r, "subtraction");
      case Op::kMul: return checked(l * r, "multiplication");
      case Op::kDiv:
        if (r == 0.0) throw EvalError("division by zero");
        return checked(l / r, "division");
      case Op::kPow: return power(l, r);
    }
    return 0.0;
  }

  double operator()(const Call& c) const {
    const double a = eval_node(*c.args[0], t, x);
    switch (c.fn) {
      case Func::kSin: return checked(std::sin(a), "sin");
      case Func::kCos: return checked(std::cos(a), "cos");
      case Func::kExp: return checked(std::exp(a), "exp");
      case Func::kSqrt:
        if (a < 0.0) throw EvalError("sqrt of a negative number");
        return std::sqrt(a);
      case Func::kAbs: return std::abs(a);
      case Func::kPow: return power(a, eval_node(*c.args[1], t, x));
      case Func::kGamma:
        if (a <= 0.0 && std::floor(a) == a) throw EvalError("gamma at a non-positive integer");
        return checked(specfun::gamma(a), "gamma");
    }
    return 0.0;
  }

  static double power(double base, double exponent) {
    if (base == 0.0 && exponent < 0.0) throw EvalError("zero raised to a negative power");
    return checked(std::pow(base, exponent), "power");
  }
};

double eval_node(const Node& node, double t, double x) {
  return std::visit(Evaluator{t, x}, node.v);
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

char op_char(Op op) {
  switch (op) {
    case Op::kAdd: return '+';
    case Op::kSub: return '-';
    case Op::kMul: return '*';
    case Op::kDiv: return '/';
    case Op::kPow: return '^';
  }
  return '?';
}

void print_node(const Node& node, std::string& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Number>) {
          out += format_number(n.value);
        } else if constexpr (std::is_same_v<T, Variable>) {
          out += n.var == Var::kT ? "t" : "x";
        } else if constexpr (std::is_same_v<T, Named>) {
          out += n.constant == Constant::kPi ? "pi" : "e";
        } else if constexpr (std::is_same_v<T, Negate>) {
          out += "-(";
          print_node(*n.operand, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, Binary>) {
          out += '(';
          print_node(*n.lhs, out);
          out += ' ';
          out += op_char(n.op);
          out += ' ';
          print_node(*n.rhs, out);
          out += ')';
        } else {
          out += function_name(n.fn);
          out += '(';
          for (std::size_t i = 0; i < n.args.size(); ++i) {
            if (i) out += ", ";
            print_node(*n.args[i], out);
          }
          out += ')';
        }
      },
      node.v);
}

bool node_uses_x(const Node& node) {
  return std::visit(
      [](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Variable>) {
          return n.var == Var::kX;
        } else if constexpr (std::is_same_v<T, Negate>) {
          return node_uses_x(*n.operand);
        } else if constexpr (std::is_same_v<T, Binary>) {
          return node_uses_x(*n.lhs) || node_uses_x(*n.rhs);
        } else if constexpr (std::is_same_v<T, Call>) {
          for (const auto& a : n.args) {
            if (node_uses_x(*a)) return true;
          }
          return false;
        } else {
          return false;
        }
      },
      node.v);
}

}  // namespace

SyntaxError::SyntaxError(std::size_t offset, std::vector<std::string> expected,
                         const std::string& what)
    : Error("syntax error: " + what), offset_(offset), expected_(std::move(expected)) {}

UnknownIdentifier::UnknownIdentifier(std::size_t offset, std::string name)
    : Error("unknown identifier '" + name + "' at byte " + std::to_string(offset)),
      offset_(offset),
      name_(std::move(name)) {}

Expr::Expr() : root_(std::make_shared<const Node>(Node{Number{0.0}})) {}

double Expr::eval(double t, double x) const {
  const double v = eval_node(*root_, t, x);
  if (std::isnan(v)) throw EvalError("expression evaluated to NaN");
  return v;
}

std::string Expr::to_string() const {
  std::string out;
  print_node(*root_, out);
  return out;
}

bool Expr::uses_x() const { return node_uses_x(*root_); }

Expr parse(std::string_view src) {
  if (src.empty()) throw SyntaxError(0, {"expression"}, "empty expression");
  if (src.size() > kMaxSourceBytes) {
    throw SyntaxError(kMaxSourceBytes - 1, {}, "expression longer than 64 KiB");
  }
  Parser parser(src);
  return Expr(parser.parse_all());
}

}  // namespace abfrac::expr
