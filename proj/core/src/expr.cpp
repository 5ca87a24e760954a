#include "phibvp/expr.hpp"

#include "phibvp/errors.hpp"

#include <fmt/format.h>

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <utility>

namespace phibvp {
namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  Tok kind;
  std::size_t pos;
  std::string_view text;
  double value = 0.0;
};

struct Function {
  std::string_view name;
  ExprOp op;
};

constexpr std::array kFunctions{
    Function{"sin", ExprOp::Sin},   Function{"cos", ExprOp::Cos},   Function{"exp", ExprOp::Exp},
    Function{"log", ExprOp::Log},   Function{"sqrt", ExprOp::Sqrt}, Function{"abs", ExprOp::Abs},
    Function{"tanh", ExprOp::Tanh},
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ == src_.size()) return {Tok::End, pos_, {}};
    const std::size_t start = pos_;
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number(start);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
      return {Tok::Ident, start, src_.substr(start, pos_ - start)};
    }
    ++pos_;
    switch (c) {
      case '+': return {Tok::Plus, start, src_.substr(start, 1)};
      case '-': return {Tok::Minus, start, src_.substr(start, 1)};
      case '*': return {Tok::Star, start, src_.substr(start, 1)};
      case '/': return {Tok::Slash, start, src_.substr(start, 1)};
      case '^': return {Tok::Caret, start, src_.substr(start, 1)};
      case '(': return {Tok::LParen, start, src_.substr(start, 1)};
      case ')': return {Tok::RParen, start, src_.substr(start, 1)};
      default: throw SyntaxError(start, "a number, identifier, operator or parenthesis");
    }
  }

 private:
  bool digit_at(std::size_t i) const {
    return i < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i]));
  }

  Token number(std::size_t start) {
    bool any_digit = false;
    while (digit_at(pos_)) ++pos_, any_digit = true;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (digit_at(pos_)) ++pos_, any_digit = true;
    }
    if (!any_digit) throw SyntaxError(start, "digits");
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (!digit_at(p)) throw SyntaxError(p, "exponent digits");
      while (digit_at(p)) ++p;
      pos_ = p;
    }
    const std::string_view text = src_.substr(start, pos_ - start);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value))
      throw SyntaxError(start, "a finite number");
    return {Tok::Number, start, text, value};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

// Binding powers; ^ is right associative.
constexpr int kAdditive = 10;
constexpr int kMultiplicative = 20;
constexpr int kUnary = 30;
constexpr int kPower = 40;

int infix_power(Tok t) {
  switch (t) {
    case Tok::Plus:
    case Tok::Minus: return kAdditive;
    case Tok::Star:
    case Tok::Slash: return kMultiplicative;
    case Tok::Caret: return kPower;
    default: return -1;
  }
}

ExprOp infix_op(Tok t) {
  switch (t) {
    case Tok::Plus: return ExprOp::Add;
    case Tok::Minus: return ExprOp::Sub;
    case Tok::Star: return ExprOp::Mul;
    case Tok::Slash: return ExprOp::Div;
    default: return ExprOp::Pow;
  }
}

class Parser {
 public:
  explicit Parser(std::string_view src) : lexer_(src) { advance(); }

  std::vector<ExprNode> take_nodes() { return std::move(nodes_); }

  int parse_all() {
    if (current_.kind == Tok::End) throw SyntaxError(current_.pos, "an expression");
    const int root = expression(0);
    if (current_.kind != Tok::End) throw SyntaxError(current_.pos, "an operator or end of input");
    return root;
  }

 private:
  void advance() { current_ = lexer_.next(); }

  void expect(Tok kind, std::string_view what) {
    if (current_.kind != kind) throw SyntaxError(current_.pos, std::string(what));
    advance();
  }

  int push(ExprNode node) {
    nodes_.push_back(node);
    return static_cast<int>(nodes_.size()) - 1;
  }

  int expression(int min_power) {
    int lhs = prefix();
    for (;;) {
      const int power = infix_power(current_.kind);
      if (power <= min_power) break;
      const ExprOp op = infix_op(current_.kind);
      advance();
      const int rhs = expression(op == ExprOp::Pow ? power - 1 : power);
      lhs = push({op, 0.0, lhs, rhs});
    }
    return lhs;
  }

  int prefix() {
    const Token tok = current_;
    switch (tok.kind) {
      case Tok::Number:
        advance();
        return push({ExprOp::Number, tok.value});
      case Tok::Minus: {
        advance();
        const int operand = expression(kUnary);
        return push({ExprOp::Neg, 0.0, operand});
      }
      case Tok::LParen: {
        advance();
        const int inner = expression(0);
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Ident:
        advance();
        return identifier(tok);
      default:
        throw SyntaxError(tok.pos, "an operand");
    }
  }

  int identifier(const Token& tok) {
    const std::string_view name = tok.text;
    if (name == "t") return push({ExprOp::VarT});
    if (name == "u") return push({ExprOp::VarU});
    if (name == "v") return push({ExprOp::VarV});
    if (name == "pi") return push({ExprOp::Number, std::numbers::pi});
    if (name == "e") return push({ExprOp::Number, std::numbers::e});
    for (const Function& fn : kFunctions) {
      if (fn.name != name) continue;
      expect(Tok::LParen, fmt::format("'(' after '{}'", name));
      const int arg = expression(0);
      expect(Tok::RParen, "')'");
      return push({fn.op, 0.0, arg});
    }
    throw UnknownIdentifier(tok.pos, std::string(name));
  }

  Lexer lexer_;
  Token current_{Tok::End, 0, {}};
  std::vector<ExprNode> nodes_;
};

double eval_node(const std::vector<ExprNode>& nodes, int index, double t, double u, double v) {
  const ExprNode& n = nodes[index];
  auto arg = [&](int i) { return eval_node(nodes, i, t, u, v); };
  switch (n.op) {
    case ExprOp::Number: return n.value;
    case ExprOp::VarT: return t;
    case ExprOp::VarU: return u;
    case ExprOp::VarV: return v;
    case ExprOp::Add: return arg(n.lhs) + arg(n.rhs);
    case ExprOp::Sub: return arg(n.lhs) - arg(n.rhs);
    case ExprOp::Mul: return arg(n.lhs) * arg(n.rhs);
    case ExprOp::Div: {
      const double num = arg(n.lhs);
      const double den = arg(n.rhs);
      if (den == 0.0) throw EvalDomain("division by zero");
      return num / den;
    }
    case ExprOp::Pow: {
      const double base = arg(n.lhs);
      const double expo = arg(n.rhs);
      const double r = std::pow(base, expo);
      if (std::isnan(r)) throw EvalDomain(fmt::format("{}^{} is undefined", base, expo));
      return r;
    }
    case ExprOp::Neg: return -arg(n.lhs);
    case ExprOp::Sin: return std::sin(arg(n.lhs));
    case ExprOp::Cos: return std::cos(arg(n.lhs));
    case ExprOp::Exp: return std::exp(arg(n.lhs));
    case ExprOp::Log: {
      const double x = arg(n.lhs);
      if (!(x > 0.0)) throw EvalDomain(fmt::format("log of non-positive value {}", x));
      return std::log(x);
    }
    case ExprOp::Sqrt: {
      const double x = arg(n.lhs);
      if (x < 0.0) throw EvalDomain(fmt::format("sqrt of negative value {}", x));
      return std::sqrt(x);
    }
    case ExprOp::Abs: return std::abs(arg(n.lhs));
    case ExprOp::Tanh: return std::tanh(arg(n.lhs));
  }
  return 0.0;
}

std::string_view function_name(ExprOp op) {
  for (const Function& fn : kFunctions)
    if (fn.op == op) return fn.name;
  return {};
}

void print_node(const std::vector<ExprNode>& nodes, int index, std::string& out) {
  const ExprNode& n = nodes[index];
  auto binary = [&](std::string_view sym) {
    out += '(';
    print_node(nodes, n.lhs, out);
    out += sym;
    print_node(nodes, n.rhs, out);
    out += ')';
  };
  switch (n.op) {
    case ExprOp::Number: out += fmt::format("{}", n.value); break;
    case ExprOp::VarT: out += 't'; break;
    case ExprOp::VarU: out += 'u'; break;
    case ExprOp::VarV: out += 'v'; break;
    case ExprOp::Add: binary(" + "); break;
    case ExprOp::Sub: binary(" - "); break;
    case ExprOp::Mul: binary(" * "); break;
    case ExprOp::Div: binary(" / "); break;
    case ExprOp::Pow: binary(" ^ "); break;
    case ExprOp::Neg:
      out += "(-";
      print_node(nodes, n.lhs, out);
      out += ')';
      break;
    default:
      out += function_name(n.op);
      out += '(';
      print_node(nodes, n.lhs, out);
      out += ')';
      break;
  }
}

bool same_tree(const std::vector<ExprNode>& a, int ia, const std::vector<ExprNode>& b, int ib) {
  if (ia < 0 || ib < 0) return ia == ib;
  const ExprNode& x = a[ia];
  const ExprNode& y = b[ib];
  if (x.op != y.op) return false;
  if (x.op == ExprOp::Number) return x.value == y.value;
  return same_tree(a, x.lhs, b, y.lhs) && same_tree(a, x.rhs, b, y.rhs);
}

}  // namespace

Expr::Expr(std::shared_ptr<const std::vector<ExprNode>> nodes, int root, std::string source)
    : nodes_(std::move(nodes)), root_(root), source_(std::move(source)) {}

Expr Expr::parse(std::string_view src) {
  Parser parser(src);
  const int root = parser.parse_all();
  return Expr(std::make_shared<const std::vector<ExprNode>>(parser.take_nodes()), root, std::string(src));
}

double Expr::eval(double t, double u, double v) const {
  const double r = eval_node(*nodes_, root_, t, u, v);
  if (!std::isfinite(r))
    throw EvalDomain(fmt::format("'{}' is not finite at t = {}, u = {}, v = {}", source_, t, u, v));
  return r;
}

std::string Expr::to_string() const {
  std::string out;
  print_node(*nodes_, root_, out);
  return out;
}

bool operator==(const Expr& a, const Expr& b) { return same_tree(*a.nodes_, a.root_, *b.nodes_, b.root_); }

}  // namespace phibvp
