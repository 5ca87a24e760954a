#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace phibvp {

enum class ExprOp : std::uint8_t {
  Number,
  VarT,
  VarU,
  VarV,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
  Neg,
  Sin,
  Cos,
  Exp,
  Log,
  Sqrt,
  Abs,
  Tanh,
};

struct ExprNode {
  ExprOp op;
  double value = 0.0;  ///< literal value for ExprOp::Number
  int lhs = -1;        ///< operand of unary nodes, left operand of binary nodes
  int rhs = -1;
};

/// Immutable scalar expression over t, u and v (v stands for u').
///
/// Grammar, loosest to tightest: `+ -`, `* /`, unary `-`, `^` (right associative).
/// Functions: sin cos exp log sqrt abs tanh. Constants: pi e. Copies share the node storage.
class Expr {
 public:
  /// Throws SyntaxError or UnknownIdentifier with a zero-based position.
  static Expr parse(std::string_view src);

  /// Throws EvalDomain for log of a non-positive number, sqrt of a negative one,
  /// division by zero or any other non-finite result.
  double eval(double t, double u, double v) const;

  /// Fully parenthesized form that parses back to a structurally equal tree.
  std::string to_string() const;

  /// Text this expression was parsed from.
  const std::string& source() const noexcept { return source_; }

  const std::vector<ExprNode>& nodes() const noexcept { return *nodes_; }
  int root() const noexcept { return root_; }

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  Expr(std::shared_ptr<const std::vector<ExprNode>> nodes, int root, std::string source);

  std::shared_ptr<const std::vector<ExprNode>> nodes_;
  int root_;
  std::string source_;
};

}  // namespace phibvp
