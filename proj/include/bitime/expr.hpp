#pragma once

#include "bitime/types.hpp"

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace bitime::vfield {

/// Parsed scalar expression over the state vector. Variables are written
/// x1..xn. Supported: + - * / ^, unary minus, parentheses, and the calls
/// sin cos exp abs sqrt (one argument) and min max (two arguments).
///
/// Precedence, tightest first: ^ (right associative), unary minus, * /, + -.
/// So `-x1^2` is `-(x1^2)`.
///
/// Immutable after parsing; `eval` is safe to call concurrently.
class Expr {
 public:
  enum class Op { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Abs, Sqrt, Min, Max };

  struct Node {
    Op op;
    double value = 0.0;  // Const
    int index = -1;      // Var (0-based)
    int lhs = -1;
    int rhs = -1;
  };

  Expr() = default;

  /// Evaluates at `x`; throws DomainError on division by zero, sqrt of a
  /// negative number or any non-finite result.
  double eval(const Vector& x) const;

  /// Declared state dimension.
  std::size_t dimension() const { return dim_; }
  /// Original text, used for round-tripping scenarios.
  const std::string& text() const { return text_; }
  /// True iff the expression contains no variables.
  bool is_constant() const;

  const std::vector<Node>& nodes() const { return nodes_; }
  int root() const { return root_; }

  /// Builds `-(e)` without reparsing.
  static Expr negate(const Expr& e);
  static Expr constant(double v, std::size_t dim);

 private:
  friend Expr parse_expr(std::string_view text, std::size_t dim);
  double eval_node(int i, const Vector& x) const;

  std::vector<Node> nodes_;
  int root_ = -1;
  std::size_t dim_ = 0;
  std::string text_;
};

/// Parses `text` for a state of dimension `dim`. Throws ParseError with the
/// byte offset of the offending token (syntax errors, unknown identifiers,
/// variable index out of range).
Expr parse_expr(std::string_view text, std::size_t dim);

}  // namespace bitime::vfield
