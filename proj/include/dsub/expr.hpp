#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dsub/basis.hpp"
#include "dsub/tolerances.hpp"

namespace dsub {

enum class NodeKind {
  var,
  constant,
  smooth_unary,
  affine,
  lin_comb,
  product,
  quotient,
  max,
  min,
  smooth_compose,
};

enum class Smooth { sin, cos, exp, log, sqr, sqrt, pow };

struct ExprNode;

/// Immutable handle to an expression DAG of a directed subdifferentiable
/// function R^arity -> R. Copies share structure.
class Expr {
 public:
  static Expr var(std::size_t index, std::size_t arity);
  static Expr constant(double value, std::size_t arity);
  static Expr unary(Smooth fn, Expr child);
  static Expr pow(Expr child, int exponent);
  static Expr lin_comb(double alpha, Expr left, double beta, Expr right);
  static Expr product(Expr left, Expr right);
  static Expr quotient(Expr num, Expr den);
  static Expr max(std::vector<Expr> children);
  static Expr min(std::vector<Expr> children);
  /// Sugar for max(e, -e).
  static Expr abs(Expr child);
  /// y = child(matrix * x + offset); matrix is row-major, child.arity() rows
  /// by `arity` columns.
  static Expr affine(std::vector<double> matrix, Vec offset, std::size_t arity,
                     Expr child);
  /// outer(inner_1(x), ..., inner_m(x)). Every inner map must be free of
  /// max/min nodes.
  static Expr compose(Expr outer, std::vector<Expr> inner);

  std::size_t arity() const noexcept;
  NodeKind kind() const noexcept;
  const ExprNode& node() const noexcept { return *node_; }

  /// Number of nodes reachable from the root (shared nodes counted once
  /// per path).
  std::size_t size() const;

 private:
  explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}
  static Expr make_node(ExprNode n);
  friend Expr extremum_node(NodeKind kind, std::vector<Expr> children);
  std::shared_ptr<const ExprNode> node_;
};

struct ExprNode {
  NodeKind kind = NodeKind::constant;
  std::size_t arity = 0;
  std::size_t index = 0;        // var
  double value = 0.0;           // constant
  Smooth fn = Smooth::sqr;      // smooth_unary
  int exponent = 0;             // smooth_unary, Smooth::pow
  double alpha = 0.0;           // lin_comb
  double beta = 0.0;            // lin_comb
  std::vector<Expr> children;   // operands; compose: outer first, then inner
  std::vector<double> matrix;   // affine, row-major
  Vec offset;                   // affine
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator*(const Expr& a, const Expr& b);
Expr operator*(double s, const Expr& a);
Expr operator/(const Expr& a, const Expr& b);

/// Parses the infix DSL. Variables x1..xn; the arity is the largest index
/// seen, or `arity` when given (then larger indices are rejected).
Expr parse(std::string_view text, std::size_t arity = 0);

/// f(x). Throws on division by zero and on log/sqrt domain violations.
double eval(const Expr& e, std::span<const double> x);

/// Expression in a fresh direction variable u (same arity) with
/// g(u) = f'(x; u). Base-point quantities are frozen as constants, and
/// max/min nodes keep only their active children at x.
Expr dirderiv_transform(const Expr& e, std::span<const double> x,
                        double eps_active = kEpsActive);

/// f'(x; l) via the transform.
double dirderiv(const Expr& e, std::span<const double> x,
                std::span<const double> l, double eps_active = kEpsActive);

/// y -> g(l + B y), with B the basis columns of l-perp.
Expr restriction(const Expr& g, const Basis& basis);

/// True when some max/min node has more than one active child at x.
bool has_active_kink(const Expr& e, std::span<const double> x,
                     double eps_active = kEpsActive);

/// Infix rendering; parse(to_string(e)) denotes the same function when e
/// has no affine/compose nodes.
std::string to_string(const Expr& e);

}  // namespace dsub
