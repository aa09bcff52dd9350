#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "dsub/directed_set.hpp"
#include "dsub/expr.hpp"

namespace dsub::corpus {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi);

struct ExprShape {
  std::size_t arity = 2;
  int max_depth = 4;
  bool allow_quotient = true;
  bool allow_log_sqrt = false;
  /// When set, most abs/max/min nodes are shifted so that their kink passes
  /// through this point.
  std::optional<Vec> anchor;
};

/// Random DSL expression: affine leaves combined by linear combinations,
/// products, quotients with positive denominators, smooth primitives and
/// max/min/abs.
Expr random_expr(Rng& rng, const ExprShape& shape);

/// Random point; with probability 1/2 a "kink-friendly" point built from
/// coordinates in {0, +-1, +-0.5}.
Vec random_point(Rng& rng, std::size_t arity);

Vec random_unit(Rng& rng, std::size_t dim);

/// Polynomial of total degree <= degree with random coefficients.
Expr random_polynomial(Rng& rng, std::size_t arity, int degree);

struct AffinePiece {
  Vec gradient;
  double offset = 0.0;
};

/// max_i <g_i, x> + b_i together with its pieces.
struct MaxAffine {
  Expr f;
  std::vector<AffinePiece> pieces;
};
MaxAffine random_max_affine(Rng& rng, std::size_t arity, std::size_t pieces);

/// Like random_max_affine but every piece is active at `at`.
MaxAffine random_max_affine_through(Rng& rng, std::span<const double> at,
                                    std::size_t pieces);

/// Piecewise-affine function built from max/min/abs of affine maps.
Expr random_piecewise_affine(Rng& rng, std::size_t arity);

/// Sum of w*|x_i - c_i| and w*(x_i - c_i)^(2k) over all coordinates, so the
/// unique minimiser is `center`. `smooth` drops the absolute values.
Expr constructed_minimum(Rng& rng, std::span<const double> center, bool smooth);

/// Smooth expression in one variable (for chain-rule inner maps).
Expr random_smooth_1d(Rng& rng, std::size_t arity, int max_depth);

/// Random directed set on `grid` (or a leaf when grid is null), entries
/// uniform in [-scale, scale].
DirectedSet random_directed_set(Rng& rng, const GridPtr& grid,
                                double scale = 1.0);

/// Random point cloud in [-1.5, 1.5]^2 around a random centre; consumers
/// take the convex hull.
std::vector<Point2> random_polygon(Rng& rng, std::size_t vertices);

}  // namespace dsub::corpus
