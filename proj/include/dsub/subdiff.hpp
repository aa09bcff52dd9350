#pragma once

#include <span>

#include "dsub/directed_set.hpp"
#include "dsub/expr.hpp"

namespace dsub {

/// Directed subdifferential of e at x. For arity 1 the grid may be null;
/// otherwise grid->dim() must equal the arity.
DirectedSet directed_subdiff(const Expr& e, std::span<const double> x,
                             const GridPtr& grid,
                             double eps_active = kEpsActive);

/// Gradient of a function that is smooth at x (exact, via the transform).
/// Throws Errc::kink when a max/min node has several active children.
Vec gradient(const Expr& e, std::span<const double> x,
             double eps_active = kEpsActive);

/// Embedded singleton {grad f(x)}.
DirectedSet embed_gradient(const Expr& e, std::span<const double> x,
                           const GridPtr& grid,
                           double eps_active = kEpsActive);

}  // namespace dsub
