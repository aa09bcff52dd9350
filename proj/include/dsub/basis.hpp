#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dsub {

using Vec = std::vector<double>;

/// Orthonormal basis of the orthogonal complement of a unit direction l.
///
/// The columns realise the adjoint of the fixed isometry from l-perp onto
/// R^(n-1): a point y in R^(n-1) lifts to sum_j y_j * column(j).
struct Basis {
  enum class Construction { perpendicular, householder, identity };

  Vec direction;
  std::vector<Vec> columns;
  Construction construction = Construction::perpendicular;

  std::size_t dim() const noexcept { return direction.size(); }

  /// Coordinates of p in the basis (the projection onto l-perp).
  Vec project(std::span<const double> p) const;
};

/// n = 2: the single column is R(l) = (-l2, l1).
/// n >= 3: Householder reflection taking e_n to l, applied to e_1..e_{n-1};
/// the reflection degenerates to the identity when l = e_n.
/// Throws Errc::invalid_argument when |l| differs from 1 by more than 1e-12.
Basis orthobasis(std::span<const double> l);

double dot(std::span<const double> a, std::span<const double> b);

}  // namespace dsub
