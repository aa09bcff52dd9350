#include "dsub/subdiff.hpp"

#include "dsub/error.hpp"

namespace dsub {
namespace {

// Directed subdifferential at the origin of a positively homogeneous map
// given as an already-transformed expression g; `x` is the base point of the
// transform (the origin for restrictions).
DirectedSet subdiff_of_transform(const Expr& g, const GridPtr& grid, double eps_active) {
  const std::size_t n = g.arity();
  if (n == 1) {
    const double minus = -1.0, plus = 1.0;
    return DirectedSet::leaf({eval(g, std::span(&minus, 1)), eval(g, std::span(&plus, 1))});
  }
  std::vector<DirectedSet::Entry> entries;
  entries.reserve(grid->size());
  const Vec origin(n - 1, 0.0);
  for (std::size_t k = 0; k < grid->size(); ++k) {
    const auto l = grid->direction(k);
    const Expr h = restriction(g, orthobasis(l));
    // f_l(y) = f'(x; l + B y); its transform at y = 0 evaluates g's kinks at l.
    const Expr dh = dirderiv_transform(h, origin, eps_active);
    entries.push_back({subdiff_of_transform(dh, grid->subgrid(), eps_active), eval(g, l)});
  }
  return DirectedSet::node(grid, std::move(entries));
}

void check_grid(const Expr& e, std::span<const double> x, const GridPtr& grid) {
  if (x.size() != e.arity()) throw Error(Errc::arity_mismatch, "point length differs from function arity");
  if (e.arity() >= 2 && (!grid || grid->dim() != e.arity()))
    throw Error(Errc::dimension_mismatch, "sphere grid dimension differs from function arity");
}

}  // namespace

DirectedSet directed_subdiff(const Expr& e, std::span<const double> x, const GridPtr& grid,
                             double eps_active) {
  check_grid(e, x, grid);
  return subdiff_of_transform(dirderiv_transform(e, x, eps_active), grid, eps_active);
}

Vec gradient(const Expr& e, std::span<const double> x, double eps_active) {
  if (x.size() != e.arity()) throw Error(Errc::arity_mismatch, "point length differs from function arity");
  if (has_active_kink(e, x, eps_active))
    throw Error(Errc::kink, "function has an active kink at the point; gradient is ambiguous");
  const Expr g = dirderiv_transform(e, x, eps_active);
  Vec grad(e.arity());
  Vec unit(e.arity(), 0.0);
  for (std::size_t i = 0; i < grad.size(); ++i) {
    unit[i] = 1.0;
    grad[i] = eval(g, unit);
    unit[i] = 0.0;
  }
  return grad;
}

DirectedSet embed_gradient(const Expr& e, std::span<const double> x, const GridPtr& grid,
                           double eps_active) {
  check_grid(e, x, grid);
  return embed_point(gradient(e, x, eps_active), grid);
}

}  // namespace dsub
