#include "dsub/corpus.hpp"

#include <cmath>

#include "dsub/error.hpp"

namespace dsub::corpus {
namespace {

std::size_t pick(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

Expr var(Rng& rng, std::size_t arity) { return Expr::var(pick(rng, arity), arity); }

Expr affine_leaf(Rng& rng, std::size_t arity) {
  switch (pick(rng, 4)) {
    case 0:
    case 1: return var(rng, arity);
    case 2: return Expr::lin_comb(uniform(rng, -2, 2), var(rng, arity), uniform(rng, -2, 2), var(rng, arity));
    default:
      return Expr::lin_comb(uniform(rng, -2, 2), var(rng, arity), 1.0,
                            Expr::constant(uniform(rng, -1, 1), arity));
  }
}

Expr shifted(const Expr& e, double by, std::size_t arity) {
  return Expr::lin_comb(1.0, e, -by, Expr::constant(1.0, arity));
}

bool anchored(Rng& rng, const ExprShape& s) { return s.anchor && coin(rng, 0.7); }

std::vector<Expr> tied(Rng& rng, const ExprShape& s, std::vector<Expr> c) {
  if (!anchored(rng, s)) return c;
  const double v = eval(c[0], *s.anchor);
  for (std::size_t i = 1; i < c.size(); ++i) c[i] = shifted(c[i], eval(c[i], *s.anchor) - v, s.arity);
  return c;
}

Expr expr_at(Rng& rng, const ExprShape& s, int depth) {
  if (depth <= 0 || coin(rng, 0.2)) return affine_leaf(rng, s.arity);
  const std::size_t kinds = s.allow_log_sqrt ? 11 : 10;
  switch (pick(rng, kinds)) {
    case 0:
      return Expr::lin_comb(uniform(rng, -2, 2), expr_at(rng, s, depth - 1), uniform(rng, -2, 2),
                            expr_at(rng, s, depth - 1));
    case 1: return Expr::product(expr_at(rng, s, depth - 1), expr_at(rng, s, depth - 1));
    case 2:
      if (s.allow_quotient) {
        // Denominators bounded away from zero.
        const Expr one = Expr::constant(1.0, s.arity);
        const Expr den = coin(rng, 0.5) ? one + Expr::unary(Smooth::sqr, expr_at(rng, s, depth - 1))
                                        : Expr::constant(1.5, s.arity) +
                                              Expr::unary(Smooth::sin, expr_at(rng, s, depth - 1));
        return Expr::quotient(expr_at(rng, s, depth - 1), den);
      }
      [[fallthrough]];
    case 3: return Expr::unary(Smooth::sin, expr_at(rng, s, depth - 1));
    case 4: return Expr::unary(Smooth::cos, expr_at(rng, s, depth - 1));
    case 5: return Expr::unary(Smooth::exp, 0.5 * Expr::unary(Smooth::sin, expr_at(rng, s, depth - 1)));
    case 6: return Expr::unary(Smooth::sqr, expr_at(rng, s, depth - 1));
    case 7: {
      Expr a = expr_at(rng, s, depth - 1);
      if (anchored(rng, s)) a = shifted(a, eval(a, *s.anchor), s.arity);
      return Expr::abs(std::move(a));
    }
    case 8: {
      std::vector<Expr> c;
      for (std::size_t i = 0, k = 2 + pick(rng, 2); i < k; ++i) c.push_back(expr_at(rng, s, depth - 1));
      return Expr::max(tied(rng, s, std::move(c)));
    }
    case 9: {
      std::vector<Expr> c;
      for (std::size_t i = 0, k = 2 + pick(rng, 2); i < k; ++i) c.push_back(expr_at(rng, s, depth - 1));
      return Expr::min(tied(rng, s, std::move(c)));
    }
    default: {
      const Expr inner = Expr::constant(2.0, s.arity) + Expr::unary(Smooth::sin, expr_at(rng, s, depth - 1));
      return coin(rng, 0.5) ? Expr::unary(Smooth::log, inner) : Expr::unary(Smooth::sqrt, inner);
    }
  }
}

Expr pw_affine_at(Rng& rng, std::size_t arity, int depth) {
  if (depth <= 0 || coin(rng, 0.25)) {
    Expr e = Expr::constant(uniform(rng, -1, 1), arity);
    for (std::size_t i = 0; i < arity; ++i)
      e = Expr::lin_comb(1.0, e, uniform(rng, -2, 2), Expr::var(i, arity));
    return e;
  }
  switch (pick(rng, 4)) {
    case 0:
      return Expr::lin_comb(uniform(rng, -1.5, 1.5), pw_affine_at(rng, arity, depth - 1),
                            uniform(rng, -1.5, 1.5), pw_affine_at(rng, arity, depth - 1));
    case 1: return Expr::abs(pw_affine_at(rng, arity, depth - 1));
    case 2: return Expr::max({pw_affine_at(rng, arity, depth - 1), pw_affine_at(rng, arity, depth - 1)});
    default: return Expr::min({pw_affine_at(rng, arity, depth - 1), pw_affine_at(rng, arity, depth - 1)});
  }
}

Expr smooth_at(Rng& rng, std::size_t arity, int depth) {
  if (depth <= 0 || coin(rng, 0.25))
    return Expr::lin_comb(uniform(rng, -2, 2), var(rng, arity), 1.0,
                          Expr::constant(uniform(rng, -1, 1), arity));
  switch (pick(rng, 5)) {
    case 0:
      return Expr::lin_comb(uniform(rng, -2, 2), smooth_at(rng, arity, depth - 1), uniform(rng, -2, 2),
                            smooth_at(rng, arity, depth - 1));
    case 1: return Expr::product(smooth_at(rng, arity, depth - 1), smooth_at(rng, arity, depth - 1));
    case 2: return Expr::unary(Smooth::sin, smooth_at(rng, arity, depth - 1));
    case 3: return Expr::unary(Smooth::sqr, smooth_at(rng, arity, depth - 1));
    default: return Expr::unary(Smooth::exp, 0.5 * Expr::unary(Smooth::cos, smooth_at(rng, arity, depth - 1)));
  }
}

}  // namespace

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Expr random_expr(Rng& rng, const ExprShape& shape) {
  if (shape.arity == 0) throw Error(Errc::invalid_argument, "random_expr: arity must be positive");
  return expr_at(rng, shape, shape.max_depth);
}

Vec random_point(Rng& rng, std::size_t arity) {
  static constexpr double special[] = {0.0, 0.0, 1.0, -1.0, 0.5, -0.5};
  Vec x(arity);
  const bool kinky = coin(rng, 0.5);
  for (auto& c : x) c = kinky ? special[pick(rng, std::size(special))] : uniform(rng, -2, 2);
  return x;
}

Vec random_unit(Rng& rng, std::size_t dim) {
  std::normal_distribution<double> gauss;
  Vec l(dim);
  double s = 0.0;
  do {
    s = 0.0;
    for (auto& c : l) {
      c = gauss(rng);
      s += c * c;
    }
  } while (s < 1e-12);
  s = std::sqrt(s);
  for (auto& c : l) c /= s;
  return l;
}

Expr random_polynomial(Rng& rng, std::size_t arity, int degree) {
  Expr p = Expr::constant(uniform(rng, -1, 1), arity);
  if (arity == 1) {
    for (int a = 1; a <= degree; ++a)
      p = Expr::lin_comb(1.0, p, uniform(rng, -1, 1), Expr::pow(Expr::var(0, 1), a));
    return p;
  }
  for (int a = 0; a <= degree; ++a)
    for (int b = 0; a + b <= degree; ++b) {
      if (a + b == 0) continue;
      Expr mono = Expr::product(Expr::pow(Expr::var(0, arity), a), Expr::pow(Expr::var(1, arity), b));
      p = Expr::lin_comb(1.0, p, uniform(rng, -1, 1), mono);
    }
  return p;
}

namespace {
MaxAffine build_max_affine(std::vector<AffinePiece> pieces, std::size_t arity) {
  std::vector<Expr> terms;
  for (const auto& piece : pieces) {
    Expr e = Expr::constant(piece.offset, arity);
    for (std::size_t i = 0; i < arity; ++i)
      e = Expr::lin_comb(1.0, e, piece.gradient[i], Expr::var(i, arity));
    terms.push_back(e);
  }
  return {Expr::max(std::move(terms)), std::move(pieces)};
}
}  // namespace

MaxAffine random_max_affine(Rng& rng, std::size_t arity, std::size_t pieces) {
  std::vector<AffinePiece> ps(pieces);
  for (auto& p : ps) {
    p.gradient.resize(arity);
    for (auto& g : p.gradient) g = uniform(rng, -2, 2);
    p.offset = uniform(rng, -1, 1);
  }
  return build_max_affine(std::move(ps), arity);
}

MaxAffine random_max_affine_through(Rng& rng, std::span<const double> at, std::size_t pieces) {
  const double level = uniform(rng, -1, 1);
  std::vector<AffinePiece> ps(pieces);
  for (auto& p : ps) {
    p.gradient.resize(at.size());
    double gx = 0.0;
    for (std::size_t i = 0; i < at.size(); ++i) {
      p.gradient[i] = uniform(rng, -2, 2);
      gx += p.gradient[i] * at[i];
    }
    p.offset = level - gx;
  }
  return build_max_affine(std::move(ps), at.size());
}

Expr random_piecewise_affine(Rng& rng, std::size_t arity) {
  return pw_affine_at(rng, arity, 3);
}

Expr constructed_minimum(Rng& rng, std::span<const double> center, bool smooth) {
  const std::size_t n = center.size();
  Expr f = Expr::constant(uniform(rng, -1, 1), n);
  for (std::size_t i = 0; i < n; ++i) {
    const Expr shifted = Expr::var(i, n) - Expr::constant(center[i], n);
    if (!smooth) f = Expr::lin_comb(1.0, f, uniform(rng, 0.5, 2.0), Expr::abs(shifted));
    if (smooth || coin(rng, 0.5)) {
      const int k = 1 + static_cast<int>(pick(rng, 3));
      f = Expr::lin_comb(1.0, f, uniform(rng, 0.5, 2.0), Expr::pow(shifted, 2 * k));
    }
  }
  return f;
}

Expr random_smooth_1d(Rng& rng, std::size_t arity, int max_depth) {
  return smooth_at(rng, arity, max_depth);
}

DirectedSet random_directed_set(Rng& rng, const GridPtr& grid, double scale) {
  if (!grid) return DirectedSet::leaf({uniform(rng, -scale, scale), uniform(rng, -scale, scale)});
  std::vector<DirectedSet::Entry> entries;
  entries.reserve(grid->size());
  for (std::size_t k = 0; k < grid->size(); ++k)
    entries.push_back({random_directed_set(rng, grid->subgrid(), scale), uniform(rng, -scale, scale)});
  return DirectedSet::node(grid, std::move(entries));
}

std::vector<Point2> random_polygon(Rng& rng, std::size_t vertices) {
  const Point2 c{uniform(rng, -1, 1), uniform(rng, -1, 1)};
  std::vector<Point2> p(vertices);
  for (auto& v : p) v = {c[0] + uniform(rng, -1.5, 1.5), c[1] + uniform(rng, -1.5, 1.5)};
  return p;
}

}  // namespace dsub::corpus
