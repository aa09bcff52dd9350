#include "dsub/directed_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dsub/error.hpp"

namespace dsub {
namespace {

void require_compatible(const DirectedSet& a, const DirectedSet& b) {
  if (a.dim() != b.dim())
    throw Error(Errc::dimension_mismatch, "directed sets of different dimension");
  if (a.dim() >= 2 && !a.grid()->compatible(*b.grid()))
    throw Error(Errc::grid_mismatch, "directed sets on different sphere grids");
}

double active_band(double extreme, double eps_active) {
  return eps_active * std::max(1.0, std::abs(extreme));
}

enum class Lattice { sup, inf };

DirectedSet lattice(std::span<const DirectedSet* const> sets, Lattice op,
                    double eps_active) {
  const DirectedSet& first = *sets.front();
  if (first.is_leaf()) {
    DirectedInterval r = first.interval();
    for (const DirectedSet* s : sets.subspan(1)) {
      const auto& iv = s->interval();
      if (op == Lattice::sup) {
        r.a_neg = std::max(r.a_neg, iv.a_neg);
        r.a_pos = std::max(r.a_pos, iv.a_pos);
      } else {
        r.a_neg = std::min(r.a_neg, iv.a_neg);
        r.a_pos = std::min(r.a_pos, iv.a_pos);
      }
    }
    return DirectedSet::leaf(r);
  }

  const auto& grid = first.grid();
  std::vector<DirectedSet::Entry> out;
  out.reserve(grid->size());
  std::vector<const DirectedSet*> active;
  for (std::size_t k = 0; k < grid->size(); ++k) {
    double extreme = sets.front()->entries()[k].support;
    for (const DirectedSet* s : sets.subspan(1)) {
      const double v = s->entries()[k].support;
      extreme = op == Lattice::sup ? std::max(extreme, v) : std::min(extreme, v);
    }
    const double band = active_band(extreme, eps_active);
    active.clear();
    for (const DirectedSet* s : sets)
      if (std::abs(s->entries()[k].support - extreme) <= band)
        active.push_back(&s->entries()[k].lower);
    out.push_back({lattice(active, op, eps_active), extreme});
  }
  return DirectedSet::node(grid, std::move(out));
}

DirectedSet lattice(std::span<const DirectedSet> sets, Lattice op,
                    double eps_active) {
  if (sets.empty()) throw Error(Errc::invalid_argument, "sup/inf of an empty family");
  std::vector<const DirectedSet*> ptrs;
  ptrs.reserve(sets.size());
  for (const auto& s : sets) {
    require_compatible(sets.front(), s);
    ptrs.push_back(&s);
  }
  return lattice(ptrs, op, eps_active);
}

}  // namespace

DirectedInterval embed_interval(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi))
    throw Error(Errc::invalid_argument, "embed_interval: non-finite bound");
  if (lo > hi)
    throw Error(Errc::invalid_argument,
                "embed_interval: lo > hi (construct inverted intervals directly)");
  return {-lo, hi};
}

DirectedSet DirectedSet::leaf(DirectedInterval interval) {
  if (!std::isfinite(interval.a_neg) || !std::isfinite(interval.a_pos))
    throw Error(Errc::invalid_argument, "directed interval with non-finite value");
  DirectedSet s;
  s.dim_ = 1;
  s.interval_ = interval;
  return s;
}

DirectedSet DirectedSet::node(GridPtr grid, std::vector<Entry> entries) {
  if (!grid) throw Error(Errc::invalid_argument, "directed set node without grid");
  if (entries.size() != grid->size())
    throw Error(Errc::grid_mismatch, "entry count differs from grid size");
  const std::size_t lower_dim = grid->dim() - 1;
  for (const auto& e : entries) {
    if (!std::isfinite(e.support))
      throw Error(Errc::invalid_argument, "non-finite support value");
    if (e.lower.dim() != lower_dim)
      throw Error(Errc::dimension_mismatch, "lower component of wrong dimension");
    if (lower_dim >= 2 && !e.lower.grid()->compatible(*grid->subgrid()))
      throw Error(Errc::grid_mismatch, "lower component not on the canonical subgrid");
  }
  DirectedSet s;
  s.dim_ = grid->dim();
  s.grid_ = std::move(grid);
  s.entries_ = std::move(entries);
  return s;
}

const DirectedInterval& DirectedSet::interval() const {
  if (!is_leaf()) throw Error(Errc::dimension_mismatch, "interval() on a directed set of dim >= 2");
  return interval_;
}

DirectedSet directed_zero(std::size_t dim, const GridPtr& grid) {
  if (dim == 0) throw Error(Errc::invalid_argument, "directed_zero: dim must be >= 1");
  if (dim == 1) return DirectedSet::leaf({0.0, 0.0});
  if (!grid) throw Error(Errc::invalid_argument, "directed_zero: grid required for dim >= 2");
  if (grid->dim() != dim) throw Error(Errc::dimension_mismatch, "directed_zero: grid dimension differs");
  DirectedSet lower = directed_zero(dim - 1, grid->subgrid());
  std::vector<DirectedSet::Entry> entries(grid->size(), DirectedSet::Entry{lower, 0.0});
  return DirectedSet::node(grid, std::move(entries));
}

DirectedSet linear_combination(double alpha, const DirectedSet& a, double beta,
                               const DirectedSet& b) {
  require_compatible(a, b);
  if (a.is_leaf()) {
    const auto& x = a.interval();
    const auto& y = b.interval();
    return DirectedSet::leaf({alpha * x.a_neg + beta * y.a_neg,
                              alpha * x.a_pos + beta * y.a_pos});
  }
  const auto ea = a.entries();
  const auto eb = b.entries();
  std::vector<DirectedSet::Entry> out;
  out.reserve(ea.size());
  for (std::size_t k = 0; k < ea.size(); ++k)
    out.push_back({linear_combination(alpha, ea[k].lower, beta, eb[k].lower),
                   alpha * ea[k].support + beta * eb[k].support});
  return DirectedSet::node(a.grid(), std::move(out));
}

DirectedSet operator+(const DirectedSet& a, const DirectedSet& b) {
  return linear_combination(1.0, a, 1.0, b);
}
DirectedSet operator-(const DirectedSet& a, const DirectedSet& b) {
  return linear_combination(1.0, a, -1.0, b);
}
DirectedSet operator-(const DirectedSet& a) { return -1.0 * a; }

DirectedSet operator*(double lambda, const DirectedSet& a) {
  if (a.is_leaf())
    return DirectedSet::leaf({lambda * a.interval().a_neg, lambda * a.interval().a_pos});
  std::vector<DirectedSet::Entry> out;
  out.reserve(a.entries().size());
  for (const auto& e : a.entries()) out.push_back({lambda * e.lower, lambda * e.support});
  return DirectedSet::node(a.grid(), std::move(out));
}

double norm(const DirectedSet& a) {
  if (a.is_leaf()) return std::max(std::abs(a.interval().a_neg), std::abs(a.interval().a_pos));
  double m = 0.0;
  for (const auto& e : a.entries()) m = std::max({m, norm(e.lower), std::abs(e.support)});
  return m;
}

double distance(const DirectedSet& a, const DirectedSet& b) {
  require_compatible(a, b);
  if (a.is_leaf())
    return std::max(std::abs(a.interval().a_neg - b.interval().a_neg),
                    std::abs(a.interval().a_pos - b.interval().a_pos));
  double m = 0.0;
  const auto ea = a.entries();
  const auto eb = b.entries();
  for (std::size_t k = 0; k < ea.size(); ++k)
    m = std::max({m, distance(ea[k].lower, eb[k].lower),
                  std::abs(ea[k].support - eb[k].support)});
  return m;
}

DirectedSet sup(std::span<const DirectedSet> sets, double eps_active) {
  return lattice(sets, Lattice::sup, eps_active);
}

DirectedSet inf(std::span<const DirectedSet> sets, double eps_active) {
  return lattice(sets, Lattice::inf, eps_active);
}

bool leq(const DirectedSet& a, const DirectedSet& b, double eps) {
  require_compatible(a, b);
  if (eps < 0.0) throw Error(Errc::invalid_argument, "leq: eps must be non-negative");
  if (a.is_leaf()) {
    const auto& x = a.interval();
    const auto& y = b.interval();
    return x.a_neg <= y.a_neg + eps && x.a_pos <= y.a_pos + eps;
  }
  const auto ea = a.entries();
  const auto eb = b.entries();
  for (std::size_t k = 0; k < ea.size(); ++k) {
    if (ea[k].support > eb[k].support + eps) return false;
    if (std::abs(ea[k].support - eb[k].support) <= eps && !leq(ea[k].lower, eb[k].lower, eps))
      return false;
  }
  return true;
}

bool identical(const DirectedSet& a, const DirectedSet& b) {
  if (a.dim() != b.dim()) return false;
  if (a.is_leaf()) return a.interval() == b.interval();
  if (a.grid()->id() != b.grid()->id()) return false;
  const auto ea = a.entries();
  const auto eb = b.entries();
  for (std::size_t k = 0; k < ea.size(); ++k)
    if (ea[k].support != eb[k].support || !identical(ea[k].lower, eb[k].lower)) return false;
  return true;
}

std::array<double, 2> support_range(const DirectedSet& a) {
  if (a.is_leaf()) {
    const auto& iv = a.interval();
    return {std::min(iv.a_neg, iv.a_pos), std::max(iv.a_neg, iv.a_pos)};
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& e : a.entries()) {
    lo = std::min(lo, e.support);
    hi = std::max(hi, e.support);
  }
  return {lo, hi};
}

std::vector<Point2> convex_hull(std::span<const Point2> points) {
  std::vector<Point2> p(points.begin(), points.end());
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  if (p.size() < 3) return p;
  auto cross = [](const Point2& o, const Point2& a, const Point2& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  std::vector<Point2> h(2 * p.size());
  std::size_t k = 0;
  for (const auto& pt : p) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], pt) <= 0) --k;
    h[k++] = pt;
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  h.resize(k - 1);
  return h;
}

DirectedSet embed_polygon(std::span<const Point2> vertices, const GridPtr& grid) {
  if (vertices.empty()) throw Error(Errc::invalid_argument, "embed_polygon: no vertices");
  if (!grid || grid->dim() != 2)
    throw Error(Errc::dimension_mismatch, "embed_polygon needs a 2-D grid");
  for (const auto& v : vertices)
    if (!std::isfinite(v[0]) || !std::isfinite(v[1]))
      throw Error(Errc::invalid_argument, "embed_polygon: non-finite vertex");

  const auto hull = convex_hull(vertices);
  std::vector<DirectedSet::Entry> out;
  out.reserve(grid->size());
  for (std::size_t k = 0; k < grid->size(); ++k) {
    const auto l = grid->direction(k);
    const double rx = -l[1], ry = l[0];
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& v : hull) best = std::max(best, l[0] * v[0] + l[1] * v[1]);
    const double band = 1e-12 * std::max(1.0, std::abs(best));
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& v : hull) {
      if (best - (l[0] * v[0] + l[1] * v[1]) > band) continue;
      const double s = rx * v[0] + ry * v[1];
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    out.push_back({DirectedSet::leaf(embed_interval(lo, hi)), best});
  }
  return DirectedSet::node(grid, std::move(out));
}

DirectedSet embed_point(std::span<const double> p, const GridPtr& grid) {
  for (double c : p)
    if (!std::isfinite(c)) throw Error(Errc::invalid_argument, "embed_point: non-finite coordinate");
  if (p.size() == 1) return DirectedSet::leaf(embed_interval(p[0], p[0]));
  if (!grid || grid->dim() != p.size())
    throw Error(Errc::dimension_mismatch, "embed_point: grid dimension differs from point");
  std::vector<DirectedSet::Entry> out;
  out.reserve(grid->size());
  for (std::size_t k = 0; k < grid->size(); ++k) {
    const auto l = grid->direction(k);
    const Basis b = orthobasis(l);
    out.push_back({embed_point(b.project(p), grid->subgrid()), dot(l, p)});
  }
  return DirectedSet::node(grid, std::move(out));
}

SegmentList viz_segments(const DirectedSet& a) {
  if (a.dim() != 2) throw Error(Errc::dimension_mismatch, "viz_segments needs a 2-D directed set");
  SegmentList out;
  out.reserve(a.entries().size());
  const auto& grid = *a.grid();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto l = grid.direction(k);
    const auto& e = a.entries()[k];
    const auto& c = e.lower.interval();
    const double s0 = -c.a_neg;
    const double s1 = c.a_pos;
    const Point2 base{e.support * l[0], e.support * l[1]};
    const Point2 r{-l[1], l[0]};
    out.push_back({{base[0] + s0 * r[0], base[1] + s0 * r[1]},
                   {base[0] + s1 * r[0], base[1] + s1 * r[1]},
                   s0 > s1});
  }
  return out;
}

}  // namespace dsub
