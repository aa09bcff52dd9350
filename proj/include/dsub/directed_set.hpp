#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "dsub/basis.hpp"
#include "dsub/tolerances.hpp"

namespace dsub {

/// One-dimensional directed set, stored as (a(-1), a(1)). The induced
/// interval is [-a_neg, a_pos]; it is "inverted" when -a_neg > a_pos.
struct DirectedInterval {
  double a_neg = 0.0;
  double a_pos = 0.0;

  double lower_end() const noexcept { return -a_neg; }
  double upper_end() const noexcept { return a_pos; }
  bool inverted() const noexcept { return -a_neg > a_pos; }

  friend bool operator==(const DirectedInterval&,
                         const DirectedInterval&) = default;
};

/// Embeds [lo, hi] as (-lo, hi). Rejects lo > hi; build inverted intervals
/// with the aggregate constructor instead.
DirectedInterval embed_interval(double lo, double hi);

class SphereGrid;
using GridPtr = std::shared_ptr<const SphereGrid>;

/// Deterministic ordered sample of the unit sphere S^(n-1), n >= 2.
///
/// A grid of dimension n owns the canonical grid for dimension n-1 (none for
/// n = 2, where the lower components are directed intervals). Two grids
/// interoperate iff their content ids are equal.
class SphereGrid {
 public:
  /// Angles 2*pi*k/m, k = 0..m-1. Axis directions are exact.
  static GridPtr circle(std::size_t m);

  /// Spherical-coordinate lattice on S^2: both poles plus (polar-1) rings of
  /// `azimuth` points each; lower components live on circle(circle_m).
  static GridPtr sphere(std::size_t polar, std::size_t azimuth,
                        std::size_t circle_m);

  /// Canonical grid for a single resolution parameter. dim 2: circle(r);
  /// dim 3: sphere(r/4, r/2, r).
  static GridPtr for_dimension(std::size_t dim, std::size_t resolution);

  /// Rebuilds a grid from explicit directions (used by deserialisation).
  static GridPtr from_directions(std::size_t dim, std::size_t resolution,
                                 std::vector<Vec> directions, GridPtr subgrid);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return count_; }
  std::size_t resolution() const noexcept { return resolution_; }
  const std::string& id() const noexcept { return id_; }
  const GridPtr& subgrid() const noexcept { return subgrid_; }

  std::span<const double> direction(std::size_t k) const {
    return {coords_.data() + k * dim_, dim_};
  }

  bool compatible(const SphereGrid& other) const noexcept {
    return this == &other || id_ == other.id_;
  }

  SphereGrid(std::size_t dim, std::size_t resolution, std::vector<double> coords,
             GridPtr subgrid);

 private:
  std::size_t dim_;
  std::size_t resolution_;
  std::size_t count_;
  std::vector<double> coords_;
  GridPtr subgrid_;
  std::string id_;
};

/// Element of the space of directed sets D(R^n).
///
/// dim 1: a directed interval. dim n >= 2: for every direction l of the grid
/// a pair (lower directed set of dim n-1, generalised support value a_n(l)).
/// Values are immutable once built.
class DirectedSet {
 public:
  struct Entry;

  DirectedSet() = default;
  static DirectedSet leaf(DirectedInterval interval);
  static DirectedSet node(GridPtr grid, std::vector<Entry> entries);

  std::size_t dim() const noexcept { return dim_; }
  bool is_leaf() const noexcept { return dim_ == 1; }
  const DirectedInterval& interval() const;
  const GridPtr& grid() const noexcept { return grid_; }
  std::span<const Entry> entries() const noexcept;

 private:
  std::size_t dim_ = 1;
  DirectedInterval interval_{};
  GridPtr grid_;
  std::vector<Entry> entries_;
};

struct DirectedSet::Entry {
  DirectedSet lower;
  double support = 0.0;
};

inline std::span<const DirectedSet::Entry> DirectedSet::entries()
    const noexcept {
  return entries_;
}

/// Neutral element of addition. `grid` is required iff dim >= 2.
DirectedSet directed_zero(std::size_t dim, const GridPtr& grid = nullptr);

/// alpha*A + beta*B, componentwise over the grid and recursively below.
DirectedSet linear_combination(double alpha, const DirectedSet& a, double beta,
                               const DirectedSet& b);

DirectedSet operator+(const DirectedSet& a, const DirectedSet& b);
DirectedSet operator-(const DirectedSet& a, const DirectedSet& b);
DirectedSet operator-(const DirectedSet& a);
DirectedSet operator*(double lambda, const DirectedSet& a);

/// Grid norm: max(|a_neg|, |a_pos|) in 1-D, otherwise the max over grid
/// directions of max(norm(lower), |support|).
double norm(const DirectedSet& a);

/// norm(a - b).
double distance(const DirectedSet& a, const DirectedSet& b);

/// Lattice operations. Lower components of the result are taken over the
/// active index sets I(l) (sup) resp. J(l) (inf) of the supports.
DirectedSet sup(std::span<const DirectedSet> sets,
                double eps_active = kEpsActive);
DirectedSet inf(std::span<const DirectedSet> sets,
                double eps_active = kEpsActive);

/// Partial order A <= B with slack eps.
bool leq(const DirectedSet& a, const DirectedSet& b, double eps = kEpsOrder);

/// Exact structural equality (same grid ids, bitwise-equal doubles).
bool identical(const DirectedSet& a, const DirectedSet& b);

/// Smallest and largest top-level support value (a_neg, a_pos in 1-D).
std::array<double, 2> support_range(const DirectedSet& a);

using Point2 = std::array<double, 2>;

/// Embedding J_2 of the convex hull of `vertices` on a 2-D grid.
DirectedSet embed_polygon(std::span<const Point2> vertices, const GridPtr& grid);

/// Embedding J_n of the singleton {p}. dim 1 needs no grid.
DirectedSet embed_point(std::span<const double> p, const GridPtr& grid);

/// Convex hull in counter-clockwise order without collinear points.
std::vector<Point2> convex_hull(std::span<const Point2> points);

struct Segment {
  Point2 p;
  Point2 q;
  bool inverted = false;
};
using SegmentList = std::vector<Segment>;

/// Per grid direction l with lower part (c_neg, c_pos): the segment from
/// support*l - c_neg*R(l) to support*l + c_pos*R(l). For embedded convex
/// sets these are the sampled supporting faces.
SegmentList viz_segments(const DirectedSet& a);

}  // namespace dsub
