#pragma once

// Reference implementations used to cross-check the exact engine. Nothing in
// here calls into the directed-set or transform code paths.

#include <cstddef>
#include <span>
#include <vector>

#include "dsub/directed_set.hpp"
#include "dsub/expr.hpp"

namespace dsub::oracle {

struct FdSchedule {
  double t0 = 1e-2;
  double factor = 0.5;
  int steps = 20;
  bool extrapolate = true;
};

/// One-sided difference quotients (f(x + t l) - f(x)) / t along the
/// geometric schedule, with one Richardson pass. Returns the estimate whose
/// neighbouring estimates agree best.
double dini_fd(const Expr& e, std::span<const double> x,
               std::span<const double> l, const FdSchedule& sched = {});

/// [min alpha_i^-, max alpha_i^+] computed on the interval endpoints.
DirectedInterval interval_sup_bruteforce(std::span<const DirectedInterval> xs);
/// [max alpha_i^-, min alpha_i^+].
DirectedInterval interval_inf_bruteforce(std::span<const DirectedInterval> xs);

struct SupportResult {
  double value = 0.0;
  std::vector<Point2> face;
};

/// Support value and attaining hull vertices (1 or 2; ties within 1e-12).
SupportResult polygon_support_oracle(std::span<const Point2> vertices,
                                     std::span<const double> l);

/// Symmetric Hausdorff distance between two finite unions of segments.
double hausdorff(std::span<const Segment> a, std::span<const Segment> b);

/// Closed boundary of the convex hull of `vertices` as a segment list.
std::vector<Segment> polygon_boundary(std::span<const Point2> vertices);

}  // namespace dsub::oracle
