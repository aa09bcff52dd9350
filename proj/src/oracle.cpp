#include "dsub/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dsub/error.hpp"

namespace dsub::oracle {
namespace {

// Jarvis march; deliberately a different algorithm from dsub::convex_hull.
std::vector<Point2> wrap_hull(std::span<const Point2> pts) {
  std::vector<Point2> p(pts.begin(), pts.end());
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  if (p.size() <= 2) return p;
  auto cross = [](const Point2& o, const Point2& a, const Point2& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  auto dist2 = [](const Point2& a, const Point2& b) {
    return (a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]);
  };
  std::vector<Point2> hull;
  std::size_t cur = 0;  // lexicographically smallest point is on the hull
  do {
    hull.push_back(p[cur]);
    std::size_t cand = (cur + 1) % p.size();
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i == cur) continue;
      const double c = cross(p[cur], p[cand], p[i]);
      // keep the most clockwise point; among collinear ones the farthest
      if (c < 0 || (c == 0 && dist2(p[cur], p[i]) > dist2(p[cur], p[cand]))) cand = i;
    }
    cur = cand;
  } while (cur != 0 && hull.size() <= p.size());
  return hull;
}

double point_segment_distance(const Point2& x, const Segment& s) {
  const double dx = s.q[0] - s.p[0], dy = s.q[1] - s.p[1];
  const double len2 = dx * dx + dy * dy;
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(((x[0] - s.p[0]) * dx + (x[1] - s.p[1]) * dy) / len2, 0.0, 1.0);
  const double ex = s.p[0] + t * dx - x[0], ey = s.p[1] + t * dy - x[1];
  return std::sqrt(ex * ex + ey * ey);
}

double distance_to_union(const Point2& x, std::span<const Segment> b) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& s : b) m = std::min(m, point_segment_distance(x, s));
  return m;
}

Point2 lerp(const Segment& s, double t) {
  return {s.p[0] + t * (s.q[0] - s.p[0]), s.p[1] + t * (s.q[1] - s.p[1])};
}

// sup over points of segment s of the distance to the union b.
double excess_of_segment(const Segment& s, std::span<const Segment> b) {
  constexpr int samples = 64;
  std::vector<double> d(samples + 1);
  for (int i = 0; i <= samples; ++i) d[i] = distance_to_union(lerp(s, double(i) / samples), b);
  double best = *std::max_element(d.begin(), d.end());
  if (s.p == s.q) return best;
  // The envelope is a minimum of convex functions, so each local maximum of
  // the samples brackets a crossing; refine it by golden-section search.
  for (int i = 1; i < samples; ++i) {
    if (d[i] < d[i - 1] || d[i] < d[i + 1]) continue;
    double lo = double(i - 1) / samples, hi = double(i + 1) / samples;
    constexpr double g = 0.6180339887498949;
    for (int it = 0; it < 60; ++it) {
      const double a = hi - g * (hi - lo), c = lo + g * (hi - lo);
      if (distance_to_union(lerp(s, a), b) < distance_to_union(lerp(s, c), b)) lo = a;
      else hi = c;
    }
    best = std::max(best, distance_to_union(lerp(s, 0.5 * (lo + hi)), b));
  }
  return best;
}

double excess(std::span<const Segment> a, std::span<const Segment> b) {
  double m = 0.0;
  for (const auto& s : a) m = std::max(m, excess_of_segment(s, b));
  return m;
}

}  // namespace

double dini_fd(const Expr& e, std::span<const double> x, std::span<const double> l,
               const FdSchedule& sched) {
  if (l.size() != x.size()) throw Error(Errc::arity_mismatch, "dini_fd: direction length differs from point");
  if (!(sched.t0 > 0.0) || !(sched.factor > 0.0 && sched.factor < 1.0) || sched.steps < 2 ||
      !(sched.t0 * std::pow(sched.factor, sched.steps) > 1e-14))
    throw Error(Errc::invalid_argument, "dini_fd: schedule would fall below the noise floor");
  const double fx = eval(e, x);
  std::vector<double> q;
  std::vector<double> probe(x.begin(), x.end());
  double t = sched.t0;
  for (int k = 0; k <= sched.steps; ++k, t *= sched.factor) {
    for (std::size_t i = 0; i < x.size(); ++i) probe[i] = x[i] + t * l[i];
    q.push_back((eval(e, probe) - fx) / t);
  }
  std::vector<double> est;
  if (sched.extrapolate) {
    for (std::size_t k = 0; k + 1 < q.size(); ++k)
      est.push_back((q[k + 1] - sched.factor * q[k]) / (1.0 - sched.factor));
  } else {
    est = q;
  }
  std::size_t best = est.size() - 1;
  double best_gap = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < est.size(); ++k) {
    const double gap = std::abs(est[k] - est[k - 1]);
    if (gap <= best_gap) {
      best_gap = gap;
      best = k;
    }
  }
  return est[best];
}

DirectedInterval interval_sup_bruteforce(std::span<const DirectedInterval> xs) {
  // endpoints alpha^- = -a(-1), alpha^+ = a(1)
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& iv : xs) {
    lo = std::min(lo, -iv.a_neg);
    hi = std::max(hi, iv.a_pos);
  }
  return {-lo, hi};
}

DirectedInterval interval_inf_bruteforce(std::span<const DirectedInterval> xs) {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& iv : xs) {
    lo = std::max(lo, -iv.a_neg);
    hi = std::min(hi, iv.a_pos);
  }
  return {-lo, hi};
}

SupportResult polygon_support_oracle(std::span<const Point2> vertices, std::span<const double> l) {
  const auto hull = wrap_hull(vertices);
  SupportResult r;
  r.value = -std::numeric_limits<double>::infinity();
  for (const auto& v : hull) r.value = std::max(r.value, l[0] * v[0] + l[1] * v[1]);
  for (const auto& v : hull)
    if (r.value - (l[0] * v[0] + l[1] * v[1]) <= 1e-12 * std::max(1.0, std::abs(r.value)))
      r.face.push_back(v);
  return r;
}

std::vector<Segment> polygon_boundary(std::span<const Point2> vertices) {
  const auto hull = wrap_hull(vertices);
  std::vector<Segment> out;
  if (hull.size() == 1) return {{hull[0], hull[0], false}};
  if (hull.size() == 2) return {{hull[0], hull[1], false}};
  for (std::size_t i = 0; i < hull.size(); ++i) out.push_back({hull[i], hull[(i + 1) % hull.size()], false});
  return out;
}

double hausdorff(std::span<const Segment> a, std::span<const Segment> b) {
  return std::max(excess(a, b), excess(b, a));
}

}  // namespace dsub::oracle
