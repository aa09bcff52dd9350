#include "dsub/basis.hpp"

#include <cmath>

#include "dsub/error.hpp"

namespace dsub {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Vec Basis::project(std::span<const double> p) const {
  Vec y(columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) y[j] = dot(columns[j], p);
  return y;
}

Basis orthobasis(std::span<const double> l) {
  const std::size_t n = l.size();
  if (n < 2) throw Error(Errc::invalid_argument, "orthobasis needs n >= 2");
  if (std::abs(std::sqrt(dot(l, l)) - 1.0) > 1e-12)
    throw Error(Errc::invalid_argument, "orthobasis: direction is not a unit vector");

  Basis b;
  b.direction.assign(l.begin(), l.end());
  if (n == 2) {
    b.construction = Basis::Construction::perpendicular;
    b.columns.push_back({-l[1], l[0]});
    return b;
  }

  // H = I - 2 v v^T / (v^T v), v = e_n - l, maps e_n to l.
  Vec v(l.begin(), l.end());
  for (auto& c : v) c = -c;
  v[n - 1] += 1.0;
  const double vv = dot(v, v);
  b.columns.reserve(n - 1);
  if (vv < 1e-24) {
    b.construction = Basis::Construction::identity;
    for (std::size_t j = 0; j + 1 < n; ++j) {
      Vec e(n, 0.0);
      e[j] = 1.0;
      b.columns.push_back(std::move(e));
    }
    return b;
  }
  b.construction = Basis::Construction::householder;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    Vec col(n, 0.0);
    const double s = 2.0 * v[j] / vv;
    for (std::size_t i = 0; i < n; ++i) col[i] = (i == j ? 1.0 : 0.0) - s * v[i];
    b.columns.push_back(std::move(col));
  }
  return b;
}

}  // namespace dsub
