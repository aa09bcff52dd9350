#include <bit>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "dsub/directed_set.hpp"
#include "dsub/error.hpp"

namespace dsub {
namespace {

// FNV-1a over the raw bytes of the content.
struct Fnv {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  void add(std::uint64_t w) {
    for (int i = 0; i < 8; ++i) {
      h ^= (w >> (8 * i)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  }
  void add(double d) { add(std::bit_cast<std::uint64_t>(d)); }
  void add(const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  }
};

// cos/sin of 2*pi*k/m with exact values on the axes.
std::array<double, 2> circle_point(std::size_t k, std::size_t m) {
  if ((4 * k) % m == 0) {
    switch ((4 * k) / m) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      case 3: return {0.0, -1.0};
      default: break;
    }
  }
  const double a = 2.0 * std::numbers::pi * static_cast<double>(k) /
                   static_cast<double>(m);
  return {std::cos(a), std::sin(a)};
}

std::mutex& cache_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

SphereGrid::SphereGrid(std::size_t dim, std::size_t resolution,
                       std::vector<double> coords, GridPtr subgrid)
    : dim_(dim),
      resolution_(resolution),
      count_(dim == 0 ? 0 : coords.size() / dim),
      coords_(std::move(coords)),
      subgrid_(std::move(subgrid)) {
  if (dim_ < 2) throw Error(Errc::invalid_argument, "sphere grids need dim >= 2");
  if (coords_.size() % dim_ != 0 || count_ == 0)
    throw Error(Errc::invalid_argument, "sphere grid: malformed direction list");
  if (dim_ > 2 && (!subgrid_ || subgrid_->dim() != dim_ - 1))
    throw Error(Errc::invalid_argument, "sphere grid: missing canonical subgrid");
  if (dim_ == 2 && subgrid_)
    throw Error(Errc::invalid_argument, "sphere grid: dim 2 has no subgrid");
  for (std::size_t k = 0; k < count_; ++k) {
    auto l = direction(k);
    double s = 0.0;
    for (double c : l) {
      if (!std::isfinite(c))
        throw Error(Errc::invalid_argument, "sphere grid: non-finite direction");
      s += c * c;
    }
    if (std::abs(std::sqrt(s) - 1.0) > 1e-12)
      throw Error(Errc::invalid_argument, "sphere grid: direction not of unit length");
  }
  Fnv f;
  f.add(static_cast<std::uint64_t>(dim_));
  f.add(static_cast<std::uint64_t>(count_));
  for (double c : coords_) f.add(c);
  if (subgrid_) f.add(subgrid_->id());
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(f.h));
  id_ = buf;
}

GridPtr SphereGrid::circle(std::size_t m) {
  if (m < 3) throw Error(Errc::invalid_argument, "circle grid needs at least 3 directions");
  static std::map<std::size_t, GridPtr> cache;
  std::lock_guard lock(cache_mutex());
  if (auto it = cache.find(m); it != cache.end()) return it->second;
  std::vector<double> coords;
  coords.reserve(2 * m);
  for (std::size_t k = 0; k < m; ++k) {
    auto [c, s] = circle_point(k, m);
    coords.push_back(c);
    coords.push_back(s);
  }
  auto g = std::make_shared<const SphereGrid>(2, m, std::move(coords), nullptr);
  cache.emplace(m, g);
  return g;
}

GridPtr SphereGrid::sphere(std::size_t polar, std::size_t azimuth,
                           std::size_t circle_m) {
  if (polar < 2 || azimuth < 3)
    throw Error(Errc::invalid_argument, "sphere lattice needs polar >= 2 and azimuth >= 3");
  GridPtr sub = circle(circle_m);
  static std::map<std::tuple<std::size_t, std::size_t, std::size_t>, GridPtr> cache;
  std::lock_guard lock(cache_mutex());
  const auto key = std::make_tuple(polar, azimuth, circle_m);
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  std::vector<double> coords{0.0, 0.0, 1.0};
  for (std::size_t i = 1; i < polar; ++i) {
    const double theta = std::numbers::pi * static_cast<double>(i) /
                         static_cast<double>(polar);
    const double st = std::sin(theta);
    const double ct = (2 * i == polar) ? 0.0 : std::cos(theta);
    for (std::size_t j = 0; j < azimuth; ++j) {
      auto [c, s] = circle_point(j, azimuth);
      double x = st * c, y = st * s, z = ct;
      const double r = std::sqrt(x * x + y * y + z * z);
      coords.insert(coords.end(), {x / r, y / r, z / r});
    }
  }
  coords.insert(coords.end(), {0.0, 0.0, -1.0});
  auto g = std::make_shared<const SphereGrid>(3, circle_m, std::move(coords), sub);
  cache.emplace(key, g);
  return g;
}

GridPtr SphereGrid::for_dimension(std::size_t dim, std::size_t resolution) {
  if (resolution < 8)
    throw Error(Errc::invalid_argument, "grid resolution must be at least 8");
  switch (dim) {
    case 1: return nullptr;
    case 2: return circle(resolution);
    case 3: return sphere(resolution / 4, resolution / 2, resolution);
    default:
      throw Error(Errc::dimension_mismatch,
                  "sphere grids are available for dimensions 2 and 3 only");
  }
}

GridPtr SphereGrid::from_directions(std::size_t dim, std::size_t resolution,
                                    std::vector<Vec> directions, GridPtr subgrid) {
  std::vector<double> coords;
  coords.reserve(directions.size() * dim);
  for (const auto& d : directions) {
    if (d.size() != dim)
      throw Error(Errc::dimension_mismatch, "sphere grid: direction of wrong length");
    coords.insert(coords.end(), d.begin(), d.end());
  }
  return std::make_shared<const SphereGrid>(dim, resolution, std::move(coords),
                                            std::move(subgrid));
}

}  // namespace dsub
