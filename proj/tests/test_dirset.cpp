#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dsub/corpus.hpp"
#include "dsub/directed_set.hpp"
#include "dsub/error.hpp"
#include "dsub/oracle.hpp"

using namespace dsub;

namespace {

DirectedSet leaf(double a_neg, double a_pos) { return DirectedSet::leaf({a_neg, a_pos}); }

void check_leaf(const DirectedSet& d, double a_neg, double a_pos, double tol = 0.0) {
  REQUIRE(d.is_leaf());
  CHECK(std::abs(d.interval().a_neg - a_neg) <= tol);
  CHECK(std::abs(d.interval().a_pos - a_pos) <= tol);
}

// Largest entrywise difference over the whole recursion.
double max_entry_diff(const DirectedSet& a, const DirectedSet& b) {
  if (a.is_leaf())
    return std::max(std::abs(a.interval().a_neg - b.interval().a_neg),
                    std::abs(a.interval().a_pos - b.interval().a_pos));
  double m = 0.0;
  for (std::size_t k = 0; k < a.entries().size(); ++k) {
    m = std::max(m, std::abs(a.entries()[k].support - b.entries()[k].support));
    m = std::max(m, max_entry_diff(a.entries()[k].lower, b.entries()[k].lower));
  }
  return m;
}

double distance_to(const Point2& p, const std::vector<Segment>& segs) {
  double best = INFINITY;
  for (const auto& s : segs) {
    const double dx = s.q[0] - s.p[0], dy = s.q[1] - s.p[1];
    const double len2 = dx * dx + dy * dy;
    double t = len2 > 0 ? ((p[0] - s.p[0]) * dx + (p[1] - s.p[1]) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    best = std::min(best, std::hypot(s.p[0] + t * dx - p[0], s.p[1] + t * dy - p[1]));
  }
  return best;
}

const std::vector<Point2> kSquare{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};

}  // namespace

TEST_SUITE("directed intervals") {
  TEST_CASE("embed_interval") {
    CHECK(embed_interval(-1, 1) == DirectedInterval{1, 1});
    CHECK(embed_interval(0, 0) == DirectedInterval{0, 0});
    CHECK(embed_interval(2, 5) == DirectedInterval{-2, 5});
    CHECK_THROWS_AS(embed_interval(1, 0), Error);
    CHECK_THROWS_AS(embed_interval(0, INFINITY), Error);
  }

  TEST_CASE("inverted intervals are plain values") {
    const DirectedInterval iv{0, -1};
    CHECK(iv.inverted());
    CHECK(iv.lower_end() == 0.0);
    CHECK(iv.upper_end() == -1.0);
    CHECK_FALSE(embed_interval(-1, 1).inverted());
    CHECK_NOTHROW(DirectedSet::leaf(iv));
    CHECK_THROWS_AS(DirectedSet::leaf({NAN, 0}), Error);
  }

  TEST_CASE("linear combination") {
    check_leaf(linear_combination(1, leaf(1, 1), 1, leaf(-1, 1)), 0, 2);
    check_leaf(-1.0 * DirectedSet::leaf(embed_interval(-1, 1)), -1, -1);
    const auto a = leaf(0.3, -2);
    CHECK(identical(a + directed_zero(1), a));
    check_leaf(a - a, 0, 0);
  }

  TEST_CASE("norm") {
    CHECK(norm(leaf(3, -2)) == 3.0);
    CHECK(norm(directed_zero(1)) == 0.0);
  }

  TEST_CASE("sup and inf") {
    const std::vector<DirectedSet> s1{leaf(-1, 1), leaf(1, -1)};
    check_leaf(sup(s1), 1, 1);
    const std::vector<DirectedSet> s2{DirectedSet::leaf(embed_interval(0, 2)),
                                      DirectedSet::leaf(embed_interval(1, 3))};
    check_leaf(sup(s2), 0, 3);

    const std::vector<DirectedSet> i1{DirectedSet::leaf(embed_interval(-1, 1)),
                                      DirectedSet::leaf(embed_interval(0, 2))};
    check_leaf(inf(i1), 0, 1);
    const std::vector<DirectedSet> i2{leaf(0, 0), DirectedSet::leaf(embed_interval(1, 1))};
    const auto r = inf(i2);
    check_leaf(r, -1, 0);
    CHECK(r.interval().inverted());
    const std::vector<DirectedSet> one{leaf(0.25, -4)};
    CHECK(identical(inf(one), one.front()));
    CHECK_THROWS_AS(sup(std::span<const DirectedSet>{}), Error);
  }

  TEST_CASE("leq") {
    CHECK(leq(DirectedSet::leaf(embed_interval(1, 1)), leaf(3, 3), 1e-9));
    CHECK(leq(directed_zero(1), DirectedSet::leaf(embed_interval(0, 2)), 1e-9));
    CHECK_FALSE(leq(leaf(3, 3), DirectedSet::leaf(embed_interval(1, 1)), 1e-9));
  }

  TEST_CASE("1-D sup and inf agree with the brute-force oracle") {
    corpus::Rng rng(11);
    for (int trial = 0; trial < 300; ++trial) {
      const std::size_t m = 1 + rng() % 6;
      std::vector<DirectedInterval> ivs;
      std::vector<DirectedSet> sets;
      for (std::size_t i = 0; i < m; ++i) {
        ivs.push_back({corpus::uniform(rng, -3, 3), corpus::uniform(rng, -3, 3)});
        sets.push_back(DirectedSet::leaf(ivs.back()));
      }
      CHECK(sup(sets).interval() == oracle::interval_sup_bruteforce(ivs));
      CHECK(inf(sets).interval() == oracle::interval_inf_bruteforce(ivs));
    }
  }

  TEST_CASE("1-D: leq(A, B) iff B is the supremum of A and B") {
    corpus::Rng rng(12);
    int both = 0;
    for (int trial = 0; trial < 500; ++trial) {
      // Coarse values so that comparable pairs are common.
      auto draw = [&] { return std::round(corpus::uniform(rng, -2, 2) * 2) / 2; };
      const auto a = leaf(draw(), draw());
      const auto b = leaf(draw(), draw());
      const DirectedInterval s = oracle::interval_sup_bruteforce(
          std::vector<DirectedInterval>{a.interval(), b.interval()});
      const bool b_is_sup = s == b.interval();
      CHECK(leq(a, b, 0.0) == b_is_sup);
      both += b_is_sup;
    }
    CHECK(both > 50);
  }
}

TEST_SUITE("sphere grids") {
  TEST_CASE("circle grid") {
    const auto g = SphereGrid::circle(4);
    REQUIRE(g->size() == 4);
    CHECK(g->dim() == 2);
    CHECK(g->direction(0)[0] == 1.0);
    CHECK(g->direction(1)[1] == 1.0);
    CHECK(g->direction(1)[0] == 0.0);
    CHECK(g->direction(2)[0] == -1.0);
    CHECK(g->direction(3)[1] == -1.0);

    const auto g360 = SphereGrid::circle(360);
    for (std::size_t k = 0; k < 360; ++k) {
      const auto d = g360->direction(k);
      CHECK(std::abs(std::hypot(d[0], d[1]) - 1.0) <= 1e-12);
      const double angle = std::atan2(d[1], d[0]);
      const double expected = 2 * std::numbers::pi * k / 360.0;
      CHECK(std::abs(std::remainder(angle - expected, 2 * std::numbers::pi)) <= 1e-12);
    }
    CHECK(SphereGrid::circle(360) == g360);
  }

  TEST_CASE("ids separate grids") {
    CHECK(SphereGrid::circle(8)->id() != SphereGrid::circle(12)->id());
    CHECK(SphereGrid::circle(8)->compatible(*SphereGrid::circle(8)));
    const auto s = SphereGrid::for_dimension(3, 16);
    CHECK(s->id() != SphereGrid::for_dimension(3, 32)->id());
    REQUIRE(s->subgrid() != nullptr);
    CHECK(s->subgrid()->dim() == 2);
  }

  TEST_CASE("3-D lattice") {
    const auto s = SphereGrid::for_dimension(3, 32);
    CHECK(s->dim() == 3);
    CHECK(s->size() == 2 + 7 * 16);
    for (std::size_t k = 0; k < s->size(); ++k) {
      const auto d = s->direction(k);
      CHECK(std::abs(std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]) - 1.0) <= 1e-12);
    }
  }

  TEST_CASE("rejects bad parameters") {
    CHECK_THROWS_AS(SphereGrid::for_dimension(2, 4), Error);
    CHECK_THROWS_AS(SphereGrid::for_dimension(4, 32), Error);
    CHECK_THROWS_AS(SphereGrid::from_directions(2, 0, {{1.0, 0.5}}, nullptr), Error);
    CHECK(SphereGrid::for_dimension(1, 32) == nullptr);
  }
}

TEST_SUITE("directed sets") {
  TEST_CASE("directed zero") {
    const auto g = SphereGrid::circle(4);
    const auto z = directed_zero(2, g);
    REQUIRE(z.entries().size() == 4);
    for (const auto& e : z.entries()) {
      CHECK(e.support == 0.0);
      check_leaf(e.lower, 0, 0);
    }
    CHECK(norm(z) == 0.0);
    CHECK_THROWS_AS(directed_zero(2, nullptr), Error);
    CHECK(norm(directed_zero(3, SphereGrid::for_dimension(3, 16))) == 0.0);
  }

  TEST_CASE("node validation") {
    const auto g = SphereGrid::circle(4);
    std::vector<DirectedSet::Entry> short_entries(3, {directed_zero(1), 0.0});
    CHECK_THROWS_AS(DirectedSet::node(g, short_entries), Error);
    std::vector<DirectedSet::Entry> bad(4, {directed_zero(1), 0.0});
    bad[2].support = NAN;
    CHECK_THROWS_AS(DirectedSet::node(g, bad), Error);
  }

  TEST_CASE("grid and dimension mismatches are errors") {
    const auto a = directed_zero(2, SphereGrid::circle(8));
    const auto b = directed_zero(2, SphereGrid::circle(12));
    CHECK_THROWS_AS(a + b, Error);
    CHECK_THROWS_AS(a + directed_zero(1), Error);
    try {
      (void)leq(a, b);
      FAIL("expected grid mismatch");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::grid_mismatch);
    }
  }

  TEST_CASE("embed_polygon on the square") {
    const auto g = SphereGrid::circle(4);
    const auto sq = embed_polygon(kSquare, g);
    // l = (1,0): support 1, face {1} x [-1,1], R(l) = (0,1).
    CHECK(sq.entries()[0].support == doctest::Approx(1.0).epsilon(1e-15));
    check_leaf(sq.entries()[0].lower, 1, 1, 1e-15);
    CHECK(norm(sq) == doctest::Approx(1.0));
  }

  TEST_CASE("embed_polygon of a singleton and a segment") {
    const auto g = SphereGrid::circle(8);
    const std::vector<Point2> p{{3, 4}};
    const auto d = embed_polygon(p, g);
    for (std::size_t k = 0; k < g->size(); ++k) {
      const auto l = g->direction(k);
      CHECK(d.entries()[k].support == doctest::Approx(3 * l[0] + 4 * l[1]));
      const double r = -l[1] * 3 + l[0] * 4;
      check_leaf(d.entries()[k].lower, -r, r, 1e-12);
    }
    const std::vector<Point2> seg{{1, 0}, {0, 1}};
    const auto s = embed_polygon(seg, g);
    // Direction index 1 is (1,1)/sqrt 2; the whole segment is the face.
    CHECK(s.entries()[1].support == doctest::Approx(1 / std::sqrt(2.0)));
    const double r0 = -std::sqrt(0.5) * 1, r1 = std::sqrt(0.5) * 1;
    check_leaf(s.entries()[1].lower, -std::min(r0, r1), std::max(r0, r1), 1e-12);
    CHECK_THROWS_AS(embed_polygon(std::vector<Point2>{}, g), Error);
    CHECK_THROWS_AS(embed_polygon(std::vector<Point2>{{NAN, 0}}, g), Error);
  }

  TEST_CASE("embed_polygon agrees with the support oracle") {
    corpus::Rng rng(5);
    const auto g = SphereGrid::circle(90);
    for (int trial = 0; trial < 60; ++trial) {
      const auto pts = corpus::random_polygon(rng, 2 + rng() % 7);
      const auto d = embed_polygon(pts, g);
      for (std::size_t k = 0; k < g->size(); ++k) {
        const auto l = g->direction(k);
        const auto ref = oracle::polygon_support_oracle(pts, l);
        CHECK(std::abs(d.entries()[k].support - ref.value) <= 1e-12);
        double lo = INFINITY, hi = -INFINITY;
        for (const auto& v : ref.face) {
          const double r = -l[1] * v[0] + l[0] * v[1];
          lo = std::min(lo, r);
          hi = std::max(hi, r);
        }
        check_leaf(d.entries()[k].lower, -lo, hi, 1e-12);
      }
    }
  }

  TEST_CASE("embed_point in three dimensions") {
    const auto g = SphereGrid::for_dimension(3, 16);
    const Vec p{1.0, -2.0, 0.5};
    const auto d = embed_point(p, g);
    for (std::size_t k = 0; k < g->size(); ++k) {
      const auto l = g->direction(k);
      CHECK(d.entries()[k].support == doctest::Approx(l[0] * p[0] + l[1] * p[1] + l[2] * p[2]));
    }
    CHECK(norm(d) <= std::sqrt(1 + 4 + 0.25) + 1e-12);
  }

  TEST_CASE("sup of embedded points is the embedded hull") {
    const auto g = SphereGrid::circle(36);
    const std::vector<Point2> e1{{1, 0}}, e2{{0, 1}}, both{{1, 0}, {0, 1}};
    const std::vector<DirectedSet> family{embed_polygon(e1, g), embed_polygon(e2, g)};
    CHECK(max_entry_diff(sup(family), embed_polygon(both, g)) <= 1e-12);
  }

  TEST_CASE("norm of the subdifferential-shaped set of |x1| is one") {
    // Support |l1|; lower at l = (0, +-1) is [-1, 1].
    const auto g = SphereGrid::circle(16);
    const std::vector<Point2> seg{{-1, 0}, {1, 0}};
    CHECK(norm(embed_polygon(seg, g)) == doctest::Approx(1.0));
  }
}

TEST_SUITE("space axioms") {
  TEST_CASE("norm, vector space and order properties on random sets") {
    corpus::Rng rng(2024);
    const auto g = SphereGrid::circle(90);
    for (int trial = 0; trial < 60; ++trial) {
      const GridPtr grid = trial % 3 == 0 ? nullptr : g;
      const auto a = corpus::random_directed_set(rng, grid, 2.0);
      const auto b = corpus::random_directed_set(rng, grid, 2.0);
      const auto c = corpus::random_directed_set(rng, grid, 2.0);
      const double lambda = corpus::uniform(rng, -3, 3);
      const std::size_t dim = grid ? 2 : 1;

      CHECK(norm(a) > 0.0);
      CHECK(norm(lambda * a) == doctest::Approx(std::abs(lambda) * norm(a)).epsilon(1e-15));
      CHECK(norm(a + b) <= norm(a) + norm(b) + 1e-12);
      CHECK(max_entry_diff(a + b, b + a) <= 1e-12);
      CHECK(max_entry_diff((a + b) + c, a + (b + c)) <= 1e-12);
      CHECK(max_entry_diff(a - a, directed_zero(dim, grid)) <= 1e-12);
      CHECK(identical(1.0 * a, a));
      CHECK(identical(a + directed_zero(dim, grid), a));

      const std::vector<DirectedSet> pair{a, b};
      const auto s = sup(pair);
      const auto i = inf(pair);
      CHECK(leq(a, s, 1e-9));
      CHECK(leq(b, s, 1e-9));
      CHECK(leq(i, a, 1e-9));
      CHECK(leq(i, b, 1e-9));
      CHECK(leq(a, a, 0.0));
    }
  }

  TEST_CASE("embedding is monotone under inclusion") {
    corpus::Rng rng(77);
    const auto g = SphereGrid::circle(90);
    for (int trial = 0; trial < 40; ++trial) {
      auto p = corpus::random_polygon(rng, 3 + rng() % 4);
      auto q = p;
      q.push_back({corpus::uniform(rng, 2, 3), corpus::uniform(rng, -3, 3)});
      CHECK(leq(embed_polygon(p, g), embed_polygon(q, g), 1e-9));
    }
  }
}

TEST_SUITE("visualisation") {
  TEST_CASE("square on four directions") {
    const auto segs = viz_segments(embed_polygon(kSquare, SphereGrid::circle(4)));
    REQUIRE(segs.size() == 4);
    for (const auto& s : segs) {
      CHECK_FALSE(s.inverted);
      CHECK(std::hypot(s.q[0] - s.p[0], s.q[1] - s.p[1]) == doctest::Approx(2.0));
    }
    const auto boundary = oracle::polygon_boundary(kSquare);
    CHECK(oracle::hausdorff(segs, boundary) <= 1e-12);
  }

  TEST_CASE("grid-aligned rectangles meet the resolution bound") {
    corpus::Rng rng(8);
    for (std::size_t m : {8u, 16u, 36u, 72u}) {
      const auto g = SphereGrid::circle(m);
      for (int trial = 0; trial < 5; ++trial) {
        const double w = corpus::uniform(rng, 0.2, 2), h = corpus::uniform(rng, 0.2, 2);
        const double cx = corpus::uniform(rng, -1, 1), cy = corpus::uniform(rng, -1, 1);
        const std::vector<Point2> rect{{cx - w, cy - h}, {cx + w, cy - h}, {cx + w, cy + h}, {cx - w, cy + h}};
        const double diam = 2 * std::hypot(w, h);
        const double bound = diam * (1 - std::cos(std::numbers::pi / m)) + 1e-9;
        CHECK(oracle::hausdorff(viz_segments(embed_polygon(rect, g)), oracle::polygon_boundary(rect)) <= bound);
      }
    }
  }

  TEST_CASE("segments of any polygon lie on its boundary and cover its vertices") {
    corpus::Rng rng(9);
    const auto g = SphereGrid::circle(180);
    for (int trial = 0; trial < 20; ++trial) {
      const auto pts = corpus::random_polygon(rng, 3 + rng() % 6);
      const auto hull = convex_hull(pts);
      const auto boundary = oracle::polygon_boundary(pts);
      const auto segs = viz_segments(embed_polygon(pts, g));
      for (const auto& s : segs) {
        CHECK_FALSE(s.inverted);
        // One-sided: every segment point is on the boundary.
        CHECK(distance_to(s.p, boundary) <= 1e-9);
        CHECK(distance_to(s.q, boundary) <= 1e-9);
      }
      for (const auto& v : hull) {
        double best = INFINITY;
        for (const auto& s : segs)
          best = std::min({best, std::hypot(s.p[0] - v[0], s.p[1] - v[1]), std::hypot(s.q[0] - v[0], s.q[1] - v[1])});
        CHECK(best <= 1e-9);
      }
    }
  }

  TEST_CASE("singleton gives degenerate segments") {
    const std::vector<Point2> p{{0.5, -2}};
    for (const auto& s : viz_segments(embed_polygon(p, SphereGrid::circle(12)))) {
      CHECK(s.p[0] == doctest::Approx(0.5));
      CHECK(s.p[1] == doctest::Approx(-2));
      CHECK(s.q[0] == doctest::Approx(0.5));
      CHECK(s.q[1] == doctest::Approx(-2));
    }
  }

  TEST_CASE("requires dimension two") {
    CHECK_THROWS_AS(viz_segments(directed_zero(1)), Error);
  }
}
