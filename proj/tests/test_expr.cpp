#include <doctest.h>

#include <cmath>
#include <optional>

#include "dsub/basis.hpp"
#include "dsub/corpus.hpp"
#include "dsub/error.hpp"
#include "dsub/expr.hpp"
#include "dsub/oracle.hpp"

using namespace dsub;

namespace {

Errc parse_error(std::string_view text, std::size_t arity = 0) {
  try {
    (void)parse(text, arity);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error for " << text);
  return Errc::parse;
}

double at(const Expr& e, std::initializer_list<double> x) { return eval(e, std::vector<double>(x)); }

}  // namespace

TEST_SUITE("parser") {
  TEST_CASE("structure") {
    const auto e = parse("abs(x1) - abs(x2)");
    CHECK(e.arity() == 2);
    CHECK(e.kind() == NodeKind::lin_comb);
    CHECK(e.node().children[0].kind() == NodeKind::max);
    CHECK(e.node().children[0].node().children.size() == 2);

    const auto m = parse("max(x1, x2, 0.0)");
    CHECK(m.kind() == NodeKind::max);
    CHECK(m.node().children.size() == 3);

    CHECK(parse("abs(x1)/(1.0 + sqr(x1))").kind() == NodeKind::quotient);
    CHECK(parse("x3").arity() == 3);
    CHECK(parse("x1", 4).arity() == 4);
    CHECK(parse("2*x1^3").node().children.size() == 2);
  }

  TEST_CASE("operator precedence and literals") {
    CHECK(at(parse("1 + 2 * 3 - 4 / 2"), {0}) == 5.0);
    CHECK(at(parse("-x1^2"), {3}) == -9.0);
    CHECK(at(parse("(1 + x1) * (1 - x1)"), {2}) == -3.0);
    CHECK(at(parse("2.5e-1 * x1"), {4}) == 1.0);
    CHECK(at(parse("pow(x1, 3) - x1*x1*x1"), {1.7}) == doctest::Approx(0.0));
    CHECK(at(parse("min(x1, -x1, 2)"), {-3}) == -3.0);
    CHECK(at(parse("--x1"), {2}) == 2.0);
  }

  TEST_CASE("errors carry a kind and a position") {
    CHECK(parse_error("abs(x1") == Errc::parse);
    CHECK(parse_error("x1 +") == Errc::parse);
    CHECK(parse_error("foo(x1)") == Errc::unknown_identifier);
    CHECK(parse_error("y1") == Errc::unknown_identifier);
    CHECK(parse_error("x3", 2) == Errc::arity_mismatch);
    CHECK(parse_error("max(x1)") == Errc::arity_mismatch);
    CHECK(parse_error("sin(x1, x2)") == Errc::arity_mismatch);
    CHECK(parse_error("x0") == Errc::unknown_identifier);
    CHECK(parse_error("x1 $ x2") == Errc::parse);
    CHECK(parse_error("") == Errc::parse);
    try {
      (void)parse("x1 + * x2");
    } catch (const Error& e) {
      REQUIRE(e.position().has_value());
      CHECK(*e.position() == 5);
    }
  }

  TEST_CASE("to_string round trip") {
    corpus::Rng rng(3);
    for (int i = 0; i < 100; ++i) {
      const auto e = corpus::random_expr(rng, {2, 4, true, false, {}});
      const auto x = corpus::random_point(rng, 2);
      const auto back = parse(to_string(e), 2);
      double v1 = 0, v2 = 0;
      try {
        v1 = eval(e, x);
      } catch (const Error&) {
        continue;
      }
      v2 = eval(back, x);
      CHECK(v2 == doctest::Approx(v1).epsilon(1e-12));
    }
  }
}

TEST_SUITE("evaluation") {
  TEST_CASE("values") {
    CHECK(at(parse("abs(x1) - abs(x2)"), {3, 1}) == 2.0);
    CHECK(at(parse("max(x1, 2*x1)"), {-1}) == -1.0);
    CHECK(at(parse("abs(x1)/(1 + sqr(x1))"), {0}) == 0.0);
    CHECK(at(parse("exp(log(x1)) + sqrt(x1) + sin(0) + cos(0)"), {4}) == doctest::Approx(7.0));
  }

  TEST_CASE("domain and division errors") {
    try {
      (void)at(parse("1/x1"), {0});
      FAIL("expected division by zero");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::division_by_zero);
    }
    try {
      (void)at(parse("log(x1)"), {-1});
      FAIL("expected domain error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::domain);
    }
    CHECK_THROWS_AS(at(parse("sqrt(x1)"), {-1e-3}), Error);
    CHECK_THROWS_AS(eval(parse("x1 + x2"), std::vector<double>{1.0}), Error);
  }

  TEST_CASE("affine and compose nodes") {
    // child(y1, y2) = y1 * y2 with y = A x + b.
    const auto child = parse("x1 * x2");
    const auto a = Expr::affine({1, 2, 0, 1}, {1, -1}, 2, child);
    CHECK(at(a, {1, 3}) == doctest::Approx((1 + 6 + 1) * (3 - 1)));
    const auto c = Expr::compose(parse("max(x1, x2)"), {parse("sin(x1)", 1), parse("x1^2", 1)});
    CHECK(c.arity() == 1);
    CHECK(at(c, {0.5}) == doctest::Approx(std::sin(0.5)));
    CHECK_THROWS_AS(Expr::compose(parse("x1"), {parse("abs(x1)")}), Error);
    CHECK_THROWS_AS(Expr::compose(parse("x1 + x2"), {parse("x1")}), Error);
  }
}

TEST_SUITE("directional derivative transform") {
  TEST_CASE("hand examples") {
    const Vec zero1{0.0}, zero2{0.0, 0.0};
    const auto g = dirderiv_transform(parse("abs(x1)"), zero1);
    CHECK(g.kind() == NodeKind::max);
    CHECK(at(g, {-2}) == 2.0);
    CHECK(at(g, {3}) == 3.0);

    const auto h = dirderiv_transform(parse("x1 * abs(x1)"), zero1);
    for (double u : {-1.0, 0.3, 5.0}) CHECK(at(h, {u}) == 0.0);

    const auto k = dirderiv_transform(parse("abs(x1) - abs(x2)"), zero2);
    CHECK(at(k, {0.6, 0.8}) == doctest::Approx(-0.2));
  }

  TEST_CASE("dirderiv examples") {
    CHECK(dirderiv(parse("abs(x1) - abs(x2)"), Vec{0, 0}, Vec{0.6, 0.8}) == doctest::Approx(-0.2));
    CHECK(dirderiv(parse("max(x1, x2)"), Vec{0, 0}, Vec{1, 2}) == 2.0);
    CHECK(dirderiv(parse("abs(x1)"), Vec{0}, Vec{-3}) == 3.0);
    CHECK(dirderiv(parse("max(x1, 5 + x1)"), Vec{0}, Vec{-1}) == -1.0);
    CHECK(dirderiv(parse("abs(x1)/(1 + sqr(x1))"), Vec{0}, Vec{-1}) == 1.0);
    CHECK(dirderiv(parse("1/(1 + abs(x1))"), Vec{0}, Vec{1}) == -1.0);
    CHECK(dirderiv(parse("sqr(sin(x1))"), Vec{1}, Vec{1}) == doctest::Approx(std::sin(2.0)));
  }

  TEST_CASE("single active child collapses") {
    const auto g = dirderiv_transform(parse("max(x1, 5 + x1)"), Vec{0});
    CHECK(g.kind() != NodeKind::max);
    CHECK(has_active_kink(parse("abs(x1)"), Vec{0}));
    CHECK_FALSE(has_active_kink(parse("abs(x1)"), Vec{1}));
  }

  TEST_CASE("quotient with vanishing denominator is an error") {
    CHECK_THROWS_AS(dirderiv_transform(parse("x1 / x2"), Vec{1, 0}), Error);
  }

  TEST_CASE("agreement with finite differences") {
    corpus::Rng rng(101);
    int checked = 0;
    for (int draw = 0; checked < 200 && draw < 2000; ++draw) {
      const std::size_t arity = 1 + rng() % 3;
      const auto e = corpus::random_expr(rng, {arity, 5, true, true, {}});
      const auto x = corpus::random_point(rng, arity);
      const auto l = corpus::random_unit(rng, arity);
      double exact = 0, fd = 0;
      try {
        exact = dirderiv(e, x, l);
        fd = oracle::dini_fd(e, x, l);
      } catch (const Error&) {
        continue;
      }
      ++checked;
      CHECK_MESSAGE(std::abs(exact - fd) <= 1e-5 * (1 + std::abs(exact)), to_string(e));
    }
    CHECK(checked == 200);
  }

  TEST_CASE("positive homogeneity, idempotence and smooth additivity") {
    corpus::Rng rng(102);
    int smooth_points = 0;
    for (int trial = 0; trial < 150; ++trial) {
      const auto e = corpus::random_expr(rng, {2, 4, true, false, {}});
      const auto x = corpus::random_point(rng, 2);
      std::optional<Expr> maybe;
      try {
        maybe = dirderiv_transform(e, x);
      } catch (const Error&) {
        continue;
      }
      const Expr g = *maybe;
      const auto l = corpus::random_unit(rng, 2);
      const double d = eval(g, l);
      for (double t : {0.0, 0.5, 2.0}) {
        const Vec tl{t * l[0], t * l[1]};
        CHECK(std::abs(dirderiv(e, x, tl) - t * d) <= 1e-10 * (1 + std::abs(t * d)));
      }
      const auto gg = dirderiv_transform(g, Vec{0, 0});
      for (int k = 0; k < 3; ++k) {
        const auto u = corpus::random_unit(rng, 2);
        CHECK(std::abs(eval(gg, u) - eval(g, u)) <= 1e-12 * (1 + std::abs(eval(g, u))));
      }
      if (!has_active_kink(e, x)) {
        ++smooth_points;
        const auto a = corpus::random_unit(rng, 2), b = corpus::random_unit(rng, 2);
        const Vec ab{a[0] + b[0], a[1] + b[1]};
        const double lhs = dirderiv(e, x, ab), rhs = dirderiv(e, x, a) + dirderiv(e, x, b);
        CHECK(std::abs(lhs - rhs) <= 1e-10 * (1 + std::abs(lhs)));
      }
    }
    CHECK(smooth_points > 20);
  }
}

TEST_SUITE("restriction") {
  TEST_CASE("substitution examples") {
    const Vec up{0, 1}, right{1, 0};
    const auto g1 = dirderiv_transform(parse("abs(x1)"  , 2), Vec{0, 0});
    const auto h1 = restriction(g1, orthobasis(up));
    CHECK(h1.arity() == 1);
    for (double s : {-2.0, -0.5, 0.0, 1.5}) CHECK(at(h1, {s}) == std::abs(s));

    const auto h2 = restriction(parse("x2"), orthobasis(up));
    for (double s : {-2.0, 3.0}) CHECK(at(h2, {s}) == 1.0);

    const auto h3 = restriction(parse("abs(x1) - abs(x2)"), orthobasis(right));
    for (double s : {-2.0, 0.25, 1.0}) CHECK(at(h3, {s}) == 1.0 - std::abs(s));

    CHECK_THROWS_AS(restriction(parse("x1"), orthobasis(up)), Error);
  }
}

TEST_SUITE("orthobasis") {
  TEST_CASE("perpendicular rule") {
    const auto b = orthobasis(Vec{0, 1});
    CHECK(b.construction == Basis::Construction::perpendicular);
    CHECK(b.columns.at(0) == Vec{-1, 0});
    CHECK(orthobasis(Vec{1, 0}).columns.at(0) == Vec{0, 1});
  }

  TEST_CASE("householder") {
    const auto e3 = orthobasis(Vec{0, 0, 1});
    CHECK(e3.construction == Basis::Construction::identity);
    CHECK(e3.columns.at(0) == Vec{1, 0, 0});
    CHECK(e3.columns.at(1) == Vec{0, 1, 0});

    corpus::Rng rng(4);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t n = 3 + trial % 3;
      const auto l = corpus::random_unit(rng, n);
      const auto b = orthobasis(l);
      REQUIRE(b.columns.size() == n - 1);
      for (std::size_t i = 0; i < n - 1; ++i) {
        CHECK(std::abs(dot(b.columns[i], l)) <= 1e-10);
        for (std::size_t j = 0; j < n - 1; ++j)
          CHECK(std::abs(dot(b.columns[i], b.columns[j]) - (i == j ? 1.0 : 0.0)) <= 1e-10);
      }
    }
    const auto minus = orthobasis(Vec{0, 0, -1});
    CHECK(std::abs(dot(minus.columns[0], minus.columns[1])) <= 1e-12);
  }

  TEST_CASE("rejects non-unit directions") {
    CHECK_THROWS_AS(orthobasis(Vec{1, 1}), Error);
    CHECK_THROWS_AS(orthobasis(Vec{1}), Error);
  }
}

TEST_SUITE("oracle") {
  TEST_CASE("dini_fd examples") {
    CHECK(std::abs(oracle::dini_fd(parse("abs(x1)"), Vec{0}, Vec{1}) - 1) <= 1e-8);
    CHECK(std::abs(oracle::dini_fd(parse("x1^2"), Vec{1}, Vec{1}) - 2) <= 1e-6);
    CHECK(std::abs(oracle::dini_fd(parse("max(x1, 2*x1)"), Vec{0}, Vec{-1}) + 1) <= 1e-8);
  }

  TEST_CASE("brute-force interval lattice") {
    using V = std::vector<DirectedInterval>;
    CHECK(oracle::interval_sup_bruteforce(V{{-1, 1}, {1, -1}}) == DirectedInterval{1, 1});
    CHECK(oracle::interval_sup_bruteforce(V{embed_interval(0, 2), embed_interval(1, 3)}) == embed_interval(0, 3));
    CHECK(oracle::interval_sup_bruteforce(V{{0.5, 0.25}}) == DirectedInterval{0.5, 0.25});
  }

  TEST_CASE("polygon support") {
    const std::vector<Point2> sq{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
    const auto r = oracle::polygon_support_oracle(sq, Vec{1, 0});
    CHECK(r.value == 1.0);
    CHECK(r.face.size() == 2);
    const double h = std::sqrt(0.5);
    const auto d = oracle::polygon_support_oracle(sq, Vec{h, h});
    CHECK(d.value == doctest::Approx(std::sqrt(2.0)));
    REQUIRE(d.face.size() == 1);
    CHECK(d.face[0] == Point2{1, 1});
    const std::vector<Point2> p{{2, -1}};
    CHECK(oracle::polygon_support_oracle(p, Vec{0.6, 0.8}).value == doctest::Approx(0.4));
  }

  TEST_CASE("hausdorff") {
    const std::vector<Segment> a{{{0, 0}, {1, 0}, false}};
    const std::vector<Segment> b{{{0, 1}, {1, 1}, false}};
    const std::vector<Segment> c{{{0, 0}, {2, 0}, false}};
    CHECK(oracle::hausdorff(a, b) == doctest::Approx(1.0));
    CHECK(oracle::hausdorff(a, c) == doctest::Approx(1.0));
    CHECK(oracle::hausdorff(a, a) <= 1e-12);
  }
}
