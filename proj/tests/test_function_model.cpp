#include <doctest.h>

#include <cmath>
#include <limits>

#include "infoloss/catalog.hpp"
#include "infoloss/polynomial.hpp"
#include "infoloss/pwm_function.hpp"

using namespace infoloss;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("interval basics") {
  Interval i(0.0, 2.0, true, false);
  CHECK(i.contains(0.0));
  CHECK(i.contains(1.0));
  CHECK_FALSE(i.contains(2.0));
  CHECK_FALSE(i.contains(-0.1));
  CHECK(i.width() == 2.0);

  CHECK_THROWS_AS(Interval(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Interval(2.0, 1.0), std::invalid_argument);

  Interval w = Interval::whole_line();
  CHECK(w.contains(0.0));
  CHECK_FALSE(w.contains(kInf));
  CHECK_FALSE(w.lo_finite());

  CHECK(i.contains_with_slack(2.0 + 1e-12, 1e-9));
  CHECK_FALSE(i.contains_with_slack(2.1, 1e-9));
}

TEST_CASE("interval intersection") {
  Interval a(0.0, 2.0, true, false);
  Interval b(1.0, 3.0, true, true);
  auto c = a.intersect(b);
  REQUIRE(c.has_value());
  CHECK(c->lo() == 1.0);
  CHECK(c->hi() == 2.0);
  CHECK(c->lo_closed());
  CHECK_FALSE(c->hi_closed());

  CHECK_FALSE(a.intersect(Interval(2.0, 3.0, true, true)).has_value());
  CHECK(a.intersect(Interval(-1.0, 0.5)).has_value());

  Interval open_touch(0.0, 2.0, true, true);
  auto touch = open_touch.intersect(Interval(2.0, 3.0, true, true));
  CHECK_FALSE(touch.has_value());  // single point is not an interval
}

TEST_CASE("interval same_extent compares endpoint values only") {
  Interval a(0.0, 1.0, true, false);
  Interval b(0.0, 1.0, false, true);
  CHECK(a.same_extent(b, 1e-12));
  CHECK_FALSE(a.same_extent(Interval(0.0, 1.1), 1e-12));
  CHECK(Interval(0.0, kInf).same_extent(Interval(1e-300, kInf), 1e-9));
}

TEST_CASE("branch image inference on infinite domains") {
  Branch neg(Interval(-kInf, 0.0, false, false), Orientation::kDecreasing,
             [](double x) { return -x; }, [](double) { return -1.0; });
  CHECK(neg.image().lo() == 0.0);
  CHECK_FALSE(neg.image().lo_closed());
  CHECK(neg.image().hi() == kInf);

  Branch sq(Interval(-kInf, 0.0, false, false), Orientation::kDecreasing,
            [](double x) { return x * x; }, [](double x) { return 2.0 * x; });
  CHECK(sq.image().lo() == 0.0);
  CHECK(sq.image().hi() == kInf);
}

TEST_CASE("branch bisect inverse round trips without an analytic inverse") {
  Branch b(Interval(0.0, kInf, true, false), Orientation::kIncreasing,
           [](double x) { return x + std::sin(x) * 0.5; },
           [](double x) { return 1.0 + std::cos(x) * 0.5; });
  for (double y : {0.25, 1.0, 7.5, 300.0}) {
    double x = b.inverse(y);
    CHECK(std::abs(b.forward(x) - y) <= 1e-9 * std::max(1.0, std::abs(y)));
  }
}

TEST_CASE("branch restriction keeps untouched image ends verbatim") {
  PwmFunction g = catalog::sqlin();
  const Branch& square = g.branch(0);
  auto r = square.restricted(Interval(-2.0, 5.0, true, true));
  REQUIRE(r.has_value());
  CHECK(r->domain().lo() == -2.0);
  CHECK(r->domain().hi() == 0.0);
  CHECK(r->image().lo() == 0.0);
  CHECK(r->image().hi() == 4.0);
  CHECK_FALSE(square.restricted(Interval(1.0, 2.0)).has_value());
}

TEST_CASE("catalog functions validate") {
  for (const PwmFunction& g :
       {catalog::magnitude(), catalog::sqlin(), catalog::cubic(),
        catalog::cosine(1), catalog::cosine(2), catalog::cosine(4),
        catalog::identity()}) {
    ValidationReport rep = g.validate(128);
    CAPTURE(g.name());
    CHECK(rep.pass());
  }
}

TEST_CASE("magnitude preimages") {
  PwmFunction g = catalog::magnitude();
  PreimageSet p = g.preimage(2.0);
  REQUIRE(p.size() == 2);
  CHECK(p.points[0].x == doctest::Approx(-2.0));
  CHECK(p.points[1].x == doctest::Approx(2.0));
  CHECK(p.points[0].branch_index == 0);
  CHECK(p.points[1].branch_index == 1);

  // 0 is attained only by the closed positive branch
  CHECK(g.preimage(0.0).size() == 1);
  CHECK(g.preimage(-1.0).empty());
}

TEST_CASE("cubic preimages and derivative") {
  PwmFunction g = catalog::cubic();
  const double split = 10.0 / std::sqrt(3.0);
  const double peak = 2000.0 / (3.0 * std::sqrt(3.0));

  PreimageSet p0 = g.preimage(0.0);
  REQUIRE(p0.size() == 3);
  CHECK(p0.points[0].x == doctest::Approx(-10.0));
  CHECK(p0.points[1].x == doctest::Approx(0.0));
  CHECK(p0.points[2].x == doctest::Approx(10.0));

  CHECK(g.preimage(peak * 0.5).size() == 3);
  CHECK(g.preimage(peak * 1.5).size() == 1);
  CHECK(g.preimage(-peak * 1.5).size() == 1);

  for (double y : {-500.0, -384.0, -100.0, -1.0, 0.5, 12.0, 384.0, 3000.0}) {
    for (const PreimagePoint& pt : g.preimage(y).points) {
      CHECK(g.branch(pt.branch_index).forward(pt.x) ==
            doctest::Approx(y).epsilon(1e-9));
    }
  }

  CHECK(g.abs_derivative(0.0) == doctest::Approx(100.0));
  CHECK(g.abs_derivative(split) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(g.eval(split) == doctest::Approx(-peak));
}

TEST_CASE("cosine branches cover half periods") {
  PwmFunction g = catalog::cosine(3);
  CHECK(g.branch_count() == 3);
  CHECK(g.domain_hull().lo() == 0.0);
  CHECK(g.domain_hull().hi() == doctest::Approx(3.0 * M_PI));
  CHECK(g.preimage(0.5).size() == 3);
  CHECK(g.preimage(1.0).size() == 2);  // attained at 0 and 2*pi
  CHECK(g.eval(M_PI / 3.0) == doctest::Approx(0.5));
  CHECK(g.eval(4.0) == doctest::Approx(std::cos(4.0)));
  CHECK_THROWS_AS(catalog::cosine(0), std::invalid_argument);
}

TEST_CASE("polynomial real roots") {
  Polynomial p({-6.0, 11.0, -6.0, 1.0});  // (x-1)(x-2)(x-3)
  auto roots = p.real_roots(0.0, 10.0);
  REQUIRE(roots.size() == 3);
  CHECK(roots[0] == doctest::Approx(1.0));
  CHECK(roots[1] == doctest::Approx(2.0));
  CHECK(roots[2] == doctest::Approx(3.0));

  Polynomial q({1.0, 0.0, 1.0});  // x^2 + 1
  CHECK(q.real_roots(-10.0, 10.0).empty());

  Polynomial dbl({1.0, -2.0, 1.0});  // (x-1)^2
  auto dr = dbl.real_roots(0.0, 2.0);
  REQUIRE(dr.size() == 1);
  CHECK(dr[0] == doctest::Approx(1.0));
}

TEST_CASE("from_polynomial splits at turning points") {
  PwmFunction cub = from_polynomial({0.0, -100.0, 0.0, 1.0},
                                    Interval::whole_line(), "cubic_poly");
  CHECK(cub.branch_count() == 3);
  PwmFunction cat = catalog::cubic();
  for (double x : {-20.0, -7.0, -2.0, 0.0, 3.0, 9.0, 25.0}) {
    CHECK(cub.eval(x) == doctest::Approx(cat.eval(x)).epsilon(1e-12));
    CHECK(cub.abs_derivative(x) ==
          doctest::Approx(cat.abs_derivative(x)).epsilon(1e-12));
  }
  CHECK(cub.validate(128).pass());

  PwmFunction sq = from_polynomial({0.0, 0.0, 1.0}, Interval(-1.0, 1.0, true, true));
  CHECK(sq.branch_count() == 2);
  CHECK(sq.branch(0).orientation() == Orientation::kDecreasing);
  CHECK(sq.branch(1).orientation() == Orientation::kIncreasing);
  CHECK(sq.preimage(0.25).size() == 2);

  PwmFunction line = from_polynomial({1.0, 2.0}, Interval::whole_line());
  CHECK(line.branch_count() == 1);

  // monotone despite a vanishing derivative at the split
  PwmFunction cube = from_polynomial({0.0, 0.0, 0.0, 1.0}, Interval::whole_line());
  CHECK(cube.validate(128).pass());
  CHECK(cube.preimage(8.0).size() == 1);

  CHECK_THROWS_AS(from_polynomial({5.0}, Interval::whole_line()),
                  std::invalid_argument);
}

TEST_CASE("validation flags broken models") {
  // claimed increasing but actually decreasing
  Branch bad(Interval(0.0, 1.0, true, true), Orientation::kIncreasing,
             [](double x) { return -x; }, [](double) { return -1.0; },
             std::nullopt, Interval(-1.0, 0.0, true, true));
  ValidationReport rep = PwmFunction({bad}).validate(64);
  CHECK_FALSE(rep.pass());
  CHECK_FALSE(rep.derivative_sign_ok);

  // overlapping branch domains
  PwmFunction overlap(
      {Branch(Interval(0.0, 2.0, true, true), Orientation::kIncreasing,
              [](double x) { return x; }, [](double) { return 1.0; }),
       Branch(Interval(1.0, 3.0, true, true), Orientation::kIncreasing,
              [](double x) { return x + 1.0; }, [](double) { return 1.0; })});
  CHECK_FALSE(overlap.validate(64).branches_ordered);

  CHECK_THROWS_AS(catalog::magnitude().validate(4), std::invalid_argument);
}

TEST_CASE("pwm restriction") {
  PwmFunction g = catalog::cubic();
  PwmFunction r = g.restricted(Interval(-20.0, 20.0, true, true));
  CHECK(r.branch_count() == 3);
  CHECK(r.domain_hull().lo() == -20.0);
  CHECK(r.domain_hull().hi() == 20.0);

  PwmFunction mid = g.restricted(Interval(1.0, 2.0, true, true));
  CHECK(mid.branch_count() == 1);
  CHECK(mid.eval(1.5) == doctest::Approx(g.eval(1.5)));

  CHECK_THROWS_AS(catalog::cosine(2).restricted(Interval(100.0, 101.0)),
                  std::domain_error);
}
