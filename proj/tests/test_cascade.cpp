#include <doctest.h>

#include <cmath>

#include "infoloss/cascade.hpp"
#include "infoloss/catalog.hpp"
#include "infoloss/polynomial.hpp"

using namespace infoloss;

TEST_CASE("composition of magnitude with itself is magnitude") {
  PwmFunction comp = compose(catalog::magnitude(), catalog::magnitude());
  CHECK(comp.validate(128).pass());
  for (double x : {-3.0, -0.5, 0.0, 0.5, 3.0}) {
    CHECK(comp.eval(x) == doctest::Approx(std::abs(x)));
  }
  CHECK(comp.branch_count() == 2);
}

TEST_CASE("composition splits at interior cuts") {
  // |x - 3| built as magnitude after a shift
  PwmFunction shift = from_polynomial({-3.0, 1.0}, Interval::whole_line());
  PwmFunction comp = compose(catalog::magnitude(), shift);
  CHECK(comp.branch_count() == 2);
  CHECK(comp.validate(128).pass());
  CHECK(comp.eval(1.0) == doctest::Approx(2.0));
  CHECK(comp.eval(5.0) == doctest::Approx(2.0));
  CHECK(comp.preimage(2.0).size() == 2);
  CHECK(comp.branch(0).orientation() == Orientation::kDecreasing);
  CHECK(comp.branch(1).orientation() == Orientation::kIncreasing);
  CHECK(comp.abs_derivative(1.0) == doctest::Approx(1.0));
}

TEST_CASE("composition with identity is a passthrough") {
  PwmFunction g = catalog::cubic();
  PwmFunction left = compose(catalog::identity(), g);
  PwmFunction right = compose(g, catalog::identity());
  for (double x : {-15.0, -2.0, 0.0, 4.0, 30.0}) {
    CHECK(left.eval(x) == doctest::Approx(g.eval(x)));
    CHECK(right.eval(x) == doctest::Approx(g.eval(x)));
  }
  CHECK(left.branch_count() == 3);
  CHECK(right.branch_count() == 3);
}

TEST_CASE("composition rejects uncovered inner images") {
  PwmFunction narrow = from_polynomial({0.0, 0.0, 1.0}, Interval(0.0, 1.0, true, true));
  CHECK_THROWS_AS(compose(narrow, catalog::magnitude()), std::domain_error);
}

TEST_CASE("four fold composition of cosine halves") {
  PwmFunction comp = compose(catalog::magnitude(), catalog::cosine(2));
  CHECK(comp.branch_count() == 4);
  CHECK(comp.validate(128).pass());
  for (double x : {0.3, 2.0, 4.0, 6.0}) {
    CHECK(comp.eval(x) == doctest::Approx(std::abs(std::cos(x))));
  }
  CHECK(comp.preimage(0.5).size() == 4);
}

TEST_CASE("cascade losses add up") {
  QuadratureConfig q;
  std::vector<PwmFunction> stages{catalog::magnitude(), catalog::identity()};
  CascadeReport rep = cascade_loss(stages, normal_density(1.0), q);
  REQUIRE(rep.stages.size() == 2);
  CHECK(rep.stages[0].report.loss_bits == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(rep.stages[1].report.loss_bits == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(rep.total_bits == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(rep.converged);
}

TEST_CASE("second magnitude after magnitude is free") {
  QuadratureConfig q;
  std::vector<PwmFunction> stages{catalog::magnitude(), catalog::magnitude()};
  CascadeReport rep = cascade_loss(stages, normal_density(1.0), q);
  CHECK(rep.stages[1].report.loss_bits == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(rep.total_bits == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("additivity across a two bit chain") {
  QuadratureConfig q;
  std::vector<PwmFunction> stages{catalog::cosine(2), catalog::magnitude()};
  AdditivityReport ar =
      verify_additivity(stages, uniform_density(0.0, 2.0 * M_PI), q);
  CHECK(ar.direct_bits == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(ar.staged_bits == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(std::abs(ar.gap_bits) <=
        ar.direct_error_bits + ar.staged_error_bits + 1e-9);
  CHECK(ar.within_error);
}

TEST_CASE("additivity with an asymmetric second stage") {
  QuadratureConfig q;
  std::vector<PwmFunction> stages{
      catalog::sqlin(),
      from_polynomial({0.25, -1.0, 1.0}, Interval::whole_line())};  // (y-0.5)^2
  AdditivityReport ar = verify_additivity(stages, uniform_density(-1.0, 1.0), q);
  CHECK(std::abs(ar.gap_bits) <=
        ar.direct_error_bits + ar.staged_error_bits + 1e-9);
  CHECK(ar.staged_bits > 1.0);  // both stages lose information
}

TEST_CASE("cascade rejects empty stage lists") {
  QuadratureConfig q;
  CHECK_THROWS_AS(cascade_loss({}, normal_density(1.0), q), std::invalid_argument);
}
