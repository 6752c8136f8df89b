#include "infoloss/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace infoloss::catalog {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

double cubic_fwd(double x) { return (x * x - 100.0) * x; }
double cubic_der(double x) { return 3.0 * x * x - 100.0; }

// Closed-form real roots of x^3 - 100x = y. In the three-root regime the
// roots in branch order (left, middle, right) are the k = 2, 1, 0 entries of
// the trigonometric formula; outside it the hyperbolic formula gives the
// single root, which always lies in an outer branch.
double cubic_inverse(double y, int branch) {
  const double radius = 2.0 * std::sqrt(100.0 / 3.0);
  double arg = 3.0 * std::sqrt(3.0) * y / 2000.0;
  double x;
  if (std::abs(arg) <= 1.0 + 1e-9 || branch == 1) {
    double phi = std::acos(std::clamp(arg, -1.0, 1.0));
    int k = branch == 0 ? 2 : (branch == 1 ? 1 : 0);
    x = radius * std::cos((phi - 2.0 * kPi * k) / 3.0);
  } else {
    double t = std::acosh(std::abs(arg));
    x = (y > 0 ? radius : -radius) * std::cosh(t / 3.0);
  }
  for (int it = 0; it < 2; ++it) {
    double d = cubic_der(x);
    if (std::abs(d) < 1.0) break;
    x -= (cubic_fwd(x) - y) / d;
  }
  return x;
}

}  // namespace

PwmFunction magnitude() {
  std::vector<Branch> br;
  br.emplace_back(Interval(-kInf, 0.0, false, false), Orientation::kDecreasing,
                  [](double x) { return -x; }, [](double) { return -1.0; },
                  RealFn([](double y) { return -y; }),
                  Interval(0.0, kInf, false, false), std::nullopt, "negative_side");
  br.emplace_back(Interval(0.0, kInf, true, false), Orientation::kIncreasing,
                  [](double x) { return x; }, [](double) { return 1.0; },
                  RealFn([](double y) { return y; }),
                  Interval(0.0, kInf, true, false), std::nullopt, "positive_side");
  return PwmFunction(std::move(br), "magnitude");
}

PwmFunction sqlin() {
  std::vector<Branch> br;
  br.emplace_back(Interval(-kInf, 0.0, false, false), Orientation::kDecreasing,
                  [](double x) { return x * x; }, [](double x) { return 2.0 * x; },
                  RealFn([](double y) { return -std::sqrt(std::max(y, 0.0)); }),
                  Interval(0.0, kInf, false, false), std::nullopt, "square_side");
  br.emplace_back(Interval(0.0, kInf, true, false), Orientation::kIncreasing,
                  [](double x) { return x; }, [](double) { return 1.0; },
                  RealFn([](double y) { return y; }),
                  Interval(0.0, kInf, true, false), std::nullopt, "linear_side");
  return PwmFunction(std::move(br), "sqlin");
}

PwmFunction cubic() {
  const double split = 10.0 / std::sqrt(3.0);
  const double peak = cubic_fwd(-split);
  const double trough = cubic_fwd(split);

  auto fwd = [](double x) { return cubic_fwd(x); };
  auto der = [](double x) { return cubic_der(x); };

  std::vector<Branch> br;
  br.emplace_back(Interval(-kInf, -split, false, false), Orientation::kIncreasing,
                  fwd, der, RealFn([](double y) { return cubic_inverse(y, 0); }),
                  Interval(-kInf, peak, false, false), std::nullopt, "left_rise");
  br.emplace_back(Interval(-split, split, true, false), Orientation::kDecreasing,
                  fwd, der, RealFn([](double y) { return cubic_inverse(y, 1); }),
                  Interval(trough, peak, false, true), std::nullopt, "middle_fall");
  br.emplace_back(Interval(split, kInf, true, false), Orientation::kIncreasing,
                  fwd, der, RealFn([](double y) { return cubic_inverse(y, 2); }),
                  Interval(trough, kInf, true, false), std::nullopt, "right_rise");
  return PwmFunction(std::move(br), "cubic");
}

PwmFunction cosine(int half_periods) {
  if (half_periods < 1) {
    throw std::invalid_argument("cosine needs at least one half period");
  }
  std::vector<Branch> br;
  for (int k = 0; k < half_periods; ++k) {
    bool last = k + 1 == half_periods;
    Interval dom(k * kPi, (k + 1) * kPi, true, last);
    bool even = k % 2 == 0;
    Orientation o = even ? Orientation::kDecreasing : Orientation::kIncreasing;
    RealFn inv;
    if (even) {
      inv = [k](double y) { return k * kPi + std::acos(std::clamp(y, -1.0, 1.0)); };
    } else {
      inv = [k](double y) { return (k + 1) * kPi - std::acos(std::clamp(y, -1.0, 1.0)); };
    }
    bool lo_att = even ? last : true;        // -1 attained?
    bool hi_att = even ? true : last;        // +1 attained?
    br.emplace_back(dom, o, [](double x) { return std::cos(x); },
                    [](double x) { return -std::sin(x); }, inv,
                    Interval(-1.0, 1.0, lo_att, hi_att), std::nullopt,
                    "half_period" + std::to_string(k + 1));
  }
  return PwmFunction(std::move(br), "cosine" + std::to_string(half_periods));
}

PwmFunction identity() {
  std::vector<Branch> br;
  br.emplace_back(Interval::whole_line(), Orientation::kIncreasing,
                  [](double x) { return x; }, [](double) { return 1.0; },
                  RealFn([](double y) { return y; }), Interval::whole_line(),
                  std::nullopt, "identity");
  return PwmFunction(std::move(br), "identity");
}

}  // namespace infoloss::catalog
