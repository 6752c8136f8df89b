#pragma once

#include <functional>
#include <optional>
#include <string>

#include "infoloss/interval.hpp"

namespace infoloss {

using RealFn = std::function<double(double)>;

enum class Orientation : int { kDecreasing = -1, kIncreasing = +1 };

// One strictly monotone piece of a piecewise function: a domain interval,
// forward map, derivative, orientation, and the image interval. The forward
// map must be defined on the closure of finite domain ends.
class Branch {
 public:
  // If image is absent it is computed from the domain ends: finite ends are
  // evaluated directly, infinite ends are probed for a limit.
  Branch(Interval domain, Orientation orientation, RealFn forward,
         RealFn derivative, std::optional<RealFn> inverse = std::nullopt,
         std::optional<Interval> image = std::nullopt,
         std::optional<Interval> sample_hint = std::nullopt,
         std::string label = "");

  const Interval& domain() const { return domain_; }
  const Interval& image() const { return image_; }
  Orientation orientation() const { return orientation_; }
  const std::string& label() const { return label_; }
  bool has_analytic_inverse() const { return inverse_.has_value(); }

  double forward(double x) const { return forward_(x); }
  double derivative(double x) const { return derivative_(x); }

  // Analytic inverse when provided, otherwise bisection on the forward map.
  // y is clamped to the image extent first; the result lies in the domain.
  double inverse(double y) const;

  // Bounded interval used for validation sampling and bisection brackets:
  // the domain with infinite ends replaced by a finite window, or the
  // explicit sample hint if one was given.
  Interval sample_window() const;

  // Domain restricted to `clip`; image ends at untouched domain ends are
  // kept verbatim, ends at new cut points are re-evaluated. Returns nullopt
  // when the intersection is empty.
  std::optional<Branch> restricted(const Interval& clip) const;

 private:
  double bisect_inverse(double y) const;

  Interval domain_;
  Orientation orientation_;
  RealFn forward_;
  RealFn derivative_;
  std::optional<RealFn> inverse_;
  Interval image_;
  std::optional<Interval> sample_hint_;
  std::string label_;
};

}  // namespace infoloss
