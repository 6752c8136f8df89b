#pragma once

#include <vector>

#include "infoloss/pwm_function.hpp"

namespace infoloss {

// Dense polynomial with ascending coefficients: coeffs[k] * x^k.
class Polynomial {
 public:
  explicit Polynomial(std::vector<double> coeffs);

  double operator()(double x) const;
  Polynomial derivative() const;
  // Degree after ignoring exactly-zero leading coefficients.
  int degree() const;
  const std::vector<double>& coeffs() const { return coeffs_; }

  // Distinct real roots inside [lo, hi], ascending. Degrees 1 and 2 are
  // solved in closed form; higher degrees recurse on the derivative to get
  // critical points and bisect between them. Roots of even multiplicity are
  // picked up at critical points where |p| vanishes.
  std::vector<double> real_roots(double lo, double hi) const;

  // Interval ends are clamped to this radius when isolating roots; all real
  // roots have magnitude below it.
  double root_bound() const;

 private:
  std::vector<double> coeffs_;
};

// Splits [domain] at every real root of the derivative and returns one
// branch per resulting subinterval. Interior cut points open the piece on
// the left and close it on the right, so sampled derivative zeros sit at
// branch endpoints only.
PwmFunction from_polynomial(const std::vector<double>& coeffs, const Interval& domain,
                            std::string name = "");

}  // namespace infoloss
