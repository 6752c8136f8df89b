#pragma once

#include "infoloss/density.hpp"
#include "infoloss/pwm_function.hpp"

namespace infoloss {

// Distribution of Y = g(X). The pdf is the change-of-variables sum over the
// preimage of y; the cdf is assembled exactly from source-cdf differences,
// one term per branch, so no quadrature is involved.
class PushforwardDensity final : public Density {
 public:
  // g must already be restricted to the support of source and validated;
  // use the pushforward() factory unless that is guaranteed.
  PushforwardDensity(PwmFunction g, DensityPtr source);

  double pdf(double y) const override;
  double cdf(double y) const override;
  double quantile(double p) const override;
  Interval support() const override { return ysupport_; }
  std::vector<double> interior_breakpoints() const override { return ybreaks_; }
  double sample(RngStream& rng) const override;
  std::string describe() const override;

  const PwmFunction& map() const { return g_; }
  const DensityPtr& source() const { return source_; }

 private:
  PwmFunction g_;
  DensityPtr source_;
  Interval ysupport_;
  std::vector<double> ybreaks_;
};

// g with its domain clipped to the support of d. Throws std::domain_error
// if any support mass falls outside the branch domains.
PwmFunction restrict_to_support(const PwmFunction& g, const Density& d);

// Restricts, validates, and wraps. Throws ValidationError when the restricted
// function fails its model checks.
DensityPtr pushforward(const PwmFunction& g, const DensityPtr& source);

}  // namespace infoloss
