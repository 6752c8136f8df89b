#pragma once

#include <memory>
#include <string>
#include <vector>

#include "infoloss/interval.hpp"
#include "infoloss/rng.hpp"

namespace infoloss {

// Absolutely continuous scalar distribution.
class Density {
 public:
  virtual ~Density() = default;

  virtual double pdf(double x) const = 0;
  virtual double cdf(double x) const = 0;
  // p in [0, 1]; 0 and 1 may map to infinite support ends.
  virtual double quantile(double p) const = 0;
  virtual Interval support() const = 0;
  // Points where the pdf is not smooth, strictly inside the support.
  virtual std::vector<double> interior_breakpoints() const { return {}; }
  virtual double sample(RngStream& rng) const { return quantile(rng.next_u01()); }
  virtual std::string describe() const = 0;
};

using DensityPtr = std::shared_ptr<const Density>;

DensityPtr uniform_density(double lo, double hi);
// Uniform on [-a, a].
DensityPtr uniform_halfwidth(double a);
DensityPtr normal_density(double sigma, double mean = 0.0);
// Piecewise-linear pdf through (xs[i], ps[i]); renormalized to unit mass.
DensityPtr piecewise_pdf_density(std::vector<double> xs, std::vector<double> ps);

// Finite working interval: infinite support ends are pulled in to the
// mass_eps/2 and 1 - mass_eps/2 quantiles; finite ends stay exact.
Interval truncated_support(const Density& d, double mass_eps);

// Standard normal quantile (rational estimate plus Halley refinement).
double std_normal_quantile(double p);

}  // namespace infoloss
