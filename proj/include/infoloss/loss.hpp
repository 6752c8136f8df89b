#pragma once

#include <string>
#include <utility>
#include <vector>

#include "infoloss/density.hpp"
#include "infoloss/pwm_function.hpp"

namespace infoloss {

struct QuadratureConfig {
  double abs_tol = 1e-10;  // bits
  double rel_tol = 1e-8;
  int max_depth = 48;
  // Probability mass dropped at each infinite tail pair when truncating.
  double mass_eps = 1e-9;
  // Width excluded on each side of an interior split point, relative to the
  // truncated domain width; the excluded strip is charged to the error
  // estimate.
  double singularity_pad = 1e-10;
};

struct LossReport {
  double loss_bits = 0.0;
  std::string method;
  double error_estimate_bits = 0.0;
  double bound1_bits = 0.0;  // expected log preimage count
  double bound2_bits = 0.0;  // log of summed branch image masses
  double bound3_bits = 0.0;  // log branch count
  int L = 0;                 // branch count after restriction to the support
  double bijective_mass = 0.0;
  bool converged = false;
};

struct TightnessReport {
  int L = 0;
  double tol = 0.0;
  // Max deviation of the preimage density ratio from its mean, taken within
  // constant-preimage-count regions and globally.
  double regional_dev = 0.0;
  double global_dev = 0.0;
  double global_mean = 0.0;
  bool images_coincide = false;
  bool bound1_tight = false;
  bool bound2_tight = false;
  bool bound3_tight = false;
};

struct BoundChain {
  double bound1_bits = 0.0;
  double bound2_bits = 0.0;
  double bound3_bits = 0.0;
  int L = 0;
};

// Output density of Y = g(X) at y: sum of f_X(x_i)/|g'(x_i)| over preimages.
double output_density_at(const PwmFunction& g, const DensityPtr& d, double y);

// Posterior probability of each branch given an observed output y, as
// (branch_index, probability) pairs over the branches with a preimage at y.
// Throws std::domain_error where the output density vanishes.
std::vector<std::pair<int, double>> branch_posterior(const PwmFunction& g,
                                                     const DensityPtr& d, double y);

// Information loss in bits, integrated over the input domain.
LossReport info_loss(const PwmFunction& g, const DensityPtr& d,
                     const QuadratureConfig& cfg = {});

// Information loss in bits as the conditional branch-label entropy,
// integrated over the output domain. Agrees with info_loss up to the
// reported error estimates.
LossReport info_loss_via_W(const PwmFunction& g, const DensityPtr& d,
                           const QuadratureConfig& cfg = {});

// The three bounds alone, cheapest first to evaluate; assembled exactly from
// cdf differences.
BoundChain bounds(const PwmFunction& g, const DensityPtr& d, double mass_eps = 1e-9);

// Probability mass of the inputs whose output has a single preimage.
double bijective_mass(const PwmFunction& g, const DensityPtr& d);

// Samples the preimage density ratio on a grid and reports how close each
// bound is to being met with equality.
TightnessReport tightness_check(const PwmFunction& g, const DensityPtr& d,
                                int grid = 512, double tol = 1e-6);

}  // namespace infoloss
