#pragma once

#include <string>
#include <vector>

#include "infoloss/loss.hpp"

namespace infoloss {

// Composite h(g(x)): branches of g are split wherever g crosses a branch
// boundary of h, so every piece of the result is monotone. Throws
// std::domain_error if the image of g is not covered by the domain of h on a
// set of positive length.
PwmFunction compose(const PwmFunction& h, const PwmFunction& g);

struct StageLoss {
  std::string stage;
  LossReport report;
};

struct CascadeReport {
  std::vector<StageLoss> stages;
  double total_bits = 0.0;
  double error_estimate_bits = 0.0;
  bool converged = true;
};

// Loss of the chain stages[0], stages[1], ...: stage i is charged against
// the pushforward of the source through the stages before it, and the total
// is the plain sum.
CascadeReport cascade_loss(const std::vector<PwmFunction>& stages, const DensityPtr& d,
                           const QuadratureConfig& cfg = {});

struct AdditivityReport {
  double direct_bits = 0.0;  // loss of the fully composed map
  double staged_bits = 0.0;  // sum of per-stage losses
  double gap_bits = 0.0;
  double direct_error_bits = 0.0;
  double staged_error_bits = 0.0;
  bool within_error = false;
};

// Compares the loss of the composed map against the summed stage losses.
AdditivityReport verify_additivity(const std::vector<PwmFunction>& stages,
                                   const DensityPtr& d,
                                   const QuadratureConfig& cfg = {});

}  // namespace infoloss
