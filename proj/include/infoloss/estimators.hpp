#pragma once

#include <cstdint>
#include <vector>

#include "infoloss/density.hpp"
#include "infoloss/pwm_function.hpp"

namespace infoloss {

struct McConfig {
  std::uint64_t n_samples = 1000000;
  std::uint64_t seed = 1;
  int n_workers = 1;
};

struct McReport {
  double loss_bits = 0.0;
  double stderr_bits = 0.0;
  std::uint64_t n_accepted = 0;
  std::uint64_t n_rejected = 0;
  double rejection_fraction = 0.0;
};

// Monte Carlo estimate of the information loss: the mean of
// log2(f_Y(g(X)) |g'(X)| / f_X(X)) over draws of X. Samples are indexed by a
// counter-based generator and reduced in fixed block order, so the result is
// bit-identical for any worker count.
McReport mc_loss(const PwmFunction& g, const DensityPtr& d, const McConfig& cfg);

struct HistogramConfig {
  int y_bins = 256;
  int refinement_levels = 4;
};

struct HistogramLevel {
  int level = 0;
  int bins = 0;
  int occupied = 0;
  double loss_bits = 0.0;
};

struct HistogramReport {
  std::vector<HistogramLevel> levels;
  std::uint64_t n_samples = 0;
};

// Model-free reference: draws (branch label, output) pairs, quantizes the
// output into equal-count bins, and reports the plug-in conditional entropy
// of the label given the bin, doubling the bin count per refinement level.
// Converges to the information loss from below as bins and samples grow.
HistogramReport histogram_oracle(const PwmFunction& g, const DensityPtr& d,
                                 const HistogramConfig& hist, const McConfig& mc);

}  // namespace infoloss
