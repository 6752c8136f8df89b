#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace infoloss {

struct QuadOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_depth = 48;
  std::size_t max_panels = 100000;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  bool converged = false;
  std::size_t panels = 0;
  std::size_t evals = 0;
};

// An integration segment. A sqrt flag marks an end where the integrand may
// blow up like an inverse square root; the segment is reparametrized as
// x = end -/+ t^2 there, which turns that profile into a bounded one.
struct Segment {
  double lo, hi;
  bool sqrt_lo = false;
  bool sqrt_hi = false;
};

// Globally adaptive Gauss-Kronrod 7-15 over a list of segments: the panel
// with the largest error estimate is split first, until the summed estimate
// meets max(abs_tol, rel_tol * |value|) or the budget runs out.
QuadResult integrate_segments(const std::function<double(double)>& f,
                              const std::vector<Segment>& segments,
                              const QuadOptions& opts);

// Convenience wrapper: one interval, optional forced interior split points.
QuadResult integrate(const std::function<double(double)>& f, double lo, double hi,
                     const QuadOptions& opts,
                     const std::vector<double>& interior_breaks = {});

}  // namespace infoloss
