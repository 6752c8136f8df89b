#pragma once

#include <stdexcept>
#include <vector>

#include "infoloss/branch.hpp"

namespace infoloss {

// One solution of g(x) = y together with the branch it came from.
struct PreimagePoint {
  double x;
  int branch_index;
};

struct PreimageSet {
  double y;
  std::vector<PreimagePoint> points;  // ordered by x

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

struct ValidationReport {
  bool branches_ordered = true;      // domains disjoint, increasing order
  bool monotone_ok = true;           // sampled forward values strictly monotone
  bool derivative_sign_ok = true;    // sampled derivative sign matches orientation
  bool inverse_ok = true;            // round-trip residual within tolerance
  bool values_finite = true;         // no NaN/Inf at sampled interior points
  double max_inverse_residual = 0.0;
  std::vector<std::string> issues;

  bool pass() const {
    return branches_ordered && monotone_ok && derivative_sign_ok && inverse_ok &&
           values_finite;
  }
};

// Raised by operations that insist on a valid function model.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Piecewise strictly monotone function: finitely many branches with disjoint
// domain intervals. Construction never checks monotonicity; validate() does.
class PwmFunction {
 public:
  explicit PwmFunction(std::vector<Branch> branches, std::string name = "");

  const std::vector<Branch>& branches() const { return branches_; }
  const Branch& branch(int i) const { return branches_.at(i); }
  int branch_count() const { return static_cast<int>(branches_.size()); }
  const std::string& name() const { return name_; }

  // Hull of the branch domains (gaps between branches are allowed).
  Interval domain_hull() const;
  // Hull of the branch images.
  Interval image_hull() const;

  // Index of the branch whose domain contains x, or -1.
  int branch_index_of(double x) const;

  // g(x); NaN if x lies in no branch domain.
  double eval(double x) const;
  // |g'(x)|; NaN if x lies in no branch domain.
  double abs_derivative(double x) const;

  // All solutions of g(x) = y, at most one per branch. Membership of y in a
  // branch image is decided with a small relative slack, and each candidate
  // is kept only if the forward residual confirms it.
  PreimageSet preimage(double y) const;

  // Sampled validation of the model invariants.
  ValidationReport validate(int grid_points_per_branch = 128) const;

  // Copy with every branch domain intersected with `clip`; empty branches
  // drop out. Throws std::domain_error if nothing remains.
  PwmFunction restricted(const Interval& clip) const;

 private:
  std::vector<Branch> branches_;
  std::string name_;
};

}  // namespace infoloss
