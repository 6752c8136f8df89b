#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace infoloss {

// Nonempty real interval with independently open or closed finite ends.
// Infinite ends are always open.
class Interval {
 public:
  Interval(double lo, double hi, bool lo_closed = true, bool hi_closed = true);

  static Interval whole_line();

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  bool lo_closed() const { return lo_closed_; }
  bool hi_closed() const { return hi_closed_; }

  double width() const { return hi_ - lo_; }
  bool lo_finite() const { return std::isfinite(lo_); }
  bool hi_finite() const { return std::isfinite(hi_); }
  bool finite() const { return lo_finite() && hi_finite(); }

  bool contains(double x) const;
  // Membership with an absolute slack at the finite ends; closedness is
  // ignored within the slack band.
  bool contains_with_slack(double x, double slack) const;

  std::optional<Interval> intersect(const Interval& other) const;

  // Same endpoint values regardless of closedness, within atol.
  bool same_extent(const Interval& other, double atol) const;

  std::string str() const;

 private:
  double lo_, hi_;
  bool lo_closed_, hi_closed_;
};

}  // namespace infoloss
