#include "infoloss/interval.hpp"

#include <sstream>
#include <stdexcept>

namespace infoloss {

Interval::Interval(double lo, double hi, bool lo_closed, bool hi_closed)
    : lo_(lo), hi_(hi), lo_closed_(lo_closed), hi_closed_(hi_closed) {
  if (std::isnan(lo) || std::isnan(hi)) {
    throw std::invalid_argument("interval endpoint is NaN");
  }
  if (!(lo < hi)) {
    throw std::invalid_argument("interval requires lo < hi, got [" +
                                std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  if (!std::isfinite(lo_)) lo_closed_ = false;
  if (!std::isfinite(hi_)) hi_closed_ = false;
}

Interval Interval::whole_line() {
  return Interval(-std::numeric_limits<double>::infinity(),
                  std::numeric_limits<double>::infinity(), false, false);
}

bool Interval::contains(double x) const {
  if (std::isnan(x)) return false;
  if (x < lo_ || x > hi_) return false;
  if (x == lo_ && !lo_closed_) return false;
  if (x == hi_ && !hi_closed_) return false;
  return true;
}

bool Interval::contains_with_slack(double x, double slack) const {
  if (std::isnan(x)) return false;
  if (lo_finite() && x < lo_ - slack) return false;
  if (hi_finite() && x > hi_ + slack) return false;
  if (!lo_finite() && x < lo_) return false;
  if (!hi_finite() && x > hi_) return false;
  return true;
}

std::optional<Interval> Interval::intersect(const Interval& other) const {
  double lo;
  bool lc;
  if (lo_ > other.lo_) {
    lo = lo_;
    lc = lo_closed_;
  } else if (other.lo_ > lo_) {
    lo = other.lo_;
    lc = other.lo_closed_;
  } else {
    lo = lo_;
    lc = lo_closed_ && other.lo_closed_;
  }
  double hi;
  bool hc;
  if (hi_ < other.hi_) {
    hi = hi_;
    hc = hi_closed_;
  } else if (other.hi_ < hi_) {
    hi = other.hi_;
    hc = other.hi_closed_;
  } else {
    hi = hi_;
    hc = hi_closed_ && other.hi_closed_;
  }
  if (!(lo < hi)) return std::nullopt;
  return Interval(lo, hi, lc, hc);
}

bool Interval::same_extent(const Interval& other, double atol) const {
  auto close = [atol](double a, double b) {
    if (std::isinf(a) || std::isinf(b)) return a == b;
    return std::abs(a - b) <= atol;
  };
  return close(lo_, other.lo_) && close(hi_, other.hi_);
}

std::string Interval::str() const {
  std::ostringstream os;
  os << (lo_closed_ ? '[' : '(') << lo_ << ", " << hi_ << (hi_closed_ ? ']' : ')');
  return os.str();
}

}  // namespace infoloss
