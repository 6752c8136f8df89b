#include "infoloss/branch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace infoloss {

namespace {

constexpr double kWindowSpan = 1e6;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Value of f at an infinite domain end, probed from a finite anchor outward.
// A monotone map either settles (limit) or keeps moving (divergent).
double probe_limit(const RealFn& f, double anchor, int direction) {
  double prev = std::numeric_limits<double>::quiet_NaN();
  double last_step = 0.0;
  for (int k = 0; k <= 18; ++k) {
    double x = anchor + direction * std::pow(10.0, k);
    double v = f(x);
    if (std::isnan(v)) continue;
    if (std::isinf(v)) return v;
    if (!std::isnan(prev)) {
      last_step = v - prev;
      if (std::abs(last_step) <= 1e-9 * std::max(1.0, std::abs(v))) return v;
    }
    prev = v;
  }
  if (std::isnan(prev)) {
    throw std::invalid_argument("branch forward map undefined toward infinite end");
  }
  return last_step >= 0 ? kInf : -kInf;
}

Interval compute_image(const Interval& dom, Orientation orientation, const RealFn& f) {
  double vlo, vhi;
  if (dom.lo_finite()) {
    vlo = f(dom.lo());
  } else {
    vlo = probe_limit(f, dom.hi_finite() ? dom.hi() : 0.0, -1);
  }
  if (dom.hi_finite()) {
    vhi = f(dom.hi());
  } else {
    vhi = probe_limit(f, dom.lo_finite() ? dom.lo() : 0.0, +1);
  }
  if (std::isnan(vlo) || std::isnan(vhi)) {
    throw std::invalid_argument("branch forward map undefined at domain end");
  }
  double ilo, ihi;
  bool ilc, ihc;
  if (orientation == Orientation::kIncreasing) {
    ilo = vlo;
    ihi = vhi;
    ilc = dom.lo_closed();
    ihc = dom.hi_closed();
  } else {
    ilo = vhi;
    ihi = vlo;
    ilc = dom.hi_closed();
    ihc = dom.lo_closed();
  }
  if (!(ilo < ihi)) {
    throw std::invalid_argument("branch image is degenerate");
  }
  return Interval(ilo, ihi, ilc, ihc);
}

}  // namespace

Branch::Branch(Interval domain, Orientation orientation, RealFn forward,
               RealFn derivative, std::optional<RealFn> inverse,
               std::optional<Interval> image, std::optional<Interval> sample_hint,
               std::string label)
    : domain_(domain),
      orientation_(orientation),
      forward_(std::move(forward)),
      derivative_(std::move(derivative)),
      inverse_(std::move(inverse)),
      image_(image ? *image : compute_image(domain, orientation, forward_)),
      sample_hint_(std::move(sample_hint)),
      label_(std::move(label)) {
  if (!forward_ || !derivative_) {
    throw std::invalid_argument("branch requires forward map and derivative");
  }
  if (sample_hint_ && !sample_hint_->finite()) {
    throw std::invalid_argument("branch sample hint must be a finite interval");
  }
}

Interval Branch::sample_window() const {
  if (sample_hint_) return *sample_hint_;
  if (domain_.finite()) return domain_;
  double lo = domain_.lo(), hi = domain_.hi();
  bool lc = domain_.lo_closed(), hc = domain_.hi_closed();
  if (!std::isfinite(lo)) {
    lo = (std::isfinite(hi) ? hi : 0.0) - kWindowSpan;
    lc = true;
  }
  if (!std::isfinite(domain_.hi())) {
    hi = (std::isfinite(domain_.lo()) ? domain_.lo() : 0.0) + kWindowSpan;
    hc = true;
  }
  return Interval(lo, hi, lc, hc);
}

double Branch::inverse(double y) const {
  if (std::isnan(y)) return std::numeric_limits<double>::quiet_NaN();
  if (image_.lo_finite() && y < image_.lo()) y = image_.lo();
  if (image_.hi_finite() && y > image_.hi()) y = image_.hi();
  double x;
  if (inverse_) {
    x = (*inverse_)(y);
  } else {
    x = bisect_inverse(y);
  }
  if (domain_.lo_finite() && x < domain_.lo()) x = domain_.lo();
  if (domain_.hi_finite() && x > domain_.hi()) x = domain_.hi();
  return x;
}

double Branch::bisect_inverse(double y) const {
  int sgn = orientation_ == Orientation::kIncreasing ? 1 : -1;
  auto up = [&](double x) { return sgn * forward_(x); };
  double target = sgn * y;

  Interval w = sample_window();
  double a = w.lo(), b = w.hi();
  double fa = up(a), fb = up(b);

  double span = std::max(1.0, 0.5 * w.width());
  for (int guard = 0; fa > target; ++guard) {
    if (domain_.lo_finite() || guard >= 200) return a;
    a -= span;
    span *= 2;
    fa = up(a);
  }
  span = std::max(1.0, 0.5 * w.width());
  for (int guard = 0; fb < target; ++guard) {
    if (domain_.hi_finite() || guard >= 200) return b;
    b += span;
    span *= 2;
    fb = up(b);
  }

  for (int it = 0; it < 200; ++it) {
    double m = 0.5 * (a + b);
    if (!(m > a && m < b)) break;
    double fm = up(m);
    if (std::isnan(fm) || fm >= target) {
      b = m;
    } else {
      a = m;
    }
    if (b - a <= 1e-13 * std::max({1.0, std::abs(a), std::abs(b)})) break;
  }
  double ra = std::abs(up(a) - target), rb = std::abs(up(b) - target);
  return ra <= rb ? a : b;
}

std::optional<Branch> Branch::restricted(const Interval& clip) const {
  auto nd = domain_.intersect(clip);
  if (!nd) return std::nullopt;
  bool lo_same = nd->lo() == domain_.lo();
  bool hi_same = nd->hi() == domain_.hi();
  if (lo_same && hi_same && nd->lo_closed() == domain_.lo_closed() &&
      nd->hi_closed() == domain_.hi_closed()) {
    return *this;
  }

  bool increasing = orientation_ == Orientation::kIncreasing;
  double vlo = lo_same ? (increasing ? image_.lo() : image_.hi()) : forward_(nd->lo());
  double vhi = hi_same ? (increasing ? image_.hi() : image_.lo()) : forward_(nd->hi());
  double ilo = increasing ? vlo : vhi;
  double ihi = increasing ? vhi : vlo;
  if (std::isnan(ilo) || std::isnan(ihi) || !(ilo < ihi)) return std::nullopt;
  bool ilc = increasing ? nd->lo_closed() : nd->hi_closed();
  bool ihc = increasing ? nd->hi_closed() : nd->lo_closed();
  Interval image(ilo, ihi, ilc, ihc);

  std::optional<Interval> hint;
  if (sample_hint_) {
    hint = sample_hint_->intersect(*nd);
  }
  return Branch(*nd, orientation_, forward_, derivative_, inverse_, image, hint, label_);
}

}  // namespace infoloss
