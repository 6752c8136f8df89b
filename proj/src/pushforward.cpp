#include "infoloss/pushforward.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace infoloss {

namespace {

constexpr double kDerivFloor = 1e-300;
constexpr double kCoverTol = 1e-12;

std::string join_issues(const std::vector<std::string>& issues) {
  std::string s;
  for (const auto& i : issues) {
    if (!s.empty()) s += "; ";
    s += i;
  }
  return s;
}

}  // namespace

PushforwardDensity::PushforwardDensity(PwmFunction g, DensityPtr source)
    : g_(std::move(g)), source_(std::move(source)), ysupport_(g_.image_hull()) {
  if (!source_) throw std::invalid_argument("pushforward needs a source density");
  // pdf kinks: images of branch ends and of source pdf breakpoints
  std::vector<double> candidates;
  for (const Branch& b : g_.branches()) {
    if (b.image().lo_finite()) candidates.push_back(b.image().lo());
    if (b.image().hi_finite()) candidates.push_back(b.image().hi());
  }
  for (double bx : source_->interior_breakpoints()) {
    int i = g_.branch_index_of(bx);
    if (i >= 0) candidates.push_back(g_.branch(i).forward(bx));
  }
  std::sort(candidates.begin(), candidates.end());
  for (double v : candidates) {
    if (!(v > ysupport_.lo() && v < ysupport_.hi())) continue;
    if (!ybreaks_.empty() &&
        v - ybreaks_.back() <= 1e-13 * std::max(1.0, std::abs(v))) {
      continue;
    }
    ybreaks_.push_back(v);
  }
}

double PushforwardDensity::pdf(double y) const {
  if (!ysupport_.contains_with_slack(y, 0.0)) return 0.0;
  PreimageSet pre = g_.preimage(y);
  double s = 0.0;
  for (const PreimagePoint& p : pre.points) {
    double fx = source_->pdf(p.x);
    if (fx <= 0.0) continue;
    double d = std::abs(g_.branch(p.branch_index).derivative(p.x));
    s += fx / std::max(d, kDerivFloor);
  }
  return s;
}

double PushforwardDensity::cdf(double y) const {
  if (std::isnan(y)) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (const Branch& b : g_.branches()) {
    const Interval& im = b.image();
    const Interval& dom = b.domain();
    double mass_lo = source_->cdf(dom.lo());
    double mass_hi = source_->cdf(dom.hi());
    if (y >= im.hi()) {
      s += mass_hi - mass_lo;
      continue;
    }
    if (y <= im.lo()) continue;
    double x = b.inverse(y);
    double fx = source_->cdf(x);
    if (b.orientation() == Orientation::kIncreasing) {
      s += std::max(0.0, fx - mass_lo);
    } else {
      s += std::max(0.0, mass_hi - fx);
    }
  }
  return std::clamp(s, 0.0, 1.0);
}

double PushforwardDensity::quantile(double p) const {
  if (std::isnan(p) || p < 0.0 || p > 1.0) {
    throw std::domain_error("quantile probability must lie in [0, 1]");
  }
  double a = ysupport_.lo(), b = ysupport_.hi();
  if (!std::isfinite(a)) {
    double anchor = std::isfinite(b) ? b : 0.0;
    double span = 1.0;
    a = anchor - span;
    for (int k = 0; k < 200 && cdf(a) > p; ++k) {
      span *= 2;
      a = anchor - span;
    }
  }
  if (!std::isfinite(b)) {
    double anchor = std::isfinite(ysupport_.lo()) ? ysupport_.lo() : 0.0;
    double span = 1.0;
    b = anchor + span;
    for (int k = 0; k < 200 && cdf(b) < p; ++k) {
      span *= 2;
      b = anchor + span;
    }
  }
  for (int it = 0; it < 200; ++it) {
    double m = 0.5 * (a + b);
    if (!(m > a && m < b)) break;
    if (cdf(m) < p) {
      a = m;
    } else {
      b = m;
    }
    if (b - a <= 1e-13 * std::max({1.0, std::abs(a), std::abs(b)})) break;
  }
  return 0.5 * (a + b);
}

double PushforwardDensity::sample(RngStream& rng) const {
  double x = source_->sample(rng);
  double y = g_.eval(x);
  if (std::isnan(y)) {
    // x fell into a measure-zero gap between branch domains; nudge to the
    // nearest branch end.
    int best = -1;
    double dist = std::numeric_limits<double>::infinity();
    for (int i = 0; i < g_.branch_count(); ++i) {
      const Interval& d = g_.branch(i).domain();
      double lo_d = std::abs(x - d.lo()), hi_d = std::abs(x - d.hi());
      double dd = std::min(lo_d, hi_d);
      if (dd < dist) {
        dist = dd;
        best = i;
      }
    }
    const Interval& d = g_.branch(best).domain();
    double xn = std::abs(x - d.lo()) <= std::abs(x - d.hi()) ? d.lo() : d.hi();
    y = g_.branch(best).forward(xn);
  }
  return y;
}

std::string PushforwardDensity::describe() const {
  std::ostringstream os;
  os << "pushforward(" << (g_.name().empty() ? "g" : g_.name()) << ", "
     << source_->describe() << ")";
  return os.str();
}

PwmFunction restrict_to_support(const PwmFunction& g, const Density& d) {
  Interval sup = d.support();
  PwmFunction r = g.restricted(sup);
  double cursor = sup.lo();
  for (const Branch& b : r.branches()) {
    double gap = d.cdf(b.domain().lo()) - d.cdf(cursor);
    if (gap > kCoverTol) {
      throw std::domain_error(
          "branch domains leave source mass uncovered below x=" +
          std::to_string(b.domain().lo()));
    }
    cursor = std::max(cursor, b.domain().hi());
  }
  double tail = 1.0 - d.cdf(cursor);
  if (std::isfinite(cursor) && tail > kCoverTol) {
    throw std::domain_error("branch domains leave source mass uncovered above x=" +
                            std::to_string(cursor));
  }
  return r;
}

DensityPtr pushforward(const PwmFunction& g, const DensityPtr& source) {
  if (!source) throw std::invalid_argument("pushforward needs a source density");
  PwmFunction r = restrict_to_support(g, *source);
  ValidationReport rep = r.validate(256);
  if (!rep.pass()) {
    throw ValidationError("pushforward input failed validation: " +
                          join_issues(rep.issues));
  }
  return std::make_shared<PushforwardDensity>(std::move(r), source);
}

}  // namespace infoloss
