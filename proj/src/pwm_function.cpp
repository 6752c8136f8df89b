#include "infoloss/pwm_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace infoloss {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

}  // namespace

PwmFunction::PwmFunction(std::vector<Branch> branches, std::string name)
    : branches_(std::move(branches)), name_(std::move(name)) {
  if (branches_.empty()) {
    throw std::invalid_argument("piecewise function needs at least one branch");
  }
  std::stable_sort(branches_.begin(), branches_.end(),
                   [](const Branch& a, const Branch& b) {
                     if (a.domain().lo() != b.domain().lo())
                       return a.domain().lo() < b.domain().lo();
                     return a.domain().hi() < b.domain().hi();
                   });
}

Interval PwmFunction::domain_hull() const {
  double lo = branches_.front().domain().lo();
  double hi = branches_.front().domain().hi();
  bool lc = branches_.front().domain().lo_closed();
  bool hc = branches_.front().domain().hi_closed();
  for (const Branch& b : branches_) {
    if (b.domain().lo() < lo) {
      lo = b.domain().lo();
      lc = b.domain().lo_closed();
    }
    if (b.domain().hi() > hi) {
      hi = b.domain().hi();
      hc = b.domain().hi_closed();
    }
  }
  return Interval(lo, hi, lc, hc);
}

Interval PwmFunction::image_hull() const {
  double lo = branches_.front().image().lo();
  double hi = branches_.front().image().hi();
  bool lc = branches_.front().image().lo_closed();
  bool hc = branches_.front().image().hi_closed();
  for (const Branch& b : branches_) {
    if (b.image().lo() < lo) {
      lo = b.image().lo();
      lc = b.image().lo_closed();
    }
    if (b.image().hi() > hi) {
      hi = b.image().hi();
      hc = b.image().hi_closed();
    }
  }
  return Interval(lo, hi, lc, hc);
}

int PwmFunction::branch_index_of(double x) const {
  for (std::size_t i = 0; i < branches_.size(); ++i) {
    if (branches_[i].domain().contains(x)) return static_cast<int>(i);
  }
  return -1;
}

double PwmFunction::eval(double x) const {
  int i = branch_index_of(x);
  return i < 0 ? kNan : branches_[i].forward(x);
}

double PwmFunction::abs_derivative(double x) const {
  int i = branch_index_of(x);
  return i < 0 ? kNan : std::abs(branches_[i].derivative(x));
}

PreimageSet PwmFunction::preimage(double y) const {
  PreimageSet out{y, {}};
  if (std::isnan(y)) return out;
  for (std::size_t i = 0; i < branches_.size(); ++i) {
    const Branch& br = branches_[i];
    const Interval& im = br.image();
    double scale = std::max({1.0, std::abs(y),
                             im.lo_finite() ? std::abs(im.lo()) : 0.0,
                             im.hi_finite() ? std::abs(im.hi()) : 0.0});
    if (!im.contains_with_slack(y, 16 * kEps * scale)) continue;
    double x = br.inverse(y);
    if (std::isnan(x)) continue;
    double res = std::abs(br.forward(x) - y);
    double tol = 1e-8 * std::max(1.0, std::abs(y)) +
                 std::abs(br.derivative(x)) * 1e-11 * std::max(1.0, std::abs(x));
    if (res <= tol) out.points.push_back({x, static_cast<int>(i)});
  }
  std::sort(out.points.begin(), out.points.end(),
            [](const PreimagePoint& a, const PreimagePoint& b) { return a.x < b.x; });
  // Roots from adjacent branches can land on the shared boundary point;
  // keep a single copy, preferring the branch that actually contains it.
  std::vector<PreimagePoint> merged;
  for (const PreimagePoint& p : out.points) {
    if (!merged.empty()) {
      double span = 1e-12 * std::max({1.0, std::abs(p.x), std::abs(merged.back().x)});
      if (std::abs(p.x - merged.back().x) <= span) {
        if (!branches_[merged.back().branch_index].domain().contains(merged.back().x) &&
            branches_[p.branch_index].domain().contains(p.x)) {
          merged.back() = p;
        }
        continue;
      }
    }
    merged.push_back(p);
  }
  out.points = std::move(merged);
  return out;
}

ValidationReport PwmFunction::validate(int grid_points_per_branch) const {
  if (grid_points_per_branch < 16) {
    throw std::invalid_argument("grid_points_per_branch must be >= 16");
  }
  const int n = grid_points_per_branch;
  ValidationReport rep;

  for (std::size_t i = 0; i + 1 < branches_.size(); ++i) {
    const Interval& a = branches_[i].domain();
    const Interval& b = branches_[i + 1].domain();
    bool ok = a.hi() < b.lo() ||
              (a.hi() == b.lo() && !(a.hi_closed() && b.lo_closed()));
    if (!ok) {
      rep.branches_ordered = false;
      std::ostringstream os;
      os << "branch domains overlap: " << a.str() << " and " << b.str();
      rep.issues.push_back(os.str());
    }
  }

  for (std::size_t i = 0; i < branches_.size(); ++i) {
    const Branch& br = branches_[i];
    std::string tag = br.label().empty()
                          ? "branch " + std::to_string(i)
                          : br.label();
    Interval w = br.sample_window();
    int sgn = br.orientation() == Orientation::kIncreasing ? 1 : -1;

    std::vector<double> xs(n), vals(n), dvs(n);
    for (int j = 0; j < n; ++j) {
      xs[j] = w.lo() + w.width() * j / (n - 1);
      vals[j] = br.forward(xs[j]);
      dvs[j] = br.derivative(xs[j]);
    }

    for (int j = 0; j < n; ++j) {
      if (std::isnan(vals[j]) || std::isnan(dvs[j])) {
        rep.values_finite = false;
        rep.issues.push_back(tag + ": NaN at sampled point");
        break;
      }
    }
    if (!rep.values_finite) continue;

    for (int j = 0; j + 1 < n; ++j) {
      if (!(sgn * (vals[j + 1] - vals[j]) > 0)) {
        rep.monotone_ok = false;
        std::ostringstream os;
        os << tag << ": not strictly monotone near x=" << xs[j];
        rep.issues.push_back(os.str());
        break;
      }
    }

    double dscale = 0.0;
    for (int j = 0; j < n; ++j) dscale = std::max(dscale, std::abs(dvs[j]));
    for (int j = 0; j < n; ++j) {
      double d = sgn * dvs[j];
      bool endpoint = j == 0 || j == n - 1;
      // turning points sit at branch ends, so rounding may leave the endpoint
      // derivative tiny with either sign
      if (d < (endpoint ? -1e-9 * dscale : 0.0) || (!endpoint && d == 0)) {
        rep.derivative_sign_ok = false;
        std::ostringstream os;
        os << tag << ": derivative sign mismatch at x=" << xs[j];
        rep.issues.push_back(os.str());
        break;
      }
    }

    for (int j = 0; j + 1 < n; ++j) {
      double ym = 0.5 * (vals[j] + vals[j + 1]);
      double xh = br.inverse(ym);
      double res = std::abs(br.forward(xh) - ym) / std::max(1.0, std::abs(ym));
      rep.max_inverse_residual = std::max(rep.max_inverse_residual, res);
    }
  }
  if (rep.max_inverse_residual > 1e-8) {
    rep.inverse_ok = false;
    std::ostringstream os;
    os << "inverse round-trip residual " << rep.max_inverse_residual << " exceeds 1e-8";
    rep.issues.push_back(os.str());
  }
  return rep;
}

PwmFunction PwmFunction::restricted(const Interval& clip) const {
  std::vector<Branch> kept;
  for (const Branch& b : branches_) {
    auto r = b.restricted(clip);
    if (r) kept.push_back(std::move(*r));
  }
  if (kept.empty()) {
    throw std::domain_error("restriction to " + clip.str() + " leaves no branches");
  }
  return PwmFunction(std::move(kept), name_);
}

}  // namespace infoloss
