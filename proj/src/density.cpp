#include "infoloss/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace infoloss {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kSqrt2Pi = 2.506628274631000502415765;

double acklam_estimate(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  double q = p - 0.5;
  double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double std_normal_quantile(double p) {
  if (std::isnan(p) || p < 0.0 || p > 1.0) {
    throw std::domain_error("quantile probability must lie in [0, 1]");
  }
  if (p == 0.0) return -kInf;
  if (p == 1.0) return kInf;
  bool flip = p > 0.5;
  double pt = flip ? 1.0 - p : p;
  double x = acklam_estimate(pt);
  for (int it = 0; it < 2; ++it) {
    double e = 0.5 * std::erfc(-x / kSqrt2) - pt;
    double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
    if (!std::isfinite(u)) break;
    x -= u / (1.0 + 0.5 * x * u);
  }
  return flip ? -x : x;
}

namespace {

class UniformDensity final : public Density {
 public:
  UniformDensity(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) {
      throw std::invalid_argument("uniform density needs finite lo < hi");
    }
  }

  double pdf(double x) const override {
    return (x >= lo_ && x <= hi_) ? 1.0 / (hi_ - lo_) : 0.0;
  }
  double cdf(double x) const override {
    if (x <= lo_) return 0.0;
    if (x >= hi_) return 1.0;
    return (x - lo_) / (hi_ - lo_);
  }
  double quantile(double p) const override {
    if (std::isnan(p) || p < 0.0 || p > 1.0) {
      throw std::domain_error("quantile probability must lie in [0, 1]");
    }
    return lo_ + p * (hi_ - lo_);
  }
  Interval support() const override { return Interval(lo_, hi_, true, true); }
  std::string describe() const override {
    std::ostringstream os;
    os << "uniform[" << lo_ << ", " << hi_ << "]";
    return os.str();
  }

 private:
  double lo_, hi_;
};

class NormalDensity final : public Density {
 public:
  NormalDensity(double sigma, double mean) : sigma_(sigma), mean_(mean) {
    if (!(std::isfinite(sigma) && sigma > 0.0) || !std::isfinite(mean)) {
      throw std::invalid_argument("normal density needs finite mean and sigma > 0");
    }
  }

  double pdf(double x) const override {
    double z = (x - mean_) / sigma_;
    return std::exp(-0.5 * z * z) / (sigma_ * kSqrt2Pi);
  }
  double cdf(double x) const override {
    double z = (x - mean_) / sigma_;
    return 0.5 * std::erfc(-z / kSqrt2);
  }
  double quantile(double p) const override {
    return mean_ + sigma_ * std_normal_quantile(p);
  }
  Interval support() const override { return Interval::whole_line(); }
  std::string describe() const override {
    std::ostringstream os;
    os << "normal(mean=" << mean_ << ", sigma=" << sigma_ << ")";
    return os.str();
  }

 private:
  double sigma_, mean_;
};

class PiecewisePdfDensity final : public Density {
 public:
  PiecewisePdfDensity(std::vector<double> xs, std::vector<double> ps)
      : xs_(std::move(xs)), ps_(std::move(ps)) {
    if (xs_.size() < 2 || xs_.size() != ps_.size()) {
      throw std::invalid_argument("piecewise pdf needs matching xs/ps with >= 2 knots");
    }
    for (std::size_t i = 0; i < xs_.size(); ++i) {
      if (!std::isfinite(xs_[i]) || !std::isfinite(ps_[i]) || ps_[i] < 0.0) {
        throw std::invalid_argument("piecewise pdf knots must be finite with ps >= 0");
      }
      if (i > 0 && !(xs_[i] > xs_[i - 1])) {
        throw std::invalid_argument("piecewise pdf xs must be strictly increasing");
      }
    }
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < xs_.size(); ++i) {
      total += 0.5 * (ps_[i] + ps_[i + 1]) * (xs_[i + 1] - xs_[i]);
    }
    if (!(total > 0.0)) {
      throw std::invalid_argument("piecewise pdf must enclose positive mass");
    }
    for (double& p : ps_) p /= total;
    cum_.assign(xs_.size(), 0.0);
    for (std::size_t i = 0; i + 1 < xs_.size(); ++i) {
      cum_[i + 1] = cum_[i] + 0.5 * (ps_[i] + ps_[i + 1]) * (xs_[i + 1] - xs_[i]);
    }
    cum_.back() = 1.0;
  }

  double pdf(double x) const override {
    if (x < xs_.front() || x > xs_.back()) return 0.0;
    std::size_t i = segment_of(x);
    double t = (x - xs_[i]) / (xs_[i + 1] - xs_[i]);
    return ps_[i] + t * (ps_[i + 1] - ps_[i]);
  }

  double cdf(double x) const override {
    if (x <= xs_.front()) return 0.0;
    if (x >= xs_.back()) return 1.0;
    std::size_t i = segment_of(x);
    double w = xs_[i + 1] - xs_[i];
    double t = (x - xs_[i]) / w;
    double m = w * (ps_[i] * t + 0.5 * (ps_[i + 1] - ps_[i]) * t * t);
    return std::min(1.0, cum_[i] + m);
  }

  double quantile(double p) const override {
    if (std::isnan(p) || p < 0.0 || p > 1.0) {
      throw std::domain_error("quantile probability must lie in [0, 1]");
    }
    if (p <= 0.0) return xs_.front();
    if (p >= 1.0) return xs_.back();
    std::size_t i =
        std::upper_bound(cum_.begin(), cum_.end(), p) - cum_.begin();
    i = std::min(std::max<std::size_t>(i, 1), cum_.size() - 1) - 1;
    double w = xs_[i + 1] - xs_[i];
    double target = (p - cum_[i]) / w;
    double p0 = ps_[i], slope = ps_[i + 1] - ps_[i];
    double t;
    if (std::abs(slope) <= 1e-14 * std::max(p0, 1e-300)) {
      t = p0 > 0 ? target / p0 : 0.0;
    } else {
      double disc = std::max(0.0, p0 * p0 + 2.0 * slope * target);
      t = (-p0 + std::sqrt(disc)) / slope;
    }
    t = std::clamp(t, 0.0, 1.0);
    return xs_[i] + t * w;
  }

  Interval support() const override {
    return Interval(xs_.front(), xs_.back(), true, true);
  }

  std::vector<double> interior_breakpoints() const override {
    return std::vector<double>(xs_.begin() + 1, xs_.end() - 1);
  }

  std::string describe() const override {
    std::ostringstream os;
    os << "piecewise_pdf(" << xs_.size() << " knots on [" << xs_.front() << ", "
       << xs_.back() << "])";
    return os.str();
  }

 private:
  std::size_t segment_of(double x) const {
    std::size_t i =
        std::upper_bound(xs_.begin(), xs_.end(), x) - xs_.begin();
    if (i == 0) return 0;
    if (i >= xs_.size()) return xs_.size() - 2;
    return i - 1;
  }

  std::vector<double> xs_, ps_;
  std::vector<double> cum_;
};

}  // namespace

DensityPtr uniform_density(double lo, double hi) {
  return std::make_shared<UniformDensity>(lo, hi);
}

DensityPtr uniform_halfwidth(double a) {
  if (!(a > 0.0)) throw std::invalid_argument("uniform halfwidth must be positive");
  return std::make_shared<UniformDensity>(-a, a);
}

DensityPtr normal_density(double sigma, double mean) {
  return std::make_shared<NormalDensity>(sigma, mean);
}

DensityPtr piecewise_pdf_density(std::vector<double> xs, std::vector<double> ps) {
  return std::make_shared<PiecewisePdfDensity>(std::move(xs), std::move(ps));
}

Interval truncated_support(const Density& d, double mass_eps) {
  if (!(mass_eps > 0.0 && mass_eps <= 1e-3)) {
    throw std::invalid_argument("mass_eps must lie in (0, 1e-3]");
  }
  Interval sup = d.support();
  double lo = sup.lo(), hi = sup.hi();
  bool lc = sup.lo_closed(), hc = sup.hi_closed();
  if (!sup.lo_finite()) {
    lo = d.quantile(0.5 * mass_eps);
    lc = true;
  }
  if (!sup.hi_finite()) {
    hi = d.quantile(1.0 - 0.5 * mass_eps);
    hc = true;
  }
  return Interval(lo, hi, lc, hc);
}

}  // namespace infoloss
