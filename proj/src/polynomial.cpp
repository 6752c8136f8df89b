#include "infoloss/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace infoloss {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double eval_abs_scale(const std::vector<double>& c, double x) {
  double ax = std::abs(x);
  double s = 0.0, pw = 1.0;
  for (double a : c) {
    s += std::abs(a) * pw;
    pw *= std::max(1.0, ax);
  }
  return s;
}

double bisect_root(const Polynomial& p, double a, double b, double pa) {
  for (int it = 0; it < 200; ++it) {
    double m = 0.5 * (a + b);
    if (!(m > a && m < b)) break;
    double pm = p(m);
    if (pm == 0.0) return m;
    if ((pa < 0) == (pm < 0)) {
      a = m;
      pa = pm;
    } else {
      b = m;
    }
    if (b - a <= 1e-15 * std::max({1.0, std::abs(a), std::abs(b)})) break;
  }
  return 0.5 * (a + b);
}

}  // namespace

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.push_back(0.0);
  for (double a : coeffs_) {
    if (!std::isfinite(a)) throw std::invalid_argument("polynomial coefficient not finite");
  }
}

double Polynomial::operator()(double x) const {
  double v = 0.0;
  for (std::size_t k = coeffs_.size(); k-- > 0;) v = v * x + coeffs_[k];
  return v;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return Polynomial({0.0});
  std::vector<double> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) {
    d[k - 1] = coeffs_[k] * static_cast<double>(k);
  }
  return Polynomial(std::move(d));
}

int Polynomial::degree() const {
  for (std::size_t k = coeffs_.size(); k-- > 0;) {
    if (coeffs_[k] != 0.0) return static_cast<int>(k);
  }
  return 0;
}

double Polynomial::root_bound() const {
  int n = degree();
  if (n == 0) return 1.0;
  double an = std::abs(coeffs_[n]);
  double m = 0.0;
  for (int k = 0; k < n; ++k) m = std::max(m, std::abs(coeffs_[k]));
  return 1.0 + m / an;
}

std::vector<double> Polynomial::real_roots(double lo, double hi) const {
  std::vector<double> roots;
  int n = degree();
  auto in_range = [&](double r) { return r >= lo && r <= hi && std::isfinite(r); };

  if (n == 0) return roots;
  if (n == 1) {
    double r = -coeffs_[0] / coeffs_[1];
    if (in_range(r)) roots.push_back(r);
    return roots;
  }
  if (n == 2) {
    double a = coeffs_[2], b = coeffs_[1], c = coeffs_[0];
    double disc = b * b - 4 * a * c;
    if (disc >= 0) {
      double sq = std::sqrt(disc);
      double q = -0.5 * (b + (b >= 0 ? sq : -sq));
      double r1 = q / a;
      double r2 = (q != 0.0) ? c / q : r1;
      if (in_range(r1)) roots.push_back(r1);
      if (std::abs(r2 - r1) > 1e-14 * std::max(1.0, std::abs(r1)) && in_range(r2)) {
        roots.push_back(r2);
      }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
  }

  double bound = root_bound();
  double a = std::max(lo, -bound), b = std::min(hi, bound);
  if (!(a < b)) return roots;

  std::vector<double> nodes = derivative().real_roots(a, b);
  nodes.push_back(a);
  nodes.push_back(b);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  auto push = [&](double r) {
    if (!in_range(r)) return;
    for (double s : roots) {
      if (std::abs(r - s) <= 1e-10 * std::max(1.0, std::abs(r))) return;
    }
    roots.push_back(r);
  };

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    double u = nodes[i];
    double pu = (*this)(u);
    if (std::abs(pu) <= 64 * kEps * (n + 1) * eval_abs_scale(coeffs_, u)) push(u);
    if (i + 1 < nodes.size()) {
      double v = nodes[i + 1];
      double pv = (*this)(v);
      if ((pu < 0 && pv > 0) || (pu > 0 && pv < 0)) {
        push(bisect_root(*this, u, v, pu));
      }
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

PwmFunction from_polynomial(const std::vector<double>& coeffs, const Interval& domain,
                            std::string name) {
  Polynomial p(coeffs);
  if (p.degree() < 1) {
    throw std::invalid_argument("polynomial must have degree >= 1");
  }
  Polynomial dp = p.derivative();

  std::vector<double> cuts = dp.real_roots(domain.lo(), domain.hi());
  cuts.erase(std::remove_if(cuts.begin(), cuts.end(),
                            [&](double c) { return !(c > domain.lo() && c < domain.hi()); }),
             cuts.end());

  std::vector<double> edges;
  edges.push_back(domain.lo());
  for (double c : cuts) edges.push_back(c);
  edges.push_back(domain.hi());

  auto fwd = [p](double x) { return p(x); };
  auto der = [dp](double x) { return dp(x); };

  std::vector<Branch> branches;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    double u = edges[i], v = edges[i + 1];
    bool lc = (i == 0) ? domain.lo_closed() : true;
    bool hc = (i + 2 == edges.size()) ? domain.hi_closed() : false;
    Interval d(u, v, lc, hc);

    double probe;
    if (std::isfinite(u) && std::isfinite(v)) {
      probe = 0.5 * (u + v);
    } else if (std::isfinite(u)) {
      probe = u + 1.0;
    } else if (std::isfinite(v)) {
      probe = v - 1.0;
    } else {
      probe = 0.0;
    }
    double slope = dp(probe);
    for (double frac : {0.25, 0.75, 0.4, 0.6}) {
      if (slope != 0.0) break;
      if (std::isfinite(u) && std::isfinite(v)) slope = dp(u + frac * (v - u));
    }
    if (slope == 0.0) {
      throw std::invalid_argument("polynomial is flat on a subinterval");
    }
    Orientation o = slope > 0 ? Orientation::kIncreasing : Orientation::kDecreasing;
    branches.emplace_back(d, o, fwd, der, std::nullopt, std::nullopt, std::nullopt,
                          "piece" + std::to_string(i + 1));
  }
  if (name.empty()) name = "poly_deg" + std::to_string(p.degree());
  return PwmFunction(std::move(branches), std::move(name));
}

}  // namespace infoloss
