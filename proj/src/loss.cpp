#include "infoloss/loss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "infoloss/pushforward.hpp"
#include "infoloss/quadrature.hpp"

namespace infoloss {

namespace {

constexpr double kLn2 = 0.693147180559945309417232;
constexpr double kDerivFloor = 1e-300;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string join_issues(const std::vector<std::string>& issues) {
  std::string s;
  for (const auto& i : issues) {
    if (!s.empty()) s += "; ";
    s += i;
  }
  return s;
}

std::vector<double> sorted_unique(std::vector<double> v, double scale) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v) {
    if (!out.empty() && x - out.back() <= 1e-12 * std::max({1.0, scale, std::abs(x)})) {
      continue;
    }
    out.push_back(x);
  }
  return out;
}

PwmFunction restrict_and_validate(const PwmFunction& g, const Density& d) {
  PwmFunction r = restrict_to_support(g, d);
  ValidationReport rep = r.validate(256);
  if (!rep.pass()) {
    throw ValidationError("function model failed validation: " + join_issues(rep.issues));
  }
  return r;
}

struct Prepared {
  PwmFunction g;
  DensityPtr d;
  std::shared_ptr<const PushforwardDensity> pf;
  Interval xwin;
  std::vector<double> xbreaks;
  Interval ywin;
  std::vector<double> ybreaks;

  Prepared(const PwmFunction& raw, const DensityPtr& dens, const QuadratureConfig& cfg)
      : g(restrict_and_validate(raw, *dens)),
        d(dens),
        pf(std::make_shared<PushforwardDensity>(g, dens)),
        xwin(truncated_support(*dens, cfg.mass_eps)),
        ywin(truncated_support(*pf, cfg.mass_eps)) {
    double xscale = std::max(std::abs(xwin.lo()), std::abs(xwin.hi()));
    std::vector<double> xb;
    std::vector<double> yvals;
    for (const Branch& b : g.branches()) {
      for (double e : {b.domain().lo(), b.domain().hi()}) {
        if (std::isfinite(e) && e > xwin.lo() && e < xwin.hi()) xb.push_back(e);
      }
      for (double e : {b.image().lo(), b.image().hi()}) {
        if (std::isfinite(e)) yvals.push_back(e);
      }
    }
    for (double v : yvals) {
      for (const PreimagePoint& p : g.preimage(v).points) {
        if (p.x > xwin.lo() && p.x < xwin.hi()) xb.push_back(p.x);
      }
    }
    for (double bx : d->interior_breakpoints()) {
      if (bx > xwin.lo() && bx < xwin.hi()) xb.push_back(bx);
    }
    xbreaks = sorted_unique(std::move(xb), xscale);

    double yscale = std::max(std::abs(ywin.lo()), std::abs(ywin.hi()));
    std::vector<double> yb;
    for (double v : pf->interior_breakpoints()) {
      if (v > ywin.lo() && v < ywin.hi()) yb.push_back(v);
    }
    ybreaks = sorted_unique(std::move(yb), yscale);
  }

  // Ratio of the full preimage density to the own-branch term at x, minus 1;
  // exactly 0 where g is locally invertible. Returns the pdf at x through fx.
  double excess_ratio(double x, double* fx_out) const {
    double fx = d->pdf(x);
    *fx_out = fx;
    if (!(fx > 0.0)) return 0.0;
    int bi = g.branch_index_of(x);
    if (bi < 0) return 0.0;
    double own = fx / std::max(std::abs(g.branch(bi).derivative(x)), kDerivFloor);
    double y = g.branch(bi).forward(x);
    double other = 0.0;
    for (const PreimagePoint& p : g.preimage(y).points) {
      if (p.branch_index == bi) continue;
      double fxi = d->pdf(p.x);
      if (fxi <= 0.0) continue;
      other += fxi / std::max(std::abs(g.branch(p.branch_index).derivative(p.x)),
                              kDerivFloor);
    }
    return other / own;
  }
};

void check_config(const QuadratureConfig& c) {
  if (!(c.abs_tol > 0.0) || !(c.rel_tol >= 0.0)) {
    throw std::invalid_argument("quadrature tolerances must be positive");
  }
  if (c.max_depth < 4 || c.max_depth > 60) {
    throw std::invalid_argument("max_depth must lie in [4, 60]");
  }
  if (!(c.mass_eps > 0.0) || c.mass_eps > 1e-6) {
    throw std::invalid_argument("mass_eps must lie in (0, 1e-6]");
  }
  if (!(c.singularity_pad > 0.0) || c.singularity_pad > 1e-6) {
    throw std::invalid_argument("singularity_pad must lie in (0, 1e-6]");
  }
}

double region_mid(double u, double v, double span) {
  if (std::isfinite(u) && std::isfinite(v)) return u + 0.5 * (v - u);
  if (std::isfinite(u)) return u + std::max(1.0, 0.01 * span);
  if (std::isfinite(v)) return v - std::max(1.0, 0.01 * span);
  return 0.0;
}

BoundChain bounds_impl(const Prepared& P) {
  BoundChain bc;
  bc.L = P.g.branch_count();
  bc.bound3_bits = std::log2(static_cast<double>(bc.L));

  double image_mass_sum = 0.0;
  std::vector<double> edges;
  for (const Branch& b : P.g.branches()) {
    image_mass_sum += P.pf->cdf(b.image().hi()) - P.pf->cdf(b.image().lo());
    if (b.image().lo_finite()) edges.push_back(b.image().lo());
    if (b.image().hi_finite()) edges.push_back(b.image().hi());
  }
  bc.bound2_bits = std::log2(std::max(image_mass_sum, 1.0));

  double yscale = 1.0;
  for (double e : edges) yscale = std::max(yscale, std::abs(e));
  edges = sorted_unique(std::move(edges), yscale);
  double span = edges.empty() ? 1.0 : std::max(1.0, edges.back() - edges.front());

  std::vector<double> cuts;
  cuts.push_back(-kInf);
  for (double e : edges) cuts.push_back(e);
  cuts.push_back(kInf);
  double b1 = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double mass = P.pf->cdf(cuts[i + 1]) - P.pf->cdf(cuts[i]);
    if (!(mass > 0.0)) continue;
    double mid = region_mid(cuts[i], cuts[i + 1], span);
    int k = 0;
    for (const Branch& b : P.g.branches()) {
      if (b.image().contains(mid)) ++k;
    }
    if (k >= 1) b1 += mass * std::log2(static_cast<double>(k));
  }
  bc.bound1_bits = std::max(0.0, b1);
  return bc;
}

double bijective_mass_impl(const Prepared& P) {
  Interval hull = P.g.domain_hull();
  std::vector<double> cuts;
  cuts.push_back(hull.lo());
  for (double c : P.xbreaks) {
    if (c > hull.lo() && c < hull.hi()) cuts.push_back(c);
  }
  cuts.push_back(hull.hi());
  double span = P.xwin.width();

  double mass_bij = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double u = cuts[i], v = cuts[i + 1];
    double mass = P.d->cdf(v) - P.d->cdf(u);
    if (!(mass > 0.0)) continue;
    std::size_t k = 0;
    for (double frac : {0.5, 0.31, 0.69}) {
      double mid;
      if (std::isfinite(u) && std::isfinite(v)) {
        mid = u + frac * (v - u);
      } else if (std::isfinite(v)) {
        mid = v - std::max(1.0, 0.01 * span) * (0.5 + frac);
      } else if (std::isfinite(u)) {
        mid = u + std::max(1.0, 0.01 * span) * (0.5 + frac);
      } else {
        mid = 0.0;
      }
      double y = P.g.eval(mid);
      if (std::isnan(y)) continue;
      k = P.g.preimage(y).size();
      break;
    }
    if (k == 1) mass_bij += mass;
  }
  return mass_bij;
}

double truncation_bits(const Prepared& P, const QuadratureConfig& cfg) {
  double l2 = std::log2(std::max(2.0, static_cast<double>(P.g.branch_count())));
  return cfg.mass_eps * (l2 + 20.0);
}

}  // namespace

double output_density_at(const PwmFunction& g, const DensityPtr& d, double y) {
  if (!d) throw std::invalid_argument("density required");
  PwmFunction r = restrict_and_validate(g, *d);
  double s = 0.0;
  for (const PreimagePoint& p : r.preimage(y).points) {
    double fx = d->pdf(p.x);
    if (fx <= 0.0) continue;
    s += fx / std::max(std::abs(r.branch(p.branch_index).derivative(p.x)), kDerivFloor);
  }
  return s;
}

std::vector<std::pair<int, double>> branch_posterior(const PwmFunction& g,
                                                     const DensityPtr& d, double y) {
  if (!d) throw std::invalid_argument("density required");
  PwmFunction r = restrict_and_validate(g, *d);
  std::vector<std::pair<int, double>> terms;
  double fy = 0.0;
  for (const PreimagePoint& p : r.preimage(y).points) {
    double fx = d->pdf(p.x);
    if (fx <= 0.0) continue;
    double t = fx / std::max(std::abs(r.branch(p.branch_index).derivative(p.x)),
                             kDerivFloor);
    terms.emplace_back(p.branch_index, t);
    fy += t;
  }
  if (!(fy > 0.0)) {
    throw std::domain_error("branch posterior undefined: output density is zero at y");
  }
  for (auto& t : terms) t.second /= fy;
  return terms;
}

LossReport info_loss(const PwmFunction& g, const DensityPtr& d,
                     const QuadratureConfig& cfg) {
  check_config(cfg);
  if (!d) throw std::invalid_argument("density required");
  Prepared P(g, d, cfg);

  auto integrand = [&P](double x) {
    double fx;
    double excess = P.excess_ratio(x, &fx);
    if (!(fx > 0.0) || !(excess > 0.0)) return 0.0;
    double v = fx * std::log1p(excess);
    return std::isfinite(v) ? v : 0.0;
  };

  // sqrt-transform both segment ends: a cascaded source density can carry
  // inverse square root spikes at its support ends and breakpoints
  double pad = cfg.singularity_pad * P.xwin.width();
  std::vector<Segment> segs;
  double pad_err = 0.0;
  double cursor = P.xwin.lo();
  for (double c : P.xbreaks) {
    if (c - pad > cursor) segs.push_back({cursor, c - pad, true, true});
    pad_err += pad * (std::abs(integrand(c - pad)) + std::abs(integrand(c + pad)));
    cursor = c + pad;
  }
  if (P.xwin.hi() > cursor) segs.push_back({cursor, P.xwin.hi(), true, true});

  QuadOptions qo;
  qo.abs_tol = cfg.abs_tol * kLn2;
  qo.rel_tol = cfg.rel_tol;
  qo.max_depth = cfg.max_depth;
  QuadResult R = integrate_segments(integrand, segs, qo);

  LossReport rep;
  BoundChain bc = bounds_impl(P);
  rep.bound1_bits = bc.bound1_bits;
  rep.bound2_bits = bc.bound2_bits;
  rep.bound3_bits = bc.bound3_bits;
  rep.L = bc.L;
  rep.bijective_mass = bijective_mass_impl(P);
  rep.method = "quadrature_x";
  rep.loss_bits = R.value / kLn2;
  rep.error_estimate_bits = (R.error + pad_err) / kLn2 + truncation_bits(P, cfg);
  rep.converged = R.converged;
  return rep;
}

LossReport info_loss_via_W(const PwmFunction& g, const DensityPtr& d,
                           const QuadratureConfig& cfg) {
  check_config(cfg);
  if (!d) throw std::invalid_argument("density required");
  Prepared P(g, d, cfg);

  auto integrand = [&P](double y) {
    PreimageSet pre = P.g.preimage(y);
    if (pre.empty()) return 0.0;
    double terms[64];
    int n = 0;
    double fy = 0.0;
    for (const PreimagePoint& p : pre.points) {
      double fx = P.d->pdf(p.x);
      if (fx <= 0.0) continue;
      double t = fx / std::max(std::abs(P.g.branch(p.branch_index).derivative(p.x)),
                               kDerivFloor);
      if (n < 64) terms[n++] = t;
      fy += t;
    }
    if (!(fy > 0.0)) return 0.0;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      if (terms[i] > 0.0) s += terms[i] * std::log(fy / terms[i]);
    }
    return std::isfinite(s) ? s : 0.0;
  };

  std::vector<Segment> segs;
  double cursor = P.ywin.lo();
  for (double c : P.ybreaks) {
    if (c > cursor) segs.push_back({cursor, c, true, true});
    cursor = c;
  }
  if (P.ywin.hi() > cursor) segs.push_back({cursor, P.ywin.hi(), true, true});

  QuadOptions qo;
  qo.abs_tol = cfg.abs_tol * kLn2;
  qo.rel_tol = cfg.rel_tol;
  qo.max_depth = cfg.max_depth;
  QuadResult R = integrate_segments(integrand, segs, qo);

  LossReport rep;
  BoundChain bc = bounds_impl(P);
  rep.bound1_bits = bc.bound1_bits;
  rep.bound2_bits = bc.bound2_bits;
  rep.bound3_bits = bc.bound3_bits;
  rep.L = bc.L;
  rep.bijective_mass = bijective_mass_impl(P);
  rep.method = "quadrature_w";
  rep.loss_bits = R.value / kLn2;
  rep.error_estimate_bits = R.error / kLn2 + truncation_bits(P, cfg);
  rep.converged = R.converged;
  return rep;
}

BoundChain bounds(const PwmFunction& g, const DensityPtr& d, double mass_eps) {
  QuadratureConfig cfg;
  cfg.mass_eps = mass_eps;
  check_config(cfg);
  if (!d) throw std::invalid_argument("density required");
  Prepared P(g, d, cfg);
  return bounds_impl(P);
}

double bijective_mass(const PwmFunction& g, const DensityPtr& d) {
  QuadratureConfig cfg;
  if (!d) throw std::invalid_argument("density required");
  Prepared P(g, d, cfg);
  return bijective_mass_impl(P);
}

TightnessReport tightness_check(const PwmFunction& g, const DensityPtr& d, int grid,
                                double tol) {
  if (grid < 16) throw std::invalid_argument("tightness grid must be >= 16");
  QuadratureConfig cfg;
  if (!d) throw std::invalid_argument("density required");
  Prepared P(g, d, cfg);

  TightnessReport rep;
  rep.L = P.g.branch_count();
  rep.tol = tol;

  double W = P.xwin.width();
  std::vector<double> rs;
  std::vector<int> region_of;
  rs.reserve(grid);
  for (int j = 0; j < grid; ++j) {
    double x = P.xwin.lo() + (j + 0.5) / grid * W;
    bool near_break = false;
    for (double c : P.xbreaks) {
      if (std::abs(x - c) < 1e-9 * W) {
        near_break = true;
        break;
      }
    }
    if (near_break) continue;
    double fx;
    double excess = P.excess_ratio(x, &fx);
    if (!(fx > 0.0)) continue;
    int region = static_cast<int>(
        std::upper_bound(P.xbreaks.begin(), P.xbreaks.end(), x) - P.xbreaks.begin());
    rs.push_back(1.0 + excess);
    region_of.push_back(region);
  }
  if (rs.empty()) return rep;

  int n_regions = static_cast<int>(P.xbreaks.size()) + 1;
  std::vector<double> sum(n_regions, 0.0);
  std::vector<int> cnt(n_regions, 0);
  double gsum = 0.0;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    sum[region_of[i]] += rs[i];
    cnt[region_of[i]] += 1;
    gsum += rs[i];
  }
  rep.global_mean = gsum / rs.size();
  for (std::size_t i = 0; i < rs.size(); ++i) {
    double rmean = sum[region_of[i]] / cnt[region_of[i]];
    rep.regional_dev = std::max(rep.regional_dev, std::abs(rs[i] - rmean));
    rep.global_dev = std::max(rep.global_dev, std::abs(rs[i] - rep.global_mean));
  }

  rep.images_coincide = true;
  double yscale = 1.0;
  for (const Branch& b : P.g.branches()) {
    if (b.image().lo_finite()) yscale = std::max(yscale, std::abs(b.image().lo()));
    if (b.image().hi_finite()) yscale = std::max(yscale, std::abs(b.image().hi()));
  }
  for (int i = 1; i < P.g.branch_count(); ++i) {
    if (!P.g.branch(i).image().same_extent(P.g.branch(0).image(), 1e-9 * yscale)) {
      rep.images_coincide = false;
      break;
    }
  }

  rep.bound1_tight = rep.regional_dev <= tol;
  rep.bound2_tight = rep.global_dev <= tol;
  rep.bound3_tight = rep.bound2_tight && rep.images_coincide &&
                     std::abs(rep.global_mean - rep.L) <= std::max(tol, 1e-9 * rep.L);
  return rep;
}

}  // namespace infoloss
