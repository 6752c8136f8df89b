#include "infoloss/tight.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace infoloss {

namespace {

constexpr double kHintTail = 1e-10;

void check_shape(const DensityPtr& d, int L, const std::vector<int>& signs) {
  if (!d) throw std::invalid_argument("density required");
  if (L < 1) throw std::invalid_argument("branch count must be >= 1");
  if (static_cast<int>(signs.size()) != L) {
    throw std::invalid_argument("signs must have one entry per branch");
  }
  for (int s : signs) {
    if (s != 1 && s != -1) throw std::invalid_argument("signs entries must be +1 or -1");
  }
}

}  // namespace

PwmFunction build_cdf_piecewise(const DensityPtr& d, int L, const std::vector<int>& signs,
                                const std::vector<double>& offsets,
                                std::vector<double> boundaries) {
  check_shape(d, L, signs);
  if (static_cast<int>(offsets.size()) != L) {
    throw std::invalid_argument("offsets must have one entry per branch");
  }
  Interval sup = d->support();
  if (boundaries.empty()) {
    for (int l = 1; l < L; ++l) {
      boundaries.push_back(d->quantile(static_cast<double>(l) / L));
    }
  }
  if (static_cast<int>(boundaries.size()) != L - 1) {
    throw std::invalid_argument("boundaries must have L-1 entries");
  }
  for (int l = 0; l < L - 1; ++l) {
    if (!(boundaries[l] > sup.lo() && boundaries[l] < sup.hi())) {
      throw std::invalid_argument("boundaries must lie strictly inside the support");
    }
    if (l > 0 && !(boundaries[l] > boundaries[l - 1])) {
      throw std::invalid_argument("boundaries must be strictly increasing");
    }
  }

  std::vector<double> edges;
  edges.push_back(sup.lo());
  for (double b : boundaries) edges.push_back(b);
  edges.push_back(sup.hi());

  std::vector<double> cdf_at(L + 1);
  cdf_at[0] = 0.0;
  cdf_at[L] = 1.0;
  for (int l = 1; l < L; ++l) cdf_at[l] = d->cdf(edges[l]);

  double hint_lo = d->quantile(kHintTail);
  double hint_hi = d->quantile(1.0 - kHintTail);

  std::vector<Branch> out;
  for (int l = 0; l < L; ++l) {
    double u = edges[l], v = edges[l + 1];
    bool lc = l == 0 ? sup.lo_closed() : true;
    bool hc = l + 1 == L ? sup.hi_closed() : false;
    Interval dom(u, v, lc, hc);

    double wl = std::max(u, hint_lo), wh = std::min(v, hint_hi);
    if (!(wl < wh)) {
      throw std::invalid_argument("branch cell lies outside the usable density range");
    }
    Interval hint(wl, wh, true, true);

    for (int j = 0; j < 64; ++j) {
      double x = wl + (wh - wl) * (j + 0.5) / 64.0;
      if (!(d->pdf(x) > 0.0)) {
        throw std::invalid_argument("pdf must stay positive inside each cell");
      }
    }

    double b = signs[l];
    double c = offsets[l];
    auto fwd = [d, b, c](double x) { return b * d->cdf(x) + c; };
    auto der = [d, b](double x) { return b * d->pdf(x); };
    RealFn inv = [d, b, c](double y) {
      return d->quantile(std::clamp(b * (y - c), 0.0, 1.0));
    };

    double flo = b * cdf_at[l] + c, fhi = b * cdf_at[l + 1] + c;
    Orientation o = b > 0 ? Orientation::kIncreasing : Orientation::kDecreasing;
    double ilo = std::min(flo, fhi), ihi = std::max(flo, fhi);
    bool ilc = o == Orientation::kIncreasing ? lc : hc;
    bool ihc = o == Orientation::kIncreasing ? hc : lc;
    if (!(ilo < ihi)) {
      throw std::invalid_argument("branch image is degenerate");
    }
    Interval image(ilo, ihi, ilc, ihc);

    out.emplace_back(dom, o, fwd, der, inv, image, hint,
                     "mass_band" + std::to_string(l + 1));
  }
  return PwmFunction(std::move(out), "cdf_piecewise_L" + std::to_string(L));
}

PwmFunction build_tight(const DensityPtr& d, int L, const std::vector<int>& signs,
                        const std::vector<double>& boundaries) {
  check_shape(d, L, signs);
  if (!boundaries.empty()) {
    if (static_cast<int>(boundaries.size()) != L - 1) {
      throw std::invalid_argument("boundaries must have L-1 entries");
    }
    double prev = 0.0;
    for (int l = 0; l < L - 1; ++l) {
      double mass = d->cdf(boundaries[l]) - prev;
      if (std::abs(mass - 1.0 / L) > 1e-9) {
        throw std::invalid_argument("boundaries must split the support into mass-1/L cells");
      }
      prev = d->cdf(boundaries[l]);
    }
  }
  // Offsets align every branch image on [0, 1/L]: rising branches subtract
  // the mass below the cell, falling ones add the mass up to its top.
  std::vector<double> offsets(L);
  for (int l = 0; l < L; ++l) {
    offsets[l] = signs[l] > 0 ? -static_cast<double>(l) / L
                              : static_cast<double>(l + 1) / L;
  }
  PwmFunction f = build_cdf_piecewise(d, L, signs, offsets,
                                      std::vector<double>(boundaries));
  return PwmFunction(f.branches(), "tight_L" + std::to_string(L));
}

}  // namespace infoloss
