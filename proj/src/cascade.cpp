#include "infoloss/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "infoloss/pushforward.hpp"

namespace infoloss {

namespace {

enum class CutOwner { kLeft, kRight, kNeither };

double sub_probe(double u, double v) {
  if (std::isfinite(u) && std::isfinite(v)) return u + 0.5 * (v - u);
  if (std::isfinite(u)) return u + 1.0;
  if (std::isfinite(v)) return v - 1.0;
  return 0.0;
}

}  // namespace

PwmFunction compose(const PwmFunction& h, const PwmFunction& g) {
  std::vector<double> hcuts;
  for (const Branch& hb : h.branches()) {
    for (double e : {hb.domain().lo(), hb.domain().hi()}) {
      if (std::isfinite(e)) hcuts.push_back(e);
    }
  }
  std::sort(hcuts.begin(), hcuts.end());
  hcuts.erase(std::unique(hcuts.begin(), hcuts.end()), hcuts.end());

  std::vector<Branch> out;
  for (const Branch& gb : g.branches()) {
    const Interval& dom = gb.domain();
    std::vector<double> cuts;
    for (double v : hcuts) {
      if (!(v > gb.image().lo() && v < gb.image().hi())) continue;
      double x = gb.inverse(v);
      if (x > dom.lo() && x < dom.hi()) cuts.push_back(x);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double a, double b) {
                             return b - a <= 1e-12 * std::max({1.0, std::abs(a),
                                                               std::abs(b)});
                           }),
               cuts.end());

    std::vector<double> edges;
    edges.push_back(dom.lo());
    for (double c : cuts) edges.push_back(c);
    edges.push_back(dom.hi());

    // Which side of each cut keeps the cut point: the side whose h-branch
    // domain contains g(cut).
    std::vector<CutOwner> owner(cuts.size(), CutOwner::kNeither);
    std::vector<int> hb_of_sub(edges.size() - 1, -1);
    for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
      double yp = gb.forward(sub_probe(edges[s], edges[s + 1]));
      hb_of_sub[s] = h.branch_index_of(yp);
      if (hb_of_sub[s] < 0) {
        throw std::domain_error(
            "composition undefined: inner image falls outside outer domain");
      }
    }
    for (std::size_t c = 0; c < cuts.size(); ++c) {
      double yc = gb.forward(cuts[c]);
      if (h.branch(hb_of_sub[c]).domain().contains(yc)) {
        owner[c] = CutOwner::kLeft;
      } else if (h.branch(hb_of_sub[c + 1]).domain().contains(yc)) {
        owner[c] = CutOwner::kRight;
      }
    }

    for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
      bool lc = s == 0 ? dom.lo_closed() : owner[s - 1] == CutOwner::kRight;
      bool hc = s + 2 == edges.size() ? dom.hi_closed() : owner[s] == CutOwner::kLeft;
      Interval sub(edges[s], edges[s + 1], lc, hc);

      auto grestrict = gb.restricted(sub);
      if (!grestrict) continue;
      Branch gpart = *grestrict;
      Branch hpart = h.branch(hb_of_sub[s]);
      bool same = gpart.orientation() == hpart.orientation();
      Orientation o = same ? Orientation::kIncreasing : Orientation::kDecreasing;

      auto fwd = [gpart, hpart](double x) { return hpart.forward(gpart.forward(x)); };
      auto der = [gpart, hpart](double x) {
        return hpart.derivative(gpart.forward(x)) * gpart.derivative(x);
      };
      RealFn inv = [gpart, hpart](double y) { return gpart.inverse(hpart.inverse(y)); };

      std::string label = gpart.label();
      if (!label.empty() && !hpart.label().empty()) {
        label += ">" + hpart.label();
      }
      out.emplace_back(sub, o, fwd, der, inv, std::nullopt, std::nullopt, label);
    }
  }
  std::string name = g.name();
  if (!name.empty() && !h.name().empty()) name = h.name() + "(" + name + ")";
  return PwmFunction(std::move(out), name);
}

CascadeReport cascade_loss(const std::vector<PwmFunction>& stages, const DensityPtr& d,
                           const QuadratureConfig& cfg) {
  if (stages.empty()) throw std::invalid_argument("cascade needs at least one stage");
  if (!d) throw std::invalid_argument("density required");

  CascadeReport rep;
  DensityPtr cur = d;
  for (std::size_t i = 0; i < stages.size(); ++i) {
    LossReport lr = info_loss(stages[i], cur, cfg);
    std::string tag = stages[i].name().empty() ? "stage" + std::to_string(i + 1)
                                               : stages[i].name();
    rep.total_bits += lr.loss_bits;
    rep.error_estimate_bits += lr.error_estimate_bits;
    rep.converged = rep.converged && lr.converged;
    rep.stages.push_back({std::move(tag), std::move(lr)});
    if (i + 1 < stages.size()) cur = pushforward(stages[i], cur);
  }
  return rep;
}

AdditivityReport verify_additivity(const std::vector<PwmFunction>& stages,
                                   const DensityPtr& d, const QuadratureConfig& cfg) {
  if (stages.empty()) throw std::invalid_argument("cascade needs at least one stage");
  PwmFunction composed = stages.front();
  for (std::size_t i = 1; i < stages.size(); ++i) {
    composed = compose(stages[i], composed);
  }
  LossReport direct = info_loss(composed, d, cfg);
  CascadeReport staged = cascade_loss(stages, d, cfg);

  AdditivityReport rep;
  rep.direct_bits = direct.loss_bits;
  rep.staged_bits = staged.total_bits;
  rep.gap_bits = std::abs(rep.direct_bits - rep.staged_bits);
  rep.direct_error_bits = direct.error_estimate_bits;
  rep.staged_error_bits = staged.error_estimate_bits;
  rep.within_error = rep.gap_bits <= rep.direct_error_bits + rep.staged_error_bits;
  return rep;
}

}  // namespace infoloss
