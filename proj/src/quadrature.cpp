#include "infoloss/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace infoloss {

namespace {

// 15-point Kronrod extension of 7-point Gauss, positive half.
const double kXk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
const double kWk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
const double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  double val, err;
  int depth;
  int item;
};

struct PanelWorse {
  bool operator()(const Panel& x, const Panel& y) const {
    if (x.err != y.err) return x.err < y.err;
    if (x.item != y.item) return x.item > y.item;
    return x.a > y.a;
  }
};

struct Item {
  double a, b;
  std::function<double(double)> fn;
};

Panel gk15(const std::function<double(double)>& f, double a, double b, int depth,
           int item) {
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double fc = f(c);
  double resk = kWk[7] * fc;
  double resg = kWg[3] * fc;
  double resabs = kWk[7] * std::abs(fc);
  double fv[14];
  for (int j = 0; j < 7; ++j) {
    double dx = h * kXk[j];
    double f1 = f(c - dx), f2 = f(c + dx);
    fv[2 * j] = f1;
    fv[2 * j + 1] = f2;
    resk += kWk[j] * (f1 + f2);
    resabs += kWk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += kWg[(j - 1) / 2] * (f1 + f2);
  }
  double mean = 0.5 * resk;
  double resasc = kWk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) {
    resasc += kWk[j] * (std::abs(fv[2 * j] - mean) + std::abs(fv[2 * j + 1] - mean));
  }
  resasc *= std::abs(h);

  double value = resk * h;
  double err = std::abs((resk - resg) * h);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  double round_floor = 50.0 * std::numeric_limits<double>::epsilon() * resabs *
                       std::abs(h);
  err = std::max(err, round_floor);
  return Panel{a, b, value, err, depth, item};
}

double stable_sum(std::vector<double>& xs) {
  double s = 0.0, comp = 0.0;
  for (double x : xs) {
    double t = s + x;
    if (std::abs(s) >= std::abs(x)) {
      comp += (s - t) + x;
    } else {
      comp += (x - t) + s;
    }
    s = t;
  }
  return s + comp;
}

}  // namespace

QuadResult integrate_segments(const std::function<double(double)>& f,
                              const std::vector<Segment>& segments,
                              const QuadOptions& opts) {
  std::vector<Item> items;
  for (const Segment& s : segments) {
    if (!(s.lo < s.hi)) continue;
    double lo = s.lo, hi = s.hi, w = hi - lo;
    if (s.sqrt_lo && s.sqrt_hi) {
      double mid = lo + 0.5 * w;
      double t1 = std::sqrt(0.5 * w);
      items.push_back({0.0, t1, [f, lo](double t) { return f(lo + t * t) * 2.0 * t; }});
      items.push_back({0.0, t1, [f, hi](double t) { return f(hi - t * t) * 2.0 * t; }});
      (void)mid;
    } else if (s.sqrt_lo) {
      items.push_back(
          {0.0, std::sqrt(w), [f, lo](double t) { return f(lo + t * t) * 2.0 * t; }});
    } else if (s.sqrt_hi) {
      items.push_back(
          {0.0, std::sqrt(w), [f, hi](double t) { return f(hi - t * t) * 2.0 * t; }});
    } else {
      items.push_back({lo, hi, f});
    }
  }

  QuadResult out;
  if (items.empty()) {
    out.converged = true;
    return out;
  }

  std::priority_queue<Panel, std::vector<Panel>, PanelWorse> active;
  std::vector<Panel> retired;
  double total_val = 0.0, total_err = 0.0;

  for (std::size_t i = 0; i < items.size(); ++i) {
    Panel p = gk15(items[i].fn, items[i].a, items[i].b, 0, static_cast<int>(i));
    out.evals += 15;
    total_val += p.val;
    total_err += p.err;
    active.push(p);
  }

  std::size_t n_panels = items.size();
  while (!active.empty() && n_panels < opts.max_panels) {
    double tol = std::max(opts.abs_tol, opts.rel_tol * std::abs(total_val));
    if (!(total_err > tol) || std::isnan(total_val)) break;

    Panel worst = active.top();
    active.pop();
    double width = worst.b - worst.a;
    double scale = std::max({1.0, std::abs(worst.a), std::abs(worst.b)});
    if (worst.depth >= opts.max_depth ||
        width <= 8 * std::numeric_limits<double>::epsilon() * scale) {
      retired.push_back(worst);
      continue;
    }
    double mid = 0.5 * (worst.a + worst.b);
    Panel left = gk15(items[worst.item].fn, worst.a, mid, worst.depth + 1, worst.item);
    Panel right = gk15(items[worst.item].fn, mid, worst.b, worst.depth + 1, worst.item);
    out.evals += 30;
    ++n_panels;
    total_val += left.val + right.val - worst.val;
    total_err += left.err + right.err - worst.err;
    active.push(left);
    active.push(right);
  }

  std::vector<Panel> all(std::move(retired));
  while (!active.empty()) {
    all.push_back(active.top());
    active.pop();
  }
  std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) {
    if (x.item != y.item) return x.item < y.item;
    return x.a < y.a;
  });
  std::vector<double> vals, errs;
  vals.reserve(all.size());
  errs.reserve(all.size());
  for (const Panel& p : all) {
    vals.push_back(p.val);
    errs.push_back(p.err);
  }
  out.value = stable_sum(vals);
  out.error = stable_sum(errs);
  out.panels = all.size();
  double tol = std::max(opts.abs_tol, opts.rel_tol * std::abs(out.value));
  out.converged = out.error <= tol && !std::isnan(out.value);
  return out;
}

QuadResult integrate(const std::function<double(double)>& f, double lo, double hi,
                     const QuadOptions& opts, const std::vector<double>& interior_breaks) {
  std::vector<double> cuts;
  for (double c : interior_breaks) {
    if (c > lo && c < hi) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<Segment> segs;
  double cursor = lo;
  for (double c : cuts) {
    if (c > cursor) {
      segs.push_back({cursor, c});
      cursor = c;
    }
  }
  segs.push_back({cursor, hi});
  return integrate_segments(f, segs, opts);
}

}  // namespace infoloss
