#include "infoloss/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "infoloss/pushforward.hpp"

namespace infoloss {

namespace {

constexpr double kLn2 = 0.693147180559945309417232;
constexpr double kDerivFloor = 1e-300;
constexpr std::uint64_t kBlock = 65536;

std::string join_issues(const std::vector<std::string>& issues) {
  std::string s;
  for (const auto& i : issues) {
    if (!s.empty()) s += "; ";
    s += i;
  }
  return s;
}

PwmFunction restrict_and_validate(const PwmFunction& g, const Density& d) {
  PwmFunction r = restrict_to_support(g, d);
  ValidationReport rep = r.validate(256);
  if (!rep.pass()) {
    throw ValidationError("function model failed validation: " + join_issues(rep.issues));
  }
  return r;
}

void check_mc(const McConfig& cfg) {
  if (cfg.n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
  if (cfg.n_workers < 1 || cfg.n_workers > 256) {
    throw std::invalid_argument("n_workers must lie in [1, 256]");
  }
}

// log2 of the preimage-density ratio at x; NaN when x is unusable.
double sample_bits(const PwmFunction& g, const Density& d, double x) {
  double fx = d.pdf(x);
  if (!(fx > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  int bi = g.branch_index_of(x);
  if (bi < 0) return std::numeric_limits<double>::quiet_NaN();
  double own = fx / std::max(std::abs(g.branch(bi).derivative(x)), kDerivFloor);
  double y = g.branch(bi).forward(x);
  double other = 0.0;
  for (const PreimagePoint& p : g.preimage(y).points) {
    if (p.branch_index == bi) continue;
    double fxi = d.pdf(p.x);
    if (fxi <= 0.0) continue;
    other +=
        fxi / std::max(std::abs(g.branch(p.branch_index).derivative(p.x)), kDerivFloor);
  }
  if (!(other >= 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return std::log1p(other / own) / kLn2;
}

struct BlockStat {
  double sum = 0.0;
  double sumsq = 0.0;
  std::uint64_t accepted = 0;
  std::uint64_t rejected = 0;
};

double neumaier(const std::vector<double>& xs) {
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

template <typename PerIndex>
void run_blocks(std::uint64_t n, int n_workers, const PerIndex& body) {
  std::uint64_t n_blocks = (n + kBlock - 1) / kBlock;
  auto run_range = [&](std::uint64_t first_block, std::uint64_t stride) {
    for (std::uint64_t b = first_block; b < n_blocks; b += stride) {
      std::uint64_t lo = b * kBlock;
      std::uint64_t hi = std::min(n, lo + kBlock);
      body(b, lo, hi);
    }
  };
  if (n_workers == 1) {
    run_range(0, 1);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(n_workers);
  for (int w = 0; w < n_workers; ++w) {
    pool.emplace_back(run_range, static_cast<std::uint64_t>(w),
                      static_cast<std::uint64_t>(n_workers));
  }
  for (auto& t : pool) t.join();
}

}  // namespace

McReport mc_loss(const PwmFunction& g, const DensityPtr& d, const McConfig& cfg) {
  check_mc(cfg);
  if (!d) throw std::invalid_argument("density required");
  PwmFunction r = restrict_and_validate(g, *d);

  std::uint64_t n = cfg.n_samples;
  std::uint64_t n_blocks = (n + kBlock - 1) / kBlock;
  std::vector<BlockStat> stats(n_blocks);

  run_blocks(n, cfg.n_workers, [&](std::uint64_t b, std::uint64_t lo, std::uint64_t hi) {
    BlockStat st;
    double sum = 0.0, sumsq = 0.0;
    for (std::uint64_t idx = lo; idx < hi; ++idx) {
      RngStream stream(cfg.seed, 0, idx);
      double x = d->sample(stream);
      double t = sample_bits(r, *d, x);
      if (std::isfinite(t)) {
        sum += t;
        sumsq += t * t;
        ++st.accepted;
      } else {
        ++st.rejected;
      }
    }
    st.sum = sum;
    st.sumsq = sumsq;
    stats[b] = st;
  });

  std::vector<double> sums, sumsqs;
  sums.reserve(n_blocks);
  sumsqs.reserve(n_blocks);
  std::uint64_t accepted = 0, rejected = 0;
  for (const BlockStat& st : stats) {
    sums.push_back(st.sum);
    sumsqs.push_back(st.sumsq);
    accepted += st.accepted;
    rejected += st.rejected;
  }

  McReport rep;
  rep.n_accepted = accepted;
  rep.n_rejected = rejected;
  rep.rejection_fraction = static_cast<double>(rejected) / static_cast<double>(n);
  if (accepted == 0) {
    throw std::runtime_error("all samples rejected; model and density are inconsistent");
  }
  double s1 = neumaier(sums);
  double s2 = neumaier(sumsqs);
  double na = static_cast<double>(accepted);
  rep.loss_bits = s1 / na;
  if (accepted > 1) {
    double var = std::max(0.0, (s2 - s1 * s1 / na) / (na - 1.0));
    rep.stderr_bits = std::sqrt(var / na);
  }
  return rep;
}

HistogramReport histogram_oracle(const PwmFunction& g, const DensityPtr& d,
                                 const HistogramConfig& hist, const McConfig& mc) {
  check_mc(mc);
  if (hist.y_bins < 8) throw std::invalid_argument("y_bins must be >= 8");
  if (hist.refinement_levels < 1 || hist.refinement_levels > 16) {
    throw std::invalid_argument("refinement_levels must lie in [1, 16]");
  }
  if (!d) throw std::invalid_argument("density required");
  PwmFunction r = restrict_and_validate(g, *d);

  std::uint64_t n = mc.n_samples;
  std::vector<std::pair<double, int>> draws(n);

  run_blocks(n, mc.n_workers, [&](std::uint64_t, std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t idx = lo; idx < hi; ++idx) {
      RngStream stream(mc.seed, 0, idx);
      double x = d->sample(stream);
      int w = r.branch_index_of(x);
      if (w < 0) {
        // measure-zero gap between branch domains; attach to the nearest one
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < r.branch_count(); ++i) {
          const Interval& dom = r.branch(i).domain();
          double dist = std::min(std::abs(x - dom.lo()), std::abs(x - dom.hi()));
          if (dist < best) {
            best = dist;
            w = i;
          }
        }
        const Interval& dom = r.branch(w).domain();
        x = std::abs(x - dom.lo()) <= std::abs(x - dom.hi()) ? dom.lo() : dom.hi();
      }
      draws[idx] = {r.branch(w).forward(x), w};
    }
  });

  std::sort(draws.begin(), draws.end());

  HistogramReport rep;
  rep.n_samples = n;
  int L = r.branch_count();
  std::vector<std::uint64_t> counts(L);
  for (int level = 1; level <= hist.refinement_levels; ++level) {
    std::uint64_t bins = static_cast<std::uint64_t>(hist.y_bins) << (level - 1);
    HistogramLevel hl;
    hl.level = level;
    hl.bins = static_cast<int>(bins);
    double h = 0.0;
    int occupied = 0;
    for (std::uint64_t b = 0; b < bins; ++b) {
      std::uint64_t lo = b * n / bins;
      std::uint64_t hi = (b + 1) * n / bins;
      if (hi <= lo) continue;
      ++occupied;
      std::fill(counts.begin(), counts.end(), 0);
      for (std::uint64_t i = lo; i < hi; ++i) counts[draws[i].second] += 1;
      double nb = static_cast<double>(hi - lo);
      for (int w = 0; w < L; ++w) {
        if (counts[w] == 0) continue;
        double c = static_cast<double>(counts[w]);
        h += c * std::log2(nb / c);
      }
    }
    hl.occupied = occupied;
    hl.loss_bits = h / static_cast<double>(n);
    rep.levels.push_back(hl);
  }
  return rep;
}

}  // namespace infoloss
