#include "infoloss/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "infoloss/catalog.hpp"
#include "infoloss/polynomial.hpp"
#include "infoloss/tight.hpp"

namespace infoloss::config {

namespace {

const json& require(const json& j, const std::string& key, const std::string& ctx) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw ConfigError(ctx + ": missing required key '" + key + "'");
  }
  return *it;
}

double number_at(const json& j, const std::string& key, const std::string& ctx) {
  const json& v = require(j, key, ctx);
  if (!v.is_number()) throw ConfigError(ctx + ": '" + key + "' must be a number");
  return v.get<double>();
}

double number_or(const json& j, const std::string& key, double fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number()) throw ConfigError("'" + key + "' must be a number");
  return it->get<double>();
}

std::uint64_t count_at(const json& j, const std::string& key, const std::string& ctx) {
  const json& v = require(j, key, ctx);
  if (v.is_number_unsigned() || v.is_number_integer()) {
    auto n = v.get<long long>();
    if (n < 0) throw ConfigError(ctx + ": '" + key + "' must be non-negative");
    return static_cast<std::uint64_t>(n);
  }
  if (v.is_number_float()) {
    double x = v.get<double>();
    if (!(x >= 0) || x != std::floor(x) || x > 1e18) {
      throw ConfigError(ctx + ": '" + key + "' must be a non-negative integer");
    }
    return static_cast<std::uint64_t>(x);
  }
  throw ConfigError(ctx + ": '" + key + "' must be an integer");
}

std::vector<double> vector_at(const json& j, const std::string& key,
                              const std::string& ctx) {
  const json& v = require(j, key, ctx);
  if (!v.is_array()) throw ConfigError(ctx + ": '" + key + "' must be an array");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError(ctx + ": '" + key + "' must hold numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::vector<int> int_vector_at(const json& j, const std::string& key,
                               const std::string& ctx) {
  const json& v = require(j, key, ctx);
  if (!v.is_array()) throw ConfigError(ctx + ": '" + key + "' must be an array");
  std::vector<int> out;
  for (const auto& e : v) {
    if (!e.is_number_integer() && !e.is_number_unsigned()) {
      throw ConfigError(ctx + ": '" + key + "' must hold integers");
    }
    out.push_back(e.get<int>());
  }
  return out;
}

PwmFunction parse_piecewise(const json& j) {
  const json& pieces = require(j, "pieces", "piecewise function");
  if (!pieces.is_array() || pieces.empty()) {
    throw ConfigError("piecewise function: 'pieces' must be a non-empty array");
  }
  std::vector<Branch> branches;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const json& p = pieces[i];
    std::string ctx = "piece " + std::to_string(i + 1);
    const json& dom = require(p, "domain", ctx);
    if (!dom.is_array() || dom.size() != 2) {
      throw ConfigError(ctx + ": 'domain' must be [lo, hi]");
    }
    double lo = extended_number(dom[0], ctx + " domain lo");
    double hi = extended_number(dom[1], ctx + " domain hi");
    std::vector<double> coeffs = vector_at(p, "coeffs", ctx);
    bool last = i + 1 == pieces.size();
    Interval domain(lo, hi, true, last);
    PwmFunction f = from_polynomial(coeffs, domain, ctx);
    for (const Branch& b : f.branches()) branches.push_back(b);
    if (f.branch_count() != 1) {
      throw ConfigError(ctx + ": polynomial is not monotone on its domain");
    }
  }
  return PwmFunction(std::move(branches), "piecewise");
}

}  // namespace

double extended_number(const json& v, const std::string& what) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw ConfigError(what + ": expected a number or \"inf\"/\"-inf\"");
}

DensityPtr parse_density(const json& j) {
  if (!j.is_object()) throw ConfigError("density: expected an object");
  std::string kind = require(j, "kind", "density").get<std::string>();
  if (kind == "uniform") {
    if (j.contains("halfwidth")) {
      return uniform_halfwidth(number_at(j, "halfwidth", "uniform density"));
    }
    return uniform_density(number_at(j, "lo", "uniform density"),
                           number_at(j, "hi", "uniform density"));
  }
  if (kind == "normal") {
    return normal_density(number_at(j, "sigma", "normal density"),
                          number_or(j, "mean", 0.0));
  }
  if (kind == "table" || kind == "piecewise_pdf") {
    return piecewise_pdf_density(vector_at(j, "xs", "table density"),
                                 vector_at(j, "ps", "table density"));
  }
  throw ConfigError("density: unknown kind '" + kind + "'");
}

PwmFunction parse_function(const json& j, const DensityPtr& density) {
  if (!j.is_object()) throw ConfigError("function: expected an object");
  std::string kind = require(j, "kind", "function").get<std::string>();
  if (kind == "catalog") {
    std::string name = require(j, "name", "catalog function").get<std::string>();
    if (name == "magnitude") return catalog::magnitude();
    if (name == "sqlin") return catalog::sqlin();
    if (name == "cubic") return catalog::cubic();
    if (name == "identity") return catalog::identity();
    if (name == "cosine") {
      int hp = 3;
      if (j.contains("half_periods")) {
        hp = static_cast<int>(count_at(j, "half_periods", "cosine"));
      }
      return catalog::cosine(hp);
    }
    throw ConfigError("catalog function: unknown name '" + name + "'");
  }
  if (kind == "polynomial") {
    std::vector<double> coeffs = vector_at(j, "coeffs", "polynomial function");
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    if (j.contains("domain")) {
      const json& dom = j.at("domain");
      if (!dom.is_array() || dom.size() != 2) {
        throw ConfigError("polynomial function: 'domain' must be [lo, hi]");
      }
      lo = extended_number(dom[0], "polynomial domain lo");
      hi = extended_number(dom[1], "polynomial domain hi");
    }
    bool lc = std::isfinite(lo), hc = std::isfinite(hi);
    return from_polynomial(coeffs, Interval(lo, hi, lc, hc));
  }
  if (kind == "piecewise") return parse_piecewise(j);
  if (kind == "tight" || kind == "cdf_piecewise") {
    if (!density) {
      throw ConfigError("function kind '" + kind + "' needs the config density");
    }
    int L = static_cast<int>(count_at(j, "L", kind));
    std::vector<int> signs = j.contains("signs")
                                 ? int_vector_at(j, "signs", kind)
                                 : std::vector<int>(L, 1);
    std::vector<double> boundaries;
    if (j.contains("boundaries")) boundaries = vector_at(j, "boundaries", kind);
    if (kind == "tight") return build_tight(density, L, signs, boundaries);
    std::vector<double> offsets = vector_at(j, "offsets", kind);
    return build_cdf_piecewise(density, L, signs, offsets, boundaries);
  }
  throw ConfigError("function: unknown kind '" + kind + "'");
}

QuadratureConfig parse_quadrature(const json& root) {
  QuadratureConfig cfg;
  auto it = root.find("quadrature");
  if (it == root.end()) return cfg;
  if (!it->is_object()) throw ConfigError("'quadrature' must be an object");
  const json& q = *it;
  cfg.abs_tol = number_or(q, "abs_tol", cfg.abs_tol);
  cfg.rel_tol = number_or(q, "rel_tol", cfg.rel_tol);
  cfg.max_depth = static_cast<int>(number_or(q, "max_depth", cfg.max_depth));
  cfg.mass_eps = number_or(q, "mass_eps", cfg.mass_eps);
  cfg.singularity_pad = number_or(q, "singularity_pad", cfg.singularity_pad);
  return cfg;
}

McConfig parse_mc(const json& root) {
  const json& m = require(root, "mc", "config");
  if (!m.is_object()) throw ConfigError("'mc' must be an object");
  McConfig cfg;
  cfg.n_samples = count_at(m, "n_samples", "mc");
  if (!m.contains("seed")) {
    throw ConfigError("mc: an explicit 'seed' is required (or pass --seed)");
  }
  cfg.seed = count_at(m, "seed", "mc");
  cfg.n_workers = static_cast<int>(number_or(m, "n_workers", 1));
  return cfg;
}

HistogramConfig parse_histogram(const json& root) {
  HistogramConfig cfg;
  auto it = root.find("histogram");
  if (it == root.end()) return cfg;
  if (!it->is_object()) throw ConfigError("'histogram' must be an object");
  cfg.y_bins = static_cast<int>(number_or(*it, "y_bins", cfg.y_bins));
  cfg.refinement_levels =
      static_cast<int>(number_or(*it, "refinement_levels", cfg.refinement_levels));
  return cfg;
}

json resolve_defaults(const json& cfg, const std::string& command) {
  json out = cfg;
  QuadratureConfig q = parse_quadrature(cfg);
  out["quadrature"] = {{"abs_tol", q.abs_tol},
                       {"rel_tol", q.rel_tol},
                       {"max_depth", q.max_depth},
                       {"mass_eps", q.mass_eps},
                       {"singularity_pad", q.singularity_pad}};
  if (cfg.contains("mc") || command == "mc" || command == "oracle") {
    McConfig m = parse_mc(cfg);
    out["mc"] = {{"n_samples", m.n_samples}, {"seed", m.seed}, {"n_workers", m.n_workers}};
  }
  if (command == "oracle") {
    HistogramConfig h = parse_histogram(cfg);
    out["histogram"] = {{"y_bins", h.y_bins}, {"refinement_levels", h.refinement_levels}};
  }
  return out;
}

void set_by_path(json& root, const std::string& dotted, double value) {
  if (dotted.empty()) throw ConfigError("empty parameter path");
  json* cur = &root;
  std::size_t start = 0;
  std::vector<std::string> tokens;
  while (start <= dotted.size()) {
    std::size_t dot = dotted.find('.', start);
    if (dot == std::string::npos) dot = dotted.size();
    tokens.push_back(dotted.substr(start, dot - start));
    start = dot + 1;
  }
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string& tok = tokens[i];
    if (tok.empty()) throw ConfigError("bad parameter path '" + dotted + "'");
    bool numeric = std::all_of(tok.begin(), tok.end(),
                               [](char c) { return c >= '0' && c <= '9'; });
    bool last = i + 1 == tokens.size();
    if (numeric && cur->is_array()) {
      std::size_t idx = std::stoul(tok);
      if (idx >= cur->size()) {
        throw ConfigError("parameter path '" + dotted + "' indexes past the array");
      }
      if (last) {
        (*cur)[idx] = value;
        return;
      }
      cur = &(*cur)[idx];
    } else {
      if (last) {
        (*cur)[tok] = value;
        return;
      }
      cur = &(*cur)[tok];
    }
  }
}

json to_json(const LossReport& r) {
  return json{{"loss_bits", r.loss_bits},
              {"method", r.method},
              {"error_estimate_bits", r.error_estimate_bits},
              {"bound1_bits", r.bound1_bits},
              {"bound2_bits", r.bound2_bits},
              {"bound3_bits", r.bound3_bits},
              {"L", r.L},
              {"bijective_mass", r.bijective_mass},
              {"converged", r.converged}};
}

json to_json(const McReport& r) {
  return json{{"loss_bits", r.loss_bits},
              {"stderr_bits", r.stderr_bits},
              {"n_accepted", r.n_accepted},
              {"n_rejected", r.n_rejected},
              {"rejection_fraction", r.rejection_fraction}};
}

json to_json(const TightnessReport& r) {
  return json{{"L", r.L},
              {"tol", r.tol},
              {"regional_dev", r.regional_dev},
              {"global_dev", r.global_dev},
              {"global_mean", r.global_mean},
              {"images_coincide", r.images_coincide},
              {"bound1_tight", r.bound1_tight},
              {"bound2_tight", r.bound2_tight},
              {"bound3_tight", r.bound3_tight}};
}

json to_json(const CascadeReport& r) {
  json stages = json::array();
  for (const StageLoss& s : r.stages) {
    json e = to_json(s.report);
    e["stage"] = s.stage;
    stages.push_back(e);
  }
  return json{{"stages", stages},
              {"total_bits", r.total_bits},
              {"error_estimate_bits", r.error_estimate_bits},
              {"converged", r.converged}};
}

json to_json(const HistogramReport& r) {
  json levels = json::array();
  for (const HistogramLevel& l : r.levels) {
    levels.push_back(json{{"level", l.level},
                          {"bins", l.bins},
                          {"occupied", l.occupied},
                          {"loss_bits", l.loss_bits}});
  }
  return json{{"levels", levels}, {"n_samples", r.n_samples}};
}

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return std::string(buf);
}

}  // namespace infoloss::config
