#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "infoloss/cascade.hpp"
#include "infoloss/catalog.hpp"
#include "infoloss/config.hpp"
#include "infoloss/estimators.hpp"
#include "infoloss/loss.hpp"
#include "infoloss/pushforward.hpp"
#include "infoloss/tight.hpp"

namespace {

using infoloss::CascadeReport;
using infoloss::DensityPtr;
using infoloss::HistogramReport;
using infoloss::LossReport;
using infoloss::McReport;
using infoloss::PwmFunction;
using infoloss::QuadratureConfig;
using infoloss::TightnessReport;
using infoloss::config::ConfigError;
using infoloss::config::csv_number;
using nlohmann::json;

struct Common {
  std::string config_path;
  std::string json_path;
  std::string csv_path;
  std::string dump_path;
  std::uint64_t seed = 0;
  double tol = 0.0;
  CLI::App* cmd = nullptr;
};

void add_common(CLI::App* cmd, Common& c) {
  c.cmd = cmd;
  cmd->add_option("config", c.config_path, "JSON config file")->required();
  cmd->add_option("--json", c.json_path, "write a JSON report to this path");
  cmd->add_option("--csv", c.csv_path, "write a CSV report to this path");
  cmd->add_option("--dump-config", c.dump_path,
                  "write the fully resolved config to this path");
  cmd->add_option("--seed", c.seed, "override mc.seed");
  cmd->add_option("--tol", c.tol, "override quadrature.abs_tol (bits)");
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  return j;
}

json prepare_config(const Common& c, const std::string& command) {
  json cfg = load_config(c.config_path);
  if (c.cmd->count("--seed") > 0) cfg["mc"]["seed"] = c.seed;
  if (c.cmd->count("--tol") > 0) cfg["quadrature"]["abs_tol"] = c.tol;
  json resolved = infoloss::config::resolve_defaults(cfg, command);
  if (!c.dump_path.empty()) {
    std::ofstream out(c.dump_path);
    if (!out) throw ConfigError("cannot write resolved config to " + c.dump_path);
    out << resolved.dump(2) << "\n";
  }
  return resolved;
}

void write_json(const std::string& path, const json& payload) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write JSON report to " + path);
  out << payload.dump(2) << "\n";
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write CSV report to " + path);
  out << text;
}

void print_loss(const LossReport& r) {
  std::cout << "loss_bits: " << csv_number(r.loss_bits) << "  (" << r.method
            << ", error estimate " << csv_number(r.error_estimate_bits) << ", "
            << (r.converged ? "converged" : "NOT converged") << ")\n";
  std::cout << "bounds_bits: " << csv_number(r.bound1_bits) << " "
            << csv_number(r.bound2_bits) << " " << csv_number(r.bound3_bits)
            << "  L: " << r.L << "\n";
  std::cout << "bijective_mass: " << csv_number(r.bijective_mass) << "\n";
}

std::string loss_csv(const LossReport& r) {
  std::ostringstream os;
  os << "loss_bits,method,error_estimate_bits,bound1,bound2,bound3,L,"
        "bijective_mass,status\n";
  os << csv_number(r.loss_bits) << ',' << r.method << ','
     << csv_number(r.error_estimate_bits) << ',' << csv_number(r.bound1_bits) << ','
     << csv_number(r.bound2_bits) << ',' << csv_number(r.bound3_bits) << ',' << r.L
     << ',' << csv_number(r.bijective_mass) << ','
     << (r.converged ? "ok" : "non_converged") << "\n";
  return os.str();
}

int run_loss(const Common& c) {
  json cfg = prepare_config(c, "loss");
  DensityPtr d = infoloss::config::parse_density(cfg.at("density"));
  PwmFunction g = infoloss::config::parse_function(cfg.at("function"), d);
  QuadratureConfig q = infoloss::config::parse_quadrature(cfg);
  std::string method = cfg.value("method", "x");
  if (method != "x" && method != "w" && method != "both") {
    throw ConfigError("method must be one of: x, w, both");
  }

  std::cout << "function: " << g.name() << "  density: " << d->describe() << "\n";
  json payload{{"command", "loss"}, {"config", cfg}};
  bool converged = true;
  LossReport primary;
  if (method == "x" || method == "both") {
    primary = infoloss::info_loss(g, d, q);
    print_loss(primary);
    payload["report"] = infoloss::config::to_json(primary);
    converged = converged && primary.converged;
  }
  if (method == "w" || method == "both") {
    LossReport rw = infoloss::info_loss_via_W(g, d, q);
    print_loss(rw);
    if (method == "w") {
      primary = rw;
      payload["report"] = infoloss::config::to_json(rw);
    } else {
      payload["report_w"] = infoloss::config::to_json(rw);
      std::cout << "route_gap_bits: "
                << csv_number(std::abs(primary.loss_bits - rw.loss_bits)) << "\n";
    }
    converged = converged && rw.converged;
  }
  write_json(c.json_path, payload);
  if (!c.csv_path.empty()) write_text(c.csv_path, loss_csv(primary));
  return converged ? 0 : 4;
}

int run_sweep(const Common& c) {
  json cfg = prepare_config(c, "sweep");
  const json& sw = cfg.at("sweep");
  std::string param = sw.at("param").get<std::string>();
  std::vector<double> grid;
  if (sw.contains("grid")) {
    for (const auto& v : sw.at("grid")) grid.push_back(v.get<double>());
  } else {
    double from = sw.at("from").get<double>();
    double to = sw.at("to").get<double>();
    int points = sw.at("points").get<int>();
    std::string scale = sw.value("scale", "linear");
    if (points < 1) throw ConfigError("sweep: points must be >= 1");
    for (int i = 0; i < points; ++i) {
      double t = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
      if (scale == "log") {
        if (!(from > 0 && to > 0)) throw ConfigError("sweep: log scale needs from,to > 0");
        grid.push_back(from * std::pow(to / from, t));
      } else if (scale == "linear") {
        grid.push_back(from + (to - from) * t);
      } else {
        throw ConfigError("sweep: scale must be linear or log");
      }
    }
  }
  if (grid.empty()) throw ConfigError("sweep: empty grid");
  bool with_mc = cfg.contains("mc");

  std::ostringstream csv;
  csv << "param,loss_quadrature,loss_mc,mc_stderr,bound1,bound2,bound3,status\n";
  json points = json::array();
  bool any_error = false, any_nonconv = false;
  for (double v : grid) {
    json pt = cfg;
    pt.erase("sweep");
    infoloss::config::set_by_path(pt, param, v);
    std::string status = "ok";
    json entry{{"param", v}};
    LossReport lr;
    McReport mr;
    bool have_mc = false;
    try {
      DensityPtr d = infoloss::config::parse_density(pt.at("density"));
      PwmFunction g = infoloss::config::parse_function(pt.at("function"), d);
      QuadratureConfig q = infoloss::config::parse_quadrature(pt);
      lr = infoloss::info_loss(g, d, q);
      if (!lr.converged) status = "non_converged";
      if (with_mc) {
        mr = infoloss::mc_loss(g, d, infoloss::config::parse_mc(pt));
        have_mc = true;
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      status = "error";
      entry["error"] = e.what();
    }
    if (status == "error") {
      any_error = true;
      csv << csv_number(v) << ",,,,,,," << status << "\n";
    } else {
      if (status == "non_converged") any_nonconv = true;
      csv << csv_number(v) << ',' << csv_number(lr.loss_bits) << ',';
      if (have_mc) {
        csv << csv_number(mr.loss_bits) << ',' << csv_number(mr.stderr_bits);
      } else {
        csv << ',';
      }
      csv << ',' << csv_number(lr.bound1_bits) << ',' << csv_number(lr.bound2_bits)
          << ',' << csv_number(lr.bound3_bits) << ',' << status << "\n";
      entry["report"] = infoloss::config::to_json(lr);
      if (have_mc) entry["mc"] = infoloss::config::to_json(mr);
    }
    points.push_back(entry);
  }

  if (c.csv_path.empty()) {
    std::cout << csv.str();
  } else {
    write_text(c.csv_path, csv.str());
    std::cout << "sweep: " << grid.size() << " points over " << param << " written to "
              << c.csv_path << "\n";
  }
  write_json(c.json_path, json{{"command", "sweep"},
                               {"param", param},
                               {"config", cfg},
                               {"points", points}});
  if (any_error) return 3;
  return any_nonconv ? 4 : 0;
}

int run_mc(const Common& c) {
  json cfg = prepare_config(c, "mc");
  DensityPtr d = infoloss::config::parse_density(cfg.at("density"));
  PwmFunction g = infoloss::config::parse_function(cfg.at("function"), d);
  McReport r = infoloss::mc_loss(g, d, infoloss::config::parse_mc(cfg));

  std::cout << "function: " << g.name() << "  density: " << d->describe() << "\n";
  std::cout << "loss_bits: " << csv_number(r.loss_bits) << "  stderr_bits: "
            << csv_number(r.stderr_bits) << "\n";
  std::cout << "accepted: " << r.n_accepted << "  rejected: " << r.n_rejected
            << "  rejection_fraction: " << csv_number(r.rejection_fraction) << "\n";

  write_json(c.json_path,
             json{{"command", "mc"}, {"config", cfg},
                  {"report", infoloss::config::to_json(r)}});
  if (!c.csv_path.empty()) {
    std::ostringstream os;
    os << "loss_bits,stderr_bits,n_accepted,n_rejected,rejection_fraction\n"
       << csv_number(r.loss_bits) << ',' << csv_number(r.stderr_bits) << ','
       << r.n_accepted << ',' << r.n_rejected << ','
       << csv_number(r.rejection_fraction) << "\n";
    write_text(c.csv_path, os.str());
  }
  if (r.rejection_fraction >= 1e-6) {
    std::cerr << "error: rejection fraction " << r.rejection_fraction
              << " indicates a model/density mismatch\n";
    return 3;
  }
  return 0;
}

int run_cascade(const Common& c) {
  json cfg = prepare_config(c, "cascade");
  const json& cas = cfg.at("cascade");
  const json& stage_list = cas.at("stages");
  if (!stage_list.is_array() || stage_list.empty()) {
    throw ConfigError("cascade.stages must be a non-empty array");
  }
  DensityPtr d = infoloss::config::parse_density(cfg.at("density"));
  QuadratureConfig q = infoloss::config::parse_quadrature(cfg);

  std::vector<PwmFunction> stages;
  DensityPtr cur = d;
  for (std::size_t i = 0; i < stage_list.size(); ++i) {
    PwmFunction g = infoloss::config::parse_function(stage_list[i], cur);
    stages.push_back(g);
    if (i + 1 < stage_list.size()) cur = infoloss::pushforward(g, cur);
  }

  CascadeReport rep = infoloss::cascade_loss(stages, d, q);
  std::cout << "density: " << d->describe() << "\n";
  std::ostringstream csv;
  csv << "stage,loss_bits,error_estimate_bits,bound1,bound2,bound3,L,status\n";
  for (const auto& s : rep.stages) {
    std::cout << s.stage << ": " << csv_number(s.report.loss_bits) << " bits  (err "
              << csv_number(s.report.error_estimate_bits) << ", L=" << s.report.L
              << ")\n";
    csv << s.stage << ',' << csv_number(s.report.loss_bits) << ','
        << csv_number(s.report.error_estimate_bits) << ','
        << csv_number(s.report.bound1_bits) << ',' << csv_number(s.report.bound2_bits)
        << ',' << csv_number(s.report.bound3_bits) << ',' << s.report.L << ','
        << (s.report.converged ? "ok" : "non_converged") << "\n";
  }
  std::cout << "total_bits: " << csv_number(rep.total_bits) << "  (err "
            << csv_number(rep.error_estimate_bits) << ")\n";

  json payload{{"command", "cascade"}, {"config", cfg},
               {"report", infoloss::config::to_json(rep)}};
  if (cas.value("verify", false)) {
    infoloss::AdditivityReport ar = infoloss::verify_additivity(stages, d, q);
    std::cout << "composed_bits: " << csv_number(ar.direct_bits)
              << "  staged_bits: " << csv_number(ar.staged_bits)
              << "  gap_bits: " << csv_number(ar.gap_bits)
              << (ar.within_error ? "  (within error)" : "  (EXCEEDS error)") << "\n";
    payload["additivity"] = json{{"direct_bits", ar.direct_bits},
                                 {"staged_bits", ar.staged_bits},
                                 {"gap_bits", ar.gap_bits},
                                 {"direct_error_bits", ar.direct_error_bits},
                                 {"staged_error_bits", ar.staged_error_bits},
                                 {"within_error", ar.within_error}};
  }
  write_json(c.json_path, payload);
  if (!c.csv_path.empty()) write_text(c.csv_path, csv.str());
  return rep.converged ? 0 : 4;
}

int run_oracle(const Common& c) {
  json cfg = prepare_config(c, "oracle");
  DensityPtr d = infoloss::config::parse_density(cfg.at("density"));
  PwmFunction g = infoloss::config::parse_function(cfg.at("function"), d);
  HistogramReport r = infoloss::histogram_oracle(g, d,
                                                 infoloss::config::parse_histogram(cfg),
                                                 infoloss::config::parse_mc(cfg));

  std::cout << "function: " << g.name() << "  density: " << d->describe()
            << "  samples: " << r.n_samples << "\n";
  std::ostringstream csv;
  csv << "level,bins,occupied,loss_bits\n";
  for (const auto& l : r.levels) {
    std::cout << "level " << l.level << " (" << l.bins
              << " bins): " << csv_number(l.loss_bits) << " bits\n";
    csv << l.level << ',' << l.bins << ',' << l.occupied << ','
        << csv_number(l.loss_bits) << "\n";
  }
  write_json(c.json_path, json{{"command", "oracle"}, {"config", cfg},
                               {"report", infoloss::config::to_json(r)}});
  if (!c.csv_path.empty()) write_text(c.csv_path, csv.str());
  return 0;
}

int run_build_tight(const Common& c) {
  json cfg = prepare_config(c, "build-tight");
  DensityPtr d = infoloss::config::parse_density(cfg.at("density"));
  const json& t = cfg.at("tight");
  json fn = t;
  fn["kind"] = t.contains("offsets") ? "cdf_piecewise" : "tight";
  PwmFunction g = infoloss::config::parse_function(fn, d);
  QuadratureConfig q = infoloss::config::parse_quadrature(cfg);

  LossReport lr = infoloss::info_loss(g, d, q);
  TightnessReport tr = infoloss::tightness_check(g, d);
  double target = std::log2(static_cast<double>(lr.L));

  std::cout << "built: " << g.name() << " on " << d->describe() << "\n";
  print_loss(lr);
  std::cout << "log2_L_bits: " << csv_number(target)
            << "  deviation: " << csv_number(std::abs(lr.loss_bits - target)) << "\n";
  std::cout << "ratio_regional_dev: " << csv_number(tr.regional_dev)
            << "  ratio_global_dev: " << csv_number(tr.global_dev)
            << "  ratio_mean: " << csv_number(tr.global_mean) << "\n";

  if (!c.csv_path.empty()) {
    std::ostringstream csv;
    csv << "branch,x,y\n";
    for (int i = 0; i < g.branch_count(); ++i) {
      const infoloss::Branch& b = g.branch(i);
      infoloss::Interval w = b.sample_window();
      for (int j = 0; j <= 32; ++j) {
        double x = w.lo() + w.width() * j / 32.0;
        csv << (i + 1) << ',' << csv_number(x) << ',' << csv_number(b.forward(x))
            << "\n";
      }
    }
    write_text(c.csv_path, csv.str());
  }
  write_json(c.json_path, json{{"command", "build-tight"},
                               {"config", cfg},
                               {"report", infoloss::config::to_json(lr)},
                               {"tightness", infoloss::config::to_json(tr)}});
  return lr.converged ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"information loss of piecewise strictly monotone maps"};
  app.require_subcommand(1);

  Common c_loss, c_sweep, c_mc, c_cascade, c_oracle, c_tight;
  CLI::App* s_loss = app.add_subcommand("loss", "loss of one function/density pair");
  CLI::App* s_sweep = app.add_subcommand("sweep", "loss over a parameter grid");
  CLI::App* s_mc = app.add_subcommand("mc", "Monte Carlo loss estimate");
  CLI::App* s_cascade = app.add_subcommand("cascade", "per-stage loss of a chain");
  CLI::App* s_oracle = app.add_subcommand("oracle", "histogram reference estimate");
  CLI::App* s_tight = app.add_subcommand("build-tight", "synthesize a maximal-loss map");
  add_common(s_loss, c_loss);
  add_common(s_sweep, c_sweep);
  add_common(s_mc, c_mc);
  add_common(s_cascade, c_cascade);
  add_common(s_oracle, c_oracle);
  add_common(s_tight, c_tight);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (s_loss->parsed()) return run_loss(c_loss);
    if (s_sweep->parsed()) return run_sweep(c_sweep);
    if (s_mc->parsed()) return run_mc(c_mc);
    if (s_cascade->parsed()) return run_cascade(c_cascade);
    if (s_oracle->parsed()) return run_oracle(c_oracle);
    if (s_tight->parsed()) return run_build_tight(c_tight);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const infoloss::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
