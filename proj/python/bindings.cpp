#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>

#include "infoloss/cascade.hpp"
#include "infoloss/catalog.hpp"
#include "infoloss/estimators.hpp"
#include "infoloss/loss.hpp"
#include "infoloss/polynomial.hpp"
#include "infoloss/pushforward.hpp"
#include "infoloss/tight.hpp"

namespace py = pybind11;
using namespace infoloss;

namespace {

// thin value wrapper so the const element type never meets a pybind holder
struct PyDensity {
  DensityPtr p;
};

py::dict to_dict(const LossReport& r) {
  py::dict d;
  d["loss_bits"] = r.loss_bits;
  d["method"] = r.method;
  d["error_estimate_bits"] = r.error_estimate_bits;
  d["bound1_bits"] = r.bound1_bits;
  d["bound2_bits"] = r.bound2_bits;
  d["bound3_bits"] = r.bound3_bits;
  d["L"] = r.L;
  d["bijective_mass"] = r.bijective_mass;
  d["converged"] = r.converged;
  return d;
}

py::dict to_dict(const McReport& r) {
  py::dict d;
  d["loss_bits"] = r.loss_bits;
  d["stderr_bits"] = r.stderr_bits;
  d["n_accepted"] = r.n_accepted;
  d["n_rejected"] = r.n_rejected;
  d["rejection_fraction"] = r.rejection_fraction;
  return d;
}

py::dict to_dict(const TightnessReport& r) {
  py::dict d;
  d["L"] = r.L;
  d["regional_dev"] = r.regional_dev;
  d["global_dev"] = r.global_dev;
  d["global_mean"] = r.global_mean;
  d["images_coincide"] = r.images_coincide;
  d["bound1_tight"] = r.bound1_tight;
  d["bound2_tight"] = r.bound2_tight;
  d["bound3_tight"] = r.bound3_tight;
  return d;
}

py::dict to_dict(const HistogramReport& r) {
  py::list levels;
  for (const HistogramLevel& l : r.levels) {
    py::dict e;
    e["level"] = l.level;
    e["bins"] = l.bins;
    e["occupied"] = l.occupied;
    e["loss_bits"] = l.loss_bits;
    levels.append(e);
  }
  py::dict d;
  d["levels"] = levels;
  d["n_samples"] = r.n_samples;
  return d;
}

py::dict to_dict(const CascadeReport& r) {
  py::list stages;
  for (const StageLoss& s : r.stages) {
    py::dict e;
    e["stage"] = s.stage;
    e["report"] = to_dict(s.report);
    stages.append(e);
  }
  py::dict d;
  d["stages"] = stages;
  d["total_bits"] = r.total_bits;
  d["error_estimate_bits"] = r.error_estimate_bits;
  d["converged"] = r.converged;
  return d;
}

py::dict to_dict(const AdditivityReport& r) {
  py::dict d;
  d["direct_bits"] = r.direct_bits;
  d["staged_bits"] = r.staged_bits;
  d["gap_bits"] = r.gap_bits;
  d["direct_error_bits"] = r.direct_error_bits;
  d["staged_error_bits"] = r.staged_error_bits;
  d["within_error"] = r.within_error;
  return d;
}

QuadratureConfig make_quad(double abs_tol, double rel_tol, int max_depth,
                           double mass_eps) {
  QuadratureConfig q;
  q.abs_tol = abs_tol;
  q.rel_tol = rel_tol;
  q.max_depth = max_depth;
  q.mass_eps = mass_eps;
  return q;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "information loss of piecewise strictly monotone maps";

  py::class_<PyDensity>(m, "Density")
      .def("pdf", [](const PyDensity& d, double x) { return d.p->pdf(x); })
      .def("cdf", [](const PyDensity& d, double x) { return d.p->cdf(x); })
      .def("quantile",
           [](const PyDensity& d, double p) { return d.p->quantile(p); })
      .def("__repr__",
           [](const PyDensity& d) { return "Density(" + d.p->describe() + ")"; });

  py::class_<PwmFunction>(m, "PwmFunction")
      .def_property_readonly("name", &PwmFunction::name)
      .def_property_readonly("branch_count", &PwmFunction::branch_count)
      .def("__call__", &PwmFunction::eval)
      .def("abs_derivative", &PwmFunction::abs_derivative)
      .def("preimage",
           [](const PwmFunction& g, double y) {
             py::list out;
             for (const PreimagePoint& p : g.preimage(y).points) {
               out.append(py::make_tuple(p.x, p.branch_index));
             }
             return out;
           })
      .def("validate",
           [](const PwmFunction& g, int grid) { return g.validate(grid).pass(); },
           py::arg("grid") = 128)
      .def("__repr__", [](const PwmFunction& g) {
        return "PwmFunction(" + (g.name().empty() ? "anonymous" : g.name()) +
               ", branches=" + std::to_string(g.branch_count()) + ")";
      });

  m.def("normal", [](double sigma, double mean) {
          return PyDensity{normal_density(sigma, mean)};
        },
        py::arg("sigma") = 1.0, py::arg("mean") = 0.0);
  m.def("uniform", [](double lo, double hi) {
          return PyDensity{uniform_density(lo, hi)};
        },
        py::arg("lo"), py::arg("hi"));
  m.def("uniform_halfwidth",
        [](double a) { return PyDensity{uniform_halfwidth(a)}; }, py::arg("a"));
  m.def("piecewise_pdf",
        [](const std::vector<double>& xs, const std::vector<double>& ps) {
          return PyDensity{piecewise_pdf_density(xs, ps)};
        },
        py::arg("xs"), py::arg("ps"));
  m.def("pushforward",
        [](const PwmFunction& g, const PyDensity& d) {
          return PyDensity{pushforward(g, d.p)};
        },
        py::arg("g"), py::arg("density"));

  m.def("magnitude", &catalog::magnitude);
  m.def("sqlin", &catalog::sqlin);
  m.def("cubic", &catalog::cubic);
  m.def("cosine", &catalog::cosine, py::arg("half_periods") = 3);
  m.def("identity", &catalog::identity);
  m.def("from_polynomial",
        [](const std::vector<double>& coeffs, double lo, double hi) {
          return from_polynomial(coeffs, Interval(lo, hi, std::isfinite(lo),
                                                  std::isfinite(hi)));
        },
        py::arg("coeffs"),
        py::arg("lo") = -std::numeric_limits<double>::infinity(),
        py::arg("hi") = std::numeric_limits<double>::infinity());
  m.def("compose", &compose, py::arg("outer"), py::arg("inner"));
  m.def("build_tight",
        [](const PyDensity& d, int L, std::vector<int> signs,
           std::vector<double> boundaries) {
          if (signs.empty()) signs.assign(static_cast<std::size_t>(L), +1);
          return build_tight(d.p, L, signs, boundaries);
        },
        py::arg("density"), py::arg("L"), py::arg("signs") = std::vector<int>{},
        py::arg("boundaries") = std::vector<double>{});

  m.def("info_loss",
        [](const PwmFunction& g, const PyDensity& d, double abs_tol,
           double rel_tol, int max_depth, double mass_eps) {
          return to_dict(
              info_loss(g, d.p, make_quad(abs_tol, rel_tol, max_depth, mass_eps)));
        },
        py::arg("g"), py::arg("density"), py::arg("abs_tol") = 1e-10,
        py::arg("rel_tol") = 1e-8, py::arg("max_depth") = 48,
        py::arg("mass_eps") = 1e-9);
  m.def("info_loss_via_w",
        [](const PwmFunction& g, const PyDensity& d, double abs_tol,
           double rel_tol, int max_depth, double mass_eps) {
          return to_dict(info_loss_via_W(
              g, d.p, make_quad(abs_tol, rel_tol, max_depth, mass_eps)));
        },
        py::arg("g"), py::arg("density"), py::arg("abs_tol") = 1e-10,
        py::arg("rel_tol") = 1e-8, py::arg("max_depth") = 48,
        py::arg("mass_eps") = 1e-9);
  m.def("bounds",
        [](const PwmFunction& g, const PyDensity& d) {
          BoundChain b = bounds(g, d.p);
          py::dict out;
          out["bound1_bits"] = b.bound1_bits;
          out["bound2_bits"] = b.bound2_bits;
          out["bound3_bits"] = b.bound3_bits;
          out["L"] = b.L;
          return out;
        },
        py::arg("g"), py::arg("density"));
  m.def("bijective_mass",
        [](const PwmFunction& g, const PyDensity& d) {
          return bijective_mass(g, d.p);
        },
        py::arg("g"), py::arg("density"));
  m.def("tightness_check",
        [](const PwmFunction& g, const PyDensity& d, int grid) {
          return to_dict(tightness_check(g, d.p, grid));
        },
        py::arg("g"), py::arg("density"), py::arg("grid") = 512);
  m.def("output_density_at",
        [](const PwmFunction& g, const PyDensity& d, double y) {
          return output_density_at(g, d.p, y);
        },
        py::arg("g"), py::arg("density"), py::arg("y"));
  m.def("branch_posterior",
        [](const PwmFunction& g, const PyDensity& d, double y) {
          return branch_posterior(g, d.p, y);
        },
        py::arg("g"), py::arg("density"), py::arg("y"));

  m.def("mc_loss",
        [](const PwmFunction& g, const PyDensity& d, std::uint64_t n_samples,
           std::uint64_t seed, int n_workers) {
          McConfig cfg;
          cfg.n_samples = n_samples;
          cfg.seed = seed;
          cfg.n_workers = n_workers;
          return to_dict(mc_loss(g, d.p, cfg));
        },
        py::arg("g"), py::arg("density"), py::arg("n_samples") = 1000000,
        py::arg("seed") = 1, py::arg("n_workers") = 1);
  m.def("histogram_oracle",
        [](const PwmFunction& g, const PyDensity& d, std::uint64_t n_samples,
           std::uint64_t seed, int y_bins, int refinement_levels) {
          HistogramConfig hc;
          hc.y_bins = y_bins;
          hc.refinement_levels = refinement_levels;
          McConfig mc;
          mc.n_samples = n_samples;
          mc.seed = seed;
          return to_dict(histogram_oracle(g, d.p, hc, mc));
        },
        py::arg("g"), py::arg("density"), py::arg("n_samples") = 1000000,
        py::arg("seed") = 1, py::arg("y_bins") = 256,
        py::arg("refinement_levels") = 4);

  m.def("cascade_loss",
        [](const std::vector<PwmFunction>& stages, const PyDensity& d,
           double abs_tol, double rel_tol) {
          QuadratureConfig q;
          q.abs_tol = abs_tol;
          q.rel_tol = rel_tol;
          return to_dict(cascade_loss(stages, d.p, q));
        },
        py::arg("stages"), py::arg("density"), py::arg("abs_tol") = 1e-10,
        py::arg("rel_tol") = 1e-8);
  m.def("verify_additivity",
        [](const std::vector<PwmFunction>& stages, const PyDensity& d,
           double abs_tol, double rel_tol) {
          QuadratureConfig q;
          q.abs_tol = abs_tol;
          q.rel_tol = rel_tol;
          return to_dict(verify_additivity(stages, d.p, q));
        },
        py::arg("stages"), py::arg("density"), py::arg("abs_tol") = 1e-10,
        py::arg("rel_tol") = 1e-8);
}
