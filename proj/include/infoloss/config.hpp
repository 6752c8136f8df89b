#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "infoloss/cascade.hpp"
#include "infoloss/estimators.hpp"
#include "infoloss/loss.hpp"

namespace infoloss::config {

using json = nlohmann::json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Number, or the strings "inf" / "-inf".
double extended_number(const json& v, const std::string& what);

DensityPtr parse_density(const json& j);
// density is needed for the cdf-composed kinds ("tight", "cdf_piecewise");
// pass nullptr when those are not expected.
PwmFunction parse_function(const json& j, const DensityPtr& density);

QuadratureConfig parse_quadrature(const json& root);
McConfig parse_mc(const json& root);
HistogramConfig parse_histogram(const json& root);

// Copy of cfg with every recognized section completed with its defaults, so
// re-running the dump reproduces the run exactly.
json resolve_defaults(const json& cfg, const std::string& command);

// Assigns a number at a dotted path ("density.sigma", "cascade.stages.1.a"),
// creating objects along the way; numeric tokens index arrays.
void set_by_path(json& root, const std::string& dotted, double value);

json to_json(const LossReport& r);
json to_json(const McReport& r);
json to_json(const TightnessReport& r);
json to_json(const CascadeReport& r);
json to_json(const HistogramReport& r);

// Fixed-width scientific formatting used by every CSV writer.
std::string csv_number(double v);

}  // namespace infoloss::config
