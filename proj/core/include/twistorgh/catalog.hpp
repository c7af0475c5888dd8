#pragma once

// Built-in analytic base manifolds. Every chart lives on the box
// [-0.4, 0.4]^4 and, where it carries a complex structure, J d1 = d2 and
// J d3 = d4 (possibly corrected by the metric, see perturbed_flat).
//
//   flat                      euclidean metric
//   round_sphere   {r}        4 r^4 / (r^2 + |x|^2)^2 delta
//   conformal_flat {amp}      exp(2 amp exp(-|x|^2)) delta
//   s2xh2          {c}        product of curvature +c and -c planes
//   s2xs2          {c1, c2}   product of curvature c1 and c2 planes
//   fubini_study              affine chart of CP^2
//   perturbed_flat {seed, eps}  delta + eps P with a seeded cubic field P

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "twistorgh/metric_chart.hpp"

namespace twistorgh {

struct UnknownMetric : std::invalid_argument {
  explicit UnknownMetric(const std::string& name) : std::invalid_argument("unknown metric '" + name + "'") {}
};

struct InvalidParameters : std::invalid_argument {
  explicit InvalidParameters(const std::string& what) : std::invalid_argument(what) {}
};

struct ExpectedFlags {
  bool kahler = false;
  bool einstein = false;
  bool self_dual = false;
  bool anti_self_dual = false;
  bool scalar_flat = false;
  bool ricci_flat = false;
};

struct CatalogEntry {
  std::string name;
  std::string params_json;  // canonical, with defaults filled in
  ChartPtr chart;
  ExpectedFlags expected;
  // Gray-Hervella class names known from the theory, keyed by fibre map string.
  std::map<std::string, std::string> expected_class;
};

// Throws UnknownMetric, InvalidParameters (bad JSON, unknown keys, values that
// make the metric singular on the domain) or std::runtime_error when the
// expected flags are not reproduced numerically.
CatalogEntry build(const std::string& name, const std::string& params_json = "{}");

struct CatalogInfo {
  std::string name;
  std::string default_params;
  std::string summary;
};
std::vector<CatalogInfo> list_catalog();

struct FlagCheck {
  bool ok = true;
  std::vector<std::string> mismatches;
};

// Re-derives the flags at `points` Halton points of the domain. A flag expected
// true must hold at every point; a flag expected false must fail at some point.
FlagCheck rederive_flags(const CatalogEntry& entry, int points = 16, double tol = 1e-8);

}  // namespace twistorgh
