#pragma once

// Invariant suites: algebraic identities of the fibre algebra and curvature,
// the curvature decomposition, closed forms against the differentiation
// oracles, the zero blocks of the covariant derivative of Omega, and the
// fibre map identities.

#include <cstdint>
#include <string>
#include <vector>

#include "twistorgh/analysis.hpp"
#include "twistorgh/fibermaps.hpp"
#include "twistorgh/metric_chart.hpp"

namespace twistorgh {

struct VerifyConfig {
  std::vector<FiberMapSpec> fibermaps;  // empty: the standard set the chart supports
  std::vector<double> ts{1.0};
  SamplePlan plan;
  int identity_samples = 64;
};

struct VerifyFailure {
  std::string identity;
  std::string point;
  double defect = 0.0;
};

struct SuiteResult {
  std::string name;
  double tolerance = 0.0;
  int checks = 0;
  double max_defect = 0.0;
  std::vector<VerifyFailure> failures;

  bool passed() const { return failures.empty(); }
};

// id, antipodal, and with a complex structure omega, lambda:+-:2,1 and lambda:+-:0.6,0.8.
std::vector<FiberMapSpec> standard_fibermaps(const MetricChart& chart);

SuiteResult suite_algebraic_identities(const MetricChart& chart, int samples, std::uint64_t seed);
SuiteResult suite_decomposition(const MetricChart& chart, const SamplePlan& plan);
SuiteResult suite_oracle_equivalence(const MetricChart& chart, const VerifyConfig& cfg);
SuiteResult suite_zero_blocks(const MetricChart& chart, const VerifyConfig& cfg);
SuiteResult suite_internal_consistency(const MetricChart& chart, const VerifyConfig& cfg);
SuiteResult suite_fibermap_identities(const MetricChart& chart, const VerifyConfig& cfg);

std::vector<SuiteResult> run_verify(const MetricChart& chart, const VerifyConfig& cfg);

}  // namespace twistorgh
