#include <nlohmann/json.hpp>

#include "twistorgh/analysis.hpp"

namespace twistorgh {

namespace {

nlohmann::ordered_json residuals_json(const GHResiduals& r) {
  nlohmann::ordered_json j;
  j["r_total"] = r.r_total;
  j["r_SK"] = r.r_SK;
  j["r_QK"] = r.r_QK;
  j["r_124"] = r.r_124;
  j["r_G1"] = r.r_G1;
  j["r_G2"] = r.r_G2;
  j["r_G1_N"] = r.r_G1_N;
  j["r_G2_N"] = r.r_G2_N;
  j["r_N"] = r.r_N;
  j["r_N_hv"] = r.r_N_hv;
  j["r_dOmega"] = r.r_dOmega;
  j["r_W1"] = r.r_W1;
  return j;
}

}  // namespace

std::string report_json(const GHReport& report, const RunInfo& info, int indent) {
  nlohmann::ordered_json j;
  j["schema"] = "twistor-gh/1";
  j["class"] = report.class_name;
  j["description"] = report.description;
  j["pattern"] = report.pattern;
  j["components"] = {{"W1", report.w1}, {"W2", report.w2}, {"W3", report.w3}, {"W4", report.w4}};
  j["residuals"] = residuals_json(report.residuals);
  j["tol"] = report.tol;
  j["t"] = info.t;
  j["points"] = info.points;
  j["fibermap"] = info.fibermap;
  j["metric"] = info.metric;
  j["params"] = nlohmann::ordered_json::parse(info.params_json);
  j["seed"] = info.seed;
  j["warnings"] = report.warnings;
  if (info.timestamp) j["timestamp"] = *info.timestamp;
  return j.dump(indent);
}

}  // namespace twistorgh
