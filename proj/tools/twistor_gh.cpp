// twistor_gh: classify, verify, curvature, catalog.
//
// Exit codes: 0 ok, 1 input error (or a failing verify suite), 2 classifier
// inconsistency.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "twistorgh/analysis.hpp"
#include "twistorgh/catalog.hpp"
#include "twistorgh/riemann.hpp"
#include "twistorgh/verify.hpp"

namespace {

using namespace twistorgh;
using ojson = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInconsistent = 2;

struct RunConfig {
  std::string metric = "flat";
  std::string params = "{}";
  std::string fibermap;
  std::vector<double> ts;
  double tol = kDefaultTol;
  int points = 8;
  int fiber_points = 8;
  std::uint64_t seed = 1;
  std::string output = "human";
  bool no_timestamp = false;
};

struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// perturbed_flat takes its coefficient seed from --seed unless params set it.
std::string effective_params(const RunConfig& cfg) {
  if (cfg.metric != "perturbed_flat") return cfg.params;
  ojson p;
  try {
    p = ojson::parse(cfg.params);
  } catch (const ojson::parse_error&) {
    return cfg.params;  // rejected by build
  }
  if (p.is_object() && !p.contains("seed")) p["seed"] = cfg.seed;
  return p.dump();
}

void validate(const RunConfig& cfg) {
  if (!(cfg.tol > 0.0)) throw InputError("--tol must be positive");
  for (double t : cfg.ts)
    if (!(t > 0.0) || !std::isfinite(t)) throw InputError("--t values must be positive");
  if (cfg.points < 1) throw InputError("--points must be at least 1");
  if (cfg.fiber_points < 1) throw InputError("--fiber-points must be at least 1");
}

std::vector<std::string> fibermap_warnings(const FiberMapSpec& f) {
  std::vector<std::string> w;
  if (f.kind == FiberMapKind::Lambda && !f.lambda_nonzero())
    w.push_back(std::string("lambda = 0: the map is the constant section ") + (f.sign > 0 ? "-omega" : "+omega"));
  return w;
}

const char* kResidualNames[] = {"r_total", "r_SK",   "r_QK", "r_124",  "r_G1",     "r_G2",
                                "r_G1_N",  "r_G2_N", "r_N",  "r_N_hv", "r_dOmega", "r_W1"};

std::vector<double> residual_values(const GHResiduals& r) {
  return {r.r_total, r.r_SK,   r.r_QK, r.r_124,  r.r_G1,     r.r_G2,
          r.r_G1_N,  r.r_G2_N, r.r_N,  r.r_N_hv, r.r_dOmega, r.r_W1};
}

int cmd_classify(const RunConfig& cfg) {
  validate(cfg);
  if (cfg.fibermap.empty()) throw InputError("classify needs --fibermap");
  const FiberMapSpec f = parse_fibermap(cfg.fibermap);
  const CatalogEntry entry = build(cfg.metric, effective_params(cfg));
  if (f.needs_omega() && !entry.chart->has_complex_structure())
    throw InputError("fibermap " + to_string(f) + " needs a complex structure; " + cfg.metric + " has none");
  const auto pts = sample_points(entry.chart->domain(), {cfg.points, cfg.fiber_points, cfg.seed});
  const std::vector<double> ts = cfg.ts.empty() ? std::vector<double>{1.0} : cfg.ts;
  const std::optional<std::string> stamp = cfg.no_timestamp ? std::nullopt : std::optional<std::string>(utc_now());

  struct Row {
    GHReport report;
    RunInfo info;
  };
  std::vector<Row> rows;
  for (double t : ts) {
    const GHRun run = gh_residuals(t, *entry.chart, f, pts);
    GHReport rep = classify(run.residuals, cfg.tol);
    for (auto& w : fibermap_warnings(f)) rep.warnings.push_back(w);
    RunInfo info{cfg.metric, entry.params_json, to_string(f), t, run.points, cfg.seed, stamp};
    rows.push_back({std::move(rep), std::move(info)});
  }

  if (cfg.output == "json") {
    if (rows.size() == 1) {
      std::cout << report_json(rows[0].report, rows[0].info) << "\n";
    } else {
      ojson arr = ojson::array();
      for (const auto& r : rows) arr.push_back(ojson::parse(report_json(r.report, r.info)));
      std::cout << arr.dump(2) << "\n";
    }
  } else if (cfg.output == "csv") {
    std::cout << "metric,fibermap,t,points";
    for (const char* n : kResidualNames) std::cout << "," << n;
    std::cout << ",pattern,class\n";
    for (const auto& r : rows) {
      std::cout << r.info.metric << "," << r.info.fibermap << "," << r.info.t << "," << r.info.points;
      for (double v : residual_values(r.report.residuals)) std::cout << "," << sci(v);
      std::cout << "," << r.report.pattern << "," << r.report.class_name << "\n";
    }
  } else {
    for (const auto& r : rows) {
      std::cout << "metric " << r.info.metric << " " << r.info.params_json << "  fibermap " << r.info.fibermap
                << "  t " << r.info.t << "  points " << r.info.points << "\n";
      const auto vals = residual_values(r.report.residuals);
      for (std::size_t i = 0; i < vals.size(); ++i) std::printf("  %-9s %s\n", kResidualNames[i], sci(vals[i]).c_str());
      for (const auto& w : r.report.warnings) std::cout << "  warning: " << w << "\n";
      std::cout << "class " << r.report.class_name;
      if (!r.report.description.empty()) std::cout << " (" << r.report.description << ")";
      std::cout << "\n";
    }
  }
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg) {
  validate(cfg);
  const CatalogEntry entry = build(cfg.metric, effective_params(cfg));
  VerifyConfig vc;
  vc.plan = {cfg.points, cfg.fiber_points, cfg.seed};
  if (!cfg.ts.empty()) vc.ts = cfg.ts;
  if (!cfg.fibermap.empty()) {
    const FiberMapSpec f = parse_fibermap(cfg.fibermap);
    if (f.needs_omega() && !entry.chart->has_complex_structure())
      throw InputError("fibermap " + to_string(f) + " needs a complex structure; " + cfg.metric + " has none");
    vc.fibermaps = {f};
  }
  const auto suites = run_verify(*entry.chart, vc);
  bool all = true;
  for (const auto& s : suites) all = all && s.passed();

  if (cfg.output == "json") {
    ojson j;
    j["schema"] = "twistor-gh/1";
    j["metric"] = cfg.metric;
    j["params"] = ojson::parse(entry.params_json);
    j["seed"] = cfg.seed;
    j["passed"] = all;
    ojson arr = ojson::array();
    for (const auto& s : suites) {
      ojson fails = ojson::array();
      for (const auto& f : s.failures) fails.push_back({{"identity", f.identity}, {"point", f.point}, {"defect", f.defect}});
      arr.push_back({{"suite", s.name},
                     {"tolerance", s.tolerance},
                     {"checks", s.checks},
                     {"max_defect", s.max_defect},
                     {"passed", s.passed()},
                     {"failures", fails}});
    }
    j["suites"] = arr;
    if (!cfg.no_timestamp) j["timestamp"] = utc_now();
    std::cout << j.dump(2) << "\n";
  } else if (cfg.output == "csv") {
    std::cout << "suite,tolerance,checks,max_defect,passed\n";
    for (const auto& s : suites)
      std::cout << s.name << "," << sci(s.tolerance) << "," << s.checks << "," << sci(s.max_defect) << ","
                << (s.passed() ? "pass" : "fail") << "\n";
  } else {
    std::cout << "metric " << cfg.metric << " " << entry.params_json << "\n";
    for (const auto& s : suites) {
      std::printf("  %-32s %-4s checks %6d  max defect %s  tol %s\n", s.name.c_str(), s.passed() ? "pass" : "FAIL",
                  s.checks, sci(s.max_defect).c_str(), sci(s.tolerance).c_str());
      for (const auto& f : s.failures)
        std::printf("    %s at %s: defect %s\n", f.identity.c_str(), f.point.c_str(), sci(f.defect).c_str());
    }
    std::cout << (all ? "all suites pass" : "some suites FAIL") << "\n";
  }
  return all ? kExitOk : kExitInput;
}

int cmd_curvature(const RunConfig& cfg) {
  validate(cfg);
  const CatalogEntry entry = build(cfg.metric, effective_params(cfg));
  const auto pts = halton_points(entry.chart->domain(), cfg.points);
  ojson arr = ojson::array();
  for (const auto& p : pts) {
    const Frame4 frame = coordinate_frame(*entry.chart, p);
    const CurvOp op = curvature_operator(*entry.chart, p, frame);
    const CurvDecomp d = decompose(op);
    const SymEigen3 wp = symmetric_eigen(d.wplus);
    const SymEigen3 wm = symmetric_eigen(d.wminus);
    const CurvaturePredicates pr = curvature_predicates(op, cfg.tol);
    ojson e;
    e["point"] = {p[0], p[1], p[2], p[3]};
    e["s"] = d.s;
    e["wplus_spectrum"] = {wp.values[0], wp.values[1], wp.values[2]};
    e["wminus_spectrum"] = {wm.values[0], wm.values[1], wm.values[2]};
    e["b_norm"] = frobenius(d.b);
    ojson preds;
    preds["einstein"] = pr.einstein;
    preds["self_dual"] = pr.self_dual;
    preds["anti_self_dual"] = pr.anti_self_dual;
    if (entry.chart->has_complex_structure()) preds["kahler"] = is_kahler_at(*entry.chart, p, cfg.tol);
    e["predicates"] = preds;
    arr.push_back(e);
  }

  if (cfg.output == "json") {
    ojson j;
    j["schema"] = "twistor-gh/1";
    j["metric"] = cfg.metric;
    j["params"] = ojson::parse(entry.params_json);
    j["points"] = arr;
    if (!cfg.no_timestamp) j["timestamp"] = utc_now();
    std::cout << j.dump(2) << "\n";
    return kExitOk;
  }
  if (cfg.output == "csv") std::cout << "x1,x2,x3,x4,s,wplus1,wplus2,wplus3,wminus1,wminus2,wminus3,b_norm\n";
  else std::cout << "metric " << cfg.metric << " " << entry.params_json << "\n";
  for (const auto& e : arr) {
    const auto& x = e["point"];
    if (cfg.output == "csv") {
      std::cout << x[0].get<double>() << "," << x[1].get<double>() << "," << x[2].get<double>() << ","
                << x[3].get<double>() << "," << sci(e["s"]);
      for (const auto& v : e["wplus_spectrum"]) std::cout << "," << sci(v);
      for (const auto& v : e["wminus_spectrum"]) std::cout << "," << sci(v);
      std::cout << "," << sci(e["b_norm"]) << "\n";
      continue;
    }
    std::printf("  x = (%.3f, %.3f, %.3f, %.3f)\n", x[0].get<double>(), x[1].get<double>(), x[2].get<double>(),
                x[3].get<double>());
    std::printf("    s %s  W+ [%s %s %s]  W- [%s %s %s]  |B| %s\n", sci(e["s"]).c_str(),
                sci(e["wplus_spectrum"][0]).c_str(), sci(e["wplus_spectrum"][1]).c_str(),
                sci(e["wplus_spectrum"][2]).c_str(), sci(e["wminus_spectrum"][0]).c_str(),
                sci(e["wminus_spectrum"][1]).c_str(), sci(e["wminus_spectrum"][2]).c_str(),
                sci(e["b_norm"]).c_str());
    std::cout << "   ";
    for (const auto& [k, v] : e["predicates"].items()) std::cout << " " << k << "=" << (v.get<bool>() ? "yes" : "no");
    std::cout << "\n";
  }
  return kExitOk;
}

int cmd_catalog(const RunConfig& cfg) {
  const auto list = list_catalog();
  if (cfg.output == "json") {
    ojson arr = ojson::array();
    for (const auto& c : list)
      arr.push_back({{"name", c.name}, {"default_params", ojson::parse(c.default_params)}, {"summary", c.summary}});
    std::cout << arr.dump(2) << "\n";
  } else if (cfg.output == "csv") {
    std::cout << "name,default_params,summary\n";
    for (const auto& c : list) std::cout << c.name << ",\"" << c.default_params << "\",\"" << c.summary << "\"\n";
  } else {
    for (const auto& c : list) std::printf("%-15s %-26s %s\n", c.name.c_str(), c.default_params.c_str(), c.summary.c_str());
  }
  return kExitOk;
}

void add_run_options(CLI::App* cmd, RunConfig& cfg, bool with_fibermap) {
  cmd->add_option("--metric", cfg.metric, "catalog metric name")->capture_default_str();
  cmd->add_option("--params", cfg.params, "metric parameters as a JSON object")->capture_default_str();
  if (with_fibermap) cmd->add_option("--fibermap", cfg.fibermap, "id | antipodal | omega | lambda:+:a,b | lambda:-:a,b");
  cmd->add_option("--t", cfg.ts, "fibre scale t > 0 (repeatable)")->take_all()->allow_extra_args(false);
  cmd->add_option("--tol", cfg.tol, "vanishing tolerance")->capture_default_str();
  cmd->add_option("--points", cfg.points, "base sample points")->capture_default_str();
  cmd->add_option("--fiber-points", cfg.fiber_points, "fibre sample points per base point")->capture_default_str();
  cmd->add_option("--seed", cfg.seed, "sampling seed (and the perturbed_flat coefficient seed)")->capture_default_str();
  cmd->add_option("--no-timestamp", cfg.no_timestamp, "omit the timestamp from JSON reports")->expected(0)->default_str("false");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gray-Hervella classification of almost complex structures on twistor spaces"};
  app.require_subcommand(1);
  RunConfig cfg;
  auto* output = app.add_option("--output", cfg.output, "json | csv | human");
  output->check(CLI::IsMember({"json", "csv", "human"}))->capture_default_str();

  auto* classify_cmd = app.add_subcommand("classify", "classify J_f for each t");
  auto* verify_cmd = app.add_subcommand("verify", "run the invariant suites");
  auto* curvature_cmd = app.add_subcommand("curvature", "curvature decomposition at the sample points");
  auto* catalog_cmd = app.add_subcommand("catalog", "list the built-in metrics");
  add_run_options(classify_cmd, cfg, true);
  add_run_options(verify_cmd, cfg, true);
  add_run_options(curvature_cmd, cfg, false);
  for (auto* c : {classify_cmd, verify_cmd, curvature_cmd, catalog_cmd})
    c->add_option("--output", cfg.output, "json | csv | human")->check(CLI::IsMember({"json", "csv", "human"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*classify_cmd) return cmd_classify(cfg);
    if (*verify_cmd) return cmd_verify(cfg);
    if (*curvature_cmd) return cmd_curvature(cfg);
    if (*catalog_cmd) return cmd_catalog(cfg);
  } catch (const ClassifierInconsistency& e) {
    std::cerr << "classifier inconsistency: " << e.what() << "\n";
    return kExitInconsistent;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
