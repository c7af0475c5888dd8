// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance [--only N] [--known-failure N ...]
//
// Exits 0 when the set of failing criteria equals the set given with
// --known-failure, 1 otherwise.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "twistorgh/analysis.hpp"
#include "twistorgh/catalog.hpp"
#include "twistorgh/riemann.hpp"
#include "twistorgh/twistor.hpp"
#include "twistorgh/verify.hpp"

using namespace twistorgh;

namespace {

constexpr double kTol = 1e-7;
constexpr double kNonVanishing = 10.0 * kTol;

const std::vector<std::string> kMetrics{"flat",  "round_sphere", "conformal_flat", "s2xh2",
                                        "s2xs2", "fubini_study", "perturbed_flat"};

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

// Accumulates named clauses into one verdict.
struct Clauses {
  Outcome out;
  void add(const std::string& what, bool ok) {
    if (!out.detail.empty()) out.detail += "; ";
    out.detail += what + (ok ? "" : " [failed]");
    out.pass = out.pass && ok;
  }
};

GHResiduals residuals(const std::string& metric, const FiberMapSpec& f, double t) {
  const auto e = build(metric);
  return gh_residuals(t, *e.chart, f, sample_points(e.chart->domain(), SamplePlan{})).residuals;
}

std::string class_of(const GHResiduals& r) {
  try {
    return classify(r, kTol).class_name;
  } catch (const ClassifierInconsistency& err) {
    return std::string("inconsistent (") + err.what() + ")";
  }
}

Outcome suite_criterion(const std::function<SuiteResult(const MetricChart&)>& run, double tol) {
  Clauses c;
  for (const auto& name : kMetrics) {
    const SuiteResult s = run(*build(name).chart);
    c.add(name + " " + sci(s.max_defect) + " over " + std::to_string(s.checks),
          s.failures.empty() && s.max_defect <= tol && s.checks > 0);
  }
  return c.out;
}

Outcome criterion1() {
  return suite_criterion([](const MetricChart& ch) { return suite_algebraic_identities(ch, 64, 1); }, 1e-10);
}

Outcome criterion2() {
  return suite_criterion([](const MetricChart& ch) { return suite_decomposition(ch, SamplePlan{}); }, 1e-10);
}

Outcome criterion3() {
  Clauses c;
  for (const std::string name : {"fubini_study", "s2xs2"}) {
    const auto e = build(name);
    double worst = 0.0;
    for (const auto& p : halton_points(e.chart->domain(), 8)) {
      const TwistorPoint tp = make_twistor_point(*e.chart, p, s_basis<double>(0));
      const CurvDecomp d = decompose(tp.op);
      const double top = d.s / 3.0;
      const Vec3<double> want{top, -d.s / 6.0, -d.s / 6.0};
      const SymEigen3 eig = symmetric_eigen(d.wplus);
      double spec = 0.0;
      for (int i = 0; i < 3; ++i) spec = std::max(spec, std::abs(eig.values[i] - want[i]));
      const Vec3<double> w = tp.base.omega.c;
      const Vec3<double> ww = d.wplus * w;
      double vec = 0.0;
      for (int i = 0; i < 3; ++i) vec = std::max(vec, std::abs(ww[i] - top * w[i]));
      worst = std::max(worst, std::max(spec, vec) / std::abs(top));
    }
    c.add(name + " relative error " + sci(worst), worst <= 1e-6);
  }
  return c.out;
}

const std::vector<FiberMapSpec>& grid_maps() {
  static const std::vector<FiberMapSpec> maps{FiberMapSpec::identity(),         FiberMapSpec::antipodal(),
                                              FiberMapSpec::const_omega(),      FiberMapSpec::lambda(2, 1, +1),
                                              FiberMapSpec::lambda(2, 1, -1),   FiberMapSpec::lambda(0.6, 0.8, +1),
                                              FiberMapSpec::lambda(0.6, 0.8, -1)};
  return maps;
}

struct GridDefects {
  double cov = 0.0;
  double zero_blocks = 0.0;
  double nijenhuis = 0.0;
  int cases = 0;
};

// Every metric x standard map x t in {0.5, 1, 2} x 8 fibre points at each of 8 base points.
const GridDefects& oracle_grid() {
  static const GridDefects g = [] {
    GridDefects out;
    for (const auto& name : kMetrics) {
      const auto e = build(name);
      const auto pts = sample_points(e.chart->domain(), SamplePlan{8, 8, 1});
      for (const auto& sp : pts) {
        const TwistorPoint tp = make_twistor_point(*e.chart, sp.p, sp.sigma);
        for (const auto& f : grid_maps())
          for (double t : {0.5, 1.0, 2.0}) {
            const CovDerivTensor dor = cov_deriv_oracle(t, *e.chart, f, tp);
            out.cov = std::max(out.cov, relative_defect(cov_deriv_closed(t, f, tp).t, dor.t));
            double z = 0.0;
            for (int a = 0; a < 6; ++a)
              for (int b = 0; b < 6; ++b)
                for (int c = 0; c < 6; ++c)
                  if (int(!is_hor(a)) + int(!is_hor(b)) + int(!is_hor(c)) >= 2) z += dor.t[a][b][c] * dor.t[a][b][c];
            out.zero_blocks = std::max(out.zero_blocks, std::sqrt(z));
            out.nijenhuis = std::max(
                out.nijenhuis, relative_defect(nijenhuis_closed(t, f, tp), nijenhuis_oracle(t, *e.chart, f, tp)));
            ++out.cases;
          }
      }
    }
    return out;
  }();
  return g;
}

Outcome criterion4() {
  const GridDefects& g = oracle_grid();
  Clauses c;
  c.add("D Omega relative defect " + sci(g.cov) + " over " + std::to_string(g.cases) + " cases", g.cov <= 1e-5);
  c.add("zero blocks " + sci(g.zero_blocks), g.zero_blocks <= 1e-6);
  return c.out;
}

Outcome criterion5() {
  const GridDefects& g = oracle_grid();
  Clauses c;
  c.add("Nijenhuis relative defect " + sci(g.nijenhuis) + " over " + std::to_string(g.cases) + " cases",
        g.nijenhuis <= 1e-5);
  return c.out;
}

Outcome criterion6() {
  const auto omega = FiberMapSpec::const_omega();
  Clauses c;
  const std::string flat = class_of(residuals("flat", omega, 1.0));
  c.add("flat class " + flat, flat == "K");
  const std::string s2xh2 = class_of(residuals("s2xh2", omega, 1.0));
  c.add("s2xh2 class " + s2xh2, s2xh2 == "W3");
  const GHResiduals rs = residuals("round_sphere", omega, 1.0);
  c.add("round_sphere r_G1 " + sci(rs.r_G1) + " (G1 holds)", rs.r_G1 <= kTol);
  c.add("round_sphere r_N " + sci(rs.r_N) + " (H fails)", rs.r_N > kNonVanishing);
  c.add("round_sphere r_G2 " + sci(rs.r_G2) + " (G2 fails)", rs.r_G2 > kNonVanishing);
  const GHResiduals ss = residuals("s2xs2", omega, 1.0);
  c.add("s2xs2 r_SK " + sci(ss.r_SK) + " (SK fails)", ss.r_SK > kNonVanishing);
  return c.out;
}

Outcome criterion7() {
  const auto plus = FiberMapSpec::lambda(2, 1, +1), minus = FiberMapSpec::lambda(2, 1, -1);
  Clauses c;
  const GHResiduals fm = residuals("flat", minus, 1.0);
  const std::string fm_class = class_of(fm);
  c.add("flat minus class " + fm_class, fm_class == "W1+W2");
  c.add("flat minus r_G1 " + sci(fm.r_G1) + " r_G2 " + sci(fm.r_G2), fm.r_G1 > kNonVanishing && fm.r_G2 > kNonVanishing);
  const GHResiduals fp = residuals("flat", plus, 1.0);
  c.add("flat plus r_N " + sci(fp.r_N) + " r_QK " + sci(fp.r_QK), fp.r_N <= kTol && fp.r_QK > kNonVanishing);
  const std::string sp = class_of(residuals("s2xh2", plus, 1.0));
  c.add("s2xh2 plus class " + sp, sp == "W3");
  const GHResiduals sm = residuals("s2xh2", minus, 1.0);
  c.add("s2xh2 minus r_SK " + sci(sm.r_SK) + " r_QK " + sci(sm.r_QK), sm.r_SK <= kTol && sm.r_QK > kNonVanishing);
  return c.out;
}

Outcome criterion8() {
  return suite_criterion([](const MetricChart& ch) { return suite_fibermap_identities(ch, VerifyConfig{}); }, 1e-8);
}

Outcome criterion9() {
  const auto plus = FiberMapSpec::lambda(0.6, 0.8, +1), minus = FiberMapSpec::lambda(0.6, 0.8, -1);
  Clauses c;
  const GHResiduals fm = residuals("flat", minus, 1.0);
  c.add("flat minus r_QK " + sci(fm.r_QK), fm.r_QK <= kTol);
  const GHResiduals fp = residuals("flat", plus, 1.0);
  c.add("flat plus r_QK " + sci(fp.r_QK), fp.r_QK > kNonVanishing);
  for (const auto& f : {plus, minus}) {
    const GHResiduals r = residuals("s2xs2", f, 1.0);
    c.add("s2xs2 " + to_string(f) + " r_W1 " + sci(r.r_W1) + " r_dOmega " + sci(r.r_dOmega),
          r.r_W1 > kNonVanishing && r.r_dOmega > kNonVanishing);
  }
  return c.out;
}

std::string report_for(const std::string& metric, const std::string& params, const std::string& map, double t,
                       std::uint64_t seed) {
  const auto e = build(metric, params);
  SamplePlan plan;
  plan.seed = seed;
  const FiberMapSpec f = parse_fibermap(map);
  const GHRun run = gh_residuals(t, *e.chart, f, sample_points(e.chart->domain(), plan));
  const RunInfo info{metric, e.params_json, to_string(f), t, run.points, seed, std::nullopt};
  return report_json(classify(run.residuals, kTol), info);
}

Outcome criterion10() {
  Clauses c;
  const struct {
    const char* metric;
    const char* params;
    const char* map;
    double t;
  } cases[] = {{"perturbed_flat", R"({"seed":7,"eps":0.1})", "lambda:+:0.3,0.7", 0.5},
               {"s2xh2", "{}", "omega", 1.0},
               {"flat", "{}", "lambda:-:2,1", 2.0}};
  for (const auto& k : cases) {
    const std::string a = report_for(k.metric, k.params, k.map, k.t, 11);
    const std::string b = report_for(k.metric, k.params, k.map, k.t, 11);
    c.add(std::string(k.metric) + " " + k.map + " " + std::to_string(a.size()) + " bytes", a == b);
  }
  return c.out;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> known;
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--known-failure") && i + 1 < argc) {
      known.insert(std::atoi(argv[++i]));
    } else if (!std::strcmp(argv[i], "--only") && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: acceptance [--only N] [--known-failure N ...]\n");
      return 2;
    }
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"algebraic identities", criterion1},
      {"curvature decomposition", criterion2},
      {"Kahler W+ spectrum", criterion3},
      {"covariant derivative oracle equivalence", criterion4},
      {"Nijenhuis oracle equivalence", criterion5},
      {"omega regression", criterion6},
      {"lambda = 2+i regression", criterion7},
      {"fibre map identities", criterion8},
      {"|lambda| = 1 spot check", criterion9},
      {"determinism", criterion10},
  };

  std::set<int> failed;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int n = int(i) + 1;
    if (only && n != only) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& err) {
      o = {false, std::string("exception: ") + err.what()};
    }
    std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", n, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) failed.insert(n);
  }

  std::set<int> expected;
  for (int k : known)
    if (!only || k == only) expected.insert(k);
  if (failed != expected) {
    for (int k : expected)
      if (!failed.count(k)) std::printf("criterion %d was expected to fail and passed\n", k);
    return 1;
  }
  return 0;
}
