#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "support.hpp"
#include "twistorgh/analysis.hpp"
#include "twistorgh/catalog.hpp"
#include "twistorgh/riemann.hpp"
#include "twistorgh/twistor.hpp"

using namespace twistorgh;
using namespace testing_support;

namespace {

std::vector<FiberMapSpec> maps_for(const MetricChart& chart) {
  std::vector<FiberMapSpec> m{FiberMapSpec::identity(), FiberMapSpec::antipodal()};
  if (chart.has_complex_structure())
    for (const auto& f : {FiberMapSpec::const_omega(), FiberMapSpec::lambda(2, 1, +1), FiberMapSpec::lambda(2, 1, -1),
                          FiberMapSpec::lambda(0.6, 0.8, +1), FiberMapSpec::lambda(0.6, 0.8, -1),
                          FiberMapSpec::lambda(0.3, 0.7, +1)})
      m.push_back(f);
  return m;
}

// Pairing of a 1-form with a vertical vector u, through the slots e_5, e_6.
double vertical_component(const Form1& w, double t, const SDual<double>& sigma, const SDual<double>& u) {
  const auto [n1, n2] = vertical_frame(sigma);
  return std::sqrt(t) * (dot(n1, u) * w[4] + dot(n2, u) * w[5]);
}

GHResiduals filled(double v) {
  GHResiduals r;
  r.r_total = r.r_SK = r.r_QK = r.r_124 = r.r_G1 = r.r_G2 = v;
  r.r_G1_N = r.r_G2_N = r.r_N = r.r_N_hv = r.r_dOmega = r.r_W1 = v;
  return r;
}

}  // namespace

TEST(CovDeriv, FlatConstOmegaIsParallel) {
  const auto e = build("flat");
  Rng rng(60);
  for (int n = 0; n < 10; ++n) {
    const auto tp = make_twistor_point(*e.chart, rng.vec4(0.3), rng.unit_sdual());
    for (double t : {0.5, 1.0, 2.0}) EXPECT_LT(norm(cov_deriv_closed(t, FiberMapSpec::const_omega(), tp).t), 1e-14);
  }
}

TEST(CovDeriv, FlatAntipodalVerticalBlock) {
  const auto e = build("flat");
  Rng rng(61);
  for (int n = 0; n < 10; ++n) {
    const SDual<double> s = rng.unit_sdual();
    const auto tp = make_twistor_point(*e.chart, rng.vec4(0.3), s);
    const auto [n1, n2] = vertical_frame(s);
    for (double t : {0.5, 2.0}) {
      const auto d = cov_deriv_closed(t, FiberMapSpec::antipodal(), tp);
      const std::array<SDual<double>, 2> nus{n1, n2};
      for (int i = 0; i < 2; ++i)
        for (int b = 0; b < 4; ++b)
          for (int c = 0; c < 4; ++c)
            EXPECT_NEAR(d.t[4 + i][b][c], -2.0 * pair_sdual_wedge(nus[i], unit(b), unit(c)) / std::sqrt(t), 1e-13);
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          for (int c = 0; c < 4; ++c) EXPECT_NEAR(d.t[a][b][c], 0.0, 1e-14);
    }
  }
}

TEST(CovDeriv, AntisymmetricAndJAntiInvariant) {
  Rng rng(62);
  for (const auto& name : catalog_names()) {
    const auto e = build(name);
    const auto p = halton_points(e.chart->domain(), 3)[2];
    const auto tp = make_twistor_point(*e.chart, p, rng.unit_sdual());
    for (const auto& f : maps_for(*e.chart)) {
      const double t = 0.7;
      const auto d = cov_deriv_closed(t, f, tp);
      const auto basis = ortho_basis(t, f, tp);
      for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b)
          for (int c = 0; c < 6; ++c) {
            EXPECT_NEAR(d.t[a][b][c], -d.t[a][c][b], 1e-11) << name << " " << to_string(f);
            double jj = 0.0;
            for (int b2 = 0; b2 < 6; ++b2)
              for (int c2 = 0; c2 < 6; ++c2) jj += basis.jm[b2][b] * basis.jm[c2][c] * d.t[a][b2][c2];
            EXPECT_NEAR(jj, -d.t[a][b][c], 1e-10) << name << " " << to_string(f);
          }
    }
  }
}

TEST(CovDeriv, ClosedFormMatchesOracle) {
  Rng rng(63);
  for (const std::string name : {"fubini_study", "perturbed_flat", "round_sphere", "s2xh2"}) {
    const auto e = build(name);
    const auto p = halton_points(e.chart->domain(), 5)[4];
    for (int n = 0; n < 2; ++n) {
      const auto tp = make_twistor_point(*e.chart, p, rng.unit_sdual());
      for (const auto& f : maps_for(*e.chart))
        for (double t : {0.5, 2.0})
          EXPECT_LT(relative_defect(cov_deriv_closed(t, f, tp).t, cov_deriv_oracle(t, *e.chart, f, tp).t), 1e-6)
              << name << " " << to_string(f) << " t=" << t;
    }
  }
}

TEST(CovDeriv, FubiniStudyOmegaAtS1) {
  const auto e = build("fubini_study");
  const auto tp = make_twistor_point(*e.chart, {0.1, -0.2, 0.05, 0.3}, s_basis(0));
  const auto f = FiberMapSpec::const_omega();
  EXPECT_LT(relative_defect(cov_deriv_closed(1.0, f, tp).t, cov_deriv_oracle(1.0, *e.chart, f, tp).t), 1e-6);
}

TEST(ExteriorD, ClosedBlocksMatchCyclicSum) {
  Rng rng(64);
  for (const auto& name : catalog_names()) {
    const auto e = build(name);
    const auto tp = make_twistor_point(*e.chart, halton_points(e.chart->domain(), 2)[1], rng.unit_sdual());
    for (const auto& f : maps_for(*e.chart)) {
      const auto d = cov_deriv_closed(1.3, f, tp);
      EXPECT_LT(relative_defect(exterior_d_closed(1.3, f, tp), exterior_d(d)), 1e-11) << name << " " << to_string(f);
      const Form1 a = codifferential_closed(1.3, f, tp), b = codifferential(d);
      for (int c = 0; c < 6; ++c) EXPECT_NEAR(a[c], b[c], 1e-10) << name << " " << to_string(f);
    }
  }
}

TEST(Codifferential, VanishesOnFlatBase) {
  const auto e = build("flat");
  Rng rng(65);
  for (const auto& f : maps_for(*e.chart)) {
    const auto tp = make_twistor_point(*e.chart, rng.vec4(0.3), rng.unit_sdual());
    for (double t : {0.5, 1.0, 2.0}) {
      const Form1 w = codifferential_closed(t, f, tp);
      for (double x : w) EXPECT_NEAR(x, 0.0, 1e-12) << to_string(f);
    }
  }
}

TEST(Codifferential, FubiniStudyVerticalValue) {
  const auto e = build("fubini_study");
  const Vec4<double> p{};
  const double s = scalar_curvature(*e.chart, p);
  EXPECT_NEAR(s, 24.0, 1e-8);
  const auto tp = make_twistor_point(*e.chart, p, s_basis(1));
  for (double t : {0.5, 1.0, 2.0}) {
    const Form1 w = codifferential_closed(t, FiberMapSpec::const_omega(), tp);
    EXPECT_NEAR(vertical_component(w, t, s_basis(1), s_basis(2)), -t * s / 2.0, 1e-7) << t;
    for (int c = 0; c < 4; ++c) EXPECT_NEAR(w[c], 0.0, 1e-9);
  }
}

TEST(Codifferential, S2xH2LambdaMapsAreBalanced) {
  const auto e = build("s2xh2");
  Rng rng(66);
  for (int sign : {+1, -1}) {
    const auto f = FiberMapSpec::lambda(2, 1, sign);
    for (int n = 0; n < 5; ++n) {
      const auto tp = make_twistor_point(*e.chart, rng.vec4(0.3), rng.unit_sdual());
      const Form1 w = codifferential_closed(1.0, f, tp);
      for (double x : w) EXPECT_NEAR(x, 0.0, 1e-8) << to_string(f);
    }
  }
}

TEST(Nijenhuis, FlatIdentityIsIntegrable) {
  const auto e = build("flat");
  Rng rng(67);
  const auto tp = make_twistor_point(*e.chart, rng.vec4(0.3), rng.unit_sdual());
  EXPECT_LT(norm(nijenhuis_closed(1.0, FiberMapSpec::identity(), tp)), 1e-13);
}

TEST(Nijenhuis, FlatAntipodalMixedBlock) {
  const auto e = build("flat");
  Rng rng(68);
  for (int n = 0; n < 5; ++n) {
    const SDual<double> s = rng.unit_sdual();
    const auto tp = make_twistor_point(*e.chart, rng.vec4(0.3), s);
    const auto [n1, n2] = vertical_frame(s);
    const std::array<SDual<double>, 2> nus{n1, n2};
    for (double t : {0.5, 2.0}) {
      const Tensor3 nt = nijenhuis_closed(t, FiberMapSpec::antipodal(), tp);
      for (int i = 0; i < 2; ++i)
        for (int x = 0; x < 4; ++x)
          for (int z = 0; z < 4; ++z)
            EXPECT_NEAR(nt[x][4 + i][z], 4.0 * pair_sdual_wedge(cross(s, nus[i]), unit(x), unit(z)) / std::sqrt(t),
                        1e-12);
    }
  }
}

TEST(Nijenhuis, RoundSphereOmegaVerticalValue) {
  const auto e = build("round_sphere");
  const auto tp = make_twistor_point(*e.chart, Vec4<double>{}, s_basis(1));
  const auto [n1, n2] = vertical_frame(s_basis(1));
  for (double t : {0.5, 1.0, 2.0}) {
    const Tensor3 nt = nijenhuis_closed(t, FiberMapSpec::const_omega(), tp);
    const double v = std::sqrt(t) * (dot(n1, s_basis(0)) * nt[0][3][4] + dot(n2, s_basis(0)) * nt[0][3][5]);
    EXPECT_NEAR(v, 2.0 * t, 1e-8) << t;
  }
}

TEST(Nijenhuis, ScalarFlatKahlerLambdaPlusIsIntegrable) {
  const auto e = build("s2xh2");
  Rng rng(69);
  for (int n = 0; n < 5; ++n) {
    const auto tp = make_twistor_point(*e.chart, rng.vec4(0.3), rng.unit_sdual());
    EXPECT_LT(norm(nijenhuis_closed(1.0, FiberMapSpec::lambda(2, 1, +1), tp)), 1e-7);
  }
}

TEST(Nijenhuis, ClosedFormMatchesOracleAndCovDeriv) {
  Rng rng(70);
  for (const std::string name : {"flat", "perturbed_flat", "fubini_study", "s2xs2"}) {
    const auto e = build(name);
    const auto tp = make_twistor_point(*e.chart, halton_points(e.chart->domain(), 4)[3], rng.unit_sdual());
    for (const auto& f : maps_for(*e.chart)) {
      const Tensor3 nc = nijenhuis_closed(0.8, f, tp);
      EXPECT_LT(relative_defect(nc, nijenhuis_oracle(0.8, *e.chart, f, tp)), 1e-6) << name << " " << to_string(f);
      EXPECT_LT(relative_defect(nijenhuis_from_cov_deriv(cov_deriv_closed(0.8, f, tp), ortho_basis(0.8, f, tp)), nc),
                1e-10)
          << name << " " << to_string(f);
      for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b)
          for (int c = 0; c < 6; ++c) EXPECT_NEAR(nc[a][b][c], -nc[b][a][c], 1e-10);
    }
  }
}

TEST(Nijenhuis, MixedBlockFollowsFibreHolomorphy) {
  const auto e = build("flat");
  const auto pts = sample_points(e.chart->domain(), {2, 8, 3});
  for (double a : {2.0, 0.6, 0.3}) {
    const double b = a == 2.0 ? 1.0 : (a == 0.6 ? 0.8 : 0.7);
    const auto plus = gh_residuals(1.0, *e.chart, FiberMapSpec::lambda(a, b, +1), pts).residuals;
    const auto minus = gh_residuals(1.0, *e.chart, FiberMapSpec::lambda(a, b, -1), pts).residuals;
    EXPECT_LT(plus.r_N_hv, 1e-10);
    EXPECT_GT(minus.r_N_hv, 1e-3);
  }
}

TEST(Residuals, GrayHervellaConditionsAgreeWithNijenhuisForms) {
  for (const auto& name : catalog_names()) {
    const auto e = build(name);
    const auto pts = sample_points(e.chart->domain(), {3, 8, 5});
    for (const auto& f : maps_for(*e.chart)) {
      const auto r = gh_residuals(1.0, *e.chart, f, pts).residuals;
      EXPECT_EQ(r.r_G1 <= 1e-7, r.r_G1_N <= 1e-7) << name << " " << to_string(f);
      EXPECT_EQ(r.r_G2 <= 1e-7, r.r_G2_N <= 1e-7) << name << " " << to_string(f);
    }
  }
}

TEST(Residuals, FlatOmegaAllVanish) {
  const auto e = build("flat");
  const auto pts = sample_points(e.chart->domain(), {});
  const GHRun run = gh_residuals(1.0, *e.chart, FiberMapSpec::const_omega(), pts);
  EXPECT_EQ(run.points, 64);
  EXPECT_LT(run.residuals.r_total, 1e-12);
  EXPECT_LT(run.residuals.r_N, 1e-12);
  EXPECT_THROW(gh_residuals(1.0, *e.chart, FiberMapSpec::const_omega(), {}), std::invalid_argument);
}

TEST(Residuals, MaxWithIsComponentwise) {
  GHResiduals a = filled(1.0), b;
  b.r_QK = 3.0;
  a.max_with(b);
  EXPECT_EQ(a.r_QK, 3.0);
  EXPECT_EQ(a.r_SK, 1.0);
}

TEST(Classify, Kahler) {
  const GHReport r = classify(GHResiduals{}, 1e-7);
  EXPECT_EQ(r.class_name, "K");
  EXPECT_EQ(r.description, "Kähler");
  EXPECT_EQ(r.pattern, "0000");
}

TEST(Classify, QuasiKahler) {
  GHResiduals r = filled(1.0);
  r.r_SK = r.r_124 = r.r_QK = 0.0;
  const GHReport rep = classify(r, 1e-7);
  EXPECT_EQ(rep.class_name, "W1+W2");
  EXPECT_EQ(rep.description, "quasi-Kähler");
  EXPECT_EQ(rep.pattern, "1100");
}

TEST(Classify, W3) {
  GHResiduals r = filled(1.0);
  r.r_SK = r.r_G1 = r.r_G2 = r.r_G1_N = r.r_G2_N = r.r_N = r.r_N_hv = 0.0;
  const GHReport rep = classify(r, 1e-7);
  EXPECT_EQ(rep.class_name, "W3");
  EXPECT_EQ(rep.pattern, "0010");
}

TEST(Classify, GeneralClass) {
  const GHReport rep = classify(filled(2.0), 1e-7);
  EXPECT_EQ(rep.class_name, "W");
  EXPECT_EQ(rep.description, "general");
  EXPECT_EQ(class_name_for(true, false, true, true), "W1+W3+W4");
  EXPECT_EQ(class_description(true, false, true, true), "G1");
  EXPECT_EQ(class_description(false, false, true, true), "Hermitian");
}

TEST(Classify, ResidualInGapThrows) {
  GHResiduals r;
  r.r_SK = 5e-7;
  EXPECT_THROW(classify(r, 1e-7), ClassifierInconsistency);
  r.r_SK = 1e-6;
  EXPECT_THROW(classify(r, 1e-7), ClassifierInconsistency);
  r.r_SK = 1.0000001e-6;
  EXPECT_THROW(classify(r, 1e-7), ClassifierInconsistency);  // r_total still zero
}

TEST(Classify, InconsistentPatternThrows) {
  GHResiduals r;
  r.r_total = 1.0;
  EXPECT_THROW(classify(r, 1e-7), ClassifierInconsistency);
  GHResiduals q = filled(1.0);
  q.r_SK = q.r_124 = 0.0;  // W1+W2 with r_QK nonzero
  EXPECT_THROW(classify(q, 1e-7), ClassifierInconsistency);
}

TEST(Classify, RejectsNonPositiveTolerance) {
  EXPECT_THROW(classify(GHResiduals{}, 0.0), std::invalid_argument);
  EXPECT_THROW(classify(GHResiduals{}, -1.0), std::invalid_argument);
}

TEST(Sampling, CountsAndDeterminism) {
  const auto e = build("round_sphere");
  const ChartDomain dom = e.chart->domain();
  const auto a = sample_points(dom, {5, 7, 11});
  const auto b = sample_points(dom, {5, 7, 11});
  ASSERT_EQ(a.size(), 35u);
  ASSERT_EQ(b.size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].p, b[i].p);
    EXPECT_EQ(a[i].sigma.c, b[i].sigma.c);
    EXPECT_NEAR(norm(a[i].sigma), 1.0, 1e-14);
    for (int d = 0; d < 4; ++d) EXPECT_LE(std::abs(a[i].p[d] - dom.center[d]), dom.half_width);
  }
  EXPECT_THROW(sample_points(dom, {0, 8, 1}), std::invalid_argument);
  EXPECT_THROW(sample_points(dom, {8, 0, 1}), std::invalid_argument);
}

TEST(Sampling, FibreSetStartsWithBasis) {
  const auto f = fiber_samples(8, 1);
  ASSERT_EQ(f.size(), 8u);
  for (int k = 0; k < 3; ++k) {
    EXPECT_EQ(f[2 * k].c, s_basis(k).c);
    EXPECT_EQ(f[2 * k + 1].c, (-1.0 * s_basis(k)).c);
  }
  const auto g = fiber_samples(8, 2);
  EXPECT_NE(f[6].c, g[6].c);
  EXPECT_EQ(fiber_samples(3, 9).size(), 3u);
}

TEST(Sampling, HaltonFirstPoint) {
  const ChartDomain dom = build("flat").chart->domain();
  const auto h = halton_points(dom, 2);
  // radical inverses of 1 in bases 2, 3, 5, 7 and of 2 in base 2
  const double r[4] = {0.5, 1.0 / 3.0, 0.2, 1.0 / 7.0};
  for (int d = 0; d < 4; ++d) EXPECT_NEAR(h[0][d], dom.center[d] + dom.half_width * (2 * r[d] - 1), 1e-15);
  EXPECT_NEAR(h[1][0], dom.center[0] + dom.half_width * (2 * 0.25 - 1), 1e-15);
}

TEST(Report, JsonIsDeterministicAndComplete) {
  const auto e = build("s2xh2");
  const auto pts = sample_points(e.chart->domain(), {});
  auto once = [&] {
    const auto run = gh_residuals(1.0, *e.chart, FiberMapSpec::const_omega(), pts);
    RunInfo info{"s2xh2", e.params_json, "omega", 1.0, run.points, 1, std::nullopt};
    return report_json(classify(run.residuals, kDefaultTol), info);
  };
  const std::string a = once();
  EXPECT_EQ(a, once());
  const auto j = nlohmann::json::parse(a);
  EXPECT_EQ(j["class"], "W3");
  EXPECT_EQ(j["schema"], "twistor-gh/1");
  EXPECT_EQ(j["points"], 64);
  EXPECT_FALSE(j.contains("timestamp"));
  for (const char* k : {"r_total", "r_SK", "r_QK", "r_124", "r_G1", "r_G2", "r_N", "r_dOmega", "r_W1"})
    EXPECT_TRUE(j["residuals"].contains(k)) << k;
  for (const char* k : {"W1", "W2", "W3", "W4"}) EXPECT_TRUE(j["components"].contains(k)) << k;

  RunInfo stamped{"s2xh2", e.params_json, "omega", 1.0, 64, 1, std::string("2026-01-01T00:00:00Z")};
  EXPECT_EQ(nlohmann::json::parse(report_json(GHReport{}, stamped))["timestamp"], "2026-01-01T00:00:00Z");
}
