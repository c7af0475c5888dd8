#include "twistorgh/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "twistorgh/fiber_algebra.hpp"
#include "twistorgh/riemann.hpp"
#include "twistorgh/twistor.hpp"

namespace twistorgh {

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform() { return double(eng_() >> 11) * 0x1.0p-53; }
  double symmetric() { return 2.0 * uniform() - 1.0; }
  Vec4<double> vec4() { return {symmetric(), symmetric(), symmetric(), symmetric()}; }
  SDual<double> sdual() { return SDual<double>{{symmetric(), symmetric(), symmetric()}}; }
  Biv<double> biv() {
    Vec<double, 6> v;
    for (auto& x : v) x = symmetric();
    return from_lambda2_coords(v);
  }
  SDual<double> unit() {
    for (;;) {
      const SDual<double> v = sdual();
      const double n = norm(v);
      if (n > 0.1 && n <= 1.0) return (1.0 / n) * v;
    }
  }

 private:
  std::mt19937_64 eng_;
};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

std::string describe(const Vec4<double>& p) {
  return "p=(" + fmt(p[0]) + "," + fmt(p[1]) + "," + fmt(p[2]) + "," + fmt(p[3]) + ")";
}

std::string describe(const Vec4<double>& p, const SDual<double>& s) {
  return describe(p) + " sigma=(" + fmt(s.c[0]) + "," + fmt(s.c[1]) + "," + fmt(s.c[2]) + ")";
}

void record(SuiteResult& r, const std::string& identity, const std::string& where, double defect) {
  ++r.checks;
  r.max_defect = std::max(r.max_defect, defect);
  if (!(defect <= r.tolerance)) r.failures.push_back({identity, where, defect});
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1.0); }

Vec4<double> random_point(Rng& rng, const ChartDomain& d) {
  Vec4<double> p = d.center;
  for (int i = 0; i < 4; ++i) p[i] += d.half_width * rng.symmetric();
  return p;
}

double mat_defect(const Mat4<double>& a, const Mat4<double>& b) {
  return frobenius<4, 4>(a - b) / std::max(frobenius<4, 4>(b), 1.0);
}

struct OracleSuites {
  SuiteResult equivalence;
  SuiteResult zero_blocks;
};

OracleSuites oracle_suites(const MetricChart& chart, const VerifyConfig& cfg) {
  OracleSuites out;
  out.equivalence.name = "oracle equivalence";
  out.equivalence.tolerance = 1e-5;
  out.zero_blocks.name = "covariant derivative zero blocks";
  out.zero_blocks.tolerance = 1e-6;
  const auto fmaps = cfg.fibermaps.empty() ? standard_fibermaps(chart) : cfg.fibermaps;
  const auto points = sample_points(chart.domain(), cfg.plan);
  for (double t : cfg.ts)
    for (const auto& f : fmaps) {
      std::optional<TwistorPoint> tp;
      for (const auto& sp : points) {
        if (!tp || tp->base.p != sp.p) tp = make_twistor_point(chart, sp.p, sp.sigma);
        else tp = with_sigma(*tp, sp.sigma);
        const std::string where = to_string(f) + " t=" + fmt(t) + " " + describe(sp.p, sp.sigma);
        const CovDerivTensor dc = cov_deriv_closed(t, f, *tp);
        const CovDerivTensor dor = cov_deriv_oracle(t, chart, f, *tp);
        record(out.equivalence, "D Omega closed vs oracle", where, relative_defect(dc.t, dor.t));
        record(out.equivalence, "Nijenhuis closed vs oracle", where,
               relative_defect(nijenhuis_closed(t, f, *tp), nijenhuis_oracle(t, chart, f, *tp)));
        // Blocks with at least two vertical slots.
        double z = 0.0;
        for (int a = 0; a < 6; ++a)
          for (int b = 0; b < 6; ++b)
            for (int c = 0; c < 6; ++c)
              if (int(!is_hor(a)) + int(!is_hor(b)) + int(!is_hor(c)) >= 2) z += dor.t[a][b][c] * dor.t[a][b][c];
        record(out.zero_blocks, "D Omega blocks with two vertical slots", where, std::sqrt(z));
      }
    }
  return out;
}

}  // namespace

std::vector<FiberMapSpec> standard_fibermaps(const MetricChart& chart) {
  std::vector<FiberMapSpec> v{FiberMapSpec::identity(), FiberMapSpec::antipodal()};
  if (chart.has_complex_structure()) {
    v.push_back(FiberMapSpec::const_omega());
    v.push_back(FiberMapSpec::lambda(2.0, 1.0, +1));
    v.push_back(FiberMapSpec::lambda(2.0, 1.0, -1));
    v.push_back(FiberMapSpec::lambda(0.6, 0.8, +1));
    v.push_back(FiberMapSpec::lambda(0.6, 0.8, -1));
  }
  return v;
}

SuiteResult suite_algebraic_identities(const MetricChart& chart, int samples, std::uint64_t seed) {
  SuiteResult r;
  r.name = "algebraic identities";
  r.tolerance = 1e-10;
  Rng rng(seed);
  for (int n = 0; n < samples; ++n) {
    const Vec4<double> p = random_point(rng, chart.domain());
    const Frame4 fr = coordinate_frame(chart, p);
    const CurvatureTensor rt = curvature_tensor(chart, p, fr);
    const CurvOp op = curvature_operator(rt);
    const Biv<double> a = rng.biv();
    const SDual<double> b = rng.sdual();
    const SDual<double> c = rng.sdual();
    const SDual<double> sigma = rng.unit();
    const SDual<double> w = rng.sdual();
    const SDual<double> v = w - dot(w, sigma) * sigma;
    const Vec4<double> x = rng.vec4();
    const Vec4<double> y = rng.vec4();
    const std::string where = describe(p);

    // g(K_a X, Y) = 2 g(a, X^Y)
    const double k_lhs = dot<double, 4>(k_endo(a) * x, y);
    record(r, "g(K_a X, Y) = 2 g(a, X^Y)", where, rel(k_lhs, 2.0 * wedge_metric(a, wedge(x, y))));

    // g(R(a)b, c) = g(R(b x c), a)
    const double lhs4 = wedge_metric(curvature_on_biv(rt, a, to_biv(b)), to_biv(c));
    const double rhs4 = op.pair(to_biv(cross(b, c)), a);
    record(r, "g(R(a)b, c) = g(R(b x c), a)", where, rel(lhs4, rhs4));

    // g(sigma x V, X ^ K_sigma Y) = g(sigma x V, K_sigma X ^ Y) = g(V, X ^ Y)
    const Mat4<double> ks = k_endo(sigma);
    const Biv<double> sv = to_biv(cross(sigma, v));
    const double rhs5 = wedge_metric(to_biv(v), wedge(x, y));
    record(r, "g(sigma x V, X^K_sigma Y) = g(V, X^Y)", where, rel(wedge_metric(sv, wedge(x, ks * y)), rhs5));
    record(r, "g(sigma x V, K_sigma X^Y) = g(V, X^Y)", where, rel(wedge_metric(sv, wedge(ks * x, y)), rhs5));

    // K_b K_c = -g(b, c) Id + K_{b x c}
    const Mat4<double> rhs6 = scaled(identity<double, 4>(), -dot(b, c)) + k_endo(cross(b, c));
    record(r, "K_a K_b = -g(a,b) Id + K_{a x b}", where, mat_defect(k_endo(b) * k_endo(c), rhs6));
  }
  return r;
}

SuiteResult suite_decomposition(const MetricChart& chart, const SamplePlan& plan) {
  SuiteResult r;
  r.name = "curvature decomposition";
  r.tolerance = 1e-10;
  for (const auto& p : halton_points(chart.domain(), plan.base_points)) {
    const Frame4 fr = coordinate_frame(chart, p);
    const CurvatureTensor rt = curvature_tensor(chart, p, fr);
    const CurvOp op = curvature_operator(rt);
    const double scale = std::max(frobenius<6, 6>(op.m), 1.0);
    const std::string where = describe(p);
    const CurvDecomp d = decompose(op);
    record(r, "s/6 Id + B + W+ + W- = R", where, frobenius<6, 6>(d.reassemble().m - op.m) / scale);
    record(r, "trace W+ = 0", where, std::abs(d.wplus[0][0] + d.wplus[1][1] + d.wplus[2][2]) / scale);
    record(r, "trace W- = 0", where, std::abs(d.wminus[0][0] + d.wminus[1][1] + d.wminus[2][2]) / scale);
    // Blocks of the parts: W+ lives on the (+,+) block, W- on (-,-), B off-diagonal.
    CurvDecomp only_wp{0.0, d.wplus, {}, {}};
    CurvDecomp only_wm{0.0, {}, d.wminus, {}};
    CurvDecomp only_b{0.0, {}, {}, d.b};
    double wp_off = 0.0, wm_off = 0.0, b_diag = 0.0;
    const Mat<double, 6> mp = only_wp.reassemble().m, mm = only_wm.reassemble().m, mb = only_b.reassemble().m;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) {
        const bool plus_plus = i < 3 && j < 3;
        const bool minus_minus = i >= 3 && j >= 3;
        if (!plus_plus) wp_off += mp[i][j] * mp[i][j];
        if (!minus_minus) wm_off += mm[i][j] * mm[i][j];
        if (plus_plus || minus_minus) b_diag += mb[i][j] * mb[i][j];
      }
    record(r, "W+ vanishes on Lambda^2_-", where, std::sqrt(wp_off) / scale);
    record(r, "W- vanishes on Lambda^2_+", where, std::sqrt(wm_off) / scale);
    record(r, "B maps Lambda^2_+ <-> Lambda^2_-", where, std::sqrt(b_diag) / scale);
    record(r, "first Bianchi identity", where, first_bianchi_defect(rt) / scale);
    double asym = 0.0;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) asym = std::max(asym, std::abs(op.m[i][j] - op.m[j][i]));
    record(r, "curvature operator symmetric", where, asym / scale);
  }
  return r;
}

SuiteResult suite_oracle_equivalence(const MetricChart& chart, const VerifyConfig& cfg) {
  return oracle_suites(chart, cfg).equivalence;
}

SuiteResult suite_zero_blocks(const MetricChart& chart, const VerifyConfig& cfg) {
  return oracle_suites(chart, cfg).zero_blocks;
}

SuiteResult suite_internal_consistency(const MetricChart& chart, const VerifyConfig& cfg) {
  SuiteResult r;
  r.name = "closed-form consistency";
  r.tolerance = 1e-10;
  const auto fmaps = cfg.fibermaps.empty() ? standard_fibermaps(chart) : cfg.fibermaps;
  const auto points = sample_points(chart.domain(), cfg.plan);
  for (double t : cfg.ts)
    for (const auto& f : fmaps) {
      std::optional<TwistorPoint> tp;
      for (const auto& sp : points) {
        if (!tp || tp->base.p != sp.p) tp = make_twistor_point(chart, sp.p, sp.sigma);
        else tp = with_sigma(*tp, sp.sigma);
        const std::string where = to_string(f) + " t=" + fmt(t) + " " + describe(sp.p, sp.sigma);
        const CovDerivTensor d = cov_deriv_closed(t, f, *tp);
        record(r, "d Omega = cyclic sum of D Omega", where, relative_defect(exterior_d_closed(t, f, *tp), exterior_d(d)));
        const Form1 dc = codifferential_closed(t, f, *tp);
        const Form1 dd = codifferential(d);
        double diff = 0.0, ref = 0.0;
        for (int c = 0; c < 6; ++c) {
          diff += (dc[c] - dd[c]) * (dc[c] - dd[c]);
          ref += dd[c] * dd[c];
        }
        record(r, "delta Omega = -trace D Omega", where, std::sqrt(diff) / std::max(std::sqrt(ref), 1.0));
        record(r, "N from D Omega = closed N", where,
               relative_defect(nijenhuis_from_cov_deriv(d, ortho_basis(t, f, *tp)), nijenhuis_closed(t, f, *tp)));
      }
    }
  return r;
}

SuiteResult suite_fibermap_identities(const MetricChart& chart, const VerifyConfig& cfg) {
  SuiteResult r;
  r.name = "fibre map identities";
  r.tolerance = 1e-8;
  if (!chart.has_complex_structure()) return r;
  const auto fmaps = cfg.fibermaps.empty() ? standard_fibermaps(chart) : cfg.fibermaps;
  const auto points = sample_points(chart.domain(), cfg.plan);
  auto vdef = [](const SDual<double>& a, const SDual<double>& b) { return norm(a - b) / std::max(norm(b), 1.0); };
  std::optional<BaseJet> jet;
  for (const auto& sp : points) {
    if (!jet || jet->p != sp.p) jet = base_jet(chart, sp.p);
    const SDual<double>& w = jet->omega;
    const SDual<double>& s = sp.sigma;
    const std::string where = describe(sp.p, s);
    record(r, "f_1^+ = id", where, vdef(apply(FiberMapSpec::lambda(1, 0, +1), s, w), s));
    record(r, "f_-1^- = antipodal", where, vdef(apply(FiberMapSpec::lambda(-1, 0, -1), s, w), -s));
    // f_0 is undefined at sigma = omega.
    if (1.0 - dot(s, w) > 1e-8) {
      record(r, "f_0^+ = -omega", where, vdef(apply(FiberMapSpec::lambda(0, 0, +1), s, w), -w));
      record(r, "f_0^- = omega", where, vdef(apply(FiberMapSpec::lambda(0, 0, -1), s, w), w));
    }
    for (Pole pole : {Pole::Plus, Pole::Minus}) {
      if (const auto z = stereo(w, s, pole))
        record(r, pole == Pole::Plus ? "Phi^-1 Phi = id" : "Psi^-1 Psi = id", where, vdef(stereo_inverse(w, *z, pole), s));
    }
    for (const auto& f : fmaps) {
      if (f.kind != FiberMapKind::Lambda) continue;
      if (const auto z = stereo(w, s, Pole::Plus)) {
        const SDual<double> lz = lambda_multiply(w, *z, f.a, f.b);
        const Pole target = f.sign > 0 ? Pole::Plus : Pole::Minus;
        record(r, "f_lambda = stereo^-1 lambda Phi", to_string(f) + " " + where,
               vdef(apply(f, s, w), stereo_inverse(w, lz, target)));
      }
      if (std::abs(f.lambda_abs2() - 1.0) <= 1e-12)
        for (int i = 0; i < 4; ++i) {
          Vec4<double> x{};
          x[i] = 1.0;
          record(r, "|lambda| = 1 pushforward closed form", to_string(f) + " " + where + " X=E" + std::to_string(i + 1),
                 vdef(pushforward_horizontal_closed(f, *jet, x, s), pushforward_horizontal(f, *jet, x, s)));
        }
    }
  }
  return r;
}

std::vector<SuiteResult> run_verify(const MetricChart& chart, const VerifyConfig& cfg) {
  std::vector<SuiteResult> out;
  out.push_back(suite_algebraic_identities(chart, cfg.identity_samples, cfg.plan.seed));
  out.push_back(suite_decomposition(chart, cfg.plan));
  out.push_back(suite_internal_consistency(chart, cfg));
  OracleSuites os = oracle_suites(chart, cfg);
  out.push_back(std::move(os.equivalence));
  out.push_back(std::move(os.zero_blocks));
  out.push_back(suite_fibermap_identities(chart, cfg));
  return out;
}

}  // namespace twistorgh
