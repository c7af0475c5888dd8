#include "twistorgh/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace twistorgh {

double norm(const Tensor3& t) {
  double s = 0.0;
  for (const auto& m : t)
    for (const auto& r : m)
      for (double x : r) s += x * x;
  return std::sqrt(s);
}

Tensor3 operator-(const Tensor3& a, const Tensor3& b) {
  Tensor3 r;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      for (int k = 0; k < 6; ++k) r[i][j][k] = a[i][j][k] - b[i][j][k];
  return r;
}

double relative_defect(const Tensor3& a, const Tensor3& b) { return norm(a - b) / std::max(norm(b), 1.0); }

namespace {

Vec4<double> unit4(int i) {
  Vec4<double> v{};
  v[i] = 1.0;
  return v;
}

double wm(const SDual<double>& a, const Biv<double>& b) { return wedge_metric(to_biv(a), b); }

// Everything the closed forms need at one twistor point.
struct ClosedData {
  double t;
  SDual<double> fs;
  Mat4<double> k;
  std::array<SDual<double>, 4> p;  // Vf_*(E_a^h)
  std::array<SDual<double>, 2> u;  // nu_k / sqrt t
  std::array<SDual<double>, 2> fu;
  std::array<SDual<double>, 2> f_su;  // f_*(sigma x U)
  const TwistorPoint* tp;

  SDual<double> p_of(const Vec4<double>& x) const {
    SDual<double> r;
    for (int i = 0; i < 4; ++i) r = r + x[i] * p[i];
    return r;
  }
};

ClosedData closed_data(double t, const FiberMapSpec& f, const TwistorPoint& tp) {
  ClosedData cd;
  cd.t = t;
  cd.tp = &tp;
  cd.fs = fiber_image(f, tp);
  cd.k = k_endo(cd.fs);
  for (int a = 0; a < 4; ++a) cd.p[a] = pushforward_horizontal(f, tp.base, unit4(a), tp.sigma);
  const auto [n1, n2] = vertical_frame(tp.sigma);
  const double rt = 1.0 / std::sqrt(t);
  cd.u = {rt * n1, rt * n2};
  const std::optional<SDual<double>> om = tp.base.has_omega ? std::optional(tp.base.omega) : std::nullopt;
  for (int k = 0; k < 2; ++k) {
    cd.fu[k] = fiber_differential(f, tp.sigma, om, cd.u[k]);
    cd.f_su[k] = fiber_differential(f, tp.sigma, om, cross(tp.sigma, cd.u[k]));
  }
  return cd;
}

double pair(const TwistorPoint& tp, const SDual<double>& a, const Biv<double>& b) { return tp.op.pair(to_biv(a), b); }
double pair(const TwistorPoint& tp, const Biv<double>& a, const SDual<double>& b) { return tp.op.pair(a, to_biv(b)); }

// (D_{X^h} Omega)(Y^h, U)
double d_hhv(const ClosedData& cd, const Vec4<double>& x, const Vec4<double>& y, const SDual<double>& u) {
  const TwistorPoint& tp = *cd.tp;
  return -0.5 * cd.t * pair(tp, u, wedge(x, y)) + 0.5 * cd.t * pair(tp, cross(tp.sigma, u), wedge(x, cd.k * y));
}

Tensor3 zero_tensor() {
  Tensor3 r;
  for (auto& m : r)
    for (auto& row : m) row.fill(0.0);
  return r;
}

Tensor3 contract(const std::array<Mat<double, 6>, 6>& coord, const Mat<double, 6>& b) {
  // coord[i][j][k] -> sum coord[i][j][k] b[i][A] b[j][B] b[k][C]
  Tensor3 t1 = zero_tensor(), t2 = zero_tensor(), t3 = zero_tensor();
  for (int A = 0; A < 6; ++A)
    for (int j = 0; j < 6; ++j)
      for (int k = 0; k < 6; ++k) {
        double s = 0.0;
        for (int i = 0; i < 6; ++i) s += coord[i][j][k] * b[i][A];
        t1[A][j][k] = s;
      }
  for (int A = 0; A < 6; ++A)
    for (int B = 0; B < 6; ++B)
      for (int k = 0; k < 6; ++k) {
        double s = 0.0;
        for (int j = 0; j < 6; ++j) s += t1[A][j][k] * b[j][B];
        t2[A][B][k] = s;
      }
  for (int A = 0; A < 6; ++A)
    for (int B = 0; B < 6; ++B)
      for (int C = 0; C < 6; ++C) {
        double s = 0.0;
        for (int k = 0; k < 6; ++k) s += t2[A][B][k] * b[k][C];
        t3[A][B][C] = s;
      }
  return t3;
}

}  // namespace

OrthoBasis ortho_basis(double t, const FiberMapSpec& f, const TwistorPoint& tp) {
  OrthoBasis ob;
  for (int i = 0; i < 4; ++i) ob.e[i] = horizontal(unit4(i));
  const auto [n1, n2] = vertical_frame(tp.sigma);
  const double rt = 1.0 / std::sqrt(t);
  ob.e[4] = vertical(rt * n1);
  ob.e[5] = vertical(rt * n2);
  for (int a = 0; a < 6; ++a) {
    const TwistorVec ja = jf_apply(f, tp, ob.e[a]);
    for (int b = 0; b < 6; ++b) ob.jm[b][a] = ht_inner(t, ob.e[b], ja);
  }
  return ob;
}

CovDerivTensor cov_deriv_closed(double t, const FiberMapSpec& f, const TwistorPoint& tp) {
  const ClosedData cd = closed_data(t, f, tp);
  CovDerivTensor out;
  out.t = zero_tensor();
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      for (int c = 0; c < 6; ++c) {
        double v = 0.0;
        if (is_hor(a) && is_hor(b) && is_hor(c)) {
          v = 2.0 * wm(cd.p[a], wedge(unit4(b), unit4(c)));
        } else if (is_hor(a) && is_hor(b) && !is_hor(c)) {
          v = d_hhv(cd, unit4(a), unit4(b), cd.u[c - 4]);
        } else if (is_hor(a) && !is_hor(b) && is_hor(c)) {
          v = -d_hhv(cd, unit4(a), unit4(c), cd.u[b - 4]);
        } else if (!is_hor(a) && is_hor(b) && is_hor(c)) {
          const SDual<double>& u = cd.u[a - 4];
          const Vec4<double> y = unit4(b);
          const Vec4<double> z = unit4(c);
          v = -0.5 * t * pair(tp, cross(tp.sigma, u), wedge(y, cd.k * z) + wedge(cd.k * y, z)) +
              2.0 * wm(cd.fu[a - 4], wedge(y, z));
        }
        out.t[a][b][c] = v;
      }
  return out;
}

CovDerivTensor cov_deriv_oracle(double t, const MetricChart& chart, const FiberMapSpec& f, const TwistorPoint& tp) {
  const TwistorChart tc = make_twistor_chart(chart, tp.base.p, tp.sigma, t, f);
  const TwistorJet jet = twistor_jet(tc);
  std::array<Mat<double, 6>, 6> coord;
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      for (int c = 0; c < 6; ++c) {
        double s = jet.df[a].omega[b][c];
        for (int d = 0; d < 6; ++d)
          s -= jet.gamma[d][a][b] * jet.f.omega[d][c] + jet.gamma[d][a][c] * jet.f.omega[b][d];
        coord[a][b][c] = s;
      }
  CovDerivTensor out;
  out.t = contract(coord, jet.basis);
  return out;
}

Tensor3 exterior_d(const CovDerivTensor& d) {
  Tensor3 r;
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      for (int c = 0; c < 6; ++c) r[a][b][c] = d.t[a][b][c] + d.t[b][c][a] + d.t[c][a][b];
  return r;
}

Form1 codifferential(const CovDerivTensor& d) {
  Form1 r{};
  for (int c = 0; c < 6; ++c)
    for (int a = 0; a < 6; ++a) r[c] -= d.t[a][a][c];
  return r;
}

Tensor3 exterior_d_closed(double t, const FiberMapSpec& f, const TwistorPoint& tp) {
  const ClosedData cd = closed_data(t, f, tp);
  // d Omega(X^h, Y^h, U)
  auto hhv = [&](int x, int y, int u) {
    const Biv<double> xy = wedge(unit4(x), unit4(y));
    return 2.0 * wm(cd.fu[u], xy) - t * pair(tp, cd.u[u], xy);
  };
  Tensor3 r = zero_tensor();
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      for (int c = 0; c < 6; ++c) {
        const int nh = int(is_hor(a)) + int(is_hor(b)) + int(is_hor(c));
        double v = 0.0;
        if (nh == 3) {
          const Vec4<double> x = unit4(a), y = unit4(b), z = unit4(c);
          v = 2.0 * wm(cd.p[a], wedge(y, z)) + 2.0 * wm(cd.p[b], wedge(z, x)) + 2.0 * wm(cd.p[c], wedge(x, y));
        } else if (nh == 2) {
          // Rotate the vertical slot to the last position; cyclic shifts keep the sign.
          if (!is_hor(c)) v = hhv(a, b, c - 4);
          else if (!is_hor(a)) v = hhv(b, c, a - 4);
          else v = hhv(c, a, b - 4);
        }
        r[a][b][c] = v;
      }
  return r;
}

Form1 codifferential_closed(double t, const FiberMapSpec& f, const TwistorPoint& tp) {
  const ClosedData cd = closed_data(t, f, tp);
  Form1 r{};
  for (int c = 0; c < 4; ++c) {
    double s = 0.0;
    for (int i = 0; i < 4; ++i) s += 2.0 * wm(cd.p[i], wedge(unit4(c), unit4(i)));
    r[c] = s;
  }
  for (int k = 0; k < 2; ++k) r[4 + k] = -t * pair(tp, cross(tp.sigma, cd.u[k]), to_biv(cd.fs));
  return r;
}

Tensor3 nijenhuis_closed(double t, const FiberMapSpec& f, const TwistorPoint& tp) {
  const ClosedData cd = closed_data(t, f, tp);
  const Mat4<double>& k = cd.k;
  auto hvh = [&](int x, int u, int z) {
    const Biv<double> xz = wedge(unit4(x), unit4(z));
    return 2.0 * wm(cross(cd.fs, cd.fu[u]), xz) - 2.0 * wm(cd.f_su[u], xz);
  };
  Tensor3 r = zero_tensor();
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      for (int c = 0; c < 6; ++c) {
        double v = 0.0;
        if (is_hor(a) && is_hor(b) && is_hor(c)) {
          const Vec4<double> x = unit4(a), y = unit4(b), z = unit4(c);
          const Vec4<double> kx = k * x, ky = k * y;
          v = 2.0 * wm(cd.p[a], wedge(ky, z)) - 2.0 * wm(cd.p[b], wedge(kx, z)) + 2.0 * wm(cd.p_of(kx), wedge(y, z)) -
              2.0 * wm(cd.p_of(ky), wedge(x, z));
        } else if (is_hor(a) && is_hor(b) && !is_hor(c)) {
          const Vec4<double> x = unit4(a), y = unit4(b);
          const Vec4<double> kx = k * x, ky = k * y;
          const SDual<double>& u = cd.u[c - 4];
          v = -t * pair(tp, wedge(x, ky) + wedge(kx, y), u) - t * pair(tp, wedge(x, y) - wedge(kx, ky), cross(tp.sigma, u));
        } else if (is_hor(a) && !is_hor(b) && is_hor(c)) {
          v = hvh(a, b - 4, c);
        } else if (!is_hor(a) && is_hor(b) && is_hor(c)) {
          v = -hvh(b, a - 4, c);
        }
        r[a][b][c] = v;
      }
  return r;
}

Tensor3 nijenhuis_oracle(double t, const MetricChart& chart, const FiberMapSpec& f, const TwistorPoint& tp) {
  const TwistorChart tc = make_twistor_chart(chart, tp.base.p, tp.sigma, t, f);
  const TwistorJet jet = twistor_jet(tc);
  const Mat<double, 6>& j = jet.f.j;
  // nk[i][j][k] = N^k_ij, then lowered with h.
  std::array<Mat<double, 6>, 6> low;
  for (int i = 0; i < 6; ++i)
    for (int jj = 0; jj < 6; ++jj) {
      Vec<double, 6> nk{};
      for (int kk = 0; kk < 6; ++kk) {
        double s = 0.0;
        for (int l = 0; l < 6; ++l) {
          s += j[l][i] * jet.df[l].j[kk][jj] - j[l][jj] * jet.df[l].j[kk][i];
          s -= j[kk][l] * (jet.df[i].j[l][jj] - jet.df[jj].j[l][i]);
        }
        nk[kk] = s;
      }
      for (int c = 0; c < 6; ++c) {
        double s = 0.0;
        for (int kk = 0; kk < 6; ++kk) s += nk[kk] * jet.f.h[kk][c];
        low[i][jj][c] = s;
      }
    }
  return contract(low, jet.basis);
}

Tensor3 nijenhuis_from_cov_deriv(const CovDerivTensor& d, const OrthoBasis& basis) {
  const Mat<double, 6>& jm = basis.jm;
  const Tensor3& t = d.t;
  Tensor3 r = zero_tensor();
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      for (int c = 0; c < 6; ++c) {
        double s = 0.0;
        for (int e = 0; e < 6; ++e) {
          s += jm[e][b] * (t[a][e][c] - t[e][a][c]);
          s -= jm[e][a] * (t[b][e][c] - t[e][b][c]);
        }
        r[a][b][c] = s;
      }
  return r;
}

void GHResiduals::max_with(const GHResiduals& o) {
  r_total = std::max(r_total, o.r_total);
  r_SK = std::max(r_SK, o.r_SK);
  r_QK = std::max(r_QK, o.r_QK);
  r_124 = std::max(r_124, o.r_124);
  r_G1 = std::max(r_G1, o.r_G1);
  r_G2 = std::max(r_G2, o.r_G2);
  r_G1_N = std::max(r_G1_N, o.r_G1_N);
  r_G2_N = std::max(r_G2_N, o.r_G2_N);
  r_N = std::max(r_N, o.r_N);
  r_N_hv = std::max(r_N_hv, o.r_N_hv);
  r_dOmega = std::max(r_dOmega, o.r_dOmega);
  r_W1 = std::max(r_W1, o.r_W1);
}

GHResiduals residuals_from(const CovDerivTensor& d, const Tensor3& n, const OrthoBasis& basis) {
  const Tensor3& t = d.t;
  const Mat<double, 6>& jm = basis.jm;
  // jt[a][b][c] = (D_{J e_a} Omega)(J e_b, e_c)
  Tensor3 jt = zero_tensor();
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      for (int c = 0; c < 6; ++c) {
        double s = 0.0;
        for (int a2 = 0; a2 < 6; ++a2) {
          if (jm[a2][a] == 0.0) continue;
          for (int b2 = 0; b2 < 6; ++b2) s += jm[a2][a] * jm[b2][b] * t[a2][b2][c];
        }
        jt[a][b][c] = s;
      }
  const Form1 delta = codifferential(d);
  Form1 jdelta{};  // delta Omega(J e_c)
  for (int c = 0; c < 6; ++c)
    for (int e = 0; e < 6; ++e) jdelta[c] += jm[e][c] * delta[e];

  GHResiduals r;
  r.r_total = norm(t);
  r.r_SK = frobenius<6>(delta);

  double qk = 0, w124 = 0, g1 = 0, g2 = 0, w1 = 0, dom = 0, g1n = 0, g2n = 0, nn = 0, nhv = 0;
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      for (int c = 0; c < 6; ++c) {
        const double q = t[a][b][c] + jt[a][b][c];
        qk += q * q;
        const double jab = jm[a][b];  // h(e_a, J e_b)
        const double jac = jm[a][c];
        const double rhs = (a == b ? delta[c] : 0.0) - (a == c ? delta[b] : 0.0) - jab * jdelta[c] + jac * jdelta[b];
        const double x124 = q + 0.5 * rhs;
        w124 += x124 * x124;
        const double xg1 = (t[a][b][c] - jt[a][b][c]) + (t[b][a][c] - jt[b][a][c]);
        g1 += xg1 * xg1;
        const double xg2 = (t[a][b][c] - jt[a][b][c]) + (t[b][c][a] - jt[b][c][a]) + (t[c][a][b] - jt[c][a][b]);
        g2 += xg2 * xg2;
        const double xw1 = t[a][b][c] + t[b][a][c];
        w1 += xw1 * xw1;
        const double xd = t[a][b][c] + t[b][c][a] + t[c][a][b];
        dom += xd * xd;
        const double xn1 = n[a][b][c] + n[c][b][a];
        g1n += xn1 * xn1;
        double xn2 = 0.0;
        for (int e = 0; e < 6; ++e) xn2 += n[a][b][e] * jm[e][c] + n[b][c][e] * jm[e][a] + n[c][a][e] * jm[e][b];
        g2n += xn2 * xn2;
        nn += n[a][b][c] * n[a][b][c];
        if (is_hor(a) && !is_hor(b) && is_hor(c)) nhv += n[a][b][c] * n[a][b][c];
      }
  r.r_QK = std::sqrt(qk);
  r.r_124 = std::sqrt(w124);
  r.r_G1 = std::sqrt(g1);
  r.r_G2 = std::sqrt(g2);
  r.r_W1 = std::sqrt(w1);
  r.r_dOmega = std::sqrt(dom);
  r.r_G1_N = std::sqrt(g1n);
  r.r_G2_N = std::sqrt(g2n);
  r.r_N = std::sqrt(nn);
  r.r_N_hv = std::sqrt(nhv);
  return r;
}

GHResiduals point_residuals(double t, const FiberMapSpec& f, const TwistorPoint& tp) {
  return residuals_from(cov_deriv_closed(t, f, tp), nijenhuis_closed(t, f, tp), ortho_basis(t, f, tp));
}

std::vector<Vec4<double>> halton_points(const ChartDomain& domain, int n) {
  constexpr int primes[4] = {2, 3, 5, 7};
  std::vector<Vec4<double>> out;
  out.reserve(std::max(n, 0));
  for (int k = 1; k <= n; ++k) {
    Vec4<double> p;
    for (int d = 0; d < 4; ++d) {
      double f = 1.0, r = 0.0;
      for (int i = k; i > 0; i /= primes[d]) {
        f /= primes[d];
        r += f * (i % primes[d]);
      }
      p[d] = domain.center[d] + domain.half_width * (2.0 * r - 1.0);
    }
    out.push_back(p);
  }
  return out;
}

std::vector<SDual<double>> fiber_samples(int n, std::uint64_t seed) {
  std::vector<SDual<double>> out;
  for (int k = 0; k < 3 && int(out.size()) < n; ++k) {
    out.push_back(s_basis<double>(k));
    if (int(out.size()) < n) out.push_back(-s_basis<double>(k));
  }
  std::mt19937_64 rng(seed);
  // Raw engine output is specified by the standard; distributions are not.
  auto uniform = [&rng] { return double(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
  while (int(out.size()) < n) {
    SDual<double> v{{uniform(), uniform(), uniform()}};
    const double n2 = dot(v, v);
    if (n2 < 1e-2 || n2 > 1.0) continue;
    out.push_back((1.0 / std::sqrt(n2)) * v);
  }
  return out;
}

std::vector<SamplePoint> sample_points(const ChartDomain& domain, const SamplePlan& plan) {
  if (plan.base_points < 1 || plan.fiber_points < 1) throw std::invalid_argument("sample plan needs at least one point");
  const auto base = halton_points(domain, plan.base_points);
  const auto fib = fiber_samples(plan.fiber_points, plan.seed);
  std::vector<SamplePoint> out;
  for (const auto& p : base)
    for (const auto& s : fib) out.push_back({p, s});
  return out;
}

GHRun gh_residuals(double t, const MetricChart& chart, const FiberMapSpec& f, const std::vector<SamplePoint>& points) {
  if (points.empty()) throw std::invalid_argument("gh_residuals: no sample points");
  GHRun run;
  std::optional<TwistorPoint> tp;
  for (const auto& sp : points) {
    if (!tp || tp->base.p != sp.p) tp = make_twistor_point(chart, sp.p, sp.sigma);
    else tp = with_sigma(*tp, sp.sigma);
    run.residuals.max_with(point_residuals(t, f, *tp));
    ++run.points;
  }
  return run;
}

std::string class_name_for(bool w1, bool w2, bool w3, bool w4) {
  if (!w1 && !w2 && !w3 && !w4) return "K";
  if (w1 && w2 && w3 && w4) return "W";
  std::string s;
  const bool w[4] = {w1, w2, w3, w4};
  for (int i = 0; i < 4; ++i) {
    if (!w[i]) continue;
    if (!s.empty()) s += "+";
    s += "W" + std::to_string(i + 1);
  }
  return s;
}

std::string class_description(bool w1, bool w2, bool w3, bool w4) {
  const int bits = (w1 ? 1 : 0) | (w2 ? 2 : 0) | (w3 ? 4 : 0) | (w4 ? 8 : 0);
  switch (bits) {
    case 0:
      return "Kähler";
    case 1:
      return "nearly Kähler";
    case 2:
      return "almost Kähler";
    case 3:
      return "quasi-Kähler";
    case 4:
      return "semi-Kähler and Hermitian";
    case 7:
      return "semi-Kähler";
    case 12:
      return "Hermitian";
    case 13:
      return "G1";
    case 14:
      return "G2";
    case 15:
      return "general";
    default:
      return "";
  }
}

GHReport classify(const GHResiduals& res, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("classify: tolerance must be positive");
  auto vanishes = [tol](const char* name, double r) {
    if (r <= tol) return true;
    if (r > kMargin * tol) return false;
    throw ClassifierInconsistency(std::string("residual ") + name + " = " + std::to_string(r) +
                                  " lies between tol and the non-vanishing margin");
  };
  GHReport rep;
  rep.residuals = res;
  rep.tol = tol;
  const bool sk = vanishes("r_SK", res.r_SK);
  const bool c124 = vanishes("r_124", res.r_124);
  const bool g1 = vanishes("r_G1", res.r_G1);
  const bool g2 = vanishes("r_G2", res.r_G2);
  rep.w4 = !sk;
  rep.w3 = !c124;
  rep.w2 = !g1;
  rep.w1 = !g2;

  auto check = [](const char* what, bool got, bool expected) {
    if (got != expected)
      throw ClassifierInconsistency(std::string("inconsistent residual pattern: ") + what + (got ? " vanishes" : " does not vanish") +
                                    " but the component pattern says otherwise");
  };
  const bool none = !rep.w1 && !rep.w2 && !rep.w3 && !rep.w4;
  check("r_total", vanishes("r_total", res.r_total), none);
  check("r_QK", vanishes("r_QK", res.r_QK), !rep.w3 && !rep.w4);
  check("r_N", vanishes("r_N", res.r_N), !rep.w1 && !rep.w2);
  check("r_W1", vanishes("r_W1", res.r_W1), !rep.w2 && !rep.w3 && !rep.w4);
  check("r_dOmega", vanishes("r_dOmega", res.r_dOmega), !rep.w1 && !rep.w3 && !rep.w4);
  check("r_G1_N", vanishes("r_G1_N", res.r_G1_N), g1);
  check("r_G2_N", vanishes("r_G2_N", res.r_G2_N), g2);

  rep.class_name = class_name_for(rep.w1, rep.w2, rep.w3, rep.w4);
  rep.description = class_description(rep.w1, rep.w2, rep.w3, rep.w4);
  rep.pattern = std::string() + (rep.w1 ? '1' : '0') + (rep.w2 ? '1' : '0') + (rep.w3 ? '1' : '0') + (rep.w4 ? '1' : '0');
  return rep;
}

}  // namespace twistorgh
