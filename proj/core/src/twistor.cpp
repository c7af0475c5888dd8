#include "twistorgh/twistor.hpp"

#include <cmath>
#include <stdexcept>

namespace twistorgh {

TwistorPoint make_twistor_point(const MetricChart& chart, const Vec4<double>& p, const SDual<double>& sigma) {
  if (std::abs(norm(sigma) - 1.0) > 1e-12) throw std::invalid_argument("twistor point: sigma is not a unit vector");
  TwistorPoint tp;
  tp.base = base_jet(chart, p);
  tp.curvature = curvature_tensor(chart, p, tp.base.frame);
  tp.op = curvature_operator(tp.curvature);
  tp.sigma = sigma;
  return tp;
}

TwistorPoint with_sigma(const TwistorPoint& tp, const SDual<double>& sigma) {
  if (std::abs(norm(sigma) - 1.0) > 1e-12) throw std::invalid_argument("twistor point: sigma is not a unit vector");
  TwistorPoint out = tp;
  out.sigma = sigma;
  return out;
}

TwistorVec operator+(const TwistorVec& a, const TwistorVec& b) { return {a.hor + b.hor, a.ver + b.ver}; }
TwistorVec operator-(const TwistorVec& a, const TwistorVec& b) { return {a.hor - b.hor, a.ver - b.ver}; }
TwistorVec operator*(double s, const TwistorVec& a) { return {s * a.hor, s * a.ver}; }

std::pair<SDual<double>, SDual<double>> vertical_frame(const SDual<double>& sigma) {
  if (std::abs(norm(sigma) - 1.0) > 1e-9) throw std::invalid_argument("vertical_frame: sigma is not a unit vector");
  int k = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(sigma.c[i]) < std::abs(sigma.c[k])) k = i;
  const SDual<double> sk = s_basis<double>(k);
  const SDual<double> v = sk - dot(sk, sigma) * sigma;
  const double n = norm(v);
  if (!(n > 1e-8)) throw std::invalid_argument("vertical_frame: degenerate sigma");
  const SDual<double> nu1 = (1.0 / n) * v;
  return {nu1, cross(sigma, nu1)};
}

double ht_inner(double t, const TwistorVec& a, const TwistorVec& b) {
  return dot<double, 4>(a.hor, b.hor) + t * dot(a.ver, b.ver);
}

SDual<double> fiber_image(const FiberMapSpec& f, const TwistorPoint& tp) {
  if (f.needs_omega() && !tp.base.has_omega)
    throw std::invalid_argument("fibermap " + to_string(f) + " needs the chart's complex structure");
  return apply_components(f, tp.sigma, tp.base.omega);
}

TwistorVec jf_apply(const FiberMapSpec& f, const TwistorPoint& tp, const TwistorVec& a) {
  return {k_endo(fiber_image(f, tp)) * a.hor, cross(tp.sigma, a.ver)};
}

double kahler_form(double t, const FiberMapSpec& f, const TwistorPoint& tp, const TwistorVec& a, const TwistorVec& b) {
  return ht_inner(t, jf_apply(f, tp, a), b);
}

SDual<double> curvature_on_sigma(const TwistorPoint& tp, const Vec4<double>& x, const Vec4<double>& y) {
  return self_dual_part(curvature_on_biv(tp.curvature, wedge(x, y), to_biv(tp.sigma)));
}

TwistorVec levi_civita_closed(double t, const TwistorPoint& tp, LcKind kind, const TwistorVec& a, const TwistorVec& b) {
  switch (kind) {
    case LcKind::HorHor: {
      const Vec4<double>& x = a.hor;
      const Vec4<double>& y = b.hor;
      const Vec4<double> xc = tp.base.frame.to_chart(x);
      TwistorVec out;
      for (int c = 0; c < 4; ++c) {
        double s = 0.0;
        for (int al = 0; al < 4; ++al)
          for (int bb = 0; bb < 4; ++bb) s += xc[al] * y[bb] * tp.base.conn[al][bb][c];
        out.hor[c] = s;
      }
      out.ver = 0.5 * curvature_on_sigma(tp, x, y);
      return out;
    }
    case LcKind::VerHor: {
      const Mat4<double> r = curvature_endo(tp.curvature, to_biv(cross(tp.sigma, a.ver)));
      return horizontal((-0.5 * t) * (r * b.hor));
    }
    case LcKind::HorVer:
    case LcKind::VerVer:
      break;
  }
  throw std::invalid_argument("levi_civita_closed: only horizontal-horizontal and vertical-horizontal are supported");
}

TwistorChart make_twistor_chart(const MetricChart& chart, const Vec4<double>& x0, const SDual<double>& sigma0, double t,
                                const FiberMapSpec& fmap) {
  if (!(t > 0.0)) throw std::invalid_argument("twistor chart: t must be positive");
  if (fmap.needs_omega() && !chart.has_complex_structure()) throw MissingComplexStructure(chart.name());
  TwistorChart tc;
  tc.chart = &chart;
  tc.x0 = x0;
  tc.sigma0 = sigma0;
  const auto [n1, n2] = vertical_frame(sigma0);
  tc.nu1 = n1;
  tc.nu2 = n2;
  tc.t = t;
  tc.fmap = fmap;
  return tc;
}

Vec<ad::D6, 6> seeded_origin(const TwistorChart& tc) {
  Vec<ad::D6, 6> z;
  for (int i = 0; i < 4; ++i) z[i] = ad::variable<6>(tc.x0[i], i);
  z[4] = ad::variable<6>(0.0, 4);
  z[5] = ad::variable<6>(0.0, 5);
  return z;
}

namespace {

Vec<double, 6> origin(const TwistorChart& tc) { return {tc.x0[0], tc.x0[1], tc.x0[2], tc.x0[3], 0.0, 0.0}; }

}  // namespace

TwistorJet twistor_jet(const TwistorChart& tc) {
  const TwistorFields<ad::D6> fd = twistor_fields(tc, seeded_origin(tc));
  TwistorJet jet;
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      jet.f.h[a][b] = fd.h[a][b].v;
      jet.f.j[a][b] = fd.j[a][b].v;
      jet.f.omega[a][b] = fd.omega[a][b].v;
      for (int c = 0; c < 6; ++c) {
        jet.df[c].h[a][b] = fd.h[a][b].d[c];
        jet.df[c].j[a][b] = fd.j[a][b].d[c];
        jet.df[c].omega[a][b] = fd.omega[a][b].d[c];
      }
    }
  const Mat<double, 6> hinv = inverse<double, 6>(jet.f.h);
  for (int c = 0; c < 6; ++c)
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b) {
        double s = 0.0;
        for (int d = 0; d < 6; ++d)
          s += hinv[c][d] * (jet.df[a].h[d][b] + jet.df[b].h[d][a] - jet.df[d].h[a][b]);
        jet.gamma[c][a][b] = 0.5 * s;
      }
  const double rt = std::sqrt(tc.t);
  for (int i = 0; i < 4; ++i) {
    Vec4<double> e{};
    e[i] = 1.0;
    const Vec<double, 6> l = horizontal_lift_coords(tc, e);
    for (int k = 0; k < 6; ++k) jet.basis[k][i] = l[k];
  }
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 6; ++k) jet.basis[k][4 + i] = (k == 4 + i) ? 1.0 / rt : 0.0;
  return jet;
}

Vec<double, 6> horizontal_lift_coords(const TwistorChart& tc, const Vec4<double>& xf) {
  return horizontal_lift_field<double>(tc, origin(tc), xf);
}

Vec<double, 6> to_coords(const TwistorChart& tc, const TwistorVec& v) {
  const TwistorFrameData<double> d = twistor_frame_data<double>(tc, origin(tc));
  const Vec4<double> xs = d.e * v.hor;
  const Vec<double, 2> u = fibre_coordinates(d, xs, v.ver.c);
  return {xs[0], xs[1], xs[2], xs[3], u[0], u[1]};
}

TwistorVec from_coords(const TwistorChart& tc, const Vec<double, 6>& c) {
  const TwistorFrameData<double> d = twistor_frame_data<double>(tc, origin(tc));
  TwistorVec v;
  const Vec4<double> xs{c[0], c[1], c[2], c[3]};
  v.hor = d.einv * xs;
  for (int a = 0; a < 6; ++a)
    for (int k = 0; k < 3; ++k) v.ver.c[k] += c[a] * d.ver[a][k];
  return v;
}

}  // namespace twistorgh
