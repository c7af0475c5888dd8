#pragma once

// The twistor space Z of an oriented Riemannian 4-manifold: the unit sphere
// bundle of Lambda^2_+. Tangent vectors are split into a horizontal part
// (frame components at the base point) and a vertical part (a self-dual
// 2-vector orthogonal to sigma). Also provides a 6-coordinate chart of Z in
// which the metrics h_t and the structures J_f are assembled as coordinate
// fields, so they can be differentiated independently of the closed forms.

#include <array>
#include <utility>

#include "twistorgh/fiber_algebra.hpp"
#include "twistorgh/fibermaps.hpp"
#include "twistorgh/metric_chart.hpp"
#include "twistorgh/riemann.hpp"

namespace twistorgh {

struct TwistorPoint {
  BaseJet base;
  CurvatureTensor curvature;
  CurvOp op;
  SDual<double> sigma;
};

// Throws std::invalid_argument unless |sigma| = 1 within 1e-12.
TwistorPoint make_twistor_point(const MetricChart& chart, const Vec4<double>& p, const SDual<double>& sigma);
// Same base data, different fibre point.
TwistorPoint with_sigma(const TwistorPoint& tp, const SDual<double>& sigma);

struct TwistorVec {
  Vec4<double> hor{};
  SDual<double> ver;
};

TwistorVec operator+(const TwistorVec& a, const TwistorVec& b);
TwistorVec operator-(const TwistorVec& a, const TwistorVec& b);
TwistorVec operator*(double s, const TwistorVec& a);

inline TwistorVec horizontal(const Vec4<double>& x) { return {x, SDual<double>{}}; }
inline TwistorVec vertical(const SDual<double>& v) { return {Vec4<double>{}, v}; }

// (nu1, nu2) completing sigma to an oriented orthonormal basis, with
// sigma x nu1 = nu2. nu1 is built from the s_k with the smallest |sigma_k|
// (lowest index on ties). Throws std::invalid_argument for |sigma| != 1.
std::pair<SDual<double>, SDual<double>> vertical_frame(const SDual<double>& sigma);

double ht_inner(double t, const TwistorVec& a, const TwistorVec& b);

// f(sigma) for the given twistor point.
SDual<double> fiber_image(const FiberMapSpec& f, const TwistorPoint& tp);

TwistorVec jf_apply(const FiberMapSpec& f, const TwistorPoint& tp, const TwistorVec& a);
double kahler_form(double t, const FiberMapSpec& f, const TwistorPoint& tp, const TwistorVec& a, const TwistorVec& b);

// R(X,Y) acting on sigma (X, Y in frame components).
SDual<double> curvature_on_sigma(const TwistorPoint& tp, const Vec4<double>& x, const Vec4<double>& y);

enum class LcKind { HorHor, VerHor, HorVer, VerVer };

// Closed-form Levi-Civita connection of h_t:
//   HorHor: D_{X^h} Y^h = (nabla_X Y)^h + 1/2 R(X^Y) sigma, where Y is the
//           field with constant frame components b.hor;
//   VerHor: D_V X^h = -t/2 (R(sigma x V) X)^h with V = a.ver, X = b.hor.
// Other kinds throw std::invalid_argument.
TwistorVec levi_civita_closed(double t, const TwistorPoint& tp, LcKind kind, const TwistorVec& a, const TwistorVec& b);

// ---------------------------------------------------------------------------
// Coordinate chart of Z around sigma0 over base point x0: z = (x, u) with
// sigma(u) = (sigma0 + u1 nu1 + u2 nu2)/|.| in the frame-field s-basis.

struct TwistorChart {
  const MetricChart* chart = nullptr;
  Vec4<double> x0{};
  SDual<double> sigma0;
  SDual<double> nu1;
  SDual<double> nu2;
  double t = 1.0;
  FiberMapSpec fmap;
};

TwistorChart make_twistor_chart(const MetricChart& chart, const Vec4<double>& x0, const SDual<double>& sigma0, double t,
                                const FiberMapSpec& fmap);

template <typename S>
struct TwistorFields {
  Mat<S, 6> h;      // h_t components
  Mat<S, 6> j;      // J_f: column a holds the coordinates of J d_a
  Mat<S, 6> omega;  // omega[a][b] = h_t(J d_a, d_b)
};

// Tangent-space data of the coordinate fields at z.
template <typename S>
struct TwistorFrameData {
  Mat4<S> g;
  Mat4<S> e;      // frame field at x
  Mat4<S> einv;   // frame components of the coordinate fields: E^T g
  Vec3<S> y;      // fibre point
  std::array<Vec3<S>, 6> ver;  // vertical parts of d_a
  Mat<S, 2> dydy_inv;          // (dy^T dy)^-1 for the two fibre fields
  std::array<Mat3<S>, 4> sconn;
};

template <typename S>
TwistorFrameData<S> twistor_frame_data(const TwistorChart& tc, const Vec<S, 6>& z) {
  using std::sqrt;
  const Vec4<S> x{z[0], z[1], z[2], z[3]};
  const FrameJet<S> fj = frame_jet<S>(*tc.chart, x);
  TwistorFrameData<S> d;
  d.g = fj.g;
  d.e = fj.e;
  d.einv = transpose(fj.e) * fj.g;
  d.sconn = fj.sconn;

  const Vec3<S> s0 = lift<S, 3>(tc.sigma0.c);
  const Vec3<S> n1 = lift<S, 3>(tc.nu1.c);
  const Vec3<S> n2 = lift<S, 3>(tc.nu2.c);
  const Vec3<S> w = s0 + z[4] * n1 + z[5] * n2;
  const S n = sqrt(dot<S, 3>(w, w));
  for (int k = 0; k < 3; ++k) d.y[k] = w[k] / n;
  for (int a = 0; a < 4; ++a) d.ver[a] = apply_sconn(fj.sconn[a], d.y);
  const std::array<Vec3<S>, 2> nus{n1, n2};
  for (int i = 0; i < 2; ++i) {
    const S yn = dot<S, 3>(d.y, nus[i]);
    for (int k = 0; k < 3; ++k) d.ver[4 + i][k] = (nus[i][k] - yn * d.y[k]) / n;
  }
  Mat<S, 2> m;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) m[i][k] = dot<S, 3>(d.ver[4 + i], d.ver[4 + k]);
  d.dydy_inv = inverse<S, 2>(m);
  return d;
}

// Fibre coordinates (du1, du2) of the tangent vector whose vertical part is
// `ver` after removing the contribution of the base coordinates `xs`.
template <typename S>
Vec<S, 2> fibre_coordinates(const TwistorFrameData<S>& d, const Vec4<S>& xs, const Vec3<S>& ver) {
  Vec3<S> r = ver;
  for (int al = 0; al < 4; ++al)
    for (int k = 0; k < 3; ++k) r[k] -= xs[al] * d.ver[al][k];
  Vec<S, 2> rhs{dot<S, 3>(d.ver[4], r), dot<S, 3>(d.ver[5], r)};
  return d.dydy_inv * rhs;
}

// Coordinates of the horizontal lift of the vector field with constant
// frame components xf.
template <typename S>
Vec<S, 6> horizontal_lift_field(const TwistorChart& tc, const Vec<S, 6>& z, const Vec4<double>& xf) {
  const TwistorFrameData<S> d = twistor_frame_data(tc, z);
  const Vec4<S> xs = d.e * lift<S, 4>(xf);
  Vec3<S> zero;
  zero.fill(S(0.0));
  const Vec<S, 2> u = fibre_coordinates(d, xs, zero);
  return {xs[0], xs[1], xs[2], xs[3], u[0], u[1]};
}

template <typename S>
TwistorFields<S> twistor_fields(const TwistorChart& tc, const Vec<S, 6>& z) {
  const TwistorFrameData<S> d = twistor_frame_data(tc, z);
  TwistorFields<S> out;

  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      S s = tc.t * dot<S, 3>(d.ver[a], d.ver[b]);
      if (a < 4 && b < 4)
        for (int i = 0; i < 4; ++i) s += d.einv[i][a] * d.einv[i][b];
      out.h[a][b] = s;
    }

  SDual<S> om;
  om.c.fill(S(0.0));
  if (tc.fmap.needs_omega()) {
    const Vec4<S> x{z[0], z[1], z[2], z[3]};
    om = self_dual_part(omega_bivector(d.g, tc.chart->complex_structure(x), d.e));
  }
  const SDual<S> fy = apply_components(tc.fmap, SDual<S>{d.y}, om);
  const Mat4<S> k = k_endo(fy);

  for (int a = 0; a < 6; ++a) {
    Vec4<S> hor_chart;
    hor_chart.fill(S(0.0));
    if (a < 4) {
      const Vec4<S> hf = column(d.einv, a);
      hor_chart = d.e * (k * hf);
    }
    const Vec3<S> vj = cross3(d.y, d.ver[a]);
    const Vec<S, 2> u = fibre_coordinates(d, hor_chart, vj);
    for (int i = 0; i < 4; ++i) out.j[i][a] = hor_chart[i];
    out.j[4][a] = u[0];
    out.j[5][a] = u[1];
  }
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      S s(0.0);
      for (int c = 0; c < 6; ++c) s += out.j[c][a] * out.h[c][b];
      out.omega[a][b] = s;
    }
  return out;
}

// Fields and their first coordinate derivatives at z = 0.
struct TwistorJet {
  TwistorFields<double> f;
  std::array<TwistorFields<double>, 6> df;  // df[a] = d_a of each field
  std::array<Mat<double, 6>, 6> gamma;      // gamma[c][a][b] of h_t
  // Columns: coordinates of the h_t-orthonormal basis
  // (E_1^h, ..., E_4^h, nu1/sqrt t, nu2/sqrt t).
  Mat<double, 6> basis;
};

TwistorJet twistor_jet(const TwistorChart& tc);

// z = (x0, 0, 0) seeded in all six directions.
Vec<ad::D6, 6> seeded_origin(const TwistorChart& tc);

// Coordinates at z = 0 of the horizontal lift of X (frame components).
Vec<double, 6> horizontal_lift_coords(const TwistorChart& tc, const Vec4<double>& xf);
// Conversions between coordinates at z = 0 and the horizontal/vertical split.
Vec<double, 6> to_coords(const TwistorChart& tc, const TwistorVec& v);
TwistorVec from_coords(const TwistorChart& tc, const Vec<double, 6>& c);

// Levi-Civita connection of h_t from coordinate Christoffels: D_A B with A a
// tangent vector at z = 0 and B the field given by `field`.
template <typename Field>
Vec<double, 6> covariant_derivative_oracle(const TwistorChart& tc, const TwistorJet& jet, const Vec<double, 6>& a,
                                           Field&& field) {
  const Vec<ad::D6, 6> b = field(tc, seeded_origin(tc));
  Vec<double, 6> out{};
  for (int c = 0; c < 6; ++c) {
    double s = 0.0;
    for (int i = 0; i < 6; ++i) {
      s += a[i] * b[c].d[i];
      for (int k = 0; k < 6; ++k) s += jet.gamma[c][i][k] * a[i] * b[k].v;
    }
    out[c] = s;
  }
  return out;
}

}  // namespace twistorgh
