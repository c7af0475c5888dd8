#pragma once

// Fibre-preserving self-maps f of the twistor space: identity, antipodal,
// the constant section omega of a compatible almost complex structure, and
// the stereographic maps f_lambda^+ / f_lambda^- built from omega.

#include <array>
#include <optional>
#include <string>

#include "twistorgh/fiber_algebra.hpp"
#include "twistorgh/metric_chart.hpp"
#include "twistorgh/riemann.hpp"

namespace twistorgh {

enum class FiberMapKind { Identity, Antipodal, ConstOmega, Lambda };

struct FiberMapSpec {
  FiberMapKind kind = FiberMapKind::Identity;
  double a = 1.0;
  double b = 0.0;
  int sign = +1;

  static FiberMapSpec identity() { return {FiberMapKind::Identity, 1.0, 0.0, +1}; }
  static FiberMapSpec antipodal() { return {FiberMapKind::Antipodal, 1.0, 0.0, +1}; }
  static FiberMapSpec const_omega() { return {FiberMapKind::ConstOmega, 1.0, 0.0, +1}; }
  static FiberMapSpec lambda(double a, double b, int sign) { return {FiberMapKind::Lambda, a, b, sign}; }

  bool needs_omega() const { return kind == FiberMapKind::ConstOmega || kind == FiberMapKind::Lambda; }
  bool lambda_nonzero() const { return a != 0.0 || b != 0.0; }
  double lambda_abs2() const { return a * a + b * b; }
};

bool operator==(const FiberMapSpec& x, const FiberMapSpec& y);

// Accepts "id", "antipodal", "omega", "lambda:+:<a>,<b>", "lambda:-:<a>,<b>".
FiberMapSpec parse_fibermap(const std::string& text);
std::string to_string(const FiberMapSpec& spec);

// f(sigma) in s-basis components. Written for any scalar so the differential
// in sigma and in omega comes from the same expression. For Lambda the
// rational formula is total on the sphere; sigma need not be unit when
// differentiating in the ambient R^3.
template <typename S>
SDual<S> apply_components(const FiberMapSpec& spec, const SDual<S>& sigma, const SDual<S>& omega) {
  switch (spec.kind) {
    case FiberMapKind::Identity:
      return sigma;
    case FiberMapKind::Antipodal:
      return -sigma;
    case FiberMapKind::ConstOmega:
      return omega;
    case FiberMapKind::Lambda:
      break;
  }
  const double r2 = spec.lambda_abs2();
  const double c = r2 - 1.0;
  const double cc = r2 + 1.0;
  const S so = dot(sigma, omega);
  const S den = cc + c * so;
  const SDual<S> sxo = cross(sigma, omega);
  SDual<S> num;
  for (int k = 0; k < 3; ++k) {
    num.c[k] = 2.0 * spec.a * sigma.c[k] - 2.0 * spec.b * sxo.c[k] - 2.0 * spec.a * so * omega.c[k] +
               double(spec.sign) * (c + cc * so) * omega.c[k];
    num.c[k] = num.c[k] / den;
  }
  return num;
}

// Throws std::invalid_argument when the map needs omega and none is given.
SDual<double> apply(const FiberMapSpec& spec, const SDual<double>& sigma, const std::optional<SDual<double>>& omega);

enum class Pole { Plus, Minus };

// Stereographic projection of the unit sphere in Lambda^2_+ from +omega
// (Pole::Plus, the map Phi) or from -omega (Pole::Minus, the map Psi) onto the
// plane orthogonal to omega. Returns nullopt for the projection pole (the
// ideal point at infinity).
std::optional<SDual<double>> stereo(const SDual<double>& omega, const SDual<double>& tau, Pole pole);
SDual<double> stereo_inverse(const SDual<double>& omega, const SDual<double>& zeta, Pole pole);

// zeta -> lambda zeta in the plane orthogonal to omega with complex structure
// zeta -> omega x zeta.
SDual<double> lambda_multiply(const SDual<double>& omega, const SDual<double>& zeta, double a, double b);

// Differential of f restricted to the fibre: a tangent vector V at sigma
// (g(V, sigma) = 0) to the tangent vector f_*(V) at f(sigma).
SDual<double> fiber_differential(const FiberMapSpec& spec, const SDual<double>& sigma,
                                 const std::optional<SDual<double>>& omega, const SDual<double>& v);

// Frame-level first-order data at a base point: the Gram-Schmidt frame, its
// connection forms and, when the chart carries J, the 2-vector omega with its
// first derivatives.
struct BaseJet {
  Vec4<double> p{};
  Mat4<double> g{};
  Frame4 frame;
  Christoffel<double> gamma{};
  std::array<Mat4<double>, 4> conn{};
  std::array<Mat3<double>, 4> sconn{};
  bool has_omega = false;
  SDual<double> omega;
  std::array<SDual<double>, 4> d_omega{};  // d_al of the s-basis components

  // g(nabla_X s_j, s_k) for X given by frame components.
  Mat3<double> sconn_along(const Vec4<double>& x_frame) const;
  // nabla_X of a section with frame-constant components c.
  SDual<double> nabla_const(const Vec4<double>& x_frame, const SDual<double>& c) const;
  // nabla_X omega (throws when there is no omega).
  SDual<double> nabla_omega(const Vec4<double>& x_frame) const;
};

// Throws NonSpdMetric for a non-SPD metric and std::domain_error when J is
// not g-orthogonal or does not induce the chart orientation (omega would not
// be self-dual).
BaseJet base_jet(const MetricChart& chart, const Vec4<double>& p);

// Frame 2-vector of a compatible J: omega_ab = g(J E_a, E_b) with E = frame.
template <typename S>
Biv<S> omega_bivector(const Mat4<S>& g, const Mat4<S>& j, const Mat4<S>& e) {
  const Mat4<S> je = j * e;
  const Mat4<S> ge = g * e;
  Biv<S> w;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) {
      S s(0.0);
      for (int i = 0; i < 4; ++i) s += je[i][a] * ge[i][b];
      w.c[Biv<S>::index(a, b)] = s;
    }
  return w;
}

// Vertical part of f_*(X^h_sigma), computed for a general base by
//   nabla_X(f o s) - f_*(nabla_X s)
// with s the section whose frame components are constant and equal to sigma.
SDual<double> pushforward_horizontal(const FiberMapSpec& spec, const BaseJet& jet, const Vec4<double>& x_frame,
                                     const SDual<double>& sigma);

// Closed forms: nabla_X omega for ConstOmega; zero for Identity/Antipodal;
// for Lambda with |lambda| = 1,
//   -b sigma x nabla_X omega + (+-1 - a)[g(sigma, nabla_X omega) omega + g(sigma, omega) nabla_X omega].
// Throws std::invalid_argument for Lambda with |lambda| != 1.
SDual<double> pushforward_horizontal_closed(const FiberMapSpec& spec, const BaseJet& jet, const Vec4<double>& x_frame,
                                            const SDual<double>& sigma);

}  // namespace twistorgh
