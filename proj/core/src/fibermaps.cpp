#include "twistorgh/fibermaps.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace twistorgh {

bool operator==(const FiberMapSpec& x, const FiberMapSpec& y) {
  if (x.kind != y.kind) return false;
  if (x.kind != FiberMapKind::Lambda) return true;
  return x.a == y.a && x.b == y.b && x.sign == y.sign;
}

namespace {

double parse_number(const std::string& s, const std::string& whole) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v))
    throw std::invalid_argument("fibermap '" + whole + "': bad number '" + s + "'");
  return v;
}

std::string format_number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

FiberMapSpec parse_fibermap(const std::string& text) {
  if (text == "id" || text == "identity") return FiberMapSpec::identity();
  if (text == "antipodal") return FiberMapSpec::antipodal();
  if (text == "omega") return FiberMapSpec::const_omega();
  const std::string prefix = "lambda:";
  if (text.rfind(prefix, 0) == 0 && text.size() > prefix.size() + 2 && text[prefix.size() + 1] == ':') {
    const char sc = text[prefix.size()];
    if (sc != '+' && sc != '-') throw std::invalid_argument("fibermap '" + text + "': sign must be + or -");
    const std::string rest = text.substr(prefix.size() + 2);
    const auto comma = rest.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("fibermap '" + text + "': expected <a>,<b>");
    const double a = parse_number(rest.substr(0, comma), text);
    const double b = parse_number(rest.substr(comma + 1), text);
    return FiberMapSpec::lambda(a, b, sc == '+' ? +1 : -1);
  }
  throw std::invalid_argument("unknown fibermap '" + text + "' (expected id, antipodal, omega, lambda:+:a,b or lambda:-:a,b)");
}

std::string to_string(const FiberMapSpec& spec) {
  switch (spec.kind) {
    case FiberMapKind::Identity:
      return "id";
    case FiberMapKind::Antipodal:
      return "antipodal";
    case FiberMapKind::ConstOmega:
      return "omega";
    case FiberMapKind::Lambda:
      break;
  }
  return std::string("lambda:") + (spec.sign > 0 ? "+" : "-") + ":" + format_number(spec.a) + "," + format_number(spec.b);
}

SDual<double> apply(const FiberMapSpec& spec, const SDual<double>& sigma, const std::optional<SDual<double>>& omega) {
  if (spec.needs_omega() && !omega) throw std::invalid_argument("fibermap " + to_string(spec) + " needs omega");
  return apply_components(spec, sigma, omega.value_or(SDual<double>{}));
}

std::optional<SDual<double>> stereo(const SDual<double>& omega, const SDual<double>& tau, Pole pole) {
  const double sgn = pole == Pole::Plus ? 1.0 : -1.0;
  const double to = dot(tau, omega);
  const double den = 1.0 - sgn * to;
  if (std::abs(den) < 1e-14) return std::nullopt;
  return (1.0 / den) * (tau - to * omega);
}

SDual<double> stereo_inverse(const SDual<double>& omega, const SDual<double>& zeta, Pole pole) {
  const double sgn = pole == Pole::Plus ? 1.0 : -1.0;
  const double z2 = dot(zeta, zeta);
  return (1.0 / (z2 + 1.0)) * (2.0 * zeta + (sgn * (z2 - 1.0)) * omega);
}

SDual<double> lambda_multiply(const SDual<double>& omega, const SDual<double>& zeta, double a, double b) {
  return a * zeta + b * cross(omega, zeta);
}

SDual<double> fiber_differential(const FiberMapSpec& spec, const SDual<double>& sigma,
                                 const std::optional<SDual<double>>& omega, const SDual<double>& v) {
  if (spec.needs_omega() && !omega) throw std::invalid_argument("fibermap " + to_string(spec) + " needs omega");
  using ad::D3;
  SDual<D3> s;
  SDual<D3> w;
  const SDual<double> om = omega.value_or(SDual<double>{});
  for (int k = 0; k < 3; ++k) {
    s.c[k] = ad::variable<3>(sigma.c[k], k);
    w.c[k] = D3(om.c[k]);
  }
  const SDual<D3> f = apply_components(spec, s, w);
  SDual<double> out;
  for (int k = 0; k < 3; ++k) {
    out.c[k] = 0.0;
    for (int j = 0; j < 3; ++j) out.c[k] += f.c[k].d[j] * v.c[j];
  }
  return out;
}

Mat3<double> BaseJet::sconn_along(const Vec4<double>& x_frame) const {
  const Vec4<double> x = frame.to_chart(x_frame);
  Mat3<double> m = zeros<double, 3, 3>();
  for (int al = 0; al < 4; ++al)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) m[j][k] += x[al] * sconn[al][j][k];
  return m;
}

SDual<double> BaseJet::nabla_const(const Vec4<double>& x_frame, const SDual<double>& c) const {
  return {apply_sconn(sconn_along(x_frame), c.c)};
}

SDual<double> BaseJet::nabla_omega(const Vec4<double>& x_frame) const {
  if (!has_omega) throw std::logic_error("base point carries no omega");
  const Vec4<double> x = frame.to_chart(x_frame);
  SDual<double> d;
  for (int al = 0; al < 4; ++al) d = d + x[al] * d_omega[al];
  return d + nabla_const(x_frame, omega);
}

BaseJet base_jet(const MetricChart& chart, const Vec4<double>& p) {
  require_spd(chart, p);
  const FrameJet<double> fj = frame_jet<double>(chart, p);
  BaseJet jet;
  jet.p = p;
  jet.g = fj.g;
  jet.frame.e = fj.e;
  jet.gamma = fj.gamma;
  jet.conn = fj.conn;
  jet.sconn = fj.sconn;
  if (!chart.has_complex_structure()) return jet;

  using ad::D4;
  const Vec4<D4> xd = ad::seed<4>(p);
  const Mat4<D4> g = chart.metric(xd);
  const Mat4<D4> j = chart.complex_structure(xd);
  const Mat4<D4> e = coordinate_gram_schmidt(g);

  const Mat4<double> jv = values(j);
  const Mat4<double> j2 = jv * jv;
  const Mat4<double> gj = transpose(jv) * jet.g * jv;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      if (std::abs(j2[a][b] + (a == b ? 1.0 : 0.0)) > 1e-10)
        throw std::domain_error("chart '" + chart.name() + "': J^2 != -Id");
      if (std::abs(gj[a][b] - jet.g[a][b]) > 1e-10 * (1.0 + std::abs(jet.g[a][b])))
        throw std::domain_error("chart '" + chart.name() + "': J is not g-orthogonal");
    }

  const auto [plus, minus] = hodge_split(omega_bivector(g, j, e));
  for (int k = 0; k < 3; ++k)
    if (std::abs(ad::value_of(minus.c[k])) > 1e-10)
      throw std::domain_error("chart '" + chart.name() + "': J does not induce the chart orientation");
  jet.has_omega = true;
  for (int k = 0; k < 3; ++k) {
    jet.omega.c[k] = plus.c[k].v;
    for (int al = 0; al < 4; ++al) jet.d_omega[al].c[k] = plus.c[k].d[al];
  }
  return jet;
}

SDual<double> pushforward_horizontal(const FiberMapSpec& spec, const BaseJet& jet, const Vec4<double>& x_frame,
                                     const SDual<double>& sigma) {
  if (spec.needs_omega() && !jet.has_omega)
    throw std::invalid_argument("fibermap " + to_string(spec) + " needs the chart's complex structure");
  using ad::D4;
  // X(F(sigma, omega(x))) with sigma's frame components held fixed.
  const Vec4<double> x = jet.frame.to_chart(x_frame);
  SDual<D4> s;
  SDual<D4> w;
  for (int k = 0; k < 3; ++k) {
    s.c[k] = D4(sigma.c[k]);
    w.c[k] = D4(jet.omega.c[k]);
    for (int al = 0; al < 4; ++al) w.c[k].d[al] = jet.d_omega[al].c[k];
  }
  const SDual<D4> f = apply_components(spec, s, w);
  SDual<double> fv;
  SDual<double> xf;
  for (int k = 0; k < 3; ++k) {
    fv.c[k] = f.c[k].v;
    xf.c[k] = 0.0;
    for (int al = 0; al < 4; ++al) xf.c[k] += x[al] * f.c[k].d[al];
  }
  const std::optional<SDual<double>> om = jet.has_omega ? std::optional(jet.omega) : std::nullopt;
  const SDual<double> nabla_f_s = xf + jet.nabla_const(x_frame, fv);
  const SDual<double> nabla_s = jet.nabla_const(x_frame, sigma);
  return nabla_f_s - fiber_differential(spec, sigma, om, nabla_s);
}

SDual<double> pushforward_horizontal_closed(const FiberMapSpec& spec, const BaseJet& jet, const Vec4<double>& x_frame,
                                            const SDual<double>& sigma) {
  switch (spec.kind) {
    case FiberMapKind::Identity:
    case FiberMapKind::Antipodal:
      return SDual<double>{};
    case FiberMapKind::ConstOmega:
      return jet.nabla_omega(x_frame);
    case FiberMapKind::Lambda:
      break;
  }
  if (std::abs(spec.lambda_abs2() - 1.0) > 1e-12)
    throw std::invalid_argument("closed-form pushforward needs |lambda| = 1");
  const SDual<double> nw = jet.nabla_omega(x_frame);
  const SDual<double>& w = jet.omega;
  const double k = double(spec.sign) - spec.a;
  return (-spec.b) * cross(sigma, nw) + k * (dot(sigma, nw) * w + dot(sigma, w) * nw);
}

}  // namespace twistorgh
