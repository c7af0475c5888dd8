#pragma once

// Chart-level Riemannian geometry: Christoffel symbols, the frame field and
// its connection forms, the curvature tensor and the curvature operator on
// 2-vectors together with its Singer-Thorpe blocks.
//
// Curvature sign: R(X,Y) = nabla_[X,Y] - [nabla_X, nabla_Y]. This is the
// negative of the "textbook" R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y]; the
// conversion happens in exactly one place, `curvature_tensor`. With this sign
// and the 1/2-det metric on 2-vectors, the round unit sphere has curvature
// operator 2 Id and the scalar curvature is the trace of the operator.

#include <array>
#include <stdexcept>
#include <string>

#include "twistorgh/fiber_algebra.hpp"
#include "twistorgh/metric_chart.hpp"

namespace twistorgh {

struct NonSpdMetric : std::domain_error {
  explicit NonSpdMetric(const std::string& what) : std::domain_error(what) {}
};

// Christoffel symbols gamma[c][a][b] = Gamma^c_{ab}.
template <typename S>
using Christoffel = std::array<Mat4<S>, 4>;

// Metric and its first partial derivatives dg[a] = d_a g at one point.
template <typename S>
struct MetricJet {
  Mat4<S> g;
  std::array<Mat4<S>, 4> dg;
};

template <typename S>
MetricJet<S> metric_jet(const MetricChart& chart, const Vec4<S>& x) {
  using D = ad::Dual<S, 4>;
  Vec4<D> xd;
  for (int i = 0; i < 4; ++i) xd[i] = ad::variable<4>(x[i], i);
  const Mat4<D> gd = chart.metric(xd);
  MetricJet<S> jet;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      jet.g[i][j] = gd[i][j].v;
      for (int a = 0; a < 4; ++a) jet.dg[a][i][j] = gd[i][j].d[a];
    }
  return jet;
}

template <typename S>
Christoffel<S> christoffel(const MetricJet<S>& jet) {
  const Mat4<S> ginv = inverse<S, 4>(jet.g);
  Christoffel<S> gamma;
  for (int c = 0; c < 4; ++c)
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        S s(0.0);
        for (int d = 0; d < 4; ++d)
          s += ginv[c][d] * (jet.dg[a][d][b] + jet.dg[b][d][a] - jet.dg[d][a][b]);
        gamma[c][a][b] = 0.5 * s;
      }
  return gamma;
}

// Frame field from Gram-Schmidt of the coordinate fields, with its
// Levi-Civita connection forms at one point.
template <typename S>
struct FrameJet {
  Mat4<S> g;
  Christoffel<S> gamma;
  Mat4<S> e;                     // e[i][a]: chart component i of E_a
  std::array<Mat4<S>, 4> conn;   // conn[al][a][b] = g(nabla_{d_al} E_a, E_b)
  std::array<Mat3<S>, 4> sconn;  // sconn[al][j][k] = g(nabla_{d_al} s_j, s_k)
};

// nabla_X of a self-dual 2-vector with frame-constant components c is
// sum_k (sum_j c_j sconn[j][k]) s_k; this returns that row-vector product.
template <typename S>
Vec3<S> apply_sconn(const Mat3<S>& sconn, const Vec3<S>& c) {
  Vec3<S> r;
  for (int k = 0; k < 3; ++k) {
    r[k] = S(0.0);
    for (int j = 0; j < 3; ++j) r[k] += c[j] * sconn[j][k];
  }
  return r;
}

template <typename S>
FrameJet<S> frame_jet(const MetricChart& chart, const Vec4<S>& x) {
  using D = ad::Dual<S, 4>;
  Vec4<D> xd;
  for (int i = 0; i < 4; ++i) xd[i] = ad::variable<4>(x[i], i);
  const Mat4<D> gd = chart.metric(xd);
  const Mat4<D> ed = coordinate_gram_schmidt(gd);

  FrameJet<S> fj;
  MetricJet<S> mj;
  std::array<Mat4<S>, 4> de;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      mj.g[i][j] = gd[i][j].v;
      fj.e[i][j] = ed[i][j].v;
      for (int a = 0; a < 4; ++a) {
        mj.dg[a][i][j] = gd[i][j].d[a];
        de[a][i][j] = ed[i][j].d[a];
      }
    }
  fj.g = mj.g;
  fj.gamma = christoffel(mj);

  for (int al = 0; al < 4; ++al) {
    // Chart components of nabla_{d_al} E_a.
    Mat4<S> ne;
    for (int i = 0; i < 4; ++i)
      for (int a = 0; a < 4; ++a) {
        S s = de[al][i][a];
        for (int b = 0; b < 4; ++b) s += fj.gamma[i][al][b] * fj.e[b][a];
        ne[i][a] = s;
      }
    const Mat4<S> ge = fj.g * fj.e;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        S s(0.0);
        for (int i = 0; i < 4; ++i) s += ne[i][a] * ge[i][b];
        fj.conn[al][a][b] = s;
      }
    // nabla(X^Y) = nablaX^Y + X^nablaY; with M[c][a] = conn[a][c] a bivector
    // matrix B maps to M B + B M^T.
    const Mat4<S> m = transpose(fj.conn[al]);
    for (int j = 0; j < 3; ++j) {
      const Mat4<S> b = biv_matrix(to_biv(s_basis<S>(j)));
      const Mat4<S> nb = m * b + b * transpose(m);
      const SDual<S> p = self_dual_part(biv_from_matrix(nb));
      for (int k = 0; k < 3; ++k) fj.sconn[al][j][k] = p.c[k];
    }
  }
  return fj;
}

// Christoffel symbols at p; throws NonSpdMetric when g(p) is not SPD.
Christoffel<double> christoffels(const MetricChart& chart, const Vec4<double>& p);

// Throws NonSpdMetric unless the metric at p is symmetric positive definite.
void require_spd(const MetricChart& chart, const Vec4<double>& p);

// Gram-Schmidt frame of the coordinate fields at p.
Frame4 coordinate_frame(const MetricChart& chart, const Vec4<double>& p);

// Frame components R[a][b][c][d] = g(R(E_a, E_b) E_c, E_d) in the sign above.
struct CurvatureTensor {
  std::array<std::array<Mat4<double>, 4>, 4> r{};

  double operator()(int a, int b, int c, int d) const { return r[a][b][c][d]; }
};

CurvatureTensor curvature_tensor(const MetricChart& chart, const Vec4<double>& p, const Frame4& frame);

// Max |R_abcd + R_bcad + R_cabd| over all index triples.
double first_bianchi_defect(const CurvatureTensor& r);

// Curvature endomorphism R(a) of T_pM for a 2-vector a (frame matrix,
// column convention), extended linearly from R(X^Y) = R(X, Y).
Mat4<double> curvature_endo(const CurvatureTensor& r, const Biv<double>& a);

// R(a) acting on 2-vectors as a derivation: R(a)b = R(a)X^Y + X^R(a)Y.
Biv<double> curvature_on_biv(const CurvatureTensor& r, const Biv<double>& a, const Biv<double>& b);

// Curvature operator in the ordered orthonormal basis (s1,s2,s3,sb1,sb2,sb3):
// m[i][j] = g(R(e_i), e_j).
struct CurvOp {
  Mat<double, 6> m{};

  Vec<double, 6> apply(const Vec<double, 6>& v) const { return m * v; }
  Biv<double> apply(const Biv<double>& b) const { return from_lambda2_coords(apply(lambda2_coords(b))); }
  // g(R(a), b)
  double pair(const Biv<double>& a, const Biv<double>& b) const {
    return dot<double, 6>(apply(lambda2_coords(a)), lambda2_coords(b));
  }
};

CurvOp curvature_operator(const CurvatureTensor& r);
CurvOp curvature_operator(const MetricChart& chart, const Vec4<double>& p, const Frame4& frame);

struct CurvDecomp {
  double s = 0.0;
  Mat3<double> wplus{};
  Mat3<double> wminus{};
  // Block sending the self-dual part to the anti-self-dual part:
  // b[j][i] = g(R(s_i), sb_j).
  Mat3<double> b{};

  CurvOp reassemble() const;
};

// Throws std::domain_error when op is asymmetric beyond 1e-10 (relative to 1+|op|).
CurvDecomp decompose(const CurvOp& op);

// Sorted (descending) eigenvalues and matching unit eigenvectors (columns) of
// a symmetric 3x3 matrix.
struct SymEigen3 {
  Vec3<double> values{};
  Mat3<double> vectors{};
};
SymEigen3 symmetric_eigen(const Mat3<double>& m);

double scalar_curvature(const MetricChart& chart, const Vec4<double>& p);

struct CurvaturePredicates {
  bool einstein = false;
  bool self_dual = false;
  bool anti_self_dual = false;
};

// Block-norm tests |block| <= tol * (1 + |R|).
CurvaturePredicates curvature_predicates(const CurvOp& op, double tol);
bool is_einstein(const MetricChart& chart, const Vec4<double>& p, double tol);
bool is_self_dual(const MetricChart& chart, const Vec4<double>& p, double tol);
bool is_anti_self_dual(const MetricChart& chart, const Vec4<double>& p, double tol);

// Chart components (nabla_{d_al} J)[a][b].
std::array<Mat4<double>, 4> covariant_derivative_j(const MetricChart& chart, const Vec4<double>& p);
// Throws MissingComplexStructure when the chart carries no J.
bool is_kahler_at(const MetricChart& chart, const Vec4<double>& p, double tol);

// Ricci tensor in the frame, Ric(E_b, E_c) = sum_a g(R(E_a, E_b)E_a, E_c)
// (positive on round spheres).
Mat4<double> ricci(const CurvatureTensor& r);

}  // namespace twistorgh
