#include "twistorgh/riemann.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace twistorgh {

namespace {

bool leading_minors_positive(const Mat4<double>& g) {
  for (int k = 1; k <= 4; ++k) {
    double m[4][4];
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) m[i][j] = g[i][j];
    double det = 1.0;
    for (int c = 0; c < k; ++c) {
      int piv = c;
      for (int r = c + 1; r < k; ++r)
        if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
      if (m[piv][c] == 0.0) return false;
      if (piv != c) {
        for (int j = 0; j < k; ++j) std::swap(m[piv][j], m[c][j]);
        det = -det;
      }
      det *= m[c][c];
      for (int r = c + 1; r < k; ++r) {
        const double f = m[r][c] / m[c][c];
        for (int j = c; j < k; ++j) m[r][j] -= f * m[c][j];
      }
    }
    if (!(det > 0.0)) return false;
  }
  return true;
}

Mat3<double> block(const Mat<double, 6>& m, int r0, int c0) {
  Mat3<double> b;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) b[i][j] = m[r0 + i][c0 + j];
  return b;
}

Biv<double> lambda2_basis(int i) {
  Vec<double, 6> v{};
  v[i] = 1.0;
  return from_lambda2_coords(v);
}

}  // namespace

void require_spd(const MetricChart& chart, const Vec4<double>& p) {
  const Mat4<double> g = chart.metric(p);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < i; ++j)
      if (std::abs(g[i][j] - g[j][i]) > 1e-12 * (1.0 + std::abs(g[i][j])))
        throw NonSpdMetric("metric of chart '" + chart.name() + "' is not symmetric");
  if (!leading_minors_positive(g))
    throw NonSpdMetric("metric of chart '" + chart.name() + "' is not positive definite at the sample point");
}

Christoffel<double> christoffels(const MetricChart& chart, const Vec4<double>& p) {
  require_spd(chart, p);
  return christoffel(metric_jet<double>(chart, p));
}

Frame4 coordinate_frame(const MetricChart& chart, const Vec4<double>& p) {
  require_spd(chart, p);
  Frame4 f;
  f.e = coordinate_gram_schmidt(chart.metric(p));
  return f;
}

CurvatureTensor curvature_tensor(const MetricChart& chart, const Vec4<double>& p, const Frame4& frame) {
  require_spd(chart, p);
  using ad::D4;
  const Vec4<D4> xd = ad::seed<4>(p);
  const Christoffel<D4> gamma = christoffel(metric_jet<D4>(chart, xd));
  const Mat4<double> g = chart.metric(p);

  // Textbook tensor Rstd^r_{s m n} = d_m G^r_{ns} - d_n G^r_{ms} + G^r_{ml} G^l_{ns} - G^r_{nl} G^l_{ms}.
  // Our R(X,Y) is its negative: R(d_m, d_n) d_s = -Rstd^r_{smn} d_r.
  double rc[4][4][4][4];  // rc[m][n][s][r] = g(R(d_m, d_n) d_s, d_r)
  double rstd[4][4][4][4];  // rstd[r][s][m][n]
  for (int r = 0; r < 4; ++r)
    for (int s = 0; s < 4; ++s)
      for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n) {
          double v = gamma[r][n][s].d[m] - gamma[r][m][s].d[n];
          for (int l = 0; l < 4; ++l)
            v += gamma[r][m][l].v * gamma[l][n][s].v - gamma[r][n][l].v * gamma[l][m][s].v;
          rstd[r][s][m][n] = v;
        }
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n)
      for (int s = 0; s < 4; ++s)
        for (int r = 0; r < 4; ++r) {
          double v = 0.0;
          for (int k = 0; k < 4; ++k) v -= g[r][k] * rstd[k][s][m][n];
          rc[m][n][s][r] = v;
        }

  const Mat4<double>& e = frame.e;
  CurvatureTensor out;
  // Contract one index at a time.
  double t1[4][4][4][4] = {};
  for (int a = 0; a < 4; ++a)
    for (int n = 0; n < 4; ++n)
      for (int s = 0; s < 4; ++s)
        for (int r = 0; r < 4; ++r) {
          double v = 0.0;
          for (int m = 0; m < 4; ++m) v += e[m][a] * rc[m][n][s][r];
          t1[a][n][s][r] = v;
        }
  double t2[4][4][4][4] = {};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int s = 0; s < 4; ++s)
        for (int r = 0; r < 4; ++r) {
          double v = 0.0;
          for (int n = 0; n < 4; ++n) v += e[n][b] * t1[a][n][s][r];
          t2[a][b][s][r] = v;
        }
  double t3[4][4][4][4] = {};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int r = 0; r < 4; ++r) {
          double v = 0.0;
          for (int s = 0; s < 4; ++s) v += e[s][c] * t2[a][b][s][r];
          t3[a][b][c][r] = v;
        }
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          double v = 0.0;
          for (int r = 0; r < 4; ++r) v += e[r][d] * t3[a][b][c][r];
          out.r[a][b][c][d] = v;
        }
  return out;
}

double first_bianchi_defect(const CurvatureTensor& r) {
  double worst = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d)
          worst = std::max(worst, std::abs(r(a, b, c, d) + r(b, c, a, d) + r(c, a, b, d)));
  return worst;
}

Mat4<double> curvature_endo(const CurvatureTensor& r, const Biv<double>& a) {
  // R(E_a, E_b) E_c = sum_d R_abcd E_d; column c of the matrix is R(.)E_c.
  Mat4<double> l = zeros<double, 4, 4>();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const double aij = a.at(i, j);
      if (aij == 0.0) continue;
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) l[d][c] += 0.5 * aij * r(i, j, c, d);
    }
  return l;
}

Biv<double> curvature_on_biv(const CurvatureTensor& r, const Biv<double>& a, const Biv<double>& b) {
  // A bivector with matrix B_ij maps under an endomorphism L to L B + B L^T.
  const Mat4<double> l = curvature_endo(r, a);
  const Mat4<double> bm = biv_matrix(b);
  return biv_from_matrix(l * bm + bm * transpose(l));
}

CurvOp curvature_operator(const CurvatureTensor& r) {
  std::array<Mat4<double>, 6> basis;
  for (int i = 0; i < 6; ++i) basis[i] = biv_matrix(lambda2_basis(i));
  CurvOp op;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      double v = 0.0;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          const double u = basis[i][a][b];
          if (u == 0.0) continue;
          for (int c = 0; c < 4; ++c)
            for (int d = 0; d < 4; ++d) v += u * basis[j][c][d] * r(a, b, c, d);
        }
      op.m[i][j] = 0.25 * v;
    }
  return op;
}

CurvOp curvature_operator(const MetricChart& chart, const Vec4<double>& p, const Frame4& frame) {
  return curvature_operator(curvature_tensor(chart, p, frame));
}

CurvOp CurvDecomp::reassemble() const {
  CurvOp op;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      op.m[i][j] = wplus[i][j] + (i == j ? s / 6.0 : 0.0);
      op.m[3 + i][3 + j] = wminus[i][j] + (i == j ? s / 6.0 : 0.0);
      op.m[3 + i][j] = b[i][j];
      op.m[j][3 + i] = b[i][j];
    }
  return op;
}

CurvDecomp decompose(const CurvOp& op) {
  const double scale = 1.0 + frobenius<6, 6>(op.m);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < i; ++j)
      if (std::abs(op.m[i][j] - op.m[j][i]) > 1e-10 * scale)
        throw std::domain_error("decompose: curvature operator is not symmetric");
  CurvDecomp d;
  for (int i = 0; i < 6; ++i) d.s += op.m[i][i];
  d.wplus = block(op.m, 0, 0);
  d.wminus = block(op.m, 3, 3);
  d.b = block(op.m, 3, 0);
  for (int i = 0; i < 3; ++i) {
    d.wplus[i][i] -= d.s / 6.0;
    d.wminus[i][i] -= d.s / 6.0;
  }
  return d;
}

SymEigen3 symmetric_eigen(const Mat3<double>& m) {
  Eigen::Matrix3d a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = 0.5 * (m[i][j] + m[j][i]);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(a);
  SymEigen3 out;
  // Eigen sorts ascending.
  for (int k = 0; k < 3; ++k) {
    out.values[k] = es.eigenvalues()(2 - k);
    for (int i = 0; i < 3; ++i) out.vectors[i][k] = es.eigenvectors()(i, 2 - k);
  }
  return out;
}

double scalar_curvature(const MetricChart& chart, const Vec4<double>& p) {
  return decompose(curvature_operator(chart, p, coordinate_frame(chart, p))).s;
}

CurvaturePredicates curvature_predicates(const CurvOp& op, double tol) {
  const CurvDecomp d = decompose(op);
  const double thr = tol * (1.0 + frobenius<6, 6>(op.m));
  CurvaturePredicates out;
  out.einstein = frobenius<3, 3>(d.b) <= thr;
  out.self_dual = frobenius<3, 3>(d.wminus) <= thr;
  out.anti_self_dual = frobenius<3, 3>(d.wplus) <= thr;
  return out;
}

bool is_einstein(const MetricChart& chart, const Vec4<double>& p, double tol) {
  return curvature_predicates(curvature_operator(chart, p, coordinate_frame(chart, p)), tol).einstein;
}

bool is_self_dual(const MetricChart& chart, const Vec4<double>& p, double tol) {
  return curvature_predicates(curvature_operator(chart, p, coordinate_frame(chart, p)), tol).self_dual;
}

bool is_anti_self_dual(const MetricChart& chart, const Vec4<double>& p, double tol) {
  return curvature_predicates(curvature_operator(chart, p, coordinate_frame(chart, p)), tol).anti_self_dual;
}

std::array<Mat4<double>, 4> covariant_derivative_j(const MetricChart& chart, const Vec4<double>& p) {
  if (!chart.has_complex_structure()) throw MissingComplexStructure(chart.name());
  const Christoffel<double> gamma = christoffels(chart, p);
  const Mat4<ad::D4> jd = chart.complex_structure(ad::seed<4>(p));
  std::array<Mat4<double>, 4> out;
  for (int al = 0; al < 4; ++al)
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        double v = jd[a][b].d[al];
        for (int c = 0; c < 4; ++c) v += gamma[a][al][c] * jd[c][b].v - jd[a][c].v * gamma[c][al][b];
        out[al][a][b] = v;
      }
  return out;
}

bool is_kahler_at(const MetricChart& chart, const Vec4<double>& p, double tol) {
  const auto nj = covariant_derivative_j(chart, p);
  double s = 0.0;
  for (const auto& m : nj) s += std::pow(frobenius<4, 4>(m), 2);
  return std::sqrt(s) <= tol;
}

Mat4<double> ricci(const CurvatureTensor& r) {
  Mat4<double> ric = zeros<double, 4, 4>();
  for (int b = 0; b < 4; ++b)
    for (int c = 0; c < 4; ++c)
      for (int a = 0; a < 4; ++a) ric[b][c] += r(a, b, a, c);
  return ric;
}

}  // namespace twistorgh
