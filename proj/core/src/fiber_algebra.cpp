#include "twistorgh/fiber_algebra.hpp"

#include <algorithm>
#include <cmath>

namespace twistorgh {

Frame4 orthonormal_frame(const Mat4<double>& g, const Mat4<double>& vectors) {
  Frame4 f;
  f.e = zeros<double, 4, 4>();
  for (int a = 0; a < 4; ++a) {
    Vec4<double> v = column(vectors, a);
    for (int b = 0; b < a; ++b) {
      const Vec4<double> eb = f.vector(b);
      const double p = form<double, 4>(g, v, eb);
      for (int i = 0; i < 4; ++i) v[i] -= p * eb[i];
    }
    const double n2 = form<double, 4>(g, v, v);
    if (!(n2 > 1e-24)) throw std::invalid_argument("orthonormal_frame: dependent vectors");
    const double n = std::sqrt(n2);
    for (int i = 0; i < 4; ++i) f.e[i][a] = v[i] / n;
  }
  if (determinant<double, 4>(f.e) < 0.0) {
    for (int i = 0; i < 4; ++i) std::swap(f.e[i][2], f.e[i][3]);
  }
  return f;
}

double frame_orthonormality_defect(const Mat4<double>& g, const Frame4& f) {
  const auto gram = transpose(f.e) * g * f.e;
  double worst = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) worst = std::max(worst, std::abs(gram[i][j] - (i == j ? 1.0 : 0.0)));
  return worst;
}

bool frame_is_positive(const Frame4& f) { return determinant<double, 4>(f.e) > 0.0; }

Frame4 adapted_frame(const Frame4& frame, const SDual<double>& sigma, int variant) {
  if (variant < 1 || variant > 3) throw std::invalid_argument("adapted_frame: variant must be 1, 2 or 3");
  if (std::abs(norm(sigma) - 1.0) > 1e-9) throw std::invalid_argument("adapted_frame: sigma is not a unit vector");

  // Work in the orthonormal components of the input frame.
  const Mat4<double> k = k_endo(sigma);
  const Vec4<double> e1{1.0, 0.0, 0.0, 0.0};
  const Vec4<double> ke1 = k * e1;

  Vec4<double> e2{};
  for (int cand = 1; cand < 4; ++cand) {
    Vec4<double> v{};
    v[cand] = 1.0;
    v = v - dot<double, 4>(v, e1) * e1;
    v = v - dot<double, 4>(v, ke1) * ke1;
    const double n2 = dot<double, 4>(v, v);
    if (n2 > 0.5) {
      e2 = (1.0 / std::sqrt(n2)) * v;
      break;
    }
  }
  const Vec4<double> ke2 = k * e2;

  std::array<Vec4<double>, 4> cols;
  switch (variant) {
    case 1:
      cols = {e1, ke1, e2, ke2};
      break;
    case 2:
      cols = {e1, e2, ke1, -ke2};
      break;
    default:
      cols = {e1, e2, ke2, ke1};
      break;
  }
  Frame4 out;
  for (int a = 0; a < 4; ++a) {
    const Vec4<double> chart = frame.to_chart(cols[a]);
    for (int i = 0; i < 4; ++i) out.e[i][a] = chart[i];
  }
  return out;
}

SDual<double> change_sdual_frame(const Mat4<double>& g, const Frame4& from, const Frame4& to,
                                 const SDual<double>& s) {
  const Mat4<double> p = transpose(to.e) * g * from.e;
  const Mat4<double> b = biv_matrix(to_biv(s));
  const Mat4<double> bt = p * b * transpose(p);
  return self_dual_part(biv_from_matrix(bt));
}

}  // namespace twistorgh
