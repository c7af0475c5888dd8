#pragma once

// Pointwise algebra on the bundle of 2-vectors of an oriented Riemannian
// 4-manifold, expressed in an oriented orthonormal frame (E1..E4).
//
// Conventions:
//  * g(v1^v2, v3^v4) = 1/2 det[g(vi, vj)], so each Ei^Ej (i<j) has squared
//    norm 1/2 and the s-basis below is orthonormal.
//  * s1 = E12 + E34, s2 = E13 + E42, s3 = E14 + E23 span the self-dual part;
//    sb1 = E12 - E34, sb2 = E13 - E42, sb3 = E14 - E23 the anti-self-dual part.
//  * g(K_a X, Y) = 2 g(a, X^Y).

#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "twistorgh/linalg.hpp"

namespace twistorgh {

// Components in the basis (E12, E13, E14, E23, E24, E34).
template <typename T = double>
struct Biv {
  std::array<T, 6> c{};

  static constexpr int index(int i, int j) {
    constexpr int table[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
    return table[i][j];
  }
  // Antisymmetric component b_ij for any ordered pair.
  T at(int i, int j) const {
    if (i == j) return T(0.0);
    return i < j ? c[index(i, j)] : -c[index(j, i)];
  }
};

// Components in (s1, s2, s3).
template <typename T = double>
struct SDual {
  Vec3<T> c{};
};

// Components in (sb1, sb2, sb3).
template <typename T = double>
struct ADual {
  Vec3<T> c{};
};

template <typename T>
Biv<T> operator+(Biv<T> a, const Biv<T>& b) {
  for (int k = 0; k < 6; ++k) a.c[k] += b.c[k];
  return a;
}
template <typename T>
Biv<T> operator-(Biv<T> a, const Biv<T>& b) {
  for (int k = 0; k < 6; ++k) a.c[k] -= b.c[k];
  return a;
}
template <typename T>
Biv<T> operator*(const T& s, Biv<T> a) {
  for (auto& x : a.c) x = s * x;
  return a;
}
template <typename T>
  requires(!std::is_same_v<T, double>)
Biv<T> operator*(double s, Biv<T> a) {
  for (auto& x : a.c) x = s * x;
  return a;
}

template <typename T>
SDual<T> operator+(const SDual<T>& a, const SDual<T>& b) {
  return {a.c + b.c};
}
template <typename T>
SDual<T> operator-(const SDual<T>& a, const SDual<T>& b) {
  return {a.c - b.c};
}
template <typename T>
SDual<T> operator-(const SDual<T>& a) {
  return {-a.c};
}
template <typename T>
SDual<T> operator*(const T& s, const SDual<T>& a) {
  return {s * a.c};
}
template <typename T>
  requires(!std::is_same_v<T, double>)
SDual<T> operator*(double s, const SDual<T>& a) {
  return {s * a.c};
}

template <typename T>
T dot(const SDual<T>& a, const SDual<T>& b) {
  return dot<T, 3>(a.c, b.c);
}

template <typename T>
SDual<T> cross(const SDual<T>& a, const SDual<T>& b) {
  return {cross3(a.c, b.c)};
}

template <typename T>
T norm(const SDual<T>& a) {
  using std::sqrt;
  return sqrt(dot(a, a));
}

template <typename T = double>
SDual<T> s_basis(int k) {
  SDual<T> s;
  s.c.fill(T(0.0));
  s.c[k] = T(1.0);
  return s;
}

template <typename T>
Biv<T> wedge(const Vec4<T>& x, const Vec4<T>& y) {
  Biv<T> b;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) b.c[Biv<T>::index(i, j)] = x[i] * y[j] - x[j] * y[i];
  return b;
}

// g(a, b) = 1/2 sum_{i<j} a_ij b_ij.
template <typename T>
T wedge_metric(const Biv<T>& a, const Biv<T>& b) {
  T s(0.0);
  for (int k = 0; k < 6; ++k) s += a.c[k] * b.c[k];
  return 0.5 * s;
}

template <typename T>
Biv<T> hodge_star(const Biv<T>& b) {
  // *E12 = E34, *E13 = E42, *E14 = E23 and * is an involution.
  Biv<T> r;
  r.c[0] = b.c[5];
  r.c[5] = b.c[0];
  r.c[1] = -b.c[4];
  r.c[4] = -b.c[1];
  r.c[2] = b.c[3];
  r.c[3] = b.c[2];
  return r;
}

template <typename T>
std::pair<SDual<T>, ADual<T>> hodge_split(const Biv<T>& b) {
  const auto& c = b.c;
  SDual<T> plus{{0.5 * (c[0] + c[5]), 0.5 * (c[1] - c[4]), 0.5 * (c[2] + c[3])}};
  ADual<T> minus{{0.5 * (c[0] - c[5]), 0.5 * (c[1] + c[4]), 0.5 * (c[2] - c[3])}};
  return {plus, minus};
}

template <typename T>
Biv<T> to_biv(const SDual<T>& s) {
  const auto& a = s.c;
  return Biv<T>{{a[0], a[1], a[2], a[2], -a[1], a[0]}};
}

template <typename T>
Biv<T> to_biv(const ADual<T>& s) {
  const auto& a = s.c;
  return Biv<T>{{a[0], a[1], a[2], -a[2], a[1], -a[0]}};
}

// Coordinates in the orthonormal basis (s1, s2, s3, sb1, sb2, sb3).
template <typename T>
Vec<T, 6> lambda2_coords(const Biv<T>& b) {
  auto [p, m] = hodge_split(b);
  return {p.c[0], p.c[1], p.c[2], m.c[0], m.c[1], m.c[2]};
}

template <typename T>
Biv<T> from_lambda2_coords(const Vec<T, 6>& v) {
  return to_biv(SDual<T>{{v[0], v[1], v[2]}}) + to_biv(ADual<T>{{v[3], v[4], v[5]}});
}

// Self-dual projection, the s-basis components of g(., s_k).
template <typename T>
SDual<T> self_dual_part(const Biv<T>& b) {
  return hodge_split(b).first;
}

// Antisymmetric matrix m[i][j] = b_ij.
template <typename T>
Mat4<T> biv_matrix(const Biv<T>& b) {
  Mat4<T> m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m[i][j] = b.at(i, j);
  return m;
}

template <typename T>
Biv<T> biv_from_matrix(const Mat4<T>& m) {
  Biv<T> b;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) b.c[Biv<T>::index(i, j)] = m[i][j];
  return b;
}

// K_b as a frame matrix: K_b E_i = sum_j b_ij E_j, i.e. K[j][i] = b_ij.
template <typename T>
Mat4<T> k_endo(const Biv<T>& b) {
  return transpose(biv_matrix(b));
}

template <typename T>
Mat4<T> k_endo(const SDual<T>& s) {
  return k_endo(to_biv(s));
}

// An oriented orthonormal frame at a point; column a of `e` holds the chart
// components of E_a.
struct Frame4 {
  Mat4<double> e{};

  Vec4<double> vector(int a) const { return column(e, a); }
  // Chart components of the vector with frame components v.
  Vec4<double> to_chart(const Vec4<double>& v) const { return e * v; }
};

// Gram-Schmidt of the chart coordinate fields. Generic so the frame field can
// be differentiated; the result has a positive-diagonal triangular structure
// and hence the chart's orientation.
template <typename T>
Mat4<T> coordinate_gram_schmidt(const Mat4<T>& g) {
  using std::sqrt;
  Mat4<T> e = zeros<T, 4, 4>();
  for (int a = 0; a < 4; ++a) {
    Vec4<T> v;
    for (int i = 0; i < 4; ++i) v[i] = T(a == i ? 1.0 : 0.0);
    for (int b = 0; b < a; ++b) {
      const Vec4<T> eb = column(e, b);
      const T p = form<T, 4>(g, v, eb);
      for (int i = 0; i < 4; ++i) v[i] -= p * eb[i];
    }
    const T n = sqrt(form<T, 4>(g, v, v));
    for (int i = 0; i < 4; ++i) e[i][a] = v[i] / n;
  }
  return e;
}

// Gram-Schmidt of four arbitrary chart vectors (columns of `vectors`); when
// the result is negatively oriented the last two vectors are swapped.
Frame4 orthonormal_frame(const Mat4<double>& g, const Mat4<double>& vectors);

// Max deviation of the frame's Gram matrix from the identity.
double frame_orthonormality_defect(const Mat4<double>& g, const Frame4& f);
bool frame_is_positive(const Frame4& f);

// Oriented orthonormal frame whose induced s-basis has s_variant = sigma.
// `sigma` is given in the s-basis of `frame`; the result is expressed in chart
// coordinates. Throws std::invalid_argument if |sigma| deviates from 1 by more
// than 1e-9 or variant is not 1, 2 or 3.
Frame4 adapted_frame(const Frame4& frame, const SDual<double>& sigma, int variant);

// Change of frame: components of a self-dual 2-vector given in `from`'s
// s-basis re-expressed in `to`'s s-basis. Both frames orthonormal for g.
SDual<double> change_sdual_frame(const Mat4<double>& g, const Frame4& from, const Frame4& to,
                                 const SDual<double>& s);

}  // namespace twistorgh
