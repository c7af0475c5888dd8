#pragma once

// Fixed-size vector/matrix helpers generic in the scalar type. Matrices are
// row-major nested arrays: m[row][col].

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "twistorgh/dual.hpp"

namespace twistorgh {

template <typename T, std::size_t N>
using Vec = std::array<T, N>;
template <typename T, std::size_t R, std::size_t C = R>
using Mat = std::array<std::array<T, C>, R>;

template <typename T = double>
using Vec3 = Vec<T, 3>;
template <typename T = double>
using Vec4 = Vec<T, 4>;
template <typename T = double>
using Mat3 = Mat<T, 3>;
template <typename T = double>
using Mat4 = Mat<T, 4>;

template <typename T, std::size_t R, std::size_t C = R>
Mat<T, R, C> zeros() {
  Mat<T, R, C> m;
  for (auto& row : m) row.fill(T(0.0));
  return m;
}

template <typename T, std::size_t N>
Mat<T, N> identity() {
  auto m = zeros<T, N, N>();
  for (std::size_t i = 0; i < N; ++i) m[i][i] = T(1.0);
  return m;
}

template <typename T, std::size_t N>
T dot(const Vec<T, N>& a, const Vec<T, N>& b) {
  T s(0.0);
  for (std::size_t i = 0; i < N; ++i) s += a[i] * b[i];
  return s;
}

template <typename T, std::size_t N>
Vec<T, N> operator+(Vec<T, N> a, const Vec<T, N>& b) {
  for (std::size_t i = 0; i < N; ++i) a[i] += b[i];
  return a;
}
template <typename T, std::size_t N>
Vec<T, N> operator-(Vec<T, N> a, const Vec<T, N>& b) {
  for (std::size_t i = 0; i < N; ++i) a[i] -= b[i];
  return a;
}
template <typename T, std::size_t N>
Vec<T, N> operator-(Vec<T, N> a) {
  for (auto& x : a) x = -x;
  return a;
}
template <typename T, std::size_t N>
Vec<T, N> operator*(const T& s, Vec<T, N> a) {
  for (auto& x : a) x = s * x;
  return a;
}
template <typename T, std::size_t N>
  requires(!std::is_same_v<T, double>)
Vec<T, N> operator*(double s, Vec<T, N> a) {
  for (auto& x : a) x = s * x;
  return a;
}

template <typename T, std::size_t R, std::size_t C>
Vec<T, R> operator*(const Mat<T, R, C>& m, const Vec<T, C>& v) {
  Vec<T, R> r;
  for (std::size_t i = 0; i < R; ++i) {
    r[i] = T(0.0);
    for (std::size_t j = 0; j < C; ++j) r[i] += m[i][j] * v[j];
  }
  return r;
}

template <typename T, std::size_t R, std::size_t K, std::size_t C>
Mat<T, R, C> operator*(const Mat<T, R, K>& a, const Mat<T, K, C>& b) {
  auto r = zeros<T, R, C>();
  for (std::size_t i = 0; i < R; ++i)
    for (std::size_t k = 0; k < K; ++k)
      for (std::size_t j = 0; j < C; ++j) r[i][j] += a[i][k] * b[k][j];
  return r;
}

template <typename T, std::size_t R, std::size_t C>
Mat<T, R, C> operator+(Mat<T, R, C> a, const Mat<T, R, C>& b) {
  for (std::size_t i = 0; i < R; ++i)
    for (std::size_t j = 0; j < C; ++j) a[i][j] += b[i][j];
  return a;
}
template <typename T, std::size_t R, std::size_t C>
Mat<T, R, C> operator-(Mat<T, R, C> a, const Mat<T, R, C>& b) {
  for (std::size_t i = 0; i < R; ++i)
    for (std::size_t j = 0; j < C; ++j) a[i][j] -= b[i][j];
  return a;
}
template <typename T, std::size_t R, std::size_t C>
Mat<T, R, C> scaled(Mat<T, R, C> a, double s) {
  for (auto& row : a)
    for (auto& x : row) x = x * s;
  return a;
}

template <typename T, std::size_t R, std::size_t C>
Mat<T, C, R> transpose(const Mat<T, R, C>& m) {
  Mat<T, C, R> r;
  for (std::size_t i = 0; i < R; ++i)
    for (std::size_t j = 0; j < C; ++j) r[j][i] = m[i][j];
  return r;
}

template <typename T, std::size_t N>
Vec<T, N> column(const Mat<T, N, N>& m, int j) {
  Vec<T, N> v;
  for (std::size_t i = 0; i < N; ++i) v[i] = m[i][j];
  return v;
}

// Bilinear form a^T G b.
template <typename T, std::size_t N>
T form(const Mat<T, N>& g, const Vec<T, N>& a, const Vec<T, N>& b) {
  return dot<T, N>(a, g * b);
}

template <typename T>
Vec3<T> cross3(const Vec3<T>& a, const Vec3<T>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// Gauss-Jordan inverse with partial pivoting on the underlying double value.
template <typename T, std::size_t N>
Mat<T, N> inverse(Mat<T, N> a) {
  using ad::value_of;
  auto inv = identity<T, N>();
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < N; ++r)
      if (std::abs(value_of(a[r][col])) > std::abs(value_of(a[piv][col]))) piv = r;
    if (value_of(a[piv][col]) == 0.0) throw std::domain_error("singular matrix");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    const T p = T(1.0) / a[col][col];
    for (std::size_t j = 0; j < N; ++j) {
      a[col][j] = a[col][j] * p;
      inv[col][j] = inv[col][j] * p;
    }
    for (std::size_t r = 0; r < N; ++r) {
      if (r == col) continue;
      const T f = a[r][col];
      if (value_of(f) == 0.0) continue;
      for (std::size_t j = 0; j < N; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

template <typename T, std::size_t N>
T determinant(Mat<T, N> a) {
  using ad::value_of;
  T det(1.0);
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < N; ++r)
      if (std::abs(value_of(a[r][col])) > std::abs(value_of(a[piv][col]))) piv = r;
    if (value_of(a[piv][col]) == 0.0) return T(0.0);
    if (piv != col) {
      std::swap(a[piv], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t r = col + 1; r < N; ++r) {
      const T f = a[r][col] / a[col][col];
      for (std::size_t j = col; j < N; ++j) a[r][j] -= f * a[col][j];
    }
  }
  return det;
}

template <std::size_t N>
double frobenius(const Vec<double, N>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

template <std::size_t R, std::size_t C>
double frobenius(const Mat<double, R, C>& m) {
  double s = 0.0;
  for (const auto& row : m)
    for (double x : row) s += x * x;
  return std::sqrt(s);
}

// Strips derivative parts, keeping the innermost value.
template <typename T, std::size_t N>
Vec<double, N> values(const Vec<T, N>& v) {
  Vec<double, N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = ad::value_of(v[i]);
  return r;
}
template <typename T, std::size_t R, std::size_t C>
Mat<double, R, C> values(const Mat<T, R, C>& m) {
  Mat<double, R, C> r;
  for (std::size_t i = 0; i < R; ++i)
    for (std::size_t j = 0; j < C; ++j) r[i][j] = ad::value_of(m[i][j]);
  return r;
}

// Promotes a double array into scalar type T.
template <typename T, std::size_t N>
Vec<T, N> lift(const Vec<double, N>& v) {
  Vec<T, N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = T(v[i]);
  return r;
}
template <typename T, std::size_t R, std::size_t C>
Mat<T, R, C> lift(const Mat<double, R, C>& m) {
  Mat<T, R, C> r;
  for (std::size_t i = 0; i < R; ++i)
    for (std::size_t j = 0; j < C; ++j) r[i][j] = T(m[i][j]);
  return r;
}

}  // namespace twistorgh
