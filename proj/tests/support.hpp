#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "twistorgh/fiber_algebra.hpp"
#include "twistorgh/linalg.hpp"

namespace testing_support {

using namespace twistorgh;

inline const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names{"flat",  "round_sphere", "conformal_flat", "s2xh2",
                                              "s2xs2", "fubini_study", "perturbed_flat"};
  return names;
}

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}

  double uniform(double lo = -1.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(gen); }

  Vec4<double> vec4(double scale = 1.0) {
    return {scale * uniform(), scale * uniform(), scale * uniform(), scale * uniform()};
  }
  SDual<double> sdual() { return SDual<double>{{uniform(), uniform(), uniform()}}; }
  SDual<double> unit_sdual() {
    for (;;) {
      const SDual<double> s = sdual();
      const double n = norm(s);
      if (n > 0.1) return (1.0 / n) * s;
    }
  }
  // Unit-free vector orthogonal to sigma.
  SDual<double> tangent(const SDual<double>& sigma) {
    const SDual<double> v = sdual();
    return v - dot(v, sigma) * sigma;
  }
  Biv<double> biv() {
    Biv<double> b;
    for (auto& x : b.c) x = uniform();
    return b;
  }
};

// The s-basis written out by hand: s_k as antisymmetric frame matrices.
inline Mat4<double> s_matrix(int k) {
  Mat4<double> m{};
  auto set = [&m](int i, int j, double v) {
    m[i][j] = v;
    m[j][i] = -v;
  };
  switch (k) {
    case 0: set(0, 1, 1); set(2, 3, 1); break;   // E12 + E34
    case 1: set(0, 2, 1); set(3, 1, 1); break;   // E13 + E42
    default: set(0, 3, 1); set(1, 2, 1); break;  // E14 + E23
  }
  return m;
}

// g(a, X^Y) for a self-dual a given by s-components, from 1/2 det.
inline double pair_sdual_wedge(const SDual<double>& a, const Vec4<double>& x, const Vec4<double>& y) {
  double s = 0.0;
  for (int k = 0; k < 3; ++k) {
    const Mat4<double> m = s_matrix(k);
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) s += a.c[k] * m[i][j] * 0.5 * (x[i] * y[j] - x[j] * y[i]);
  }
  return s;
}

inline Vec4<double> unit(int a) {
  Vec4<double> v{};
  v[a] = 1.0;
  return v;
}

template <std::size_t R, std::size_t C>
double max_abs_diff(const Mat<double, R, C>& a, const Mat<double, R, C>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < R; ++i)
    for (std::size_t j = 0; j < C; ++j) m = std::max(m, std::abs(a[i][j] - b[i][j]));
  return m;
}

inline double sdual_diff(const SDual<double>& a, const SDual<double>& b) {
  return norm(a - b);
}

}  // namespace testing_support
