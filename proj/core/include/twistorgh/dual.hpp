#pragma once

// Forward-mode automatic differentiation with N simultaneous directions.
//
// Dual<T, N> carries a value and N directional derivatives. Nesting
// Dual<Dual<double, N>, M> gives mixed second derivatives; every formula in
// this library that has to be differentiated is written once as a template
// over the scalar type and instantiated with plain doubles or duals.

#include <array>
#include <cmath>
#include <type_traits>

namespace twistorgh::ad {

template <typename T, int N>
struct Dual {
  using value_type = T;
  static constexpr int directions = N;

  T v{};
  std::array<T, N> d{};

  constexpr Dual() = default;
  constexpr Dual(double x) : v(x) {}  // NOLINT(google-explicit-constructor)
  template <typename U = T>
    requires(!std::is_same_v<U, double>)
  constexpr Dual(const T& x) : v(x) {}  // NOLINT(google-explicit-constructor)

  Dual& operator+=(const Dual& o) {
    v += o.v;
    for (int i = 0; i < N; ++i) d[i] += o.d[i];
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    for (int i = 0; i < N; ++i) d[i] -= o.d[i];
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    for (int i = 0; i < N; ++i) d[i] = d[i] * o.v + v * o.d[i];
    v *= o.v;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    const T inv = T(1.0) / o.v;
    const T q = v * inv;
    for (int i = 0; i < N; ++i) d[i] = (d[i] - q * o.d[i]) * inv;
    v = q;
    return *this;
  }
  Dual& operator*=(double s) {
    v *= s;
    for (auto& x : d) x *= s;
    return *this;
  }

  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator*(Dual a, const Dual& b) { return a *= b; }
  friend Dual operator/(Dual a, const Dual& b) { return a /= b; }
  friend Dual operator+(Dual a, double b) {
    a.v += b;
    return a;
  }
  friend Dual operator+(double a, Dual b) {
    b.v += a;
    return b;
  }
  friend Dual operator-(Dual a, double b) {
    a.v -= b;
    return a;
  }
  friend Dual operator-(double a, const Dual& b) { return Dual(a) - b; }
  friend Dual operator*(Dual a, double b) { return a *= b; }
  friend Dual operator*(double a, Dual b) { return b *= a; }
  friend Dual operator/(Dual a, double b) { return a *= (1.0 / b); }
  friend Dual operator/(double a, const Dual& b) { return Dual(a) / b; }
  friend Dual operator-(Dual a) {
    a.v = -a.v;
    for (auto& x : a.d) x = -x;
    return a;
  }
};

template <typename S>
struct is_dual : std::false_type {};
template <typename T, int N>
struct is_dual<Dual<T, N>> : std::true_type {};

// Innermost double of a (possibly nested) dual.
inline double value_of(double x) { return x; }
template <typename T, int N>
double value_of(const Dual<T, N>& x) {
  return value_of(x.v);
}

template <typename T, int N>
bool operator<(const Dual<T, N>& a, const Dual<T, N>& b) {
  return value_of(a) < value_of(b);
}
template <typename T, int N>
bool operator>(const Dual<T, N>& a, const Dual<T, N>& b) {
  return value_of(a) > value_of(b);
}

// Chain rule helper: f(x) with f(x.v) = fv and f'(x.v) = dfv.
template <typename T, int N>
Dual<T, N> chain(const Dual<T, N>& x, const T& fv, const T& dfv) {
  Dual<T, N> r;
  r.v = fv;
  for (int i = 0; i < N; ++i) r.d[i] = dfv * x.d[i];
  return r;
}

template <typename T, int N>
Dual<T, N> sqrt(const Dual<T, N>& x) {
  using std::sqrt;
  const T s = sqrt(x.v);
  return chain(x, s, T(0.5) / s);
}
template <typename T, int N>
Dual<T, N> exp(const Dual<T, N>& x) {
  using std::exp;
  const T e = exp(x.v);
  return chain(x, e, e);
}
template <typename T, int N>
Dual<T, N> log(const Dual<T, N>& x) {
  using std::log;
  return chain(x, log(x.v), T(1.0) / x.v);
}
template <typename T, int N>
Dual<T, N> sin(const Dual<T, N>& x) {
  using std::cos;
  using std::sin;
  return chain(x, sin(x.v), cos(x.v));
}
template <typename T, int N>
Dual<T, N> cos(const Dual<T, N>& x) {
  using std::cos;
  using std::sin;
  return chain(x, cos(x.v), -sin(x.v));
}
template <typename T, int N>
Dual<T, N> abs(const Dual<T, N>& x) {
  return value_of(x) < 0.0 ? -x : x;
}

// Seeds direction i of an N-direction dual at value x.
template <int N, typename T>
Dual<T, N> variable(const T& x, int i) {
  Dual<T, N> r(x);
  r.d[i] = T(1.0);
  return r;
}

template <int N, typename T>
std::array<Dual<T, N>, N> seed(const std::array<T, N>& x) {
  std::array<Dual<T, N>, N> r;
  for (int i = 0; i < N; ++i) r[i] = variable<N>(x[i], i);
  return r;
}

using D3 = Dual<double, 3>;
using D4 = Dual<double, 4>;
using D6 = Dual<double, 6>;
using D44 = Dual<D4, 4>;
using D64 = Dual<D6, 4>;

}  // namespace twistorgh::ad
