#include "twistorgh/catalog.hpp"

#include <cmath>
#include <random>
#include <set>

#include <nlohmann/json.hpp>

#include "twistorgh/analysis.hpp"
#include "twistorgh/fiber_algebra.hpp"
#include "twistorgh/riemann.hpp"

namespace twistorgh {

namespace {

using json = nlohmann::ordered_json;

constexpr double kHalfWidth = 0.4;

ChartDomain box() { return ChartDomain{Vec4<double>{}, kHalfWidth}; }

template <class T>
Mat4<T> standard_j() {
  Mat4<T> j = zeros<T, 4, 4>();
  j[1][0] = T(1.0);
  j[0][1] = T(-1.0);
  j[3][2] = T(1.0);
  j[2][3] = T(-1.0);
  return j;
}

template <class T>
Mat4<T> scaled_identity(const T& f) {
  Mat4<T> g = zeros<T, 4, 4>();
  for (int i = 0; i < 4; ++i) g[i][i] = f;
  return g;
}

template <class T>
T radius2(const Vec4<T>& x) {
  return x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
}

struct FlatImpl {
  static constexpr bool kHasJ = true;
  template <class T>
  Mat4<T> metric(const Vec4<T>&) const {
    return identity<T, 4>();
  }
  template <class T>
  Mat4<T> complex_structure(const Vec4<T>&) const {
    return standard_j<T>();
  }
};

struct RoundSphereImpl {
  static constexpr bool kHasJ = true;
  double r = 1.0;
  template <class T>
  Mat4<T> metric(const Vec4<T>& x) const {
    const T d = r * r + radius2(x);
    return scaled_identity<T>(4.0 * r * r * r * r / (d * d));
  }
  template <class T>
  Mat4<T> complex_structure(const Vec4<T>&) const {
    return standard_j<T>();
  }
};

struct ConformalFlatImpl {
  static constexpr bool kHasJ = true;
  double amp = 0.3;
  template <class T>
  Mat4<T> metric(const Vec4<T>& x) const {
    using std::exp;
    return scaled_identity<T>(exp(2.0 * amp * exp(-radius2(x))));
  }
  template <class T>
  Mat4<T> complex_structure(const Vec4<T>&) const {
    return standard_j<T>();
  }
};

// Product of two planes with conformal factors 4 / (1 + c r^2)^2, of
// Gaussian curvature c.
struct ProductImpl {
  static constexpr bool kHasJ = true;
  double c1 = 1.0;
  double c2 = 1.0;
  template <class T>
  Mat4<T> metric(const Vec4<T>& x) const {
    const T d1 = 1.0 + c1 * (x[0] * x[0] + x[1] * x[1]);
    const T d2 = 1.0 + c2 * (x[2] * x[2] + x[3] * x[3]);
    Mat4<T> g = zeros<T, 4, 4>();
    g[0][0] = g[1][1] = 4.0 / (d1 * d1);
    g[2][2] = g[3][3] = 4.0 / (d2 * d2);
    return g;
  }
  template <class T>
  Mat4<T> complex_structure(const Vec4<T>&) const {
    return standard_j<T>();
  }
};

struct FubiniStudyImpl {
  static constexpr bool kHasJ = true;
  template <class T>
  Mat4<T> metric(const Vec4<T>& x) const {
    const T q = 1.0 + radius2(x);
    const Vec4<T> b{-x[1], x[0], -x[3], x[2]};
    Mat4<T> g;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        g[i][j] = -(x[i] * x[j] + b[i] * b[j]) / (q * q);
        if (i == j) g[i][j] += 1.0 / q;
      }
    return g;
  }
  template <class T>
  Mat4<T> complex_structure(const Vec4<T>&) const {
    return standard_j<T>();
  }
};

// The 35 monomials of degree <= 3 in four variables.
constexpr int kMonomials = 35;

template <class T>
std::array<T, kMonomials> monomials(const Vec4<T>& x) {
  std::array<T, kMonomials> m;
  int k = 0;
  m[k++] = T(1.0);
  for (int i = 0; i < 4; ++i) m[k++] = x[i];
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) m[k++] = x[i] * x[j];
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j)
      for (int l = j; l < 4; ++l) m[k++] = x[i] * x[j] * x[l];
  return m;
}

struct PerturbedFlatImpl {
  static constexpr bool kHasJ = true;
  double eps = 0.1;
  // coef[a][b][m], symmetric in (a, b), each in [-1, 1] / 35.
  std::array<std::array<std::array<double, kMonomials>, 4>, 4> coef{};

  template <class T>
  Mat4<T> metric(const Vec4<T>& x) const {
    Mat4<T> g = identity<T, 4>();
    if (eps == 0.0) return g;
    const auto m = monomials(x);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        T p(0.0);
        for (int k = 0; k < kMonomials; ++k) p += coef[a][b][k] * m[k];
        g[a][b] += eps * p;
      }
    return g;
  }
  // J E1 = E2, J E3 = E4 in the Gram-Schmidt frame of the coordinate fields.
  template <class T>
  Mat4<T> complex_structure(const Vec4<T>& x) const {
    const Mat4<T> g = metric(x);
    const Mat4<T> e = coordinate_gram_schmidt(g);
    const Mat4<T> k = k_endo(s_basis<T>(0));
    return e * k * transpose(e) * g;
  }
};

double number(const json& j, const std::string& metric, const std::string& key) {
  if (!j.is_number()) throw InvalidParameters(metric + ": parameter '" + key + "' must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw InvalidParameters(metric + ": parameter '" + key + "' must be finite");
  return v;
}

// Parses params against the allowed keys and fills in defaults.
json read_params(const std::string& metric, const std::string& text, const json& defaults) {
  json given;
  try {
    given = json::parse(text.empty() ? "{}" : text);
  } catch (const json::parse_error& e) {
    throw InvalidParameters(metric + ": params are not valid JSON: " + e.what());
  }
  if (!given.is_object()) throw InvalidParameters(metric + ": params must be a JSON object");
  json out = defaults;
  for (auto it = given.begin(); it != given.end(); ++it) {
    if (!defaults.contains(it.key())) throw InvalidParameters(metric + ": unknown parameter '" + it.key() + "'");
    number(it.value(), metric, it.key());
    out[it.key()] = it.value();
  }
  return out;
}

void require_product_factor(const std::string& metric, const std::string& key, double c) {
  // 1 + c r^2 over r^2 in [0, 2 h^2]
  const double worst = 1.0 + std::min(c, 0.0) * 2.0 * kHalfWidth * kHalfWidth;
  if (!(worst > 0.05))
    throw InvalidParameters(metric + ": " + key + " = " + std::to_string(c) + " makes the metric singular on the chart domain");
}

PerturbedFlatImpl perturbed(std::uint64_t seed, double eps) {
  PerturbedFlatImpl impl;
  impl.eps = eps;
  std::mt19937_64 rng(seed);
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b)
      for (int k = 0; k < kMonomials; ++k) {
        const double u = double(rng() >> 11) * 0x1.0p-53;
        impl.coef[a][b][k] = impl.coef[b][a][k] = (2.0 * u - 1.0) / kMonomials;
      }
  return impl;
}

const std::vector<CatalogInfo>& infos() {
  static const std::vector<CatalogInfo> v = {
      {"flat", "{}", "euclidean R^4; Kaehler and Ricci-flat"},
      {"round_sphere", R"({"r":1.0})", "stereographic chart of S^4(r) with a constant chart J; Hermitian, not Kaehler"},
      {"conformal_flat", R"({"amp":0.3})", "exp(2u) delta with u = amp exp(-|x|^2); conformally flat, Hermitian"},
      {"s2xh2", R"({"c":1.0})", "S^2 x H^2 with curvatures c and -c; scalar-flat Kaehler"},
      {"s2xs2", R"({"c1":1.0,"c2":1.0})", "S^2 x S^2 with curvatures c1 and c2; Kaehler"},
      {"fubini_study", "{}", "affine chart of CP^2; Kaehler-Einstein, self-dual"},
      {"perturbed_flat", R"({"seed":1,"eps":0.1})", "delta + eps P with a seeded cubic field P; generic, eps < 0.25"},
  };
  return v;
}

}  // namespace

std::vector<CatalogInfo> list_catalog() { return infos(); }

CatalogEntry build(const std::string& name, const std::string& params_json) {
  const CatalogInfo* info = nullptr;
  for (const auto& i : infos())
    if (i.name == name) info = &i;
  if (!info) throw UnknownMetric(name);
  const json p = read_params(name, params_json, json::parse(info->default_params));

  CatalogEntry e;
  e.name = name;
  e.params_json = p.dump();
  ExpectedFlags& f = e.expected;

  if (name == "flat") {
    e.chart = make_chart(name, FlatImpl{}, box());
    f = {true, true, true, true, true, true};
    e.expected_class = {{"omega", "K"}, {"lambda:-:2,1", "W1+W2"}};
  } else if (name == "round_sphere") {
    const double r = number(p["r"], name, "r");
    if (!(r > 0.0)) throw InvalidParameters(name + ": r must be positive");
    e.chart = make_chart(name, RoundSphereImpl{r}, box());
    f = {false, true, true, true, false, false};
  } else if (name == "conformal_flat") {
    const double amp = number(p["amp"], name, "amp");
    if (std::abs(amp) > 5.0) throw InvalidParameters(name + ": |amp| must not exceed 5");
    e.chart = make_chart(name, ConformalFlatImpl{amp}, box());
    const bool zero = amp == 0.0;
    f = {zero, zero, true, true, zero, zero};
  } else if (name == "s2xh2") {
    const double c = number(p["c"], name, "c");
    if (!(c >= 0.0)) throw InvalidParameters(name + ": c must be non-negative");
    require_product_factor(name, "c", -c);
    e.chart = make_chart(name, ProductImpl{c, -c}, box());
    const bool zero = c == 0.0;
    f = {true, zero, true, true, true, zero};
    if (zero) e.expected_class = {{"omega", "K"}};
    else e.expected_class = {{"omega", "W3"}, {"lambda:+:2,1", "W3"}};
  } else if (name == "s2xs2") {
    const double c1 = number(p["c1"], name, "c1");
    const double c2 = number(p["c2"], name, "c2");
    require_product_factor(name, "c1", c1);
    require_product_factor(name, "c2", c2);
    e.chart = make_chart(name, ProductImpl{c1, c2}, box());
    const bool sflat = c1 + c2 == 0.0;
    f = {true, c1 == c2, sflat, sflat, sflat, c1 == 0.0 && c2 == 0.0};
  } else if (name == "fubini_study") {
    e.chart = make_chart(name, FubiniStudyImpl{}, box());
    f = {true, true, true, false, false, false};
  } else if (name == "perturbed_flat") {
    const json& sj = p["seed"];
    if (!sj.is_number_integer() || sj.get<long long>() < 0)
      throw InvalidParameters(name + ": seed must be a non-negative integer");
    const double eps = number(p["eps"], name, "eps");
    if (!(eps >= 0.0 && eps < 0.25)) throw InvalidParameters(name + ": eps must lie in [0, 0.25)");
    e.chart = make_chart(name, perturbed(sj.get<std::uint64_t>(), eps), box());
    const bool zero = eps == 0.0;
    f = {zero, zero, zero, zero, zero, zero};
  }

  for (const auto& q : halton_points(e.chart->domain(), 16)) {
    try {
      require_spd(*e.chart, q);
    } catch (const NonSpdMetric& err) {
      throw InvalidParameters(name + ": " + err.what());
    }
  }
  const FlagCheck fc = rederive_flags(e);
  if (!fc.ok) {
    std::string msg = name + ": expected flags not reproduced:";
    for (const auto& m : fc.mismatches) msg += " " + m;
    throw std::runtime_error(msg);
  }
  return e;
}

FlagCheck rederive_flags(const CatalogEntry& entry, int points, double tol) {
  const MetricChart& chart = *entry.chart;
  // Count of points where each property holds.
  int kahler = 0, einstein = 0, sd = 0, asd = 0, sflat = 0, rflat = 0;
  const auto pts = halton_points(chart.domain(), points);
  for (const auto& p : pts) {
    const Frame4 fr = coordinate_frame(chart, p);
    const CurvatureTensor r = curvature_tensor(chart, p, fr);
    const CurvOp op = curvature_operator(r);
    const double scale = 1.0 + frobenius<6, 6>(op.m);
    const CurvaturePredicates pr = curvature_predicates(op, tol);
    einstein += pr.einstein;
    sd += pr.self_dual;
    asd += pr.anti_self_dual;
    sflat += std::abs(decompose(op).s) <= tol * scale;
    rflat += frobenius<4, 4>(ricci(r)) <= tol * scale;
    if (chart.has_complex_structure()) kahler += is_kahler_at(chart, p, tol);
  }
  FlagCheck out;
  const int n = int(pts.size());
  auto check = [&](const char* flag, bool expected, int holds) {
    const bool ok = expected ? holds == n : holds < n;
    if (!ok) {
      out.ok = false;
      out.mismatches.push_back(std::string(flag) + (expected ? " expected but fails" : " not expected but holds"));
    }
  };
  check("kahler", entry.expected.kahler, kahler);
  check("einstein", entry.expected.einstein, einstein);
  check("self_dual", entry.expected.self_dual, sd);
  check("anti_self_dual", entry.expected.anti_self_dual, asd);
  check("scalar_flat", entry.expected.scalar_flat, sflat);
  check("ricci_flat", entry.expected.ricci_flat, rflat);
  return out;
}

}  // namespace twistorgh
