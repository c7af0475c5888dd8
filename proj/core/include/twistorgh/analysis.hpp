#pragma once

// Covariant derivative of the Kahler form, its exterior derivative and
// codifferential, the Nijenhuis tensor, the Gray-Hervella residuals and the
// classifier. All tensors are given by components in the h_t-orthonormal
// basis (E_1^h, ..., E_4^h, nu1/sqrt t, nu2/sqrt t) at a twistor point, with
// (nu1, nu2) = vertical_frame(sigma).

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "twistorgh/fibermaps.hpp"
#include "twistorgh/twistor.hpp"

namespace twistorgh {

using Tensor3 = std::array<std::array<std::array<double, 6>, 6>, 6>;
using Form1 = std::array<double, 6>;

double norm(const Tensor3& t);
Tensor3 operator-(const Tensor3& a, const Tensor3& b);
// |a - b| / max(|b|, 1)
double relative_defect(const Tensor3& a, const Tensor3& b);

// t[a][b][c] = (D_{e_a} Omega)(e_b, e_c)
struct CovDerivTensor {
  Tensor3 t{};
};

// The orthonormal basis as twistor vectors and the matrix of J_f in it:
// J e_a = sum_b jm[b][a] e_b.
struct OrthoBasis {
  std::array<TwistorVec, 6> e;
  Mat<double, 6> jm{};
};
OrthoBasis ortho_basis(double t, const FiberMapSpec& f, const TwistorPoint& tp);

CovDerivTensor cov_deriv_closed(double t, const FiberMapSpec& f, const TwistorPoint& tp);
// From coordinate Christoffels of h_t and the coordinate field of Omega.
CovDerivTensor cov_deriv_oracle(double t, const MetricChart& chart, const FiberMapSpec& f, const TwistorPoint& tp);

// d Omega(e_a, e_b, e_c) as the cyclic sum of D Omega.
Tensor3 exterior_d(const CovDerivTensor& d);
// delta Omega(e_c) = -sum_a (D_{e_a} Omega)(e_a, e_c).
Form1 codifferential(const CovDerivTensor& d);

// Closed-form exterior derivative and codifferential (each block written out).
Tensor3 exterior_d_closed(double t, const FiberMapSpec& f, const TwistorPoint& tp);
Form1 codifferential_closed(double t, const FiberMapSpec& f, const TwistorPoint& tp);

// n[a][b][c] = h_t(N(e_a, e_b), e_c) with
// N(A,B) = [JA,JB] - [A,B] - J[JA,B] - J[A,JB].
Tensor3 nijenhuis_closed(double t, const FiberMapSpec& f, const TwistorPoint& tp);
Tensor3 nijenhuis_oracle(double t, const MetricChart& chart, const FiberMapSpec& f, const TwistorPoint& tp);
// h(N(A,B),C) = (D_A Omega)(JB,C) - (D_JB Omega)(A,C) - (D_B Omega)(JA,C) + (D_JA Omega)(B,C).
Tensor3 nijenhuis_from_cov_deriv(const CovDerivTensor& d, const OrthoBasis& basis);

// Index ranges of the basis.
inline bool is_hor(int a) { return a < 4; }

struct GHResiduals {
  double r_total = 0.0;
  double r_SK = 0.0;
  double r_QK = 0.0;
  double r_124 = 0.0;
  double r_G1 = 0.0;
  double r_G2 = 0.0;
  double r_G1_N = 0.0;
  double r_G2_N = 0.0;
  double r_N = 0.0;
  double r_N_hv = 0.0;  // horizontal part of N(X^h, U)
  double r_dOmega = 0.0;
  double r_W1 = 0.0;

  void max_with(const GHResiduals& o);
};

// Residuals at one twistor point from the closed forms.
GHResiduals point_residuals(double t, const FiberMapSpec& f, const TwistorPoint& tp);
// Residuals from given tensors (used with oracle tensors as well).
GHResiduals residuals_from(const CovDerivTensor& d, const Tensor3& n, const OrthoBasis& basis);

struct SamplePlan {
  int base_points = 8;
  int fiber_points = 8;
  std::uint64_t seed = 1;
};

struct SamplePoint {
  Vec4<double> p{};
  SDual<double> sigma;
};

// Halton points of the chart domain crossed with the fibre set
// {s1, -s1, s2, -s2, s3, -s3, seeded random ...}; the first `fiber_points`
// entries of that list are used.
std::vector<SamplePoint> sample_points(const ChartDomain& domain, const SamplePlan& plan);
std::vector<Vec4<double>> halton_points(const ChartDomain& domain, int n);
std::vector<SDual<double>> fiber_samples(int n, std::uint64_t seed);

struct GHRun {
  GHResiduals residuals;
  int points = 0;
};

GHRun gh_residuals(double t, const MetricChart& chart, const FiberMapSpec& f, const std::vector<SamplePoint>& points);

struct ClassifierInconsistency : std::runtime_error {
  explicit ClassifierInconsistency(const std::string& what) : std::runtime_error(what) {}
};

struct GHReport {
  GHResiduals residuals;
  // Component present flags for W1..W4.
  bool w1 = false;
  bool w2 = false;
  bool w3 = false;
  bool w4 = false;
  std::string class_name;   // "K", "W", or the present components joined by '+', e.g. "W1+W2"
  std::string description;  // the class name used in the Gray-Hervella lattice, when it has one
  std::string pattern;      // four characters, '1' for a present component, ordered W1..W4
  double tol = 1e-7;
  std::vector<std::string> warnings;
};

inline constexpr double kDefaultTol = 1e-7;
inline constexpr double kMargin = 10.0;

// Vanishing is residual <= tol, non-vanishing residual > kMargin * tol.
// Throws ClassifierInconsistency for residuals inside the gap or for
// residual patterns that no class satisfies.
GHReport classify(const GHResiduals& res, double tol);

std::string class_name_for(bool w1, bool w2, bool w3, bool w4);
std::string class_description(bool w1, bool w2, bool w3, bool w4);

// Full report document.
struct RunInfo {
  std::string metric;
  std::string params_json = "{}";
  std::string fibermap;
  double t = 1.0;
  int points = 0;
  std::uint64_t seed = 1;
  std::optional<std::string> timestamp;
};
std::string report_json(const GHReport& report, const RunInfo& info, int indent = 2);

}  // namespace twistorgh
