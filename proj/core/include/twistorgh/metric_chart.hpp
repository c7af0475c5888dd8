#pragma once

// A 4-dimensional coordinate chart carrying a metric field and, optionally, an
// almost complex structure field. Fields are evaluated over every scalar type
// the library differentiates with, so a chart implementation is written once
// as templates and wrapped by `Chart<Impl>`.

#include <memory>
#include <stdexcept>
#include <string>
#include <utility>

#include "twistorgh/dual.hpp"
#include "twistorgh/linalg.hpp"

namespace twistorgh {

// Axis-aligned box inside which the chart is known to be SPD; sample points
// are drawn from it.
struct ChartDomain {
  Vec4<double> center{};
  double half_width = 0.5;
};

class MetricChart {
 public:
  virtual ~MetricChart() = default;

  virtual const std::string& name() const = 0;
  virtual bool has_complex_structure() const = 0;
  virtual ChartDomain domain() const = 0;

#define TWISTORGH_CHART_SCALAR(S)                                 \
  virtual Mat4<S> metric(const Vec4<S>& x) const = 0;             \
  virtual Mat4<S> complex_structure(const Vec4<S>& x) const = 0;

  TWISTORGH_CHART_SCALAR(double)
  TWISTORGH_CHART_SCALAR(ad::D4)
  TWISTORGH_CHART_SCALAR(ad::D44)
  TWISTORGH_CHART_SCALAR(ad::D6)
  TWISTORGH_CHART_SCALAR(ad::D64)
#undef TWISTORGH_CHART_SCALAR
};

using ChartPtr = std::shared_ptr<const MetricChart>;

struct MissingComplexStructure : std::logic_error {
  explicit MissingComplexStructure(const std::string& chart)
      : std::logic_error("chart '" + chart + "' has no almost complex structure field") {}
};

// Impl provides
//   template <class T> Mat4<T> metric(const Vec4<T>&) const;
//   template <class T> Mat4<T> complex_structure(const Vec4<T>&) const;  (when kHasJ)
//   static constexpr bool kHasJ;
// J is the coordinate matrix acting on column vectors: (JX)^a = J[a][b] X^b.
template <class Impl>
class Chart final : public MetricChart {
 public:
  Chart(std::string name, Impl impl, ChartDomain domain)
      : name_(std::move(name)), impl_(std::move(impl)), domain_(domain) {}

  const std::string& name() const override { return name_; }
  bool has_complex_structure() const override { return Impl::kHasJ; }
  ChartDomain domain() const override { return domain_; }
  const Impl& impl() const { return impl_; }

#define TWISTORGH_CHART_FORWARD(S)                                           \
  Mat4<S> metric(const Vec4<S>& x) const override { return impl_.metric(x); } \
  Mat4<S> complex_structure(const Vec4<S>& x) const override {              \
    if constexpr (Impl::kHasJ) {                                             \
      return impl_.complex_structure(x);                                     \
    } else {                                                                 \
      (void)x;                                                               \
      throw MissingComplexStructure(name_);                                  \
    }                                                                        \
  }

  TWISTORGH_CHART_FORWARD(double)
  TWISTORGH_CHART_FORWARD(ad::D4)
  TWISTORGH_CHART_FORWARD(ad::D44)
  TWISTORGH_CHART_FORWARD(ad::D6)
  TWISTORGH_CHART_FORWARD(ad::D64)
#undef TWISTORGH_CHART_FORWARD

 private:
  std::string name_;
  Impl impl_;
  ChartDomain domain_;
};

template <class Impl>
ChartPtr make_chart(std::string name, Impl impl, ChartDomain domain) {
  return std::make_shared<Chart<Impl>>(std::move(name), std::move(impl), domain);
}

}  // namespace twistorgh
