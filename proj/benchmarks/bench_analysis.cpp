#include <benchmark/benchmark.h>

#include "twistorgh/analysis.hpp"
#include "twistorgh/catalog.hpp"
#include "twistorgh/twistor.hpp"

using namespace twistorgh;

namespace {

struct Fixture {
  CatalogEntry entry;
  TwistorPoint tp;
  FiberMapSpec f;
};

Fixture fixture(const std::string& metric) {
  Fixture x{build(metric), {}, FiberMapSpec::lambda(2, 1, -1)};
  const SDual<double> s{{0.6, 0.0, 0.8}};
  x.tp = make_twistor_point(*x.entry.chart, {0.1, -0.2, 0.15, 0.05}, s);
  return x;
}

void BM_CovDerivClosed(benchmark::State& st) {
  const Fixture x = fixture("fubini_study");
  for (auto _ : st) benchmark::DoNotOptimize(cov_deriv_closed(1.0, x.f, x.tp));
}

void BM_CovDerivOracle(benchmark::State& st) {
  const Fixture x = fixture("fubini_study");
  for (auto _ : st) benchmark::DoNotOptimize(cov_deriv_oracle(1.0, *x.entry.chart, x.f, x.tp));
}

void BM_NijenhuisClosed(benchmark::State& st) {
  const Fixture x = fixture("fubini_study");
  for (auto _ : st) benchmark::DoNotOptimize(nijenhuis_closed(1.0, x.f, x.tp));
}

void BM_NijenhuisOracle(benchmark::State& st) {
  const Fixture x = fixture("fubini_study");
  for (auto _ : st) benchmark::DoNotOptimize(nijenhuis_oracle(1.0, *x.entry.chart, x.f, x.tp));
}

void BM_TwistorPoint(benchmark::State& st) {
  const auto e = build("perturbed_flat");
  const SDual<double> s{{0.0, 1.0, 0.0}};
  for (auto _ : st) benchmark::DoNotOptimize(make_twistor_point(*e.chart, {0.1, -0.2, 0.15, 0.05}, s));
}

void BM_Classify(benchmark::State& st) {
  const auto e = build("perturbed_flat");
  const auto pts = sample_points(e.chart->domain(), {int(st.range(0)), 8, 1});
  for (auto _ : st) benchmark::DoNotOptimize(gh_residuals(1.0, *e.chart, FiberMapSpec::const_omega(), pts));
  st.SetItemsProcessed(st.iterations() * std::int64_t(pts.size()));
}

}  // namespace

BENCHMARK(BM_CovDerivClosed);
BENCHMARK(BM_CovDerivOracle);
BENCHMARK(BM_NijenhuisClosed);
BENCHMARK(BM_NijenhuisOracle);
BENCHMARK(BM_TwistorPoint);
BENCHMARK(BM_Classify)->Arg(1)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
