// Micro benchmarks for the hot paths: state construction, closed-form
// determinants, volume-weight routes, density evaluations, Monte Carlo
// throughput and the two partition-function evaluation paths.

#include <benchmark/benchmark.h>

#include <vector>

#include "mmvol/complex_matrix.hpp"
#include "mmvol/constants.hpp"
#include "mmvol/distributions.hpp"
#include "mmvol/metrics.hpp"
#include "mmvol/quadrature.hpp"
#include "mmvol/rng.hpp"
#include "mmvol/states.hpp"
#include "mmvol/thermo.hpp"

namespace {

using namespace mmvol;

CoordinatePoint3 interior_point3(SplitRng& rng) {
  CoordinatePoint3 q;
  q.a = 0.08 + 0.5 * rng.next_u01();
  q.b = 0.08 + (0.84 - q.a) * rng.next_u01();
  q.s = 0.1 + 0.8 * rng.next_u01();
  q.nu = 2.0 * kPi * rng.next_u01();
  q.r = 0.1 + 0.8 * rng.next_u01();
  q.theta1 = 0.2 + (kPi - 0.4) * rng.next_u01();
  q.theta2 = 0.2 + (kPi - 0.4) * rng.next_u01();
  q.theta3 = 2.0 * kPi * rng.next_u01();
  return q;
}

void bm_build_rho3(benchmark::State& state) {
  SplitRng rng(1);
  const CoordinatePoint3 q = interior_point3(rng);
  for (auto _ : state)
    benchmark::DoNotOptimize(build_rho3(point3_to_bloore(q)));
}
BENCHMARK(bm_build_rho3);

void bm_det3_closed(benchmark::State& state) {
  SplitRng rng(2);
  const CoordinatePoint3 q = interior_point3(rng);
  for (auto _ : state) benchmark::DoNotOptimize(det3_closed(q));
}
BENCHMARK(bm_det3_closed);

void bm_det3_direct(benchmark::State& state) {
  SplitRng rng(2);
  const CMatrix rho = build_rho3(point3_to_bloore(interior_point3(rng)));
  for (auto _ : state) benchmark::DoNotOptimize(rho.det());
}
BENCHMARK(bm_det3_direct);

void bm_weight_closed(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  SplitRng rng(3);
  std::vector<double> p(n);
  double sum = 0.0;
  for (double& x : p) {
    x = 0.05 + rng.next_u01();
    sum += x;
  }
  CMatrix m(n);
  for (int i = 0; i < n; ++i) m(i, i) = p[i] / sum;
  const MinorSums ms = minor_sums(m);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        volume_weight_from_minors(ms, MetricFamily::maximal));
}
BENCHMARK(bm_weight_closed)->Arg(3)->Arg(4);

void bm_weight_eigen_route(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  SplitRng rng(3);
  std::vector<double> p(n);
  double sum = 0.0;
  for (double& x : p) {
    x = 0.05 + rng.next_u01();
    sum += x;
  }
  for (double& x : p) x /= sum;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        volume_weight_from_eigenvalues(p, MetricFamily::maximal));
}
BENCHMARK(bm_weight_eigen_route)->Arg(3)->Arg(4);

void bm_hermitian_eigenvalues4(benchmark::State& state) {
  CMatrix chain(4);
  for (int i = 0; i + 1 < 4; ++i) {
    chain(i, i + 1) = 1.0;
    chain(i + 1, i) = 1.0;
  }
  for (auto _ : state)
    benchmark::DoNotOptimize(hermitian_eigenvalues(chain));
}
BENCHMARK(bm_hermitian_eigenvalues4);

void bm_pdf_bivariate(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(pdf_bivariate(0.21, 0.37));
}
BENCHMARK(bm_pdf_bivariate);

void bm_sampler(benchmark::State& state) {
  SplitRng rng(7);
  for (auto _ : state) benchmark::DoNotOptimize(sample_bivariate_one(rng));
}
BENCHMARK(bm_sampler);

void bm_truncated_integral_n3(benchmark::State& state) {
  const VolumeElementKind kind{MetricFamily::maximal,
                               WeightRoute::closed_form};
  for (auto _ : state)
    benchmark::DoNotOptimize(
        truncated_full_integral(kind, 3, 0.2, 100000, 11));
  state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(bm_truncated_integral_n3)->Unit(benchmark::kMillisecond);

void bm_truncated_integral_n4(benchmark::State& state) {
  const VolumeElementKind kind{MetricFamily::maximal,
                               WeightRoute::closed_form};
  for (auto _ : state)
    benchmark::DoNotOptimize(
        truncated_full_integral(kind, 4, 0.2, 100000, 11));
  state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(bm_truncated_integral_n4)->Unit(benchmark::kMillisecond);

void bm_q_lambda8_closed(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(q_lambda8(2.5));
}
BENCHMARK(bm_q_lambda8_closed);

void bm_q_lambda8_quadrature(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(q_lambda8(2.5, ThermoMethod::quadrature));
}
BENCHMARK(bm_q_lambda8_quadrature)->Unit(benchmark::kMicrosecond);

void bm_q_lambda3(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(q_lambda3(2.5));
}
BENCHMARK(bm_q_lambda3)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
