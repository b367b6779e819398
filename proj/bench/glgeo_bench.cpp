#include <benchmark/benchmark.h>

#include <random>

#include "glgeo/distance.hpp"
#include "glgeo/geodesics.hpp"
#include "glgeo/matrix_functions.hpp"

namespace {

using glgeo::Execution;
using glgeo::SquareMat;

SquareMat random_matrix(std::size_t n, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  SquareMat m(n);
  for (double& v : m.data()) v = gauss(rng);
  return m * (scale / m.frobenius_norm());
}

Execution mode(const benchmark::State& state) {
  return state.range(1) == 0 ? Execution::serial : Execution::parallel;
}

void BM_GeodesicDistance(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const glgeo::MetricParams p(1.0, 2.0, 1.5);
  const SquareMat b = glgeo::GeodesicExponential(random_matrix(n, 7, 1.0), p.omega()).value();
  const glgeo::DistanceQuery q{SquareMat::identity(n), b, p, glgeo::SolverOptions{}};
  for (auto _ : state) benchmark::DoNotOptimize(glgeo::geodesic_distance(q, mode(state)));
}

void BM_SampleGeodesic(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const glgeo::GeodesicSpec spec(SquareMat::identity(n), random_matrix(n, 11, 1.0), {1.0, 2.0, 1.5});
  for (auto _ : state) benchmark::DoNotOptimize(glgeo::sample_geodesic(spec, 0.0, 1.0, 2000, mode(state)));
}

void BM_CurveLength(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const glgeo::GeodesicSpec spec(SquareMat::identity(n), random_matrix(n, 13, 1.0), {1.0, 2.0, 1.5});
  const glgeo::DiscreteCurve curve = glgeo::sample_geodesic(spec, 0.0, 1.0, 2000, Execution::serial);
  for (auto _ : state) benchmark::DoNotOptimize(glgeo::curve_length(curve, spec.params(), mode(state)));
}

// Second argument: 0 = serial reference, 1 = OpenMP.
BENCHMARK(BM_GeodesicDistance)->ArgsProduct({{2, 3, 5}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SampleGeodesic)->ArgsProduct({{3, 8}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CurveLength)->ArgsProduct({{3, 8}, {0, 1}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
