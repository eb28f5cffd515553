#include <benchmark/benchmark.h>

#include "bloch/cluster.hpp"
#include "bloch/specfun.hpp"

namespace {

using namespace bloch;

void BM_SphBesselJ(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  double z = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sph_bessel_j(n, z));
    z = z < 50.0 ? z + 0.37 : 0.1;
  }
}
BENCHMARK(BM_SphBesselJ)->Arg(1)->Arg(10)->Arg(50);

void BM_SphereQuadrature(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sphere_quadrature(order));
  }
}
BENCHMARK(BM_SphereQuadrature)->Arg(8)->Arg(48);

void BM_ClusterEvaluate(benchmark::State& state) {
  ClusterSolution cluster;
  cluster.k_base = Vec3(0.5, 1.0 / 3.0, 2.0 / 3.0);
  cluster.shifts = {Vec3::Zero(), Vec3(1, 0, 0), Vec3(0, 1, 1), Vec3(1, 1, 1)};
  cluster.mu = Eigen::Vector4d(1, -1, -1, 1);
  std::vector<Vec3> points;
  for (int i = 0; i < state.range(0); ++i) {
    points.emplace_back(0.01 * i, -0.02 * i, 0.03 * i);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate(cluster, points));
  }
  state.SetItemsProcessed(state.iterations() * points.size());
}
BENCHMARK(BM_ClusterEvaluate)->Arg(100)->Arg(10000);

}  // namespace
