#include <benchmark/benchmark.h>

#include "bloch/bem.hpp"
#include "bloch/mesh.hpp"

namespace {

using namespace bloch;

void BM_Icosphere(benchmark::State& state) {
  const int s = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(icosphere(s, 1.0));
  }
}
BENCHMARK(BM_Icosphere)->Arg(2)->Arg(4);

void BM_AssembleAdjointDoubleLayer(benchmark::State& state) {
  const SurfaceMesh mesh = icosphere(static_cast<int>(state.range(0)), 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble_adjoint_double_layer(mesh));
  }
  state.SetComplexityN(mesh.panel_count());
}
BENCHMARK(BM_AssembleAdjointDoubleLayer)->Arg(1)->Arg(2)->Arg(3)->Complexity();

void BM_PolarizabilityTensor(benchmark::State& state) {
  const SurfaceMesh mesh = icosphere(static_cast<int>(state.range(0)), 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(polarizability_tensor(mesh, 2.0));
  }
}
BENCHMARK(BM_PolarizabilityTensor)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace
