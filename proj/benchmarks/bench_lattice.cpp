#include <benchmark/benchmark.h>

#include "bloch/lattice.hpp"

namespace {

using namespace bloch;

void BM_ReciprocalBasis(benchmark::State& state) {
  const Vec3 l1(two_pi, 0, 0), l2(two_pi, two_pi, 0), l3(1.0, -2.0, two_pi);
  for (auto _ : state) {
    benchmark::DoNotOptimize(reciprocal_basis(l1, l2, l3));
  }
}
BENCHMARK(BM_ReciprocalBasis);

void BM_FindExceptionalSet(benchmark::State& state) {
  const LatticeSpec lattice = LatticeSpec::cubic(two_pi);
  const double scale = static_cast<double>(state.range(0));
  const Vec3 k = scale * Vec3(0.5, 0.2, 0.3).normalized();
  for (auto _ : state) {
    benchmark::DoNotOptimize(find_exceptional_set(k, lattice, 1e-9));
  }
}
BENCHMARK(BM_FindExceptionalSet)->Arg(1)->Arg(2)->Arg(3);

void BM_PlaneDistances(benchmark::State& state) {
  const LatticeSpec lattice = LatticeSpec::cubic(two_pi);
  const Vec3 k(0.5, 0.2, 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(plane_distances(k, lattice, static_cast<double>(state.range(0))));
  }
}
BENCHMARK(BM_PlaneDistances)->Arg(2)->Arg(5);

}  // namespace
