// Parallel map kernels against the serial scatter reference on ring walks.

#include "oqrw/blocks.hpp"
#include "oqrw/kernels.hpp"
#include "oqrw/walk_model.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

namespace {

using namespace oqrw;

struct Instance {
  TransitionFamily family;
  Blocks blocks;
};

// Ring of n sites with a dense h×h isometry pair, so every block product is full.
Instance make_instance(std::size_t n, Eigen::Index h) {
  const ComplexMatrix g = ComplexMatrix::Random(2 * h, h);
  const ComplexMatrix q = Eigen::HouseholderQR<ComplexMatrix>(g).householderQ() * ComplexMatrix::Identity(2 * h, h);
  const ComplexMatrix B = q.topRows(h);
  const ComplexMatrix C = q.bottomRows(h);
  Blocks blocks(n);
  for (auto& b : blocks) {
    const ComplexMatrix a = ComplexMatrix::Random(h, h);
    b = a * a.adjoint();
  }
  return Instance{build_ring_walk(n, B, C, 1e-8), std::move(blocks)};
}

template <Blocks (*Kernel)(const TransitionFamily&, std::span<const ComplexMatrix>)>
void run(benchmark::State& state) {
  const auto inst = make_instance(static_cast<std::size_t>(state.range(0)), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(inst.family, inst.blocks));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(inst.family.num_transitions()));
}

void shapes(benchmark::internal::Benchmark* b) {
  for (int n : {64, 1024}) {
    for (int h : {2, 8, 32}) b->Args({n, h});
  }
}

BENCHMARK(run<kernels::apply_map>)->Name("apply_map")->Apply(shapes);
BENCHMARK(run<kernels::apply_map_serial>)->Name("apply_map_serial")->Apply(shapes);
BENCHMARK(run<kernels::apply_adjoint>)->Name("apply_adjoint")->Apply(shapes);
BENCHMARK(run<kernels::apply_adjoint_serial>)->Name("apply_adjoint_serial")->Apply(shapes);

}  // namespace

BENCHMARK_MAIN();
