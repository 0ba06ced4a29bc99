#include <benchmark/benchmark.h>

#include "causord/bipartite.hpp"
#include "causord/ordering.hpp"
#include "causord/simon.hpp"
#include "causord/structure.hpp"

namespace {

using namespace causord;

Structure cycle_structure(std::size_t m) {
    StructureBuilder builder;
    for (std::size_t i = 1; i <= m; ++i) {
        std::vector<std::string> vars = {"x" + std::to_string(i),
                                         "x" + std::to_string(i % m + 1)};
        builder.add_equation("f" + std::to_string(i), vars);
    }
    return builder.build();
}

void BM_MaximumMatching(benchmark::State& state) {
    Structure s = random_complete_structure(state.range(0), 3.0, 7);
    BipartiteGraph g = to_bipartite(s);
    for (auto _ : state) {
        benchmark::DoNotOptimize(maximum_matching(g).size);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MaximumMatching)->RangeMultiplier(10)->Range(100, 100000)->Complexity();

void BM_TransitiveClosure(benchmark::State& state) {
    Structure s = random_complete_structure(state.range(0), 3.0, 7);
    DependencyGraph g = direct_dependencies(s, total_causal_mapping(s));
    for (auto _ : state) {
        benchmark::DoNotOptimize(transitive_closure(g).edge_count());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_TransitiveClosure)->RangeMultiplier(10)->Range(100, 100000)->Complexity();

void BM_CausalOrderingPipeline(benchmark::State& state) {
    Structure s = random_complete_structure(state.range(0), 3.0, 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(causal_ordering(s).edge_count());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CausalOrderingPipeline)->RangeMultiplier(10)->Range(100, 100000)->Complexity();

// The classical pipeline on its worst case: the cycle structure has no
// proper complete substructure, so the subset scan runs over every size.
// Doubling the instance roughly squares the running time.
void BM_ClassicOrderingWorstCase(benchmark::State& state) {
    Structure s = cycle_structure(state.range(0));
    const BruteForceGuard unlimited{.max_equations = 0, .unlimited = true};
    for (auto _ : state) {
        benchmark::DoNotOptimize(classic_causal_ordering(s, unlimited).edge_count());
    }
}
BENCHMARK(BM_ClassicOrderingWorstCase)->DenseRange(12, 22, 2)->Unit(benchmark::kMillisecond);

void BM_EnumerateMappings(benchmark::State& state) {
    Structure s = random_complete_structure(state.range(0), 3.0, 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(enumerate_total_causal_mappings(s, 100000).size());
    }
}
BENCHMARK(BM_EnumerateMappings)->DenseRange(4, 12, 2);

}  // namespace

BENCHMARK_MAIN();
