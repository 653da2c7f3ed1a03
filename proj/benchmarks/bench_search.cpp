#include <benchmark/benchmark.h>

#include <set>

#include "causescope/intervene.hpp"
#include "causescope/oracle.hpp"
#include "causescope/search.hpp"

using namespace causescope;

namespace {

CausalGraph graph_of(const SimPipelineSpec& spec) {
    std::set<FeatureId> nodes(spec.feature_ids.begin(), spec.feature_ids.end());
    std::set<std::pair<FeatureId, FeatureId>> edges;
    for (const auto& [src, targets] : spec.influence)
        for (const auto& dst : targets) edges.insert({src, dst});
    return validate_graph(nodes, edges);
}

std::vector<BenchmarkInstance> instances(std::size_t features) {
    return generate_benchmark(11, features, 8, CauseProfile{1, 3, 1, 3});
}

void bm_simulator_execute(benchmark::State& state) {
    auto bench = instances(static_cast<std::size_t>(state.range(0)));
    SimulatorSut sut(bench.front().spec);
    std::map<FeatureId, std::string> intervention{
        {bench.front().spec.feature_ids.front(), "intervention"}};
    for (auto _ : state)
        benchmark::DoNotOptimize(sut.execute(bench.front().problem, intervention, 1));
}
BENCHMARK(bm_simulator_execute)->Arg(8)->Arg(12)->Arg(15);

void bm_budgeted_search(benchmark::State& state) {
    auto bench = instances(static_cast<std::size_t>(state.range(0)));
    AnalysisConfig cfg;  // stock defaults
    cfg.seed = 1;
    for (auto _ : state) {
        for (const auto& inst : bench) {
            auto sut = build_sim(inst.spec);
            CausalGraph graph = graph_of(inst.spec);
            TemplateEngine engine;
            benchmark::DoNotOptimize(analyze_problem(*sut, graph, cfg, engine, inst.problem));
        }
    }
}
BENCHMARK(bm_budgeted_search)->Arg(8)->Arg(12);

void bm_oracle_enumeration(benchmark::State& state) {
    auto bench = instances(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        for (const auto& inst : bench) {
            auto sut = build_sim(inst.spec);
            benchmark::DoNotOptimize(
                enumerate_minimal_causes(*sut, graph_of(inst.spec), 5, inst.problem));
        }
    }
}
BENCHMARK(bm_oracle_enumeration)->Arg(8)->Arg(12);

}  // namespace

BENCHMARK_MAIN();
