#include <benchmark/benchmark.h>

#include <string>

#include <fmt/core.h>

#include "coordsched/contracts.hpp"
#include "coordsched/ft_expansion.hpp"
#include "coordsched/parser.hpp"
#include "coordsched/platform.hpp"
#include "coordsched/scheduler.hpp"
#include "coordsched/simulator.hpp"

using namespace coordsched;

namespace {

// Layers of `width` workers between a source and a sink; every worker reads the previous layer's first node.
std::string layered_app(int tasks, int width) {
    std::string text = "app Bench {\n  period 100000ms; deadline 100000ms; objective minimize_energy;\n  type d;\n";
    text += "  component S { out d o; version v on LITTLE, big; }\n";
    std::string prev = "S";
    int made = 1;
    int layer = 0;
    std::string edges;
    while (made < tasks - 1) {
        std::string first;
        for (int w = 0; w < width && made < tasks - 1; ++w, ++made) {
            const std::string name = fmt::format("L{}W{}", layer, w);
            text += fmt::format("  component {} {{ in d i; out d o; version cpu on LITTLE, big; version gpu on GPU; }}\n", name);
            edges += fmt::format("  edge {}.o -> {}.i;\n", prev, name);
            if (first.empty()) first = name;
        }
        prev = first;
        ++layer;
    }
    text += "  component K { in d i; version v on LITTLE, big; }\n";
    edges += fmt::format("  edge {}.o -> K.i;\n", prev);
    return text + edges + "}\n";
}

std::string bench_contracts(int tasks, int width) {
    std::string out;
    auto add = [&](const std::string& c, const std::string& v, const std::string& type, double t, double e) {
        out += fmt::format(
            "[contract]\ncomponent = \"{}\"\nversion = \"{}\"\nunit_type = \"{}\"\nopp = \"ref\"\n"
            "wcet_ms = {}\nacet_ms = {}\nwce_mj = {}\nace_mj = {}\n\n",
            c, v, type, t, 0.75 * t, e, 0.75 * e);
    };
    for (const char* c : {"S", "K"}) {
        add(c, "v", "LITTLE", 2.0, 1.0);
        add(c, "v", "big", 1.0, 3.0);
    }
    int made = 1;
    for (int layer = 0; made < tasks - 1; ++layer) {
        for (int w = 0; w < width && made < tasks - 1; ++w, ++made) {
            const std::string name = fmt::format("L{}W{}", layer, w);
            const double t = 2.0 + (made % 5);
            add(name, "cpu", "LITTLE", 2.0 * t, 0.5 * t);
            add(name, "cpu", "big", t, 1.5 * t);
            add(name, "gpu", "GPU", 0.5 * t, t);
        }
    }
    return out;
}

const char* kPlatform = R"([platform]
name = "bench"

[unit]
name = "little0"
type = "LITTLE"
static_power_mw = 100
opp = "600MHz@0.80V"
opp = "1000MHz@0.90V"

[unit]
name = "little1"
type = "LITTLE"
static_power_mw = 100
opp = "600MHz@0.80V"
opp = "1000MHz@0.90V"

[unit]
name = "big0"
type = "big"
static_power_mw = 400
opp = "600MHz@0.80V"
opp = "1800MHz@1.10V"

[unit]
name = "big1"
type = "big"
static_power_mw = 400
opp = "600MHz@0.80V"
opp = "1800MHz@1.10V"

[unit]
name = "gpu0"
type = "GPU"
static_power_mw = 600
opp = "800MHz@0.90V"
)";

struct Model {
    AppGraph graph;
    Platform platform;
    ContractStore contracts;
};

Model make_model(int tasks, int width) {
    auto decl = parse_app(layered_app(tasks, width), "bench.coord");
    auto graph = build_graph(decl.value());
    return {std::move(graph).value(), parse_platform(kPlatform, "bench.platform").value(),
            parse_contracts(bench_contracts(tasks, width), "bench.contracts").value()};
}

void BM_ParseAndValidate(benchmark::State& state) {
    const std::string text = layered_app(static_cast<int>(state.range(0)), 4);
    for (auto _ : state) {
        auto decl = parse_app(text, "bench.coord");
        auto graph = build_graph(decl.value());
        benchmark::DoNotOptimize(graph);
    }
}
BENCHMARK(BM_ParseAndValidate)->Arg(16)->Arg(64)->Arg(256);

void BM_ExpandFt(benchmark::State& state) {
    Model m = make_model(static_cast<int>(state.range(0)), 4);
    AppGraph annotated = with_replicas(m.graph, "L0W0", 3).value();
    for (auto _ : state) benchmark::DoNotOptimize(expand_ft(annotated));
}
BENCHMARK(BM_ExpandFt)->Arg(16)->Arg(64);

void BM_ListScheduling(benchmark::State& state) {
    Model m = make_model(static_cast<int>(state.range(0)), 4);
    SchedulerConfig config;
    config.mode = SchedulerMode::makespan_min;
    for (auto _ : state) benchmark::DoNotOptimize(schedule_makespan(m.graph, m.platform, m.contracts, config, 100000.0));
}
BENCHMARK(BM_ListScheduling)->Arg(8)->Arg(32)->Arg(128);

void BM_EnergyDescent(benchmark::State& state) {
    Model m = make_model(static_cast<int>(state.range(0)), 4);
    SchedulerConfig config;
    for (auto _ : state) benchmark::DoNotOptimize(schedule_energy(m.graph, m.platform, m.contracts, config, 100000.0));
}
BENCHMARK(BM_EnergyDescent)->Arg(8)->Arg(32)->Arg(64);

void BM_Exhaustive(benchmark::State& state) {
    Model m = make_model(static_cast<int>(state.range(0)), 3);
    SchedulerConfig config;
    config.mode = SchedulerMode::exhaustive;
    for (auto _ : state) benchmark::DoNotOptimize(schedule_exhaustive(m.graph, m.platform, m.contracts, config, 100000.0));
}
BENCHMARK(BM_Exhaustive)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);

void BM_Simulate(benchmark::State& state) {
    Model m = make_model(static_cast<int>(state.range(0)), 4);
    SchedulerConfig config;
    Schedule s = *schedule_energy(m.graph, m.platform, m.contracts, config, 100000.0).schedule;
    for (auto _ : state) benchmark::DoNotOptimize(simulate(m.graph, s, m.platform, m.contracts, config));
}
BENCHMARK(BM_Simulate)->Arg(8)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
