#include <gtest/gtest.h>

#include "coordsched/ft_expansion.hpp"
#include "coordsched/scheduler.hpp"
#include "coordsched/simulator.hpp"
#include "fixtures.hpp"
#include "instances.hpp"

using namespace coordsched;
using namespace coordsched::testing;

namespace {

const OperatingPoint kOpp{1000, 1.0};

ContractEntry entry(double wcet, double wce) { return ContractEntry{{wcet, wcet}, {wce, wce}, {}}; }

Instance chain_instance() {
    Instance inst{graph_from("app Chain { period 100ms; deadline 100ms; type t;\n"
                             "  component A { out t o; version v on big; }\n"
                             "  component B { in t i; version v on big; }\n"
                             "  edge A.o -> B.i; }\n"),
                  Platform{"one", {{"big0", "big", {kOpp}, 500.0}}}, {}, 100.0};
    inst.contracts.insert({"A", "v", "big", kOpp}, entry(4, 5));
    inst.contracts.insert({"B", "v", "big", kOpp}, entry(6, 8));
    return inst;
}

Instance two_task_instance(int little_units, int big_units, double deadline) {
    Instance inst{graph_from("app Two { period 100ms; deadline 100ms;\n"
                             "  component T1 { version v on L, B; }\n"
                             "  component T2 { version v on L, B; } }\n"),
                  Platform{"p", {}}, {}, deadline};
    for (int i = 0; i < little_units; ++i) inst.platform.units.push_back({"L" + std::to_string(i), "L", {kOpp}, 100.0});
    for (int i = 0; i < big_units; ++i) inst.platform.units.push_back({"B" + std::to_string(i), "B", {kOpp}, 400.0});
    for (const char* t : {"T1", "T2"}) {
        inst.contracts.insert({t, "v", "L", kOpp}, entry(10, 5));
        inst.contracts.insert({t, "v", "B", kOpp}, entry(4, 8));
    }
    return inst;
}

SchedulerConfig config(SchedulerMode mode = SchedulerMode::energy_min) {
    SchedulerConfig c;
    c.mode = mode;
    return c;
}

/// Checks the Schedule invariants directly; returns an empty string when they hold.
std::string check_schedule(const Instance& inst, const Schedule& s, const SchedulerConfig& cfg) {
    if (s.placements.size() != inst.graph.size()) return "wrong placement count";
    for (const auto& p : s.placements) {
        auto idx = inst.graph.find(p.task);
        if (!idx) return "unknown task " + p.task;
        const auto* unit = inst.platform.find_unit(p.unit);
        if (!unit) return "unknown unit";
        const Version* v = inst.graph.node(*idx).find_version(p.version);
        if (!v || !v->runs_on(unit->unit_type)) return "incompatible placement " + p.task;
        if (p.start_ms < -1e-12 || p.finish_ms <= p.start_ms) return "bad interval";
    }
    for (const auto& e : inst.graph.edges()) {
        const auto* a = s.find(inst.graph.node(e.producer).name);
        const auto* b = s.find(inst.graph.node(e.consumer).name);
        if (a->finish_ms + cfg.comm_cost_ms > b->start_ms + 1e-9) return "precedence " + a->task + " -> " + b->task;
    }
    for (std::size_t i = 0; i < s.placements.size(); ++i) {
        for (std::size_t j = i + 1; j < s.placements.size(); ++j) {
            const auto& a = s.placements[i];
            const auto& b = s.placements[j];
            if (a.unit == b.unit && a.start_ms < b.finish_ms - 1e-9 && b.start_ms < a.finish_ms - 1e-9) return "overlap on " + a.unit;
        }
    }
    double makespan = 0.0;
    for (const auto& p : s.placements) makespan = std::max(makespan, p.finish_ms);
    if (std::abs(makespan - s.makespan_ms) > 1e-9) return "makespan mismatch";
    if (s.feasible && s.makespan_ms > s.deadline_ms + 1e-9) return "claims feasible past the deadline";
    return {};
}

}  // namespace

TEST(Scheduler, ChainMakespan) {
    Instance inst = chain_instance();
    auto r = schedule_makespan(inst.graph, inst.platform, inst.contracts, config(SchedulerMode::makespan_min), inst.deadline_ms);
    ASSERT_TRUE(r.ok()) << r.message;
    const Schedule& s = *r.schedule;
    EXPECT_DOUBLE_EQ(s.makespan_ms, 10.0);
    EXPECT_EQ(s.find("A")->start_ms, 0.0);
    EXPECT_EQ(s.find("A")->finish_ms, 4.0);
    EXPECT_EQ(s.find("B")->start_ms, 4.0);
    EXPECT_EQ(s.find("B")->finish_ms, 10.0);
    EXPECT_EQ(check_schedule(inst, s, config()), "");
    EXPECT_DOUBLE_EQ(oracle_min_makespan(inst).makespan_ms, 10.0);
}

TEST(Scheduler, ChainPredictEnergy) {
    Instance inst = chain_instance();
    auto r = schedule_makespan(inst.graph, inst.platform, inst.contracts, config(), inst.deadline_ms);
    ASSERT_TRUE(r.schedule);
    auto e = predict_energy(inst.graph, *r.schedule, inst.platform, inst.contracts, config());
    ASSERT_TRUE(e.ok());
    EXPECT_DOUBLE_EQ(e->dynamic_mj, 13.0);
    EXPECT_DOUBLE_EQ(e->static_mj, 5.0);
    EXPECT_DOUBLE_EQ(e->total_mj, 18.0);
    EXPECT_EQ(e->total_mj, r.schedule->total_mj);
    EXPECT_EQ(e->dynamic_mj, r.schedule->dynamic_mj);
    EXPECT_EQ(e->static_mj, r.schedule->static_mj);
}

TEST(Scheduler, EmptyGraph) {
    Instance inst{graph_from("app E { period 1ms; deadline 1ms; }"), Platform{"p", {{"u", "T", {kOpp}, 10.0}}}, {}, 1.0};
    for (auto mode : {SchedulerMode::makespan_min, SchedulerMode::energy_min, SchedulerMode::exhaustive}) {
        auto r = run_scheduler(inst.graph, inst.platform, inst.contracts, config(mode), 1.0);
        ASSERT_TRUE(r.ok()) << to_string(mode);
        EXPECT_TRUE(r.schedule->placements.empty());
        EXPECT_EQ(r.schedule->makespan_ms, 0.0);
        EXPECT_EQ(r.schedule->total_mj, 0.0);
        auto e = predict_energy(inst.graph, *r.schedule, inst.platform, inst.contracts, config());
        EXPECT_EQ(e->total_mj, 0.0);
    }
}

TEST(Scheduler, TwoTaskEnergyMatchesOracle) {
    Instance inst = two_task_instance(1, 1, 10.0);
    OracleResult best = oracle_min_energy(inst, 10.0);
    ASSERT_TRUE(best.feasible);
    EXPECT_DOUBLE_EQ(best.total_mj, 18.0);
    auto heuristic = schedule_energy(inst.graph, inst.platform, inst.contracts, config(), 10.0);
    ASSERT_TRUE(heuristic.ok()) << heuristic.message;
    EXPECT_NEAR(heuristic.schedule->total_mj, 18.0, 1e-9);
    auto exact = schedule_exhaustive(inst.graph, inst.platform, inst.contracts, config(SchedulerMode::exhaustive), 10.0);
    ASSERT_TRUE(exact.ok());
    EXPECT_NEAR(exact.schedule->total_mj, 18.0, 1e-9);
    const auto* t1 = exact.schedule->find("T1");
    const auto* t2 = exact.schedule->find("T2");
    EXPECT_NE(t1->unit, t2->unit);
}

TEST(Scheduler, TwoTaskLooseDeadlinePrefersLittle) {
    Instance inst = two_task_instance(2, 1, 30.0);
    auto r = schedule_energy(inst.graph, inst.platform, inst.contracts, config(), 30.0);
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(r.schedule->find("T1")->unit.front(), 'L');
    EXPECT_EQ(r.schedule->find("T2")->unit.front(), 'L');
    EXPECT_NEAR(r.schedule->total_mj, oracle_min_energy(inst, 30.0).total_mj, 1e-9);
}

TEST(Scheduler, DeadlineBelowCriticalPath) {
    Instance inst = chain_instance();
    auto lb = critical_path_lower_bound(inst.graph, inst.platform, inst.contracts, config());
    ASSERT_TRUE(lb);
    EXPECT_DOUBLE_EQ(*lb, 10.0);
    for (auto mode : {SchedulerMode::energy_min, SchedulerMode::makespan_min, SchedulerMode::exhaustive}) {
        auto r = run_scheduler(inst.graph, inst.platform, inst.contracts, config(mode), 9.5);
        EXPECT_EQ(r.status, ScheduleStatus::infeasible_deadline) << to_string(mode);
        EXPECT_NE(r.message.find("best achieved makespan 10.000 ms"), std::string::npos) << r.message;
        ASSERT_TRUE(r.schedule);
        EXPECT_FALSE(r.schedule->feasible);
    }
}

TEST(Scheduler, NoCompatibleUnitAndMissingContract) {
    Instance inst = chain_instance();
    inst.platform.units[0].unit_type = "LITTLE";
    auto r = run_scheduler(inst.graph, inst.platform, inst.contracts, config(), 100.0);
    EXPECT_EQ(r.status, ScheduleStatus::no_compatible_unit);

    Instance missing = chain_instance();
    missing.contracts.erase({"B", "v", "big", kOpp});
    auto m = run_scheduler(missing.graph, missing.platform, missing.contracts, config(), 100.0);
    EXPECT_EQ(m.status, ScheduleStatus::missing_contract);
    EXPECT_NE(m.message.find("B"), std::string::npos);
}

TEST(Scheduler, ExhaustiveCap) {
    Instance inst = chain_instance();
    SchedulerConfig c = config(SchedulerMode::exhaustive);
    c.exhaustive_cap = 1;
    EXPECT_EQ(schedule_exhaustive(inst.graph, inst.platform, inst.contracts, c, 100.0).status, ScheduleStatus::too_large);
    AppGraph big = expand_ft(load_graph("vision.coord")).value();
    auto r = schedule_exhaustive(big, load_demo_platform(), load_store("vision.contracts"), config(SchedulerMode::exhaustive), 40.0);
    EXPECT_TRUE(r.ok()) << r.message;
    EXPECT_FALSE(r.warnings.empty());
}

TEST(Scheduler, SingleTaskExhaustiveCountsOwnStatic) {
    // L0: 5 mJ dynamic + 10 ms at 500 mW = 10 mJ. B0: 8.25 mJ + 4 ms at 500 mW = 10.25 mJ.
    Instance inst{graph_from("app S { period 100ms; deadline 100ms; component T { version v on L, B; } }"),
                  Platform{"p", {{"L0", "L", {kOpp}, 100.0}, {"B0", "B", {kOpp}, 400.0}}}, {}, 100.0};
    inst.contracts.insert({"T", "v", "L", kOpp}, entry(10, 5));
    inst.contracts.insert({"T", "v", "B", kOpp}, entry(4, 8.25));
    auto r = schedule_exhaustive(inst.graph, inst.platform, inst.contracts, config(SchedulerMode::exhaustive), 100.0);
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(r.schedule->find("T")->unit, "L0");
    EXPECT_DOUBLE_EQ(r.schedule->total_mj, 10.0);
    inst.contracts.erase({"T", "v", "B", kOpp});
    inst.contracts.insert({"T", "v", "B", kOpp}, entry(4, 7.5));
    r = schedule_exhaustive(inst.graph, inst.platform, inst.contracts, config(SchedulerMode::exhaustive), 100.0);
    EXPECT_EQ(r.schedule->find("T")->unit, "B0");
    EXPECT_DOUBLE_EQ(r.schedule->total_mj, 9.5);
}

TEST(Scheduler, SymmetricUnitsGiveSameEnergy) {
    Instance a = two_task_instance(2, 2, 12.0);
    Instance b = a;
    std::reverse(b.platform.units.begin(), b.platform.units.end());
    for (auto& u : b.platform.units) u.name = "x" + u.name;
    auto ra = schedule_exhaustive(a.graph, a.platform, a.contracts, config(SchedulerMode::exhaustive), 12.0);
    auto rb = schedule_exhaustive(b.graph, b.platform, b.contracts, config(SchedulerMode::exhaustive), 12.0);
    ASSERT_TRUE(ra.ok() && rb.ok());
    EXPECT_NEAR(ra.schedule->total_mj, rb.schedule->total_mj, 1e-9);
}

TEST(Scheduler, VisionRunsDetectionAndFlowInParallel) {
    AppGraph g = expand_ft(load_graph("vision.coord")).value();
    Platform p = load_demo_platform();
    ContractStore c = load_store("vision.contracts");
    for (auto mode : {SchedulerMode::makespan_min, SchedulerMode::energy_min}) {
        auto r = run_scheduler(g, p, c, config(mode), 40.0);
        ASSERT_TRUE(r.ok()) << r.message;
        const auto* od = r.schedule->find("ObjectDetection");
        const auto* of = r.schedule->find("OpticalFlow");
        EXPECT_NE(od->unit, of->unit);
        EXPECT_LT(od->start_ms, of->finish_ms);
        EXPECT_LT(of->start_ms, od->finish_ms);
        Instance inst{g, p, c, 40.0};
        EXPECT_EQ(check_schedule(inst, *r.schedule, config(mode)), "");
    }
}

TEST(Scheduler, EnergyNeverWorseThanPhaseOne) {
    Rng rng(77);
    for (int i = 0; i < 150; ++i) {
        Instance inst = random_instance(rng);
        auto phase1 = schedule_makespan(inst.graph, inst.platform, inst.contracts, config(SchedulerMode::makespan_min), inst.deadline_ms);
        auto energy = schedule_energy(inst.graph, inst.platform, inst.contracts, config(), inst.deadline_ms);
        if (!phase1.ok()) {
            EXPECT_EQ(energy.status, ScheduleStatus::infeasible_deadline);
            continue;
        }
        ASSERT_TRUE(energy.ok()) << describe(inst);
        EXPECT_LE(energy.schedule->total_mj, phase1.schedule->total_mj + 1e-9) << describe(inst);
        EXPECT_EQ(check_schedule(inst, *energy.schedule, config()), "") << describe(inst);
    }
}

TEST(Scheduler, ExhaustiveMatchesBruteForce) {
    Rng rng(1234);
    for (int i = 0; i < 120; ++i) {
        Instance inst = random_instance(rng);
        OracleResult oracle = oracle_min_energy(inst, inst.deadline_ms);
        auto exact = schedule_exhaustive(inst.graph, inst.platform, inst.contracts, config(SchedulerMode::exhaustive), inst.deadline_ms);
        ASSERT_EQ(exact.ok(), oracle.feasible) << describe(inst) << exact.message;
        if (!oracle.feasible) continue;
        EXPECT_NEAR(exact.schedule->total_mj, oracle.total_mj, 1e-9 * std::max(1.0, oracle.total_mj)) << describe(inst);
        EXPECT_EQ(check_schedule(inst, *exact.schedule, config()), "") << describe(inst);
    }
}

TEST(Scheduler, MakespanModeExhaustiveMatchesBruteForce) {
    Rng rng(99);
    for (int i = 0; i < 80; ++i) {
        Instance inst = random_instance(rng);
        AppDecl decl = graph_to_decl(inst.graph);
        decl.objective = Objective::minimize_makespan;
        inst.graph = build_graph(decl).value();
        auto exact = schedule_exhaustive(inst.graph, inst.platform, inst.contracts, config(SchedulerMode::exhaustive), 1e6);
        ASSERT_TRUE(exact.ok());
        EXPECT_NEAR(exact.schedule->makespan_ms, oracle_min_makespan(inst).makespan_ms, 1e-9) << describe(inst);
    }
}

TEST(Scheduler, ScaleInvarianceOfArgmin) {
    Rng rng(5150);
    for (int i = 0; i < 40; ++i) {
        Instance inst = random_instance(rng);
        Instance scaled = inst;
        const double k = 3.0;
        ContractStore store;
        for (const auto& [key, e] : inst.contracts.entries()) {
            ContractEntry s = e;
            s.energy.wce_mj *= k;
            s.energy.ace_mj *= k;
            store.insert(key, s);
        }
        scaled.contracts = store;
        for (auto& u : scaled.platform.units) u.static_power_mw *= k;
        auto a = schedule_exhaustive(inst.graph, inst.platform, inst.contracts, config(SchedulerMode::exhaustive), inst.deadline_ms);
        auto b = schedule_exhaustive(scaled.graph, scaled.platform, scaled.contracts, config(SchedulerMode::exhaustive), inst.deadline_ms);
        ASSERT_EQ(a.ok(), b.ok());
        if (!a.ok()) continue;
        EXPECT_NEAR(b.schedule->total_mj, k * a.schedule->total_mj, 1e-9 * k * a.schedule->total_mj);
        // Optimal assignments may tie; the scaled optimum must also be optimal for the original.
        std::map<std::string, Assignment> assignment;
        for (const auto& p : b.schedule->placements) assignment[p.task] = {p.unit, p.version, p.opp};
        auto replay = schedule_with_assignment(inst.graph, inst.platform, inst.contracts, config(), inst.deadline_ms, assignment);
        ASSERT_TRUE(replay.schedule);
        EXPECT_NEAR(replay.schedule->total_mj, a.schedule->total_mj, 1e-9 * a.schedule->total_mj + 1e-9) << describe(inst);
    }
}

TEST(Scheduler, Deterministic) {
    AppGraph g = expand_ft(load_graph("vision.coord")).value();
    Platform p = load_demo_platform();
    ContractStore c = load_store("vision.contracts");
    auto a = run_scheduler(g, p, c, config(), 40.0);
    auto b = run_scheduler(g, p, c, config(), 40.0);
    EXPECT_EQ(schedule_to_json(*a.schedule).dump(), schedule_to_json(*b.schedule).dump());
}

TEST(Scheduler, CommCostDelaysConsumers) {
    Instance inst = chain_instance();
    SchedulerConfig c = config(SchedulerMode::makespan_min);
    c.comm_cost_ms = 1.5;
    auto r = schedule_makespan(inst.graph, inst.platform, inst.contracts, c, 100.0);
    ASSERT_TRUE(r.ok());
    EXPECT_DOUBLE_EQ(r.schedule->find("B")->start_ms, 5.5);
    EXPECT_EQ(check_schedule(inst, *r.schedule, c), "");
}

TEST(Scheduler, DistinctUnitsForReplicas) {
    AppGraph g = expand_ft(load_graph("vision.coord")).value();
    Platform p = load_demo_platform();
    ContractStore c = load_store("vision.contracts");
    SchedulerConfig cfg = config();
    cfg.ft_distinct_units = true;
    auto r = run_scheduler(g, p, c, cfg, 40.0);
    ASSERT_TRUE(r.ok());
    std::set<std::string> units;
    for (int i = 1; i <= 3; ++i) units.insert(r.schedule->find(replica_name("DecisionMaking", i))->unit);
    EXPECT_EQ(units.size(), 3u);
}

TEST(Scheduler, UseAverageShortensSchedule) {
    AppGraph g = expand_ft(load_graph("vision.coord")).value();
    Platform p = load_demo_platform();
    ContractStore c = load_store("vision.contracts");
    SchedulerConfig avg = config(SchedulerMode::makespan_min);
    avg.use_average = true;
    auto worst = run_scheduler(g, p, c, config(SchedulerMode::makespan_min), 40.0);
    auto average = run_scheduler(g, p, c, avg, 40.0);
    ASSERT_TRUE(worst.ok() && average.ok());
    EXPECT_LT(average.schedule->makespan_ms, worst.schedule->makespan_ms);
}

TEST(Schedule, JsonRoundTrip) {
    AppGraph g = expand_ft(load_graph("vision.coord")).value();
    auto r = run_scheduler(g, load_demo_platform(), load_store("vision.contracts"), config(), 40.0);
    ASSERT_TRUE(r.ok());
    auto doc = schedule_to_json(*r.schedule);
    nlohmann::json plain = nlohmann::json::parse(doc.dump());
    plain["extra_key"] = 1;
    auto back = schedule_from_json(plain, "mem");
    ASSERT_TRUE(back.ok()) << render_diagnostics(back.diagnostics());
    EXPECT_EQ(back->placements, r.schedule->placements);
    EXPECT_EQ(back->total_mj, r.schedule->total_mj);
    EXPECT_EQ(back->makespan_ms, r.schedule->makespan_ms);
    EXPECT_FALSE(schedule_from_json(nlohmann::json::parse(R"({"placements": [{"task": 3}]})"), "bad").ok());
    EXPECT_FALSE(schedule_from_json(nlohmann::json::array(), "bad").ok());
}
