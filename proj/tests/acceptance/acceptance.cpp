#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "cli.hpp"
#include "coordsched/energy.hpp"
#include "coordsched/ft_expansion.hpp"
#include "coordsched/parser.hpp"
#include "coordsched/scheduler.hpp"
#include "coordsched/simulator.hpp"
#include "fixtures.hpp"
#include "instances.hpp"
#include "random_apps.hpp"

using namespace coordsched;
using namespace coordsched::testing;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
    bool pass = true;
    std::string detail;
    std::vector<std::string> failures;

    void fail(std::string why) {
        pass = false;
        if (failures.size() < 5) failures.push_back(std::move(why));
    }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Schedules produced while checking criterion 3, replayed by criterion 4.
struct Emitted {
    const Instance* inst;
    Schedule schedule;
    SchedulerConfig config;
};
std::vector<Instance> g_instances;
std::vector<Emitted> g_emitted;

Verdict soundness() {
    Verdict v;
    const auto t0 = Clock::now();
    Rng rng(1001);
    int accepted = 0, injected = 0;
    for (int i = 0; i < 1000; ++i) {
        AppDecl wild = random_wild_app(rng);
        auto g = build_graph(wild);
        if (g.ok() != reference_valid(wild)) v.fail(fmt::format("wild app {} acceptance disagrees with reference", i));
        if (g.ok()) {
            ++accepted;
            if (auto why = check_graph_properties(g.value()); !why.empty()) v.fail(fmt::format("wild app {}: {}", i, why));
        }
        AppDecl valid = random_valid_app(rng);
        if (!build_graph(valid).ok()) v.fail(fmt::format("valid app {} rejected", i));
        for (Violation kind : kAllViolations) {
            AppDecl bad = inject(rng, valid, kind);
            ++injected;
            if (build_graph(bad).ok()) v.fail(fmt::format("app {}: injected {} not caught", i, to_string(kind)));
        }
    }
    const double s = seconds_since(t0);
    if (s >= 10.0) v.fail(fmt::format("took {:.2f} s", s));
    v.detail = fmt::format("1000 wild graphs ({} accepted) + 1000 valid graphs x {} injected violations in {:.2f} s", accepted,
                           injected / 1000, s);
    return v;
}

Verdict ft_pass() {
    Verdict v;
    const auto t0 = Clock::now();
    Rng rng(2002);
    AppGenOptions opts;
    opts.ft_probability = 0.3;
    int annotated = 0;
    for (int i = 0; i < 200; ++i) {
        auto g = build_graph(random_valid_app(rng, opts));
        if (!g.ok()) {
            v.fail(fmt::format("graph {} invalid", i));
            continue;
        }
        std::size_t expected = g->size();
        for (const auto& n : g->nodes()) expected += static_cast<std::size_t>(n.replicas);
        annotated += expected != g->size();
        auto x = expand_ft(g.value());
        if (!x.ok()) {
            v.fail(fmt::format("graph {}: expansion failed: {}", i, render_diagnostics(x.diagnostics())));
            continue;
        }
        if (x->size() != expected) v.fail(fmt::format("graph {}: {} nodes, expected {}", i, x->size(), expected));
        auto again = build_graph(graph_to_decl(x.value()));
        if (!again.ok()) v.fail(fmt::format("graph {}: expanded graph fails validation", i));
        if (auto why = check_graph_properties(x.value()); !why.empty()) v.fail(fmt::format("graph {}: {}", i, why));
        for (const auto& n : x->nodes()) {
            if (n.replicas != 0) v.fail(fmt::format("graph {}: {} still annotated", i, n.name));
        }
        AppGraph plain = strip_ft(g.value());
        auto same = expand_ft(plain);
        if (!same.ok() || !(same.value() == plain)) v.fail(fmt::format("graph {}: ft-free graph changed", i));
    }
    const double s = seconds_since(t0);
    if (s >= 5.0) v.fail(fmt::format("took {:.2f} s", s));
    v.detail = fmt::format("200 graphs ({} with annotations) in {:.2f} s", annotated, s);
    return v;
}

Verdict oracle_sandwich() {
    Verdict v;
    const auto t0 = Clock::now();
    Rng rng(3003);
    g_instances.reserve(300);
    for (int i = 0; i < 300; ++i) g_instances.push_back(random_instance(rng));

    int feasible = 0, within = 0, heuristic_missed = 0;
    double worst = 1.0;
    for (std::size_t i = 0; i < g_instances.size(); ++i) {
        const Instance& inst = g_instances[i];
        SchedulerConfig exact_cfg;
        exact_cfg.mode = SchedulerMode::exhaustive;
        SchedulerConfig heur_cfg;
        SchedulerConfig span_cfg;
        span_cfg.mode = SchedulerMode::makespan_min;

        auto exact = schedule_exhaustive(inst.graph, inst.platform, inst.contracts, exact_cfg, inst.deadline_ms);
        auto heur = schedule_energy(inst.graph, inst.platform, inst.contracts, heur_cfg, inst.deadline_ms);
        auto span = schedule_makespan(inst.graph, inst.platform, inst.contracts, span_cfg, inst.deadline_ms);
        for (auto* r : {&exact, &heur, &span}) {
            if (r->schedule) g_emitted.push_back({&inst, *r->schedule, r == &exact ? exact_cfg : r == &heur ? heur_cfg : span_cfg});
        }

        // The exact solver itself is checked against the independent brute force.
        OracleResult oracle = oracle_min_energy(inst, inst.deadline_ms);
        if (oracle.feasible != exact.ok()) {
            v.fail(fmt::format("instance {}: exact feasibility {} vs oracle {}\n{}", i, exact.ok(), oracle.feasible, describe(inst)));
            continue;
        }
        if (!exact.ok()) continue;
        ++feasible;
        const double e = exact.schedule->total_mj;
        if (std::abs(e - oracle.total_mj) > 1e-6 * std::max(1.0, e)) {
            v.fail(fmt::format("instance {}: exact {} vs oracle {}", i, e, oracle.total_mj));
        }
        if (!heur.ok()) {
            ++heuristic_missed;
            continue;
        }
        const double h = heur.schedule->total_mj;
        if (e > h + 1e-9) v.fail(fmt::format("instance {}: exact {} above heuristic {}", i, e, h));
        const double ratio = e > 0.0 ? h / e : 1.0;
        worst = std::max(worst, ratio);
        within += ratio <= 2.0;
    }
    const double s = seconds_since(t0);
    if (feasible == 0) v.fail("no feasible instances");
    if (within < 0.95 * feasible) v.fail(fmt::format("only {}/{} within 2x", within, feasible));
    if (s >= 60.0) v.fail(fmt::format("took {:.2f} s", s));
    v.detail = fmt::format("{} feasible of 300, {} within 2x, heuristic missed the deadline on {}, worst ratio {:.4f} otherwise, {:.2f} s",
                           feasible, within, heuristic_missed, worst, s);
    return v;
}

void check_agreement(Verdict& v, const std::string& label, const AppGraph& graph, const Schedule& schedule,
                     const Platform& platform, const ContractStore& contracts, const SchedulerConfig& config, double deadline) {
    auto sim = simulate(graph, schedule, platform, contracts, config, deadline);
    if (!sim.ok()) {
        v.fail(fmt::format("{}: {}", label, sim.violation->message));
        return;
    }
    const double de = std::abs(sim.report->total_mj - schedule.total_mj);
    const double dt = std::abs(sim.report->makespan_ms - schedule.makespan_ms);
    if (de > 1e-6 || dt > 1e-9) v.fail(fmt::format("{}: dE={} dT={}", label, de, dt));
}

Verdict agreement() {
    Verdict v;
    for (std::size_t i = 0; i < g_emitted.size(); ++i) {
        const Emitted& e = g_emitted[i];
        check_agreement(v, fmt::format("random schedule {}", i), e.inst->graph, e.schedule, e.inst->platform, e.inst->contracts,
                        e.config, e.inst->deadline_ms);
    }
    std::size_t bundled = 0;
    const Platform platform = load_demo_platform();
    const struct {
        const char* app;
        const char* contracts;
    } examples[] = {{"vision.coord", "vision.contracts"},
                    {"wifi_mono.coord", "wifi.contracts"},
                    {"wifi_forkjoin.coord", "wifi.contracts"}};
    for (const auto& ex : examples) {
        const AppGraph graph = expand_ft(load_graph(ex.app)).value();
        const ContractStore contracts = load_store(ex.contracts);
        for (auto mode : {SchedulerMode::energy_min, SchedulerMode::makespan_min, SchedulerMode::exhaustive}) {
            SchedulerConfig config;
            config.mode = mode;
            const double deadline = graph.info().deadline_ms;
            auto r = run_scheduler(graph, platform, contracts, config, deadline);
            if (!r.schedule) continue;
            ++bundled;
            check_agreement(v, fmt::format("{} {}", ex.app, to_string(mode)), graph, *r.schedule, platform, contracts, config, deadline);
        }
    }
    if (bundled < 3) v.fail("bundled examples produced too few schedules");
    v.detail = fmt::format("{} random + {} bundled schedules replayed", g_emitted.size(), bundled);
    return v;
}

Verdict energy_model() {
    Verdict v;
    Rng rng(5005);
    std::uniform_real_distribution<double> f(100.0, 3000.0), volt(0.5, 1.4), t(0.001, 1000.0), p(0.0, 1000.0), m(0.0, 500.0);
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const OperatingPoint a{f(rng), volt(rng)}, b{f(rng), volt(rng)};
        const double x = t(rng);
        const double there = scale_time(x, a, b);
        if (std::abs(scale_time(there, b, a) - x) > 1e-9 * x) v.fail(fmt::format("round trip of {} ms", x));
        // cycles = t * f is the same at every operating point
        if (std::abs(there * b.freq_mhz - x * a.freq_mhz) > 1e-9 * x * a.freq_mhz) v.fail("cycle count changed");
        const double expect_e = x * (b.voltage_v / a.voltage_v) * (b.voltage_v / a.voltage_v);
        if (std::abs(scale_energy(x, a, b) - expect_e) > 1e-12 * expect_e) v.fail("energy not proportional to V^2");
        const OperatingPoint higher{b.freq_mhz, b.voltage_v * 1.01};
        if (!(scale_energy(x, a, higher) > scale_energy(x, a, b))) v.fail("energy not increasing in V");

        Platform plat{"p", {{"u0", "T", {a}, p(rng)}, {"u1", "T", {a}, p(rng)}}};
        const double y = m(rng), z = m(rng);
        double mw = 0.0;
        for (const auto& u : plat.units) mw += u.static_power_mw;
        const double scale = std::max(1.0, mw * (y + z) / 1000.0);
        if (std::abs(static_energy(plat, y) - mw * y / 1000.0) > 1e-12 * scale) v.fail("static energy formula");
        if (std::abs(static_energy(plat, y + z) - static_energy(plat, y) - static_energy(plat, z)) > 1e-12 * scale) {
            v.fail("static energy not additive");
        }
        if (std::abs(static_energy(plat, 3.0 * y) - 3.0 * static_energy(plat, y)) > 1e-12 * scale) v.fail("static energy not linear");
    }
    v.detail = fmt::format("{} random operating point pairs and platforms", n);
    return v;
}

Verdict little_to_big() {
    Verdict v;
    const AppGraph graph = expand_ft(load_graph("vision.coord")).value();
    const Platform platform = load_demo_platform();
    const ContractStore contracts = load_store("vision.contracts");
    const SchedulerConfig config;
    const double deadline = graph.info().deadline_ms;
    auto base = run_scheduler(graph, platform, contracts, config, deadline);
    if (!base.ok()) {
        v.fail("baseline schedule failed: " + base.message);
        return v;
    }
    std::map<std::string, Assignment> assignment;
    std::vector<std::string> on_little;
    for (const auto& p : base.schedule->placements) {
        assignment[p.task] = {p.unit, p.version, p.opp};
        if (platform.find_unit(p.unit)->unit_type == "LITTLE") on_little.push_back(p.task);
    }
    if (on_little.size() != 1) {
        v.fail(fmt::format("expected one task on a LITTLE core, found {}", on_little.size()));
        return v;
    }
    const std::string task = on_little.front();
    // Take the big core that frees up first so the move costs no extra waiting.
    std::string target;
    double earliest = std::numeric_limits<double>::infinity();
    for (const auto& u : platform.units) {
        if (u.unit_type != "big") continue;
        double busy_until = 0.0;
        for (const auto& p : base.schedule->placements) {
            if (p.unit == u.name) busy_until = std::max(busy_until, p.finish_ms);
        }
        if (busy_until < earliest) {
            earliest = busy_until;
            target = u.name;
        }
    }
    const auto big_opps = platform.opps_of_type("big");
    assignment[task] = {target, assignment[task].version, big_opps.back()};
    auto moved = schedule_with_assignment(graph, platform, contracts, config, deadline, assignment);
    if (!moved.schedule) {
        v.fail("forced schedule failed: " + moved.message);
        return v;
    }
    if (!moved.ok()) v.fail("forced schedule misses the deadline");
    auto before = predict_energy(graph, *base.schedule, platform, contracts, config);
    auto after = predict_energy(graph, *moved.schedule, platform, contracts, config);
    auto sim_before = simulate(graph, *base.schedule, platform, contracts, config, deadline);
    auto sim_after = simulate(graph, *moved.schedule, platform, contracts, config, deadline);
    if (!before.ok() || !after.ok() || !sim_before.ok() || !sim_after.ok()) {
        v.fail("prediction or simulation failed");
        return v;
    }
    const double delta = after->total_mj - before->total_mj;
    if (!(delta > 0.0)) v.fail(fmt::format("delta {:.6f} mJ is not positive", delta));
    if (std::abs(sim_after.report->total_mj - sim_before.report->total_mj - delta) > 1e-6) v.fail("simulated delta differs");
    v.detail = fmt::format("{} LITTLE -> {} at {}: {:.3f} -> {:.3f} mJ (delta {:+.3f} mJ, makespan {:.3f} -> {:.3f} ms)", task, target,
                           big_opps.back().id(), before->total_mj, after->total_mj, delta, base.schedule->makespan_ms,
                           moved.schedule->makespan_ms);
    return v;
}

int cli_exit(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    return cli::run(args, out, err);
}

Verdict storyline() {
    Verdict v;
    const std::string platform_path = data_path("odroid_like.platform");
    const std::string contracts_path = data_path("wifi.contracts");
    auto schedule_args = [&](const std::string& app) {
        return std::vector<std::string>{"schedule", app, "--platform", platform_path, "--contracts", contracts_path};
    };
    const int mono = cli_exit(schedule_args(data_path("wifi_mono.coord")));
    const int forkjoin = cli_exit(schedule_args(data_path("wifi_forkjoin.coord")));
    if (mono != cli::kInfeasible) v.fail(fmt::format("wifi_mono exit {}", mono));
    if (forkjoin != cli::kOk) v.fail(fmt::format("wifi_forkjoin exit {}", forkjoin));

    const AppGraph base = load_graph("wifi_forkjoin.coord");
    const double deadline = base.info().deadline_ms;
    const Platform platform = load_demo_platform();
    const ContractStore contracts = load_store("wifi.contracts");
    const auto dir = std::filesystem::temp_directory_path() / "coordsched_acceptance";
    std::filesystem::create_directories(dir);

    std::string summary;
    for (int replicas : {2, 3}) {
        AppGraph annotated = with_replicas(base, "Join", replicas).value();
        const std::string path = (dir / fmt::format("wifi_forkjoin_ft{}.coord", replicas)).string();
        std::ofstream(path) << print_app(graph_to_decl(annotated));
        const int code = cli_exit(schedule_args(path));
        const int expected = replicas == 3 ? cli::kInfeasible : cli::kOk;
        if (code != expected) v.fail(fmt::format("replicas {} on Join: exit {}, expected {}", replicas, code, expected));

        // Exact optimum decides feasibility independently of the heuristic.
        const AppGraph expanded = expand_ft(annotated).value();
        SchedulerConfig exact;
        exact.mode = SchedulerMode::exhaustive;
        exact.exhaustive_cap = 12;
        auto best = schedule_exhaustive(expanded, platform, contracts, exact, deadline);
        if (best.ok() != (replicas == 2)) {
            v.fail(fmt::format("replicas {}: exact solver status {} ({})", replicas, to_string(best.status), best.message));
        }
        summary += fmt::format(", ft{} exact {}", replicas, to_string(best.status));
        if (best.schedule) summary += fmt::format(" ({:.3f} ms, {:.3f} mJ)", best.schedule->makespan_ms, best.schedule->total_mj);
    }
    std::filesystem::remove_all(dir);
    v.detail = fmt::format("deadline {:.3f} ms: mono exit {}, fork-join exit {}{}", deadline, mono, forkjoin, summary);
    return v;
}

Verdict monotonicity() {
    Verdict v;
    Rng rng(8008);
    int checked = 0;
    for (int i = 0; i < 100; ++i) {
        const Instance inst = random_instance(rng);
        double previous = std::numeric_limits<double>::infinity();
        for (double factor : {0.8, 1.0, 1.25, 1.6, 2.5}) {
            const double deadline = inst.deadline_ms * factor;
            const OracleResult r = oracle_min_energy(inst, deadline);
            const double energy = r.feasible ? r.total_mj : std::numeric_limits<double>::infinity();
            if (energy > previous + 1e-9) v.fail(fmt::format("instance {}: {} mJ at deadline {} after {} mJ", i, energy, deadline, previous));
            previous = energy;
            ++checked;
        }
    }
    v.detail = fmt::format("100 instances x 5 deadlines ({} optima)", checked);
    return v;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
        {"soundness", soundness},         {"ft-expansion", ft_pass},  {"oracle-sandwich", oracle_sandwich},
        {"sim-agreement", agreement},     {"energy-model", energy_model}, {"little-to-big", little_to_big},
        {"wifi-storyline", storyline},    {"deadline-monotonicity", monotonicity},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v.fail(std::string("exception: ") + e.what());
        }
        fmt::print("criterion {} {}: {} - {}\n", i + 1, criteria[i].first, v.pass ? "PASS" : "FAIL", v.detail);
        for (const auto& why : v.failures) fmt::print("    {}\n", why);
        failed += !v.pass;
    }
    return failed == 0 ? 0 : 1;
}
