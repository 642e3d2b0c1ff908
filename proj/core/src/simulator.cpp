#include "coordsched/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <tuple>

#include <fmt/format.h>

#include "coordsched/cost_model.hpp"
#include "coordsched/energy.hpp"

namespace coordsched {

const char* to_string(EventKind kind) {
    switch (kind) {
        case EventKind::task_start:
            return "task_start";
        case EventKind::task_finish:
            return "task_finish";
        case EventKind::token_produced:
            return "token_produced";
        case EventKind::token_consumed:
            return "token_consumed";
    }
    return "task_start";
}

const char* to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::coverage:
            return "coverage";
        case ViolationKind::unknown_unit:
            return "unknown unit";
        case ViolationKind::incompatible:
            return "incompatible";
        case ViolationKind::missing_contract:
            return "missing contract";
        case ViolationKind::duration:
            return "duration";
        case ViolationKind::precedence:
            return "precedence";
        case ViolationKind::unit_overlap:
            return "unit overlap";
        case ViolationKind::distinct_units:
            return "distinct units";
    }
    return "precedence";
}

namespace {

constexpr double kTimeTol = 1e-9;

int kind_rank(EventKind k) {
    switch (k) {
        case EventKind::task_finish:
            return 0;
        case EventKind::token_produced:
            return 1;
        case EventKind::token_consumed:
            return 2;
        case EventKind::task_start:
            return 3;
    }
    return 3;
}

SimOutcome violation(ViolationKind kind, double time, std::string message) {
    SimOutcome out;
    out.violation = SimViolation{kind, time, fmt::format("{}: {}", to_string(kind), message)};
    return out;
}

std::string edge_subject(const AppGraph& graph, const Edge& e) {
    return fmt::format("{}.{}->{}.{}", graph.node(e.producer).name, e.producer_port, graph.node(e.consumer).name,
                       e.consumer_port);
}

}  // namespace

SimOutcome simulate(const AppGraph& graph, const Schedule& schedule, const Platform& platform,
                    const ContractStore& contracts, const SchedulerConfig& config, std::optional<double> deadline_ms) {
    auto model = CostModel::create(platform, contracts, config);
    if (!model) {
        return violation(ViolationKind::missing_contract, 0.0,
                         model.diagnostics().empty() ? "invalid scaling reference" : model.diagnostics().front().message);
    }

    // Placements in the order they would be dispatched.
    std::vector<const Placement*> order;
    for (const auto& p : schedule.placements) order.push_back(&p);
    std::stable_sort(order.begin(), order.end(), [](const Placement* a, const Placement* b) {
        return std::tie(a->start_ms, a->task) < std::tie(b->start_ms, b->task);
    });

    std::map<std::string, const Placement*> by_task;
    for (const Placement* p : order) {
        if (!graph.find(p->task)) {
            return violation(ViolationKind::coverage, p->start_ms, fmt::format("{} is not a task of the application", p->task));
        }
        if (!by_task.emplace(p->task, p).second) {
            return violation(ViolationKind::coverage, p->start_ms, fmt::format("{} is placed more than once", p->task));
        }
    }
    for (const auto& node : graph.nodes()) {
        if (!by_task.contains(node.name)) {
            return violation(ViolationKind::coverage, 0.0, fmt::format("{} is not placed", node.name));
        }
    }

    std::map<std::string, TaskCost> costs;
    for (const Placement* p : order) {
        const Node& node = graph.node(*graph.find(p->task));
        const ProcessingUnit* unit = platform.find_unit(p->unit);
        if (unit == nullptr) {
            return violation(ViolationKind::unknown_unit, p->start_ms, fmt::format("{} is placed on unknown unit {}", p->task, p->unit));
        }
        if (!std::isfinite(p->start_ms) || p->start_ms < 0.0) {
            return violation(ViolationKind::duration, p->start_ms, fmt::format("{} starts before time 0", p->task));
        }
        CostQuery q = model->query(node, p->version, *unit, p->opp);
        if (q.status == CostStatus::missing_contract) {
            return violation(ViolationKind::missing_contract, p->start_ms,
                             fmt::format("no contract for {} version {} on {} at {}", p->task, p->version, unit->unit_type,
                                         p->opp.id()));
        }
        if (q.status != CostStatus::ok) {
            return violation(ViolationKind::incompatible, p->start_ms,
                             fmt::format("{} version {} on {} at {}: {}", p->task, p->version, p->unit, p->opp.id(),
                                         to_string(q.status)));
        }
        double expected = q.cost.duration_ms;
        if (std::abs(p->duration_ms() - expected) > kTimeTol * std::max(1.0, expected)) {
            return violation(ViolationKind::duration, p->start_ms,
                             fmt::format("{} runs {:.6f} ms but its contract gives {:.6f} ms", p->task, p->duration_ms(),
                                         expected));
        }
        costs.emplace(p->task, q.cost);
    }

    if (config.ft_distinct_units) {
        std::map<std::pair<std::string, std::string>, std::string> used;
        for (const Placement* p : order) {
            const Node& node = graph.node(*graph.find(p->task));
            if (node.replica_of.empty()) continue;
            auto [it, fresh] = used.emplace(std::make_pair(node.replica_of, p->unit), p->task);
            if (!fresh) {
                return violation(ViolationKind::distinct_units, p->start_ms,
                                 fmt::format("replicas {} and {} share unit {}", it->second, p->task, p->unit));
            }
        }
    }

    // Inputs of each task, as edge indices.
    std::vector<std::vector<std::size_t>> inputs(graph.size());
    for (std::size_t i = 0; i < graph.edges().size(); ++i) inputs[graph.edges()[i].consumer].push_back(i);

    std::vector<SimEvent> events;
    std::map<std::string, double> unit_free_at;
    std::map<std::string, std::string> unit_last_task;
    std::vector<std::optional<double>> token_at(graph.edges().size());
    std::map<std::string, double> finish_of;
    SimReport report;

    for (const Placement* p : order) {
        const std::size_t task = *graph.find(p->task);
        const double t = p->start_ms;
        // Finishing earlier-dispatched producers makes their tokens visible.
        for (std::size_t ei : inputs[task]) {
            const Edge& e = graph.edges()[ei];
            const std::string& producer = graph.node(e.producer).name;
            auto f = finish_of.find(producer);
            double arrival = f == finish_of.end() ? std::numeric_limits<double>::infinity() : f->second + config.comm_cost_ms;
            if (arrival > t + kTimeTol) {
                std::string when = f == finish_of.end() ? std::string("before its producer starts")
                                                        : fmt::format("(arrives at t={:.3f})", arrival);
                return violation(ViolationKind::precedence, t,
                                 fmt::format("{}.{} not available at t={:.3f} for {} {}", producer, e.producer_port, t,
                                             p->task, when));
            }
        }
        auto busy = unit_free_at.find(p->unit);
        if (busy != unit_free_at.end() && busy->second > t + kTimeTol) {
            return violation(ViolationKind::unit_overlap, t,
                             fmt::format("{} starts on {} at t={:.3f} while {} runs until t={:.3f}", p->task, p->unit, t,
                                         unit_last_task[p->unit], busy->second));
        }
        for (std::size_t ei : inputs[task]) {
            events.push_back(SimEvent{t, EventKind::token_consumed, edge_subject(graph, graph.edges()[ei])});
            ++report.tokens_consumed;
        }
        events.push_back(SimEvent{t, EventKind::task_start, p->task});
        double finish = t + costs.at(p->task).duration_ms;
        events.push_back(SimEvent{finish, EventKind::task_finish, p->task});
        for (std::size_t ei = 0; ei < graph.edges().size(); ++ei) {
            const Edge& e = graph.edges()[ei];
            if (e.producer != task) continue;
            token_at[ei] = finish + config.comm_cost_ms;
            events.push_back(SimEvent{*token_at[ei], EventKind::token_produced, edge_subject(graph, e)});
            ++report.tokens_produced;
        }
        finish_of[p->task] = finish;
        unit_free_at[p->unit] = std::max(busy == unit_free_at.end() ? 0.0 : busy->second, finish);
        unit_last_task[p->unit] = p->task;
    }

    std::stable_sort(events.begin(), events.end(), [](const SimEvent& a, const SimEvent& b) {
        return std::make_tuple(a.time_ms, kind_rank(a.kind), a.subject) <
               std::make_tuple(b.time_ms, kind_rank(b.kind), b.subject);
    });

    // Everything below is derived from the trace rather than from the schedule.
    std::map<std::string, double> started;
    std::map<std::string, UnitUsage> usage;
    for (const auto& u : platform.units) usage[u.name] = UnitUsage{u.name, 0.0, 0.0, 0.0};
    for (const auto& ev : events) {
        if (ev.kind == EventKind::task_start) {
            started[ev.subject] = ev.time_ms;
        } else if (ev.kind == EventKind::task_finish) {
            const Placement* p = by_task.at(ev.subject);
            UnitUsage& row = usage[p->unit];
            row.busy_ms += ev.time_ms - started.at(ev.subject);
            row.dynamic_mj += costs.at(ev.subject).energy_mj;
            report.makespan_ms = std::max(report.makespan_ms, ev.time_ms);
            report.executed.push_back(Placement{p->task, p->unit, p->version, p->opp, started.at(ev.subject), ev.time_ms});
        }
    }
    std::sort(report.executed.begin(), report.executed.end(), [](const Placement& a, const Placement& b) {
        return std::tie(a.start_ms, a.task) < std::tie(b.start_ms, b.task);
    });
    for (const auto& u : platform.units) {
        UnitUsage row = usage[u.name];
        row.idle_ms = report.makespan_ms - row.busy_ms;
        report.dynamic_mj += row.dynamic_mj;
        report.per_unit.push_back(row);
    }
    report.static_mj = static_energy(platform, report.makespan_ms);
    report.total_mj = report.static_mj + report.dynamic_mj;
    report.deadline_ms = deadline_ms.value_or(graph.info().deadline_ms);
    report.deadline_met = report.makespan_ms <= report.deadline_ms + kTimeTol;
    report.event_trace = std::move(events);

    SimOutcome out;
    out.report = std::move(report);
    return out;
}

nlohmann::ordered_json report_to_json(const SimReport& report) {
    using json = nlohmann::ordered_json;
    json doc;
    doc["makespan_ms"] = report.makespan_ms;
    doc["deadline_ms"] = report.deadline_ms;
    doc["deadline_met"] = report.deadline_met;
    doc["dynamic_mj"] = report.dynamic_mj;
    doc["static_mj"] = report.static_mj;
    doc["total_mj"] = report.total_mj;
    doc["tokens_produced"] = report.tokens_produced;
    doc["tokens_consumed"] = report.tokens_consumed;
    json units = json::array();
    for (const auto& u : report.per_unit) {
        units.push_back(json{{"unit", u.unit}, {"busy_ms", u.busy_ms}, {"idle_ms", u.idle_ms}, {"dynamic_mj", u.dynamic_mj}});
    }
    doc["per_unit"] = std::move(units);
    return doc;
}

std::string trace_to_jsonl(const std::vector<SimEvent>& trace) {
    std::string out;
    for (const auto& ev : trace) {
        nlohmann::ordered_json line;
        line["t_ms"] = ev.time_ms;
        line["kind"] = to_string(ev.kind);
        line["subject"] = ev.subject;
        out += line.dump();
        out += '\n';
    }
    return out;
}

std::string render_energy_breakdown(const SimReport& report) {
    std::size_t unit_w = 4;
    for (const auto& u : report.per_unit) unit_w = std::max(unit_w, u.unit.size());
    std::string out = fmt::format("{:<{}}  {:>10}  {:>10}  {:>12}\n", "unit", unit_w, "busy_ms", "idle_ms", "dynamic_mJ");
    for (const auto& u : report.per_unit) {
        out += fmt::format("{:<{}}  {:>10.3f}  {:>10.3f}  {:>12.3f}\n", u.unit, unit_w, u.busy_ms, u.idle_ms, u.dynamic_mj);
    }
    out += fmt::format("makespan {:.3f} ms (deadline {:.3f} ms, {})\n", report.makespan_ms, report.deadline_ms,
                       report.deadline_met ? "met" : "missed");
    out += fmt::format("energy: dynamic {:.3f} mJ + static {:.3f} mJ = total {:.3f} mJ\n", report.dynamic_mj,
                       report.static_mj, report.total_mj);
    return out;
}

}  // namespace coordsched
