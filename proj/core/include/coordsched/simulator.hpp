#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "coordsched/contracts.hpp"
#include "coordsched/graph.hpp"
#include "coordsched/platform.hpp"
#include "coordsched/schedule.hpp"

namespace coordsched {

enum class EventKind { task_start, task_finish, token_produced, token_consumed };

const char* to_string(EventKind kind);

struct SimEvent {
    double time_ms = 0.0;
    EventKind kind = EventKind::task_start;
    /// Task name, or `Producer.port->Consumer.port` for token events.
    std::string subject;

    friend bool operator==(const SimEvent&, const SimEvent&) = default;
};

struct UnitUsage {
    std::string unit;
    double busy_ms = 0.0;
    double idle_ms = 0.0;
    double dynamic_mj = 0.0;
};

struct SimReport {
    double makespan_ms = 0.0;
    /// One row per platform unit, in platform order.
    std::vector<UnitUsage> per_unit;
    double dynamic_mj = 0.0;
    double static_mj = 0.0;
    double total_mj = 0.0;
    double deadline_ms = 0.0;
    bool deadline_met = true;
    std::size_t tokens_produced = 0;
    std::size_t tokens_consumed = 0;
    /// Intervals as executed, in start order.
    std::vector<Placement> executed;
    std::vector<SimEvent> event_trace;
};

enum class ViolationKind { coverage, unknown_unit, incompatible, missing_contract, duration, precedence, unit_overlap, distinct_units };

const char* to_string(ViolationKind kind);

struct SimViolation {
    ViolationKind kind = ViolationKind::precedence;
    double time_ms = 0.0;
    std::string message;
};

struct SimOutcome {
    std::optional<SimReport> report;
    std::optional<SimViolation> violation;

    bool ok() const { return report.has_value(); }
};

/// Replays one application cycle. A task may start only when every input token has
/// arrived (producer finish plus the edge cost) and its unit is idle; its length must
/// equal the contract duration for its placement. Makespan and energy are recomputed
/// from the replay. `deadline_ms` defaults to the application's deadline.
SimOutcome simulate(const AppGraph& graph, const Schedule& schedule, const Platform& platform,
                    const ContractStore& contracts, const SchedulerConfig& config,
                    std::optional<double> deadline_ms = std::nullopt);

nlohmann::ordered_json report_to_json(const SimReport& report);
/// One `{"t_ms", "kind", "subject"}` object per line.
std::string trace_to_jsonl(const std::vector<SimEvent>& trace);

/// Per-unit busy/idle/energy table plus totals.
std::string render_energy_breakdown(const SimReport& report);

}  // namespace coordsched
