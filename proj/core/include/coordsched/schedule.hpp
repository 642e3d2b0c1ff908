#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "coordsched/ast.hpp"
#include "coordsched/diagnostic.hpp"
#include "coordsched/platform.hpp"

namespace coordsched {

enum class SchedulerMode { energy_min, makespan_min, exhaustive };

const char* to_string(SchedulerMode mode);
std::optional<SchedulerMode> parse_mode(const std::string& text);

struct SchedulerConfig {
    SchedulerMode mode = SchedulerMode::energy_min;
    /// Schedule with ACET/ACE instead of WCET/WCE.
    bool use_average = false;
    /// Replicas of one fault-tolerant component must run on pairwise distinct units.
    bool ft_distinct_units = false;
    /// Added between a producer's finish and its consumer's start on every edge.
    double comm_cost_ms = 0.0;
    /// Largest task count the exhaustive solver accepts.
    std::size_t exhaustive_cap = 8;
    /// Contract used for voter nodes when the store has no `__voter` entry.
    double voter_wcet_ms = 0.5;
    double voter_energy_mj = 0.1;
};

struct Placement {
    std::string task;
    std::string unit;
    std::string version;
    OperatingPoint opp;
    double start_ms = 0.0;
    double finish_ms = 0.0;

    double duration_ms() const { return finish_ms - start_ms; }

    friend bool operator==(const Placement&, const Placement&) = default;
};

struct EnergyBreakdown {
    double dynamic_mj = 0.0;
    double static_mj = 0.0;
    double total_mj = 0.0;
};

struct Schedule {
    /// In the order the solver placed them (a topological order).
    std::vector<Placement> placements;
    double makespan_ms = 0.0;
    double dynamic_mj = 0.0;
    double static_mj = 0.0;
    double total_mj = 0.0;
    double deadline_ms = 0.0;
    bool feasible = false;
    Objective objective = Objective::minimize_energy;
    SchedulerMode mode = SchedulerMode::energy_min;

    const Placement* find(const std::string& task) const;
    EnergyBreakdown energy() const { return {dynamic_mj, static_mj, total_mj}; }
};

nlohmann::ordered_json schedule_to_json(const Schedule& schedule);
/// Accepts the document written by `schedule_to_json` (extra keys are ignored).
Outcome<Schedule> schedule_from_json(const nlohmann::json& doc, const std::string& origin);

/// Placement table, ordered by start time then task name.
std::string render_schedule_table(const Schedule& schedule);

}  // namespace coordsched
