#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "coordsched/contracts.hpp"
#include "coordsched/graph.hpp"
#include "coordsched/platform.hpp"
#include "coordsched/schedule.hpp"

namespace coordsched {

enum class ScheduleStatus {
    ok,
    /// A schedule exists but misses the deadline; `schedule` holds the best one found.
    infeasible_deadline,
    no_compatible_unit,
    missing_contract,
    too_large,
    invalid_input,
};

const char* to_string(ScheduleStatus status);

struct ScheduleResult {
    ScheduleStatus status = ScheduleStatus::ok;
    std::optional<Schedule> schedule;
    std::string message;
    std::vector<std::string> warnings;

    bool ok() const { return status == ScheduleStatus::ok; }
};

/// HEFT-style list scheduling. Tasks are ranked by upward rank over their mean
/// duration across all compatible (version, unit type, operating point) options;
/// each task in rank order takes the (unit, version, operating point) with the
/// earliest finish, inserted into the earliest idle gap of that unit. Ties go to
/// the lexicographically smaller task name, then unit, version and operating point id.
/// The result is marked feasible when its makespan meets `deadline_ms`.
ScheduleResult schedule_makespan(const AppGraph& graph, const Platform& platform, const ContractStore& contracts,
                                 const SchedulerConfig& config, double deadline_ms);

/// Starts from the list schedule and, while it helps, applies the single-task
/// reassignment that most reduces predicted total energy without breaking the
/// deadline. Fails with `infeasible_deadline` when the list schedule already misses it.
ScheduleResult schedule_energy(const AppGraph& graph, const Platform& platform, const ContractStore& contracts,
                               const SchedulerConfig& config, double deadline_ms);

/// Exact optimum over every assignment and task order (branch and bound), for at most
/// `config.exhaustive_cap` tasks. Minimises total energy under the deadline, or
/// makespan when the graph's objective is minimize_makespan (energy breaks ties).
ScheduleResult schedule_exhaustive(const AppGraph& graph, const Platform& platform, const ContractStore& contracts,
                                   const SchedulerConfig& config, double deadline_ms);

/// Dispatches on `config.mode`.
ScheduleResult run_scheduler(const AppGraph& graph, const Platform& platform, const ContractStore& contracts,
                             const SchedulerConfig& config, double deadline_ms);

struct Assignment {
    std::string unit;
    std::string version;
    OperatingPoint opp;
};

/// List-schedules a fixed assignment in upward-rank order. Every task must be assigned.
ScheduleResult schedule_with_assignment(const AppGraph& graph, const Platform& platform,
                                        const ContractStore& contracts, const SchedulerConfig& config,
                                        double deadline_ms, const std::map<std::string, Assignment>& assignment);

/// Dynamic energy summed over placements (in placement order), static energy over the
/// makespan. Reproduces the totals a solver stored in the schedule bit for bit.
Outcome<EnergyBreakdown> predict_energy(const AppGraph& graph, const Schedule& schedule, const Platform& platform,
                                        const ContractStore& contracts, const SchedulerConfig& config);

/// Longest path over per-task minimum durations plus edge costs: no schedule can be shorter.
std::optional<double> critical_path_lower_bound(const AppGraph& graph, const Platform& platform,
                                                const ContractStore& contracts, const SchedulerConfig& config);

}  // namespace coordsched
