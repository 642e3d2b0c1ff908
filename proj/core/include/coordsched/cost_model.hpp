#pragma once

#include <optional>
#include <string>

#include "coordsched/contracts.hpp"
#include "coordsched/energy.hpp"
#include "coordsched/graph.hpp"
#include "coordsched/platform.hpp"
#include "coordsched/schedule.hpp"

namespace coordsched {

struct TaskCost {
    double duration_ms = 0.0;
    double energy_mj = 0.0;
    bool derived = false;
};

enum class CostStatus { ok, unknown_version, incompatible_unit, unknown_opp, missing_contract };

struct CostQuery {
    CostStatus status = CostStatus::ok;
    TaskCost cost;
};

/// Resolves the execution time and dynamic energy of a node placed on a unit, with a
/// version, at an operating point: contract lookup with DVFS scaling, worst or average
/// case per the config, and the voter default for voter nodes without contracts.
class CostModel {
public:
    /// Fails when the store's `[reference]` records do not fit the platform.
    static Outcome<CostModel> create(const Platform& platform, const ContractStore& store, const SchedulerConfig& config);

    CostQuery query(const Node& node, const std::string& version, const ProcessingUnit& unit,
                    const OperatingPoint& opp) const;

    const ScalingModel& scaling() const { return scaling_; }
    const Platform& platform() const { return *platform_; }

private:
    CostModel(const Platform& platform, const ContractStore& store, SchedulerConfig config, ScalingModel scaling)
        : platform_(&platform), store_(&store), config_(config), scaling_(std::move(scaling)) {}

    const Platform* platform_;
    const ContractStore* store_;
    SchedulerConfig config_;
    ScalingModel scaling_;
};

const char* to_string(CostStatus status);

}  // namespace coordsched
