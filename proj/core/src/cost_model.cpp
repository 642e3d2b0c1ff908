#include "coordsched/cost_model.hpp"

namespace coordsched {

const char* to_string(CostStatus status) {
    switch (status) {
        case CostStatus::ok:
            return "ok";
        case CostStatus::unknown_version:
            return "unknown version";
        case CostStatus::incompatible_unit:
            return "version not compatible with unit type";
        case CostStatus::unknown_opp:
            return "operating point not available on unit";
        case CostStatus::missing_contract:
            return "missing contract";
    }
    return "ok";
}

Outcome<CostModel> CostModel::create(const Platform& platform, const ContractStore& store,
                                     const SchedulerConfig& config) {
    auto scaling = ScalingModel::from_platform(platform, store.reference_overrides());
    if (!scaling) return Outcome<CostModel>::failure(scaling.diagnostics());
    return Outcome<CostModel>(CostModel(platform, store, config, std::move(scaling).value()), scaling.diagnostics());
}

CostQuery CostModel::query(const Node& node, const std::string& version, const ProcessingUnit& unit,
                           const OperatingPoint& opp) const {
    const Version* v = node.find_version(version);
    if (v == nullptr) return {CostStatus::unknown_version, {}};
    if (!v->runs_on(unit.unit_type)) return {CostStatus::incompatible_unit, {}};
    if (!unit.has_opp(opp)) return {CostStatus::unknown_opp, {}};

    auto found = lookup(*store_, ContractKey{node.contract_name, version, unit.unit_type, opp}, scaling_);
    if (!found) {
        if (!node.voter) return {CostStatus::missing_contract, {}};
        return {CostStatus::ok, TaskCost{config_.voter_wcet_ms, config_.voter_energy_mj, true}};
    }
    TaskCost cost;
    cost.duration_ms = config_.use_average ? found->time.acet_ms : found->time.wcet_ms;
    cost.energy_mj = config_.use_average ? found->energy.ace_mj : found->energy.wce_mj;
    cost.derived = found->derived;
    return {CostStatus::ok, cost};
}

}  // namespace coordsched
