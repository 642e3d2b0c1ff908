#include "coordsched/energy.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace coordsched {

double scale_time(double t_ref_ms, const OperatingPoint& ref, const OperatingPoint& target) {
    if (ref.freq_mhz == target.freq_mhz) return t_ref_ms;
    return t_ref_ms * (ref.freq_mhz / target.freq_mhz);
}

double scale_energy(double e_ref_mj, const OperatingPoint& ref, const OperatingPoint& target) {
    if (ref.voltage_v == target.voltage_v) return e_ref_mj;
    double ratio = target.voltage_v / ref.voltage_v;
    return e_ref_mj * ratio * ratio;
}

double static_energy(const Platform& platform, double makespan_ms) {
    // mW * ms = uJ
    double microjoules = 0.0;
    for (const auto& u : platform.units) microjoules += u.static_power_mw * makespan_ms;
    return microjoules / 1000.0;
}

Outcome<ScalingModel> ScalingModel::from_platform(const Platform& platform,
                                                  const std::map<std::string, OperatingPoint>& overrides) {
    std::vector<Diagnostic> diags;
    ScalingModel model;
    for (const auto& type : platform.unit_types()) {
        std::vector<OperatingPoint> shared;
        bool first = true;
        for (const auto& u : platform.units) {
            if (u.unit_type != type) continue;
            if (first) {
                shared = u.opps;
                first = false;
            } else {
                std::erase_if(shared, [&](const OperatingPoint& o) { return !u.has_opp(o); });
            }
        }
        auto it = overrides.find(type);
        if (it != overrides.end()) {
            if (std::find(shared.begin(), shared.end(), it->second) == shared.end()) {
                diags.push_back(make_error({}, fmt::format("reference operating point {} is not available on every {} unit",
                                                           it->second.id(), type)));
                continue;
            }
            model.reference_[type] = it->second;
        } else if (!shared.empty()) {
            model.reference_[type] = *std::max_element(shared.begin(), shared.end());
        }
        // A type without a shared operating point simply has no scaling reference;
        // only exact contract entries apply to it.
    }
    const auto types = platform.unit_types();
    for (const auto& [type, opp] : overrides) {
        if (std::find(types.begin(), types.end(), type) == types.end()) {
            diags.push_back(make_warning({}, fmt::format("reference given for unit type {} which is not on the platform", type)));
        }
    }
    if (has_errors(diags)) return Outcome<ScalingModel>::failure(std::move(diags));
    return Outcome<ScalingModel>(std::move(model), std::move(diags));
}

const OperatingPoint* ScalingModel::reference_for(const std::string& unit_type) const {
    auto it = reference_.find(unit_type);
    return it == reference_.end() ? nullptr : &it->second;
}

}  // namespace coordsched
