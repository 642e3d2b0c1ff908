#pragma once

#include <map>
#include <string>

#include "coordsched/diagnostic.hpp"
#include "coordsched/platform.hpp"

namespace coordsched {

// First-order CMOS model. Cycle count is fixed per task, so execution time scales
// with 1/f and switching energy with V^2. Units: ms, mW, mJ (mW * ms = uJ).

/// t = t_ref * f_ref / f_target
double scale_time(double t_ref_ms, const OperatingPoint& ref, const OperatingPoint& target);

/// e = e_ref * (V_target / V_ref)^2
double scale_energy(double e_ref_mj, const OperatingPoint& ref, const OperatingPoint& target);

/// Always-on static power of every unit integrated over the makespan, in mJ.
double static_energy(const Platform& platform, double makespan_ms);

/// Reference operating point per unit type, from which contract figures given at
/// `opp = "ref"` are scaled.
class ScalingModel {
public:
    enum class Kind { cycle_scaling };

    /// Default reference for a type is the highest-frequency operating point shared by
    /// every unit of that type. `overrides` replaces it per type; an override must exist
    /// on every unit of its type.
    static Outcome<ScalingModel> from_platform(const Platform& platform,
                                               const std::map<std::string, OperatingPoint>& overrides = {});

    Kind kind() const { return Kind::cycle_scaling; }
    const OperatingPoint* reference_for(const std::string& unit_type) const;
    const std::map<std::string, OperatingPoint>& references() const { return reference_; }

private:
    std::map<std::string, OperatingPoint> reference_;
};

}  // namespace coordsched
