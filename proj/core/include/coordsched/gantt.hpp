#pragma once

#include <span>
#include <string>
#include <vector>

#include "coordsched/platform.hpp"
#include "coordsched/schedule.hpp"
#include "coordsched/simulator.hpp"

namespace coordsched {

struct GanttOptions {
    /// Characters available for the time axis.
    int width = 64;
};

/// Fixed-width chart: a header with the time axis, then one row per unit that runs at
/// least one task. Rows follow `unit_order` when given, otherwise unit name order.
/// Each task fills its columns with its name, truncated to fit, padded with '='; idle
/// columns are '.'.
std::string render_gantt(std::span<const Placement> placements, const std::vector<std::string>& unit_order = {},
                         GanttOptions options = {});

std::string gantt(const Schedule& schedule, const Platform* platform = nullptr, GanttOptions options = {});
std::string gantt(const SimReport& report, const Platform* platform = nullptr, GanttOptions options = {});

}  // namespace coordsched
