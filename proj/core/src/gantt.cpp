#include "coordsched/gantt.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

namespace coordsched {

std::string render_gantt(std::span<const Placement> placements, const std::vector<std::string>& unit_order,
                         GanttOptions options) {
    const int width = std::max(options.width, 8);
    double makespan = 0.0;
    for (const auto& p : placements) makespan = std::max(makespan, p.finish_ms);

    std::vector<std::string> rows;
    for (const auto& u : unit_order) {
        bool used = std::any_of(placements.begin(), placements.end(), [&](const Placement& p) { return p.unit == u; });
        if (used) rows.push_back(u);
    }
    for (const auto& p : placements) {
        if (std::find(rows.begin(), rows.end(), p.unit) == rows.end() &&
            std::find(unit_order.begin(), unit_order.end(), p.unit) == unit_order.end()) {
            rows.push_back(p.unit);
        }
    }
    if (unit_order.empty()) std::sort(rows.begin(), rows.end());

    std::size_t label_w = 4;
    for (const auto& r : rows) label_w = std::max(label_w, r.size());

    std::string axis(static_cast<std::size_t>(width), ' ');
    std::string end_label = fmt::format("{:.3f}ms", makespan);
    axis.replace(0, 1, "0");
    if (end_label.size() + 2 <= axis.size()) axis.replace(axis.size() - end_label.size(), end_label.size(), end_label);
    std::string out = fmt::format("{:<{}} |{}|\n", "unit", label_w, axis);

    const double scale = makespan > 0.0 ? makespan / width : 1.0;
    for (const auto& unit : rows) {
        std::string line(static_cast<std::size_t>(width), '.');
        std::vector<const Placement*> tasks;
        for (const auto& p : placements) {
            if (p.unit == unit) tasks.push_back(&p);
        }
        std::sort(tasks.begin(), tasks.end(), [](const Placement* a, const Placement* b) { return a->start_ms < b->start_ms; });
        for (const Placement* p : tasks) {
            int begin = static_cast<int>(std::floor(p->start_ms / scale + 1e-9));
            int end = static_cast<int>(std::round(p->finish_ms / scale));
            begin = std::clamp(begin, 0, width - 1);
            end = std::clamp(std::max(end, begin + 1), begin + 1, width);
            std::string cell = p->task.substr(0, static_cast<std::size_t>(end - begin));
            cell.resize(static_cast<std::size_t>(end - begin), '=');
            line.replace(static_cast<std::size_t>(begin), cell.size(), cell);
        }
        out += fmt::format("{:<{}} |{}|\n", unit, label_w, line);
    }
    return out;
}

namespace {

std::vector<std::string> unit_names(const Platform* platform) {
    std::vector<std::string> names;
    if (platform != nullptr) {
        for (const auto& u : platform->units) names.push_back(u.name);
    }
    return names;
}

}  // namespace

std::string gantt(const Schedule& schedule, const Platform* platform, GanttOptions options) {
    return render_gantt(schedule.placements, unit_names(platform), options);
}

std::string gantt(const SimReport& report, const Platform* platform, GanttOptions options) {
    return render_gantt(report.executed, unit_names(platform), options);
}

}  // namespace coordsched
