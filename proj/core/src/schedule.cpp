#include "coordsched/schedule.hpp"

#include <algorithm>
#include <tuple>

#include <fmt/format.h>

namespace coordsched {

const char* to_string(SchedulerMode mode) {
    switch (mode) {
        case SchedulerMode::energy_min:
            return "energy";
        case SchedulerMode::makespan_min:
            return "makespan";
        case SchedulerMode::exhaustive:
            return "exact";
    }
    return "energy";
}

std::optional<SchedulerMode> parse_mode(const std::string& text) {
    if (text == "energy") return SchedulerMode::energy_min;
    if (text == "makespan") return SchedulerMode::makespan_min;
    if (text == "exact") return SchedulerMode::exhaustive;
    return std::nullopt;
}

const Placement* Schedule::find(const std::string& task) const {
    for (const auto& p : placements) {
        if (p.task == task) return &p;
    }
    return nullptr;
}

nlohmann::ordered_json schedule_to_json(const Schedule& schedule) {
    using json = nlohmann::ordered_json;
    json doc;
    doc["feasible"] = schedule.feasible;
    doc["mode"] = to_string(schedule.mode);
    doc["objective"] = to_string(schedule.objective);
    doc["deadline_ms"] = schedule.deadline_ms;
    json placements = json::array();
    for (const auto& p : schedule.placements) {
        json jp;
        jp["task"] = p.task;
        jp["unit"] = p.unit;
        jp["version"] = p.version;
        jp["opp"] = p.opp.id();
        jp["start_ms"] = p.start_ms;
        jp["finish_ms"] = p.finish_ms;
        placements.push_back(std::move(jp));
    }
    doc["placements"] = std::move(placements);
    json totals;
    totals["makespan_ms"] = schedule.makespan_ms;
    totals["dynamic_mj"] = schedule.dynamic_mj;
    totals["static_mj"] = schedule.static_mj;
    totals["total_mj"] = schedule.total_mj;
    doc["totals"] = std::move(totals);
    return doc;
}

Outcome<Schedule> schedule_from_json(const nlohmann::json& doc, const std::string& origin) {
    auto fail = [&](std::string message) {
        return Outcome<Schedule>::failure({make_error(SourceSpan{origin, 1, 1, 1}, std::move(message))});
    };
    try {
        Schedule s;
        if (!doc.is_object()) return fail("schedule document must be a JSON object");
        if (!doc.contains("placements") || !doc.at("placements").is_array()) return fail("missing 'placements' array");
        for (const auto& jp : doc.at("placements")) {
            Placement p;
            p.task = jp.at("task").get<std::string>();
            p.unit = jp.at("unit").get<std::string>();
            p.version = jp.at("version").get<std::string>();
            auto opp = OperatingPoint::parse(jp.at("opp").get<std::string>());
            if (!opp) return fail(fmt::format("malformed operating point for task {}", p.task));
            p.opp = *opp;
            p.start_ms = jp.at("start_ms").get<double>();
            p.finish_ms = jp.at("finish_ms").get<double>();
            s.placements.push_back(std::move(p));
        }
        if (doc.contains("feasible")) s.feasible = doc.at("feasible").get<bool>();
        if (doc.contains("deadline_ms")) s.deadline_ms = doc.at("deadline_ms").get<double>();
        if (doc.contains("mode")) {
            if (auto mode = parse_mode(doc.at("mode").get<std::string>())) s.mode = *mode;
        }
        if (doc.contains("objective")) {
            s.objective = doc.at("objective").get<std::string>() == "minimize_makespan" ? Objective::minimize_makespan
                                                                                       : Objective::minimize_energy;
        }
        if (doc.contains("totals")) {
            const auto& t = doc.at("totals");
            s.makespan_ms = t.value("makespan_ms", 0.0);
            s.dynamic_mj = t.value("dynamic_mj", 0.0);
            s.static_mj = t.value("static_mj", 0.0);
            s.total_mj = t.value("total_mj", 0.0);
        }
        return Outcome<Schedule>(std::move(s));
    } catch (const nlohmann::json::exception& e) {
        return fail(fmt::format("malformed schedule document: {}", e.what()));
    }
}

std::string render_schedule_table(const Schedule& schedule) {
    std::vector<const Placement*> rows;
    for (const auto& p : schedule.placements) rows.push_back(&p);
    std::sort(rows.begin(), rows.end(), [](const Placement* a, const Placement* b) {
        return std::tie(a->start_ms, a->task) < std::tie(b->start_ms, b->task);
    });
    std::size_t task_w = 4, unit_w = 4, ver_w = 7;
    for (const auto* p : rows) {
        task_w = std::max(task_w, p->task.size());
        unit_w = std::max(unit_w, p->unit.size());
        ver_w = std::max(ver_w, p->version.size());
    }
    std::string out = fmt::format("{:<{}}  {:<{}}  {:<{}}  {:<14}  {:>10}  {:>10}\n", "task", task_w, "unit", unit_w,
                                  "version", ver_w, "opp", "start_ms", "finish_ms");
    for (const auto* p : rows) {
        out += fmt::format("{:<{}}  {:<{}}  {:<{}}  {:<14}  {:>10.3f}  {:>10.3f}\n", p->task, task_w, p->unit, unit_w,
                           p->version, ver_w, p->opp.id(), p->start_ms, p->finish_ms);
    }
    return out;
}

}  // namespace coordsched
