#include "coordsched/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <tuple>

#include <fmt/format.h>

#include "coordsched/cost_model.hpp"
#include "coordsched/energy.hpp"
#include "coordsched/parser.hpp"

namespace coordsched {

const char* to_string(ScheduleStatus status) {
    switch (status) {
        case ScheduleStatus::ok:
            return "ok";
        case ScheduleStatus::infeasible_deadline:
            return "deadline infeasible";
        case ScheduleStatus::no_compatible_unit:
            return "no compatible unit";
        case ScheduleStatus::missing_contract:
            return "missing contract";
        case ScheduleStatus::too_large:
            return "instance too large";
        case ScheduleStatus::invalid_input:
            return "invalid input";
    }
    return "ok";
}

namespace {

constexpr double kTimeEps = 1e-9;

bool energy_better(double candidate, double incumbent) {
    return candidate < incumbent - 1e-12 * std::max(1.0, std::abs(incumbent));
}

struct Option {
    std::size_t unit = 0;
    std::string version;
    OperatingPoint opp;
    std::string opp_id;
    double duration = 0.0;
    double energy = 0.0;
};

struct Problem {
    const AppGraph* graph = nullptr;
    const Platform* platform = nullptr;
    std::vector<std::vector<Option>> options;
    /// Replica group per task when distinct units are required, -1 otherwise.
    std::vector<int> group;
    double comm_ms = 0.0;
    double static_power_mw = 0.0;

    std::size_t size() const { return options.size(); }
};

struct ProblemOutcome {
    std::optional<Problem> problem;
    ScheduleStatus status = ScheduleStatus::ok;
    std::string message;
    std::vector<std::string> warnings;
};

ProblemOutcome build_problem(const AppGraph& graph, const Platform& platform, const ContractStore& contracts,
                             const SchedulerConfig& config) {
    ProblemOutcome out;
    if (config.comm_cost_ms < 0.0 || !std::isfinite(config.comm_cost_ms)) {
        out.status = ScheduleStatus::invalid_input;
        out.message = "communication cost must be a non-negative number";
        return out;
    }
    auto model = CostModel::create(platform, contracts, config);
    if (!model) {
        out.status = ScheduleStatus::invalid_input;
        out.message = model.diagnostics().empty() ? "invalid scaling reference" : model.diagnostics().front().message;
        return out;
    }

    Problem p;
    p.graph = &graph;
    p.platform = &platform;
    p.comm_ms = config.comm_cost_ms;
    p.static_power_mw = platform.total_static_power_mw();
    p.options.resize(graph.size());
    p.group.assign(graph.size(), -1);

    for (std::size_t t = 0; t < graph.size(); ++t) {
        const Node& node = graph.node(t);
        bool compatible = false;
        std::string first_missing;
        for (const auto& version : node.versions) {
            for (std::size_t u = 0; u < platform.units.size(); ++u) {
                const ProcessingUnit& unit = platform.units[u];
                if (!version.runs_on(unit.unit_type)) continue;
                for (const auto& opp : unit.opps) {
                    compatible = true;
                    CostQuery q = model->query(node, version.name, unit, opp);
                    if (q.status != CostStatus::ok) {
                        if (first_missing.empty()) {
                            first_missing = ContractKey{node.contract_name, version.name, unit.unit_type, opp}.to_string();
                        }
                        continue;
                    }
                    p.options[t].push_back(Option{u, version.name, opp, opp.id(), q.cost.duration_ms, q.cost.energy_mj});
                }
            }
        }
        if (p.options[t].empty()) {
            out.status = compatible ? ScheduleStatus::missing_contract : ScheduleStatus::no_compatible_unit;
            out.message = compatible ? fmt::format("no contract for any option of task {} (e.g. {})", node.name, first_missing)
                                     : fmt::format("task {} has no compatible unit on platform {}", node.name, platform.name);
            return out;
        }
        if (!first_missing.empty()) {
            out.warnings.push_back(fmt::format("task {}: some options lack contracts (e.g. {})", node.name, first_missing));
        }
        std::sort(p.options[t].begin(), p.options[t].end(), [&](const Option& a, const Option& b) {
            return std::tie(platform.units[a.unit].name, a.version, a.opp_id) <
                   std::tie(platform.units[b.unit].name, b.version, b.opp_id);
        });
    }

    if (config.ft_distinct_units) {
        std::vector<std::string> originals;
        for (std::size_t t = 0; t < graph.size(); ++t) {
            const std::string& of = graph.node(t).replica_of;
            if (of.empty()) continue;
            auto it = std::find(originals.begin(), originals.end(), of);
            if (it == originals.end()) {
                p.group[t] = static_cast<int>(originals.size());
                originals.push_back(of);
            } else {
                p.group[t] = static_cast<int>(it - originals.begin());
            }
        }
    }
    out.problem = std::move(p);
    return out;
}

/// Busy intervals of one unit, sorted by start.
class UnitTimeline {
public:
    bool empty() const { return busy_.empty(); }

    /// Earliest start >= ready of an idle gap that fits `duration`.
    double earliest(double ready, double duration) const {
        double candidate = ready;
        for (const auto& [s, f] : busy_) {
            if (candidate + duration <= s + kTimeEps) return candidate;
            candidate = std::max(candidate, f);
        }
        return candidate;
    }

    void insert(double start, double finish) {
        auto it = std::lower_bound(busy_.begin(), busy_.end(), std::make_pair(start, finish));
        busy_.insert(it, {start, finish});
    }

    void erase(double start, double finish) {
        auto it = std::find(busy_.begin(), busy_.end(), std::make_pair(start, finish));
        if (it != busy_.end()) busy_.erase(it);
    }

private:
    std::vector<std::pair<double, double>> busy_;
};

double ready_time(const Problem& p, std::size_t t, const std::vector<double>& finish) {
    double ready = 0.0;
    for (std::size_t pred : p.graph->predecessors(t)) ready = std::max(ready, finish[pred] + p.comm_ms);
    return ready;
}

bool violates_groups(const Problem& p, const std::vector<std::size_t>& choice) {
    for (std::size_t a = 0; a < p.size(); ++a) {
        if (p.group[a] < 0) continue;
        for (std::size_t b = a + 1; b < p.size(); ++b) {
            if (p.group[b] == p.group[a] && p.options[a][choice[a]].unit == p.options[b][choice[b]].unit) return true;
        }
    }
    return false;
}

struct Built {
    std::vector<Placement> placements;
    double makespan = 0.0;
    double dynamic = 0.0;
};

Placement make_placement(const Problem& p, std::size_t t, const Option& o, double start) {
    return Placement{p.graph->node(t).name, p.platform->units[o.unit].name, o.version, o.opp, start, start + o.duration};
}

Built list_schedule(const Problem& p, const std::vector<std::size_t>& order, const std::vector<std::size_t>& choice) {
    Built b;
    std::vector<UnitTimeline> timelines(p.platform->units.size());
    std::vector<double> finish(p.size(), 0.0);
    for (std::size_t t : order) {
        const Option& o = p.options[t][choice[t]];
        double start = timelines[o.unit].earliest(ready_time(p, t, finish), o.duration);
        finish[t] = start + o.duration;
        timelines[o.unit].insert(start, finish[t]);
        b.placements.push_back(make_placement(p, t, o, start));
        b.makespan = std::max(b.makespan, finish[t]);
        b.dynamic += o.energy;
    }
    return b;
}

Schedule finish_schedule(const Problem& p, Built built, double deadline_ms, SchedulerMode mode) {
    Schedule s;
    s.placements = std::move(built.placements);
    s.makespan_ms = built.makespan;
    s.dynamic_mj = built.dynamic;
    s.static_mj = static_energy(*p.platform, built.makespan);
    s.total_mj = s.dynamic_mj + s.static_mj;
    s.deadline_ms = deadline_ms;
    s.feasible = built.makespan <= deadline_ms + kTimeEps;
    s.objective = p.graph->info().objective;
    s.mode = mode;
    return s;
}

std::vector<double> upward_ranks(const Problem& p) {
    std::vector<double> mean(p.size(), 0.0);
    for (std::size_t t = 0; t < p.size(); ++t) {
        std::set<std::tuple<std::string, std::string, std::string>> seen;
        double sum = 0.0;
        for (const auto& o : p.options[t]) {
            if (seen.insert({o.version, p.platform->units[o.unit].unit_type, o.opp_id}).second) sum += o.duration;
        }
        mean[t] = sum / static_cast<double>(seen.size());
    }
    std::vector<double> rank(p.size(), 0.0);
    const auto& topo = p.graph->topo_order();
    for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
        double tail = 0.0;
        for (std::size_t s : p.graph->successors(*it)) tail = std::max(tail, p.comm_ms + rank[s]);
        rank[*it] = mean[*it] + tail;
    }
    return rank;
}

/// Highest upward rank first among ready tasks, smaller name on ties.
std::vector<std::size_t> rank_order(const Problem& p) {
    auto rank = upward_ranks(p);
    std::vector<std::size_t> remaining_preds(p.size());
    for (std::size_t t = 0; t < p.size(); ++t) remaining_preds[t] = p.graph->predecessors(t).size();
    std::vector<std::size_t> ready, order;
    for (std::size_t t = 0; t < p.size(); ++t) {
        if (remaining_preds[t] == 0) ready.push_back(t);
    }
    while (!ready.empty()) {
        auto best = std::min_element(ready.begin(), ready.end(), [&](std::size_t a, std::size_t b) {
            if (rank[a] != rank[b]) return rank[a] > rank[b];
            return p.graph->node(a).name < p.graph->node(b).name;
        });
        std::size_t t = *best;
        ready.erase(best);
        order.push_back(t);
        for (std::size_t s : p.graph->successors(t)) {
            if (--remaining_preds[s] == 0) ready.push_back(s);
        }
    }
    return order;
}

struct HeftOutcome {
    std::vector<std::size_t> order;
    std::vector<std::size_t> choice;
    std::string error;
};

HeftOutcome heft(const Problem& p) {
    HeftOutcome h;
    h.order = rank_order(p);
    h.choice.assign(p.size(), 0);
    std::vector<UnitTimeline> timelines(p.platform->units.size());
    std::vector<double> finish(p.size(), 0.0);
    std::vector<bool> placed(p.size(), false);
    for (std::size_t t : h.order) {
        double ready = ready_time(p, t, finish);
        std::optional<std::size_t> best;
        double best_finish = std::numeric_limits<double>::infinity();
        double best_start = 0.0;
        for (std::size_t k = 0; k < p.options[t].size(); ++k) {
            const Option& o = p.options[t][k];
            if (p.group[t] >= 0) {
                bool clash = false;
                for (std::size_t other = 0; other < p.size(); ++other) {
                    if (placed[other] && p.group[other] == p.group[t] && p.options[other][h.choice[other]].unit == o.unit) {
                        clash = true;
                    }
                }
                if (clash) continue;
            }
            double start = timelines[o.unit].earliest(ready, o.duration);
            if (start + o.duration < best_finish - kTimeEps) {
                best = k;
                best_finish = start + o.duration;
                best_start = start;
            }
        }
        if (!best) {
            h.error = fmt::format("replicas of {} cannot be placed on distinct units", p.graph->node(t).replica_of);
            return h;
        }
        h.choice[t] = *best;
        finish[t] = best_finish;
        placed[t] = true;
        timelines[p.options[t][*best].unit].insert(best_start, best_finish);
    }
    return h;
}

ScheduleResult from_problem_error(ProblemOutcome& po) {
    ScheduleResult r;
    r.status = po.status;
    r.message = std::move(po.message);
    r.warnings = std::move(po.warnings);
    return r;
}

ScheduleResult empty_schedule(const AppGraph& graph, double deadline_ms, SchedulerMode mode) {
    ScheduleResult r;
    Schedule s;
    s.deadline_ms = deadline_ms;
    s.feasible = deadline_ms >= 0.0;
    s.objective = graph.info().objective;
    s.mode = mode;
    r.schedule = s;
    return r;
}

std::string deadline_message(double deadline_ms, double makespan_ms) {
    return fmt::format("deadline {} ms cannot be met: best achieved makespan {:.3f} ms", format_decimal(deadline_ms),
                       makespan_ms);
}

// Exact search. Tasks are placed one at a time, each at its earliest feasible start on
// its unit. Two dominance rules keep the search exact while cutting duplicates:
//  * start times are generated in non-decreasing (start, task index) order; every
//    left-justified schedule can be produced that way;
//  * among interchangeable units (same type, static power and operating points) that
//    are still empty, only the first is tried.
class Exhaustive {
public:
    Exhaustive(const Problem& p, double deadline_ms, bool minimize_makespan)
        : p_(p), deadline_(deadline_ms), makespan_objective_(minimize_makespan) {
        const std::size_t n = p.size();
        placed_.assign(n, false);
        finish_.assign(n, 0.0);
        choice_.assign(n, 0);
        start_.assign(n, 0.0);
        timelines_.resize(p.platform->units.size());
        min_duration_.assign(n, std::numeric_limits<double>::infinity());
        min_energy_.assign(n, std::numeric_limits<double>::infinity());
        for (std::size_t t = 0; t < n; ++t) {
            for (const auto& o : p.options[t]) {
                min_duration_[t] = std::min(min_duration_[t], o.duration);
                min_energy_[t] = std::min(min_energy_[t], o.energy);
            }
        }
        tail_.assign(n, 0.0);
        const auto& topo = p.graph->topo_order();
        for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
            for (std::size_t s : p.graph->successors(*it)) {
                tail_[*it] = std::max(tail_[*it], p.comm_ms + min_duration_[s] + tail_[s]);
            }
        }
        const auto& units = p.platform->units;
        unit_class_.resize(units.size());
        for (std::size_t u = 0; u < units.size(); ++u) {
            unit_class_[u] = u;
            for (std::size_t v = 0; v < u; ++v) {
                if (units[v].unit_type == units[u].unit_type && units[v].static_power_mw == units[u].static_power_mw &&
                    units[v].opps == units[u].opps) {
                    unit_class_[u] = unit_class_[v];
                    break;
                }
            }
        }
        remaining_min_energy_ = 0.0;
        for (std::size_t t = 0; t < n; ++t) remaining_min_energy_ += min_energy_[t];
    }

    void run() { dfs(0, 0.0, 0.0, 0.0); }

    bool found() const { return best_.has_value(); }
    const Built& best() const { return *best_; }

private:
    double static_mj(double makespan) const { return p_.static_power_mw * makespan / 1000.0; }

    bool better(double makespan, double total) const {
        if (!best_) return true;
        if (makespan_objective_) {
            if (makespan < best_makespan_ - kTimeEps) return true;
            if (makespan > best_makespan_ + kTimeEps) return false;
        }
        return energy_better(total, best_total_);
    }

    void dfs(std::size_t depth, double makespan, double dynamic, double last_start) {
        const std::size_t n = p_.size();
        if (depth == n) {
            double total = dynamic + static_mj(makespan);
            if (!makespan_objective_ && makespan > deadline_ + kTimeEps) return;
            if (better(makespan, total)) {
                Built b;
                for (std::size_t t : sequence_) b.placements.push_back(make_placement(p_, t, p_.options[t][choice_[t]], start_[t]));
                b.makespan = makespan;
                b.dynamic = dynamic;
                best_ = std::move(b);
                best_makespan_ = makespan;
                best_total_ = total;
            }
            return;
        }
        for (std::size_t t = 0; t < n; ++t) {
            if (placed_[t]) continue;
            bool ready = true;
            for (std::size_t pred : p_.graph->predecessors(t)) ready = ready && placed_[pred];
            if (!ready) continue;
            double ready_at = ready_time(p_, t, finish_);
            for (std::size_t k = 0; k < p_.options[t].size(); ++k) {
                const Option& o = p_.options[t][k];
                if (skip_symmetric(o.unit) || group_clash(t, o.unit)) continue;
                double start = timelines_[o.unit].earliest(ready_at, o.duration);
                if (depth > 0) {
                    if (start < last_start - kTimeEps) continue;
                    if (start <= last_start + kTimeEps && t < sequence_.back()) continue;
                }
                double finish = start + o.duration;
                double lb_makespan = std::max(makespan, finish + tail_[t]);
                for (std::size_t u = 0; u < n; ++u) {
                    if (!placed_[u] && u != t) lb_makespan = std::max(lb_makespan, start + min_duration_[u] + tail_[u]);
                }
                double lb_energy = dynamic + o.energy + (remaining_min_energy_ - min_energy_[t]) + static_mj(lb_makespan);
                if (makespan_objective_) {
                    if (best_ && (lb_makespan > best_makespan_ + kTimeEps ||
                                  (lb_makespan >= best_makespan_ - kTimeEps && !energy_better(lb_energy, best_total_)))) {
                        continue;
                    }
                } else {
                    if (lb_makespan > deadline_ + kTimeEps) continue;
                    if (best_ && !energy_better(lb_energy, best_total_)) continue;
                }

                placed_[t] = true;
                finish_[t] = finish;
                start_[t] = start;
                choice_[t] = k;
                timelines_[o.unit].insert(start, finish);
                sequence_.push_back(t);
                double saved_remaining = remaining_min_energy_;
                remaining_min_energy_ -= min_energy_[t];

                dfs(depth + 1, std::max(makespan, finish), dynamic + o.energy, start);

                remaining_min_energy_ = saved_remaining;
                sequence_.pop_back();
                timelines_[o.unit].erase(start, finish);
                placed_[t] = false;
                finish_[t] = 0.0;
            }
        }
    }

    bool skip_symmetric(std::size_t unit) const {
        if (!timelines_[unit].empty()) return false;
        for (std::size_t v = 0; v < unit; ++v) {
            if (unit_class_[v] == unit_class_[unit] && timelines_[v].empty()) return true;
        }
        return false;
    }

    bool group_clash(std::size_t t, std::size_t unit) const {
        if (p_.group[t] < 0) return false;
        for (std::size_t other : sequence_) {
            if (p_.group[other] == p_.group[t] && p_.options[other][choice_[other]].unit == unit) return true;
        }
        return false;
    }

    const Problem& p_;
    double deadline_;
    bool makespan_objective_;
    std::vector<bool> placed_;
    std::vector<double> finish_, start_;
    std::vector<std::size_t> choice_, sequence_;
    std::vector<UnitTimeline> timelines_;
    std::vector<double> min_duration_, min_energy_, tail_;
    std::vector<std::size_t> unit_class_;
    double remaining_min_energy_ = 0.0;
    std::optional<Built> best_;
    double best_makespan_ = 0.0;
    double best_total_ = 0.0;
};

}  // namespace

ScheduleResult schedule_makespan(const AppGraph& graph, const Platform& platform, const ContractStore& contracts,
                                 const SchedulerConfig& config, double deadline_ms) {
    if (graph.empty()) return empty_schedule(graph, deadline_ms, SchedulerMode::makespan_min);
    auto po = build_problem(graph, platform, contracts, config);
    if (!po.problem) return from_problem_error(po);
    const Problem& p = *po.problem;
    HeftOutcome h = heft(p);
    ScheduleResult r;
    r.warnings = std::move(po.warnings);
    if (!h.error.empty()) {
        r.status = ScheduleStatus::no_compatible_unit;
        r.message = h.error;
        return r;
    }
    r.schedule = finish_schedule(p, list_schedule(p, h.order, h.choice), deadline_ms, SchedulerMode::makespan_min);
    if (!r.schedule->feasible) {
        r.status = ScheduleStatus::infeasible_deadline;
        r.message = deadline_message(deadline_ms, r.schedule->makespan_ms);
    }
    return r;
}

ScheduleResult schedule_energy(const AppGraph& graph, const Platform& platform, const ContractStore& contracts,
                               const SchedulerConfig& config, double deadline_ms) {
    if (graph.empty()) return empty_schedule(graph, deadline_ms, SchedulerMode::energy_min);
    auto po = build_problem(graph, platform, contracts, config);
    if (!po.problem) return from_problem_error(po);
    const Problem& p = *po.problem;
    HeftOutcome h = heft(p);
    ScheduleResult r;
    r.warnings = std::move(po.warnings);
    if (!h.error.empty()) {
        r.status = ScheduleStatus::no_compatible_unit;
        r.message = h.error;
        return r;
    }

    std::vector<std::size_t> choice = h.choice;
    Built current = list_schedule(p, h.order, choice);
    if (current.makespan > deadline_ms + kTimeEps) {
        r.status = ScheduleStatus::infeasible_deadline;
        r.message = deadline_message(deadline_ms, current.makespan);
        r.schedule = finish_schedule(p, std::move(current), deadline_ms, SchedulerMode::energy_min);
        return r;
    }

    std::vector<std::size_t> by_name(p.size());
    for (std::size_t t = 0; t < p.size(); ++t) by_name[t] = t;
    std::sort(by_name.begin(), by_name.end(),
              [&](std::size_t a, std::size_t b) { return graph.node(a).name < graph.node(b).name; });

    double current_total = current.dynamic + static_energy(platform, current.makespan);
    for (;;) {
        std::optional<std::pair<std::size_t, std::size_t>> move;
        double best_total = current_total;
        std::optional<Built> best_built;
        for (std::size_t t : by_name) {
            for (std::size_t k = 0; k < p.options[t].size(); ++k) {
                if (k == choice[t]) continue;
                std::vector<std::size_t> candidate = choice;
                candidate[t] = k;
                if (violates_groups(p, candidate)) continue;
                Built b = list_schedule(p, h.order, candidate);
                if (b.makespan > deadline_ms + kTimeEps) continue;
                double total = b.dynamic + static_energy(platform, b.makespan);
                if (energy_better(total, best_total)) {
                    best_total = total;
                    move = {t, k};
                    best_built = std::move(b);
                }
            }
        }
        if (!move) break;
        choice[move->first] = move->second;
        current = std::move(*best_built);
        current_total = best_total;
    }
    r.schedule = finish_schedule(p, std::move(current), deadline_ms, SchedulerMode::energy_min);
    return r;
}

ScheduleResult schedule_exhaustive(const AppGraph& graph, const Platform& platform, const ContractStore& contracts,
                                   const SchedulerConfig& config, double deadline_ms) {
    if (graph.size() > config.exhaustive_cap) {
        ScheduleResult r;
        r.status = ScheduleStatus::too_large;
        r.message = fmt::format("exhaustive search is limited to {} tasks; graph has {}", config.exhaustive_cap, graph.size());
        return r;
    }
    if (graph.empty()) return empty_schedule(graph, deadline_ms, SchedulerMode::exhaustive);
    auto po = build_problem(graph, platform, contracts, config);
    if (!po.problem) return from_problem_error(po);
    const Problem& p = *po.problem;
    ScheduleResult r;
    r.warnings = std::move(po.warnings);
    if (graph.size() > 6) {
        r.warnings.push_back(fmt::format("exhaustive search over {} tasks may take a long time", graph.size()));
    }

    bool makespan_objective = graph.info().objective == Objective::minimize_makespan;
    Exhaustive search(p, deadline_ms, makespan_objective);
    search.run();
    if (!search.found() && !makespan_objective) {
        Exhaustive fastest(p, deadline_ms, true);
        fastest.run();
        if (fastest.found()) {
            r.status = ScheduleStatus::infeasible_deadline;
            r.message = deadline_message(deadline_ms, fastest.best().makespan);
            r.schedule = finish_schedule(p, fastest.best(), deadline_ms, SchedulerMode::exhaustive);
            return r;
        }
    }
    if (!search.found()) {
        r.status = ScheduleStatus::no_compatible_unit;
        r.message = "no placement satisfies the distinct-unit constraint";
        return r;
    }
    r.schedule = finish_schedule(p, search.best(), deadline_ms, SchedulerMode::exhaustive);
    if (!r.schedule->feasible) {
        r.status = ScheduleStatus::infeasible_deadline;
        r.message = deadline_message(deadline_ms, r.schedule->makespan_ms);
    }
    return r;
}

ScheduleResult run_scheduler(const AppGraph& graph, const Platform& platform, const ContractStore& contracts,
                             const SchedulerConfig& config, double deadline_ms) {
    switch (config.mode) {
        case SchedulerMode::energy_min:
            return schedule_energy(graph, platform, contracts, config, deadline_ms);
        case SchedulerMode::makespan_min:
            return schedule_makespan(graph, platform, contracts, config, deadline_ms);
        case SchedulerMode::exhaustive:
            return schedule_exhaustive(graph, platform, contracts, config, deadline_ms);
    }
    return {};
}

ScheduleResult schedule_with_assignment(const AppGraph& graph, const Platform& platform,
                                        const ContractStore& contracts, const SchedulerConfig& config,
                                        double deadline_ms, const std::map<std::string, Assignment>& assignment) {
    if (graph.empty()) return empty_schedule(graph, deadline_ms, config.mode);
    auto po = build_problem(graph, platform, contracts, config);
    if (!po.problem) return from_problem_error(po);
    const Problem& p = *po.problem;
    ScheduleResult r;
    std::vector<std::size_t> choice(p.size(), 0);
    for (std::size_t t = 0; t < p.size(); ++t) {
        const std::string& name = graph.node(t).name;
        auto it = assignment.find(name);
        if (it == assignment.end()) {
            r.status = ScheduleStatus::invalid_input;
            r.message = fmt::format("task {} is not assigned", name);
            return r;
        }
        bool matched = false;
        for (std::size_t k = 0; k < p.options[t].size(); ++k) {
            const Option& o = p.options[t][k];
            if (platform.units[o.unit].name == it->second.unit && o.version == it->second.version && o.opp == it->second.opp) {
                choice[t] = k;
                matched = true;
                break;
            }
        }
        if (!matched) {
            r.status = ScheduleStatus::invalid_input;
            r.message = fmt::format("task {} cannot run version {} on {} at {}", name, it->second.version, it->second.unit,
                                    it->second.opp.id());
            return r;
        }
    }
    if (violates_groups(p, choice)) {
        r.status = ScheduleStatus::invalid_input;
        r.message = "assignment places replicas of one component on the same unit";
        return r;
    }
    r.schedule = finish_schedule(p, list_schedule(p, rank_order(p), choice), deadline_ms, config.mode);
    if (!r.schedule->feasible) {
        r.status = ScheduleStatus::infeasible_deadline;
        r.message = deadline_message(deadline_ms, r.schedule->makespan_ms);
    }
    return r;
}

Outcome<EnergyBreakdown> predict_energy(const AppGraph& graph, const Schedule& schedule, const Platform& platform,
                                        const ContractStore& contracts, const SchedulerConfig& config) {
    auto model = CostModel::create(platform, contracts, config);
    if (!model) return Outcome<EnergyBreakdown>::failure(model.diagnostics());
    EnergyBreakdown e;
    double makespan = 0.0;
    for (const auto& pl : schedule.placements) {
        auto idx = graph.find(pl.task);
        const ProcessingUnit* unit = platform.find_unit(pl.unit);
        if (!idx || unit == nullptr) {
            return Outcome<EnergyBreakdown>::failure(
                {make_error({}, fmt::format("placement {} on {} does not match the graph or platform", pl.task, pl.unit))});
        }
        CostQuery q = model->query(graph.node(*idx), pl.version, *unit, pl.opp);
        if (q.status != CostStatus::ok) {
            return Outcome<EnergyBreakdown>::failure(
                {make_error({}, fmt::format("{}: {} for {} on {} at {}", pl.task, to_string(q.status), pl.version, pl.unit,
                                            pl.opp.id()))});
        }
        e.dynamic_mj += q.cost.energy_mj;
        makespan = std::max(makespan, pl.finish_ms);
    }
    e.static_mj = static_energy(platform, makespan);
    e.total_mj = e.dynamic_mj + e.static_mj;
    return Outcome<EnergyBreakdown>(e);
}

std::optional<double> critical_path_lower_bound(const AppGraph& graph, const Platform& platform,
                                                const ContractStore& contracts, const SchedulerConfig& config) {
    auto po = build_problem(graph, platform, contracts, config);
    if (!po.problem) return std::nullopt;
    const Problem& p = *po.problem;
    std::vector<double> finish(p.size(), 0.0);
    double bound = 0.0;
    for (std::size_t t : graph.topo_order()) {
        double shortest = std::numeric_limits<double>::infinity();
        for (const auto& o : p.options[t]) shortest = std::min(shortest, o.duration);
        finish[t] = ready_time(p, t, finish) + shortest;
        bound = std::max(bound, finish[t]);
    }
    return bound;
}

}  // namespace coordsched
