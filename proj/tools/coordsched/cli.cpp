#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <variant>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "coordsched/contracts.hpp"
#include "coordsched/ft_expansion.hpp"
#include "coordsched/gantt.hpp"
#include "coordsched/graph.hpp"
#include "coordsched/parser.hpp"
#include "coordsched/platform.hpp"
#include "coordsched/scheduler.hpp"
#include "coordsched/simulator.hpp"
#include "coordsched/version.hpp"
#include "manifest.hpp"

namespace coordsched::cli {

namespace {

using json = nlohmann::ordered_json;

struct GlobalOptions {
    std::string json_path;
    bool no_ft = false;
    bool expand_ft = false;
    bool use_average = false;
    std::int64_t seed = 0;  // reserved: all solvers are deterministic
};

struct ModelOptions {
    std::string app;
    std::string platform;
    std::string contracts;
    std::string mode = "energy";
    std::optional<double> deadline_override;
    bool ft_distinct_units = false;
    double comm_cost_ms = 0.0;
    std::size_t exhaustive_cap = 8;
};

struct LoadedApp {
    std::string path;
    std::string text;
    AppGraph graph;
};

struct LoadedModel {
    std::string platform_text;
    std::string contracts_text;
    Platform platform;
    ContractStore contracts;
};

void print_diagnostics(std::ostream& err, const std::vector<Diagnostic>& diags) { err << render_diagnostics(diags); }

/// Reads, parses and validates an application; expands fault tolerance unless disabled.
/// Returns the exit code on failure.
std::variant<LoadedApp, int> load_app(const std::string& path, bool expand, std::ostream& err) {
    auto text = read_text_file(path);
    if (!text) {
        err << fmt::format("coordsched: cannot read '{}'\n", path);
        return kUsageOrIo;
    }
    auto decl = parse_app(*text, path);
    if (!decl) {
        print_diagnostics(err, decl.diagnostics());
        return kDiagnostics;
    }
    auto graph = build_graph(decl.value());
    print_diagnostics(err, graph.diagnostics());
    if (!graph) return kDiagnostics;
    if (!expand) return LoadedApp{path, std::move(*text), std::move(graph).value()};
    auto expanded = expand_ft(graph.value());
    if (!expanded) {
        print_diagnostics(err, expanded.diagnostics());
        return kDiagnostics;
    }
    return LoadedApp{path, std::move(*text), std::move(expanded).value()};
}

std::variant<LoadedModel, int> load_model(const ModelOptions& opts, std::ostream& err) {
    LoadedModel m;
    auto ptext = read_text_file(opts.platform);
    if (!ptext) {
        err << fmt::format("coordsched: cannot read '{}'\n", opts.platform);
        return kUsageOrIo;
    }
    auto ctext = read_text_file(opts.contracts);
    if (!ctext) {
        err << fmt::format("coordsched: cannot read '{}'\n", opts.contracts);
        return kUsageOrIo;
    }
    auto platform = parse_platform(*ptext, opts.platform);
    print_diagnostics(err, platform.diagnostics());
    if (!platform) return kModelInputs;
    auto contracts = parse_contracts(*ctext, opts.contracts);
    print_diagnostics(err, contracts.diagnostics());
    if (!contracts) return kModelInputs;
    m.platform_text = std::move(*ptext);
    m.contracts_text = std::move(*ctext);
    m.platform = std::move(platform).value();
    m.contracts = std::move(contracts).value();
    return m;
}

SchedulerConfig make_config(const ModelOptions& opts, const GlobalOptions& global) {
    SchedulerConfig config;
    config.mode = parse_mode(opts.mode).value_or(SchedulerMode::energy_min);
    config.use_average = global.use_average;
    config.ft_distinct_units = opts.ft_distinct_units;
    config.comm_cost_ms = opts.comm_cost_ms;
    config.exhaustive_cap = opts.exhaustive_cap;
    return config;
}

json config_to_json(const SchedulerConfig& config, bool ft_enabled, double deadline_ms) {
    json c;
    c["mode"] = to_string(config.mode);
    c["deadline_ms"] = deadline_ms;
    c["use_average"] = config.use_average;
    c["fault_tolerance"] = ft_enabled;
    c["ft_distinct_units"] = config.ft_distinct_units;
    c["comm_cost_ms"] = config.comm_cost_ms;
    c["exhaustive_cap"] = config.exhaustive_cap;
    return c;
}

RunManifest make_manifest(const LoadedApp& app, const ModelOptions& opts, const LoadedModel& model, json config) {
    RunManifest m;
    m.app = {app.path, sha256_hex(app.text)};
    m.platform = {opts.platform, sha256_hex(model.platform_text)};
    m.contracts = {opts.contracts, sha256_hex(model.contracts_text)};
    m.config = std::move(config);
    m.tool_version = kVersion;
    return m;
}

std::string render_manifest(const RunManifest& m) {
    std::string out = fmt::format("manifest: coordsched {}\n", m.tool_version);
    out += fmt::format("  app       {}  sha256:{}\n", m.app.path, m.app.sha256);
    out += fmt::format("  platform  {}  sha256:{}\n", m.platform.path, m.platform.sha256);
    out += fmt::format("  contracts {}  sha256:{}\n", m.contracts.path, m.contracts.sha256);
    out += fmt::format("  config    {}\n", m.config.dump());
    return out;
}

bool write_file(const std::string& path, const std::string& content, std::ostream& err) {
    std::ofstream f(path, std::ios::binary);
    if (f) f << content;
    if (!f) {
        err << fmt::format("coordsched: cannot write '{}'\n", path);
        return false;
    }
    return true;
}

int exit_code_for(ScheduleStatus status) {
    switch (status) {
        case ScheduleStatus::ok:
            return kOk;
        case ScheduleStatus::infeasible_deadline:
        case ScheduleStatus::no_compatible_unit:
            return kInfeasible;
        case ScheduleStatus::missing_contract:
            return kModelInputs;
        case ScheduleStatus::too_large:
        case ScheduleStatus::invalid_input:
            return kUsageOrIo;
    }
    return kInfeasible;
}

void print_schedule(std::ostream& out, const AppGraph& graph, const Platform& platform, const Schedule& s) {
    out << fmt::format("app {}: {} tasks on {}, mode {}, deadline {:.3f} ms\n", graph.info().name, graph.size(),
                       platform.name, to_string(s.mode), s.deadline_ms);
    out << render_schedule_table(s) << '\n';
    out << gantt(s, &platform) << '\n';
    out << fmt::format("predicted: makespan {:.3f} ms, dynamic {:.3f} mJ, static {:.3f} mJ, total {:.3f} mJ ({})\n",
                       s.makespan_ms, s.dynamic_mj, s.static_mj, s.total_mj, s.feasible ? "feasible" : "infeasible");
}

// ---------------------------------------------------------------------------
// check

int cmd_check(const std::string& path, bool dump_graph, const GlobalOptions& global, std::ostream& out,
              std::ostream& err) {
    auto loaded = load_app(path, !global.no_ft, err);
    if (auto* code = std::get_if<int>(&loaded)) return *code;
    const AppGraph& graph = std::get<LoadedApp>(loaded).graph;
    if (global.expand_ft) out << print_app(graph_to_decl(graph));
    auto doc = graph_to_json(graph);
    if (dump_graph) out << doc.dump(2) << '\n';
    if (!global.expand_ft && !dump_graph) {
        out << fmt::format("{}: ok ({} components, {} edges)\n", path, graph.size(), graph.edges().size());
    }
    if (!global.json_path.empty() && !write_file(global.json_path, doc.dump(2) + "\n", err)) return kUsageOrIo;
    return kOk;
}

// ---------------------------------------------------------------------------
// schedule / run

struct ScheduledRun {
    LoadedApp app;
    LoadedModel model;
    SchedulerConfig config;
    double deadline_ms = 0.0;
    ScheduleResult result;
    RunManifest manifest;
};

std::variant<ScheduledRun, int> schedule_stage(const ModelOptions& opts, const GlobalOptions& global, std::ostream& err) {
    if (!parse_mode(opts.mode)) {
        err << fmt::format("coordsched: unknown mode '{}' (expected energy, makespan or exact)\n", opts.mode);
        return kUsageOrIo;
    }
    auto app = load_app(opts.app, !global.no_ft, err);
    if (auto* code = std::get_if<int>(&app)) return *code;
    auto model = load_model(opts, err);
    if (auto* code = std::get_if<int>(&model)) return *code;

    ScheduledRun run{std::move(std::get<LoadedApp>(app)), std::move(std::get<LoadedModel>(model)), make_config(opts, global),
                     0.0, {}, {}};
    run.deadline_ms = opts.deadline_override.value_or(run.app.graph.info().deadline_ms);

    auto missing = coverage_report(run.model.contracts, run.app.graph, run.model.platform);
    for (const auto& key : missing) err << fmt::format("coordsched: warning: no contract for {}\n", key.to_string());

    run.result = run_scheduler(run.app.graph, run.model.platform, run.model.contracts, run.config, run.deadline_ms);
    for (const auto& w : run.result.warnings) err << "coordsched: warning: " << w << '\n';
    run.manifest = make_manifest(run.app, opts, run.model, config_to_json(run.config, !global.no_ft, run.deadline_ms));
    return run;
}

json schedule_document(const ScheduledRun& run) {
    json doc;
    doc["app"] = run.app.graph.info().name;
    doc["status"] = to_string(run.result.status);
    const json body = schedule_to_json(*run.result.schedule);
    for (const auto& [key, value] : body.items()) doc[key] = value;
    doc["manifest"] = run.manifest.to_json();
    return doc;
}

int cmd_schedule(const ModelOptions& opts, const GlobalOptions& global, std::ostream& out, std::ostream& err) {
    auto staged = schedule_stage(opts, global, err);
    if (auto* code = std::get_if<int>(&staged)) return *code;
    auto& run = std::get<ScheduledRun>(staged);
    if (!run.result.schedule) {
        err << fmt::format("coordsched: scheduling failed: {}\n", run.result.message);
        return exit_code_for(run.result.status);
    }
    print_schedule(out, run.app.graph, run.model.platform, *run.result.schedule);
    if (!global.json_path.empty() && !write_file(global.json_path, schedule_document(run).dump(2) + "\n", err)) {
        return kUsageOrIo;
    }
    if (!run.result.ok()) err << fmt::format("coordsched: {}\n", run.result.message);
    return exit_code_for(run.result.status);
}

int cmd_run(const ModelOptions& opts, const GlobalOptions& global, std::ostream& out, std::ostream& err) {
    auto staged = schedule_stage(opts, global, err);
    if (auto* code = std::get_if<int>(&staged)) return *code;
    auto& run = std::get<ScheduledRun>(staged);
    if (!run.result.ok()) {
        if (run.result.schedule) print_schedule(out, run.app.graph, run.model.platform, *run.result.schedule);
        err << fmt::format("coordsched: scheduling failed: {}\n", run.result.message);
        return exit_code_for(run.result.status);
    }
    const Schedule& s = *run.result.schedule;
    print_schedule(out, run.app.graph, run.model.platform, s);

    auto sim = simulate(run.app.graph, s, run.model.platform, run.model.contracts, run.config, run.deadline_ms);
    if (!sim.ok()) {
        err << fmt::format("coordsched: simulation rejected the schedule: {}\n", sim.violation->message);
        return kSimulationViolation;
    }
    const SimReport& report = *sim.report;
    out << "\nsimulation:\n" << render_energy_breakdown(report);
    out << fmt::format("agreement: |dE| = {:.3e} mJ, |dmakespan| = {:.3e} ms\n", std::abs(report.total_mj - s.total_mj),
                       std::abs(report.makespan_ms - s.makespan_ms));
    out << '\n' << render_manifest(run.manifest);

    if (!global.json_path.empty()) {
        json doc = schedule_document(run);
        doc["simulation"] = report_to_json(report);
        if (!write_file(global.json_path, doc.dump(2) + "\n", err)) return kUsageOrIo;
    }
    return kOk;
}

// ---------------------------------------------------------------------------
// simulate

int cmd_simulate(ModelOptions opts, GlobalOptions global, const std::string& schedule_path, const std::string& trace_path,
                 bool allow_drift, std::ostream& out, std::ostream& err) {
    auto stext = read_text_file(schedule_path);
    if (!stext) {
        err << fmt::format("coordsched: cannot read '{}'\n", schedule_path);
        return kUsageOrIo;
    }
    nlohmann::json sdoc = nlohmann::json::parse(*stext, nullptr, false);
    if (sdoc.is_discarded()) {
        err << fmt::format("{}: error: not valid JSON\n", schedule_path);
        return kUsageOrIo;
    }
    auto schedule = schedule_from_json(sdoc, schedule_path);
    if (!schedule) {
        print_diagnostics(err, schedule.diagnostics());
        return kUsageOrIo;
    }

    std::optional<RunManifest> manifest;
    if (sdoc.is_object() && sdoc.contains("manifest")) manifest = RunManifest::from_json(sdoc.at("manifest"));
    if (manifest) {
        // The schedule was produced under this configuration; replay it the same way.
        const auto& c = manifest->config;
        if (c.contains("use_average") && c["use_average"].get<bool>()) global.use_average = true;
        if (c.contains("fault_tolerance") && !c["fault_tolerance"].get<bool>()) global.no_ft = true;
        if (c.contains("ft_distinct_units") && c["ft_distinct_units"].get<bool>()) opts.ft_distinct_units = true;
        if (c.contains("comm_cost_ms") && opts.comm_cost_ms == 0.0) opts.comm_cost_ms = c["comm_cost_ms"].get<double>();
    }

    auto app = load_app(opts.app, !global.no_ft, err);
    if (auto* code = std::get_if<int>(&app)) return *code;
    auto model = load_model(opts, err);
    if (auto* code = std::get_if<int>(&model)) return *code;
    const auto& loaded = std::get<LoadedApp>(app);
    const auto& m = std::get<LoadedModel>(model);

    if (manifest) {
        std::vector<std::string> drift;
        if (manifest->app.sha256 != sha256_hex(loaded.text)) drift.push_back("app");
        if (manifest->platform.sha256 != sha256_hex(m.platform_text)) drift.push_back("platform");
        if (manifest->contracts.sha256 != sha256_hex(m.contracts_text)) drift.push_back("contracts");
        for (const auto& what : drift) {
            err << fmt::format("coordsched: {}: {} input differs from the one the schedule was computed for\n",
                               allow_drift ? "warning" : "error", what);
        }
        if (!drift.empty() && !allow_drift) return kModelInputs;
    }

    SchedulerConfig config = make_config(opts, global);
    double deadline = opts.deadline_override.value_or(schedule->deadline_ms > 0.0 ? schedule->deadline_ms
                                                                                    : loaded.graph.info().deadline_ms);
    auto sim = simulate(loaded.graph, schedule.value(), m.platform, m.contracts, config, deadline);
    if (!sim.ok()) {
        err << fmt::format("coordsched: simulation rejected the schedule: {}\n", sim.violation->message);
        return kSimulationViolation;
    }
    const SimReport& report = *sim.report;
    out << gantt(report, &m.platform) << '\n' << render_energy_breakdown(report);
    if (!schedule->placements.empty() || schedule->total_mj != 0.0) {
        out << fmt::format("agreement with schedule file: |dE| = {:.3e} mJ, |dmakespan| = {:.3e} ms\n",
                           std::abs(report.total_mj - schedule->total_mj),
                           std::abs(report.makespan_ms - schedule->makespan_ms));
    }
    if (!trace_path.empty() && !write_file(trace_path, trace_to_jsonl(report.event_trace), err)) return kUsageOrIo;
    if (!global.json_path.empty() && !write_file(global.json_path, report_to_json(report).dump(2) + "\n", err)) {
        return kUsageOrIo;
    }
    return kOk;
}

// ---------------------------------------------------------------------------
// compare

struct Variant {
    std::string label;
    std::string mode = "energy";
    bool ft = true;
    std::vector<std::pair<std::string, int>> replicas;
    bool use_average = false;
    bool distinct = false;
    std::optional<double> deadline;
};

std::optional<Variant> parse_variant(const std::string& text, const ModelOptions& defaults, const GlobalOptions& global,
                                     std::string& error) {
    Variant v;
    v.mode = defaults.mode;
    v.ft = !global.no_ft;
    v.use_average = global.use_average;
    v.distinct = defaults.ft_distinct_units;
    v.deadline = defaults.deadline_override;
    auto colon = text.find(':');
    v.label = text.substr(0, colon);
    if (v.label.empty()) {
        error = "variant label must not be empty";
        return std::nullopt;
    }
    if (colon == std::string::npos) return v;
    std::string rest = text.substr(colon + 1);
    std::size_t pos = 0;
    while (pos <= rest.size()) {
        std::size_t comma = rest.find(',', pos);
        std::string item = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        pos = comma == std::string::npos ? rest.size() + 1 : comma + 1;
        if (item.empty()) continue;
        auto eq = item.find('=');
        if (eq == std::string::npos) {
            error = fmt::format("variant setting '{}' is not key=value", item);
            return std::nullopt;
        }
        std::string key = item.substr(0, eq), value = item.substr(eq + 1);
        try {
            if (key == "mode") {
                if (!parse_mode(value)) throw std::invalid_argument("mode");
                v.mode = value;
            } else if (key == "ft") {
                if (value != "on" && value != "off") throw std::invalid_argument("ft");
                v.ft = value == "on";
            } else if (key == "replicas") {
                auto sep = value.find(':');
                if (sep == std::string::npos) throw std::invalid_argument("replicas");
                std::string count = value.substr(sep + 1);
                v.replicas.emplace_back(value.substr(0, sep), count == "none" ? 0 : std::stoi(count));
            } else if (key == "use_average") {
                v.use_average = value == "true" || value == "1";
            } else if (key == "distinct") {
                v.distinct = value == "true" || value == "1";
            } else if (key == "deadline") {
                v.deadline = std::stod(value);
            } else {
                throw std::invalid_argument(key);
            }
        } catch (const std::exception&) {
            error = fmt::format("invalid variant setting '{}'", item);
            return std::nullopt;
        }
    }
    return v;
}

struct ComparisonRow {
    std::string label;
    std::string mode;
    std::string status;
    bool feasible = false;
    double makespan_ms = std::numeric_limits<double>::quiet_NaN();
    double total_mj = std::numeric_limits<double>::quiet_NaN();
    double delta_percent = std::numeric_limits<double>::quiet_NaN();
};

ComparisonRow run_variant(const Variant& v, const AppGraph& base, const LoadedModel& model, const ModelOptions& opts,
                          std::ostream& err) {
    ComparisonRow row;
    row.label = v.label;
    row.mode = v.mode;
    AppGraph graph = base;
    for (const auto& [node, count] : v.replicas) {
        auto g = with_replicas(graph, node, count);
        if (!g) {
            err << render_diagnostics(g.diagnostics());
            row.status = "invalid variant";
            return row;
        }
        graph = std::move(g).value();
    }
    if (v.ft) {
        auto g = expand_ft(graph);
        if (!g) {
            err << render_diagnostics(g.diagnostics());
            row.status = "ft expansion failed";
            return row;
        }
        graph = std::move(g).value();
    } else {
        graph = strip_ft(graph);
    }
    ModelOptions o = opts;
    o.mode = v.mode;
    o.ft_distinct_units = v.distinct;
    GlobalOptions g;
    g.use_average = v.use_average;
    SchedulerConfig config = make_config(o, g);
    double deadline = v.deadline.value_or(graph.info().deadline_ms);
    auto result = run_scheduler(graph, model.platform, model.contracts, config, deadline);
    row.status = to_string(result.status);
    if (!result.schedule) return row;
    auto sim = simulate(graph, *result.schedule, model.platform, model.contracts, config, deadline);
    if (!sim.ok()) {
        row.status = "simulation violation";
        return row;
    }
    row.feasible = result.ok() && sim.report->deadline_met;
    row.makespan_ms = sim.report->makespan_ms;
    row.total_mj = sim.report->total_mj;
    return row;
}

int cmd_compare(const ModelOptions& opts, const GlobalOptions& global, const std::vector<std::string>& variant_args,
                std::ostream& out, std::ostream& err) {
    std::vector<Variant> variants;
    std::vector<std::string> variant_texts = variant_args;
    if (variant_texts.empty()) variant_texts = {"makespan:mode=makespan", "energy:mode=energy"};
    for (const auto& text : variant_texts) {
        std::string error;
        auto v = parse_variant(text, opts, global, error);
        if (!v) {
            err << "coordsched: " << error << '\n';
            return kUsageOrIo;
        }
        variants.push_back(std::move(*v));
    }
    auto app = load_app(opts.app, false, err);
    if (auto* code = std::get_if<int>(&app)) return *code;
    auto model = load_model(opts, err);
    if (auto* code = std::get_if<int>(&model)) return *code;
    const auto& base = std::get<LoadedApp>(app).graph;
    const auto& m = std::get<LoadedModel>(model);

    std::vector<ComparisonRow> rows;
    for (const auto& v : variants) rows.push_back(run_variant(v, base, m, opts, err));
    const double baseline = rows.front().total_mj;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i == 0 && !std::isnan(baseline)) {
            rows[i].delta_percent = 0.0;
        } else if (!std::isnan(baseline) && !std::isnan(rows[i].total_mj) && baseline != 0.0) {
            rows[i].delta_percent = (rows[i].total_mj - baseline) / baseline * 100.0;
        }
    }

    std::size_t label_w = 5;
    for (const auto& r : rows) label_w = std::max(label_w, r.label.size());
    auto num = [](double v, const char* pattern) {
        return std::isnan(v) ? std::string("-") : fmt::format(fmt::runtime(pattern), v);
    };
    out << fmt::format("{:<{}}  {:<8}  {:<8}  {:>12}  {:>12}  {:>9}  {}\n", "label", label_w, "mode", "feasible",
                       "makespan_ms", "total_mJ", "delta_%", "status");
    for (const auto& r : rows) {
        out << fmt::format("{:<{}}  {:<8}  {:<8}  {:>12}  {:>12}  {:>9}  {}\n", r.label, label_w, r.mode,
                           r.feasible ? "yes" : "no", num(r.makespan_ms, "{:.3f}"), num(r.total_mj, "{:.3f}"),
                           num(r.delta_percent, "{:+.2f}"), r.status);
    }
    if (!global.json_path.empty()) {
        json doc = json::array();
        for (const auto& r : rows) {
            json jr;
            jr["label"] = r.label;
            jr["mode"] = r.mode;
            jr["feasible"] = r.feasible;
            jr["status"] = r.status;
            jr["makespan_ms"] = std::isnan(r.makespan_ms) ? json(nullptr) : json(r.makespan_ms);
            jr["total_mj"] = std::isnan(r.total_mj) ? json(nullptr) : json(r.total_mj);
            jr["delta_vs_baseline_percent"] = std::isnan(r.delta_percent) ? json(nullptr) : json(r.delta_percent);
            doc.push_back(std::move(jr));
        }
        if (!write_file(global.json_path, doc.dump(2) + "\n", err)) return kUsageOrIo;
    }
    return kOk;
}

// ---------------------------------------------------------------------------

int cmd_platform_show(const std::string& path, const GlobalOptions& global, std::ostream& out, std::ostream& err) {
    auto text = read_text_file(path);
    if (!text) {
        err << fmt::format("coordsched: cannot read '{}'\n", path);
        return kUsageOrIo;
    }
    auto platform = parse_platform(*text, path);
    print_diagnostics(err, platform.diagnostics());
    if (!platform) return kModelInputs;
    out << render_platform_table(platform.value());
    if (!global.json_path.empty()) {
        json doc;
        doc["name"] = platform->name;
        json units = json::array();
        for (const auto& u : platform->units) {
            json ju{{"name", u.name}, {"type", u.unit_type}, {"static_power_mw", u.static_power_mw}};
            json opps = json::array();
            for (const auto& o : u.opps) opps.push_back(o.id());
            ju["opps"] = std::move(opps);
            units.push_back(std::move(ju));
        }
        doc["units"] = std::move(units);
        if (!write_file(global.json_path, doc.dump(2) + "\n", err)) return kUsageOrIo;
    }
    return kOk;
}

void add_global_options(CLI::App& cmd, GlobalOptions& global) {
    cmd.add_option("--json", global.json_path, "Write machine-readable output to this path");
    cmd.add_flag("--no-ft", global.no_ft, "Disable fault-tolerance expansion");
    cmd.add_flag("--expand-ft", global.expand_ft, "Show the graph after fault-tolerance expansion");
    cmd.add_flag("--use-average", global.use_average, "Use average-case instead of worst-case contracts");
    cmd.add_option("--seed", global.seed, "Reserved; all solvers are deterministic");
}

void add_model_options(CLI::App& cmd, ModelOptions& opts, bool with_solver) {
    cmd.add_option("app", opts.app, "Application (.coord)")->required();
    cmd.add_option("--platform", opts.platform, "Platform description (.platform)")->required();
    cmd.add_option("--contracts", opts.contracts, "Contract database (.contracts)")->required();
    cmd.add_option("--deadline-override", opts.deadline_override, "Deadline in ms instead of the application's");
    cmd.add_flag("--ft-distinct-units", opts.ft_distinct_units, "Place replicas of one component on distinct units");
    cmd.add_option("--comm-cost", opts.comm_cost_ms, "Per-edge communication delay in ms")->check(CLI::NonNegativeNumber);
    if (with_solver) {
        cmd.add_option("--mode", opts.mode, "energy | makespan | exact")->check(CLI::IsMember({"energy", "makespan", "exact"}));
        cmd.add_option("--exhaustive-cap", opts.exhaustive_cap, "Largest task count for --mode exact");
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"coordsched: compile coordination programs into energy-aware schedules"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    GlobalOptions global;
    ModelOptions model;

    std::string check_path;
    bool dump_graph = false;
    auto* check = app.add_subcommand("check", "Parse and validate an application");
    check->add_option("app", check_path, "Application (.coord)")->required();
    check->add_flag("--dump-graph", dump_graph, "Print nodes, edges and activation waves as JSON");
    add_global_options(*check, global);

    auto* schedule = app.add_subcommand("schedule", "Compute a schedule");
    add_model_options(*schedule, model, true);
    add_global_options(*schedule, global);

    auto* run_cmd = app.add_subcommand("run", "check, expand, schedule and simulate");
    add_model_options(*run_cmd, model, true);
    add_global_options(*run_cmd, global);

    std::string schedule_path, trace_path;
    bool allow_drift = false;
    auto* sim = app.add_subcommand("simulate", "Replay a schedule file and account its energy");
    add_model_options(*sim, model, false);
    sim->add_option("--schedule", schedule_path, "Schedule JSON written by schedule/run --json")->required();
    sim->add_option("--trace", trace_path, "Write the event trace as JSON lines");
    sim->add_flag("--allow-drift", allow_drift, "Only warn when inputs differ from the schedule's manifest");
    add_global_options(*sim, global);

    std::vector<std::string> variants;
    auto* compare = app.add_subcommand("compare", "Schedule several configurations and tabulate energy");
    add_model_options(*compare, model, true);
    compare->add_option("--variant", variants,
                        "label[:key=value,...] with keys mode, ft (on|off), replicas (Comp:N|Comp:none), "
                        "use_average, distinct, deadline");
    add_global_options(*compare, global);

    std::string platform_path;
    auto* platform = app.add_subcommand("platform", "Platform utilities");
    platform->require_subcommand(1);
    auto* show = platform->add_subcommand("show", "Print the unit and operating point table");
    show->add_option("file", platform_path, "Platform description (.platform)")->required();
    add_global_options(*show, global);

    std::vector<std::string> argv_storage{"coordsched"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_storage) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsageOrIo;
    }

    if (check->parsed()) return cmd_check(check_path, dump_graph, global, out, err);
    if (schedule->parsed()) return cmd_schedule(model, global, out, err);
    if (run_cmd->parsed()) return cmd_run(model, global, out, err);
    if (sim->parsed()) return cmd_simulate(model, global, schedule_path, trace_path, allow_drift, out, err);
    if (compare->parsed()) return cmd_compare(model, global, variants, out, err);
    if (show->parsed()) return cmd_platform_show(platform_path, global, out, err);
    return kUsageOrIo;
}

}  // namespace coordsched::cli
