#pragma once

#include <string>

#include "coordsched/contracts.hpp"
#include "coordsched/graph.hpp"
#include "coordsched/parser.hpp"
#include "coordsched/platform.hpp"

namespace coordsched::testing {

inline std::string data_path(const std::string& name) { return std::string(COORDSCHED_DATA_DIR) + "/" + name; }

inline AppGraph load_graph(const std::string& name) {
    auto text = read_text_file(data_path(name));
    if (!text) throw std::runtime_error("missing fixture " + name);
    auto decl = parse_app(*text, name);
    if (!decl) throw std::runtime_error(render_diagnostics(decl.diagnostics()));
    auto graph = build_graph(decl.value());
    if (!graph) throw std::runtime_error(render_diagnostics(graph.diagnostics()));
    return std::move(graph).value();
}

inline Platform load_demo_platform() {
    auto p = load_platform(data_path("odroid_like.platform"));
    if (!p) throw std::runtime_error(render_diagnostics(p.diagnostics()));
    return std::move(p).value();
}

inline ContractStore load_store(const std::string& name) {
    auto c = load_contracts(data_path(name));
    if (!c) throw std::runtime_error(render_diagnostics(c.diagnostics()));
    return std::move(c).value();
}

/// Parses and validates inline application text; throws with the rendered diagnostics on failure.
inline AppGraph graph_from(const std::string& text) {
    auto decl = parse_app(text, "inline.coord");
    if (!decl) throw std::runtime_error(render_diagnostics(decl.diagnostics()));
    auto graph = build_graph(decl.value());
    if (!graph) throw std::runtime_error(render_diagnostics(graph.diagnostics()));
    return std::move(graph).value();
}

}  // namespace coordsched::testing
