#include "coordsched/graph.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <tuple>

#include <fmt/format.h>

#include "coordsched/parser.hpp"

namespace coordsched {

bool Version::runs_on(const std::string& unit_type) const {
    return std::find(unit_types.begin(), unit_types.end(), unit_type) != unit_types.end();
}

const Port* Node::find_port(const std::string& port_name) const {
    for (const auto& p : ports) {
        if (p.name == port_name) return &p;
    }
    return nullptr;
}

const Version* Node::find_version(const std::string& version_name) const {
    for (const auto& v : versions) {
        if (v.name == version_name) return &v;
    }
    return nullptr;
}

bool Node::has_ports(PortDirection dir) const {
    return std::any_of(ports.begin(), ports.end(), [dir](const Port& p) { return p.direction == dir; });
}

const char* to_string(NodeRole role) {
    switch (role) {
        case NodeRole::source:
            return "source";
        case NodeRole::sink:
            return "sink";
        case NodeRole::interior:
            return "interior";
    }
    return "interior";
}

namespace {

// Shortest cycle through `start`, restricted to nodes in `allowed`; successors are
// explored in name order so the reported path is deterministic.
std::vector<std::size_t> cycle_through(std::size_t start, const std::vector<Node>& nodes,
                                       const std::vector<std::vector<std::size_t>>& succs,
                                       const std::vector<bool>& allowed) {
    std::vector<std::size_t> parent(nodes.size(), nodes.size());
    std::vector<bool> seen(nodes.size(), false);
    std::deque<std::size_t> queue{start};
    seen[start] = true;
    auto by_name = [&](std::vector<std::size_t> v) {
        std::sort(v.begin(), v.end(), [&](std::size_t a, std::size_t b) { return nodes[a].name < nodes[b].name; });
        return v;
    };
    while (!queue.empty()) {
        std::size_t u = queue.front();
        queue.pop_front();
        for (std::size_t v : by_name(succs[u])) {
            if (!allowed[v]) continue;
            if (v == start) {
                std::vector<std::size_t> path{start};
                for (std::size_t w = u; w != start; w = parent[w]) path.push_back(w);
                std::reverse(path.begin() + 1, path.end());
                path.push_back(start);
                return path;
            }
            if (!seen[v]) {
                seen[v] = true;
                parent[v] = u;
                queue.push_back(v);
            }
        }
    }
    return {};
}

// Tarjan's strongly connected components; returns a component id per node.
std::vector<std::size_t> strongly_connected(const std::vector<std::vector<std::size_t>>& succs) {
    const std::size_t n = succs.size();
    const std::size_t unset = n;
    std::vector<std::size_t> index(n, unset), low(n, 0), comp(n, unset);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::size_t counter = 0, comp_count = 0;

    struct Frame {
        std::size_t node;
        std::size_t next;
    };
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != unset) continue;
        std::vector<Frame> frames{{root, 0}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.next < succs[f.node].size()) {
                std::size_t w = succs[f.node][f.next++];
                if (index[w] == unset) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.node] = std::min(low[f.node], index[w]);
                }
                continue;
            }
            std::size_t v = f.node;
            frames.pop_back();
            if (!frames.empty()) low[frames.back().node] = std::min(low[frames.back().node], low[v]);
            if (low[v] == index[v]) {
                for (;;) {
                    std::size_t w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = comp_count;
                    if (w == v) break;
                }
                ++comp_count;
            }
        }
    }
    return comp;
}

}  // namespace

Outcome<AppGraph> AppGraph::assemble(AppInfo info, std::vector<Node> nodes, std::vector<Edge> edges) {
    std::vector<Diagnostic> diags;
    const std::size_t n = nodes.size();

    std::set<std::string> names;
    for (const auto& node : nodes) {
        if (!names.insert(node.name).second) {
            diags.push_back(make_error(node.span, fmt::format("duplicate component '{}'", node.name)));
        }
    }
    if (has_errors(diags)) return Outcome<AppGraph>::failure(std::move(diags));

    std::sort(edges.begin(), edges.end(), [&](const Edge& a, const Edge& b) {
        return std::tie(nodes[a.producer].name, a.producer_port, nodes[a.consumer].name, a.consumer_port) <
               std::tie(nodes[b.producer].name, b.producer_port, nodes[b.consumer].name, b.consumer_port);
    });

    std::map<std::pair<std::size_t, std::string>, int> producers_per_input;
    std::set<std::pair<std::size_t, std::string>> used_outputs;
    for (const auto& e : edges) {
        const Port* out = nodes[e.producer].find_port(e.producer_port);
        const Port* in = nodes[e.consumer].find_port(e.consumer_port);
        if (out == nullptr || in == nullptr || out->direction != PortDirection::output ||
            in->direction != PortDirection::input) {
            diags.push_back(make_error(e.span, fmt::format("edge {}.{} -> {}.{} does not connect an output to an input",
                                                           nodes[e.producer].name, e.producer_port,
                                                           nodes[e.consumer].name, e.consumer_port)));
            continue;
        }
        if (out->type != in->type) {
            diags.push_back(make_error(
                e.span, fmt::format("type mismatch on edge {}.{} -> {}.{}: {} is not {}", nodes[e.producer].name,
                                    e.producer_port, nodes[e.consumer].name, e.consumer_port, out->type, in->type)));
        }
        ++producers_per_input[{e.consumer, e.consumer_port}];
        used_outputs.insert({e.producer, e.producer_port});
    }

    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& p : nodes[i].ports) {
            if (p.direction == PortDirection::input) {
                auto it = producers_per_input.find({i, p.name});
                int count = it == producers_per_input.end() ? 0 : it->second;
                if (count == 0) {
                    diags.push_back(
                        make_error(nodes[i].span, fmt::format("unconnected input port {}.{}", nodes[i].name, p.name)));
                } else if (count > 1) {
                    diags.push_back(make_error(
                        nodes[i].span, fmt::format("input port {}.{} has {} producers", nodes[i].name, p.name, count)));
                }
            } else if (p.direction == PortDirection::output && !used_outputs.contains({i, p.name})) {
                diags.push_back(
                    make_warning(nodes[i].span, fmt::format("output port {}.{} is not connected", nodes[i].name, p.name)));
            }
        }
    }

    std::vector<std::set<std::size_t>> succ_sets(n), pred_sets(n);
    for (const auto& e : edges) {
        succ_sets[e.producer].insert(e.consumer);
        pred_sets[e.consumer].insert(e.producer);
    }
    std::vector<std::vector<std::size_t>> succs(n), preds(n);
    for (std::size_t i = 0; i < n; ++i) {
        succs[i].assign(succ_sets[i].begin(), succ_sets[i].end());
        preds[i].assign(pred_sets[i].begin(), pred_sets[i].end());
    }

    // Kahn's algorithm, picking the smallest name among ready nodes.
    std::vector<std::size_t> indegree(n);
    for (std::size_t i = 0; i < n; ++i) indegree[i] = preds[i].size();
    auto name_less = [&](std::size_t a, std::size_t b) { return nodes[a].name > nodes[b].name; };
    std::vector<std::size_t> ready;
    for (std::size_t i = 0; i < n; ++i) {
        if (indegree[i] == 0) ready.push_back(i);
    }
    std::make_heap(ready.begin(), ready.end(), name_less);
    std::vector<std::size_t> topo;
    while (!ready.empty()) {
        std::pop_heap(ready.begin(), ready.end(), name_less);
        std::size_t u = ready.back();
        ready.pop_back();
        topo.push_back(u);
        for (std::size_t v : succs[u]) {
            if (--indegree[v] == 0) {
                ready.push_back(v);
                std::push_heap(ready.begin(), ready.end(), name_less);
            }
        }
    }

    if (topo.size() != n) {
        auto comp = strongly_connected(succs);
        std::map<std::size_t, std::vector<std::size_t>> members;
        for (std::size_t i = 0; i < n; ++i) members[comp[i]].push_back(i);
        std::vector<std::vector<std::size_t>> cycles;
        for (auto& [id, group] : members) {
            bool self_loop = group.size() == 1 && succ_sets[group[0]].contains(group[0]);
            if (group.size() < 2 && !self_loop) continue;
            std::vector<bool> allowed(n, false);
            for (std::size_t v : group) allowed[v] = true;
            std::size_t start = *std::min_element(group.begin(), group.end(), [&](std::size_t a, std::size_t b) {
                return nodes[a].name < nodes[b].name;
            });
            cycles.push_back(cycle_through(start, nodes, succs, allowed));
        }
        std::sort(cycles.begin(), cycles.end(), [&](const auto& a, const auto& b) {
            return nodes[a.front()].name < nodes[b.front()].name;
        });
        for (const auto& cycle : cycles) {
            std::string path;
            for (std::size_t v : cycle) {
                if (!path.empty()) path += " -> ";
                path += nodes[v].name;
            }
            diags.push_back(make_error(nodes[cycle.front()].span, "cycle: " + path));
        }
    }

    if (has_errors(diags)) return Outcome<AppGraph>::failure(std::move(diags));

    AppGraph g;
    g.info_ = std::move(info);
    g.nodes_ = std::move(nodes);
    g.edges_ = std::move(edges);
    g.topo_ = std::move(topo);
    g.preds_ = std::move(preds);
    g.succs_ = std::move(succs);
    return Outcome<AppGraph>(std::move(g), std::move(diags));
}

std::optional<std::size_t> AppGraph::find(const std::string& name) const {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].name == name) return i;
    }
    return std::nullopt;
}

Outcome<AppGraph> build_graph(const AppDecl& decl) {
    std::vector<Diagnostic> diags = check_declarations(decl);

    AppInfo info;
    info.name = decl.app_name.text;
    info.period_ms = decl.period_ms;
    info.deadline_ms = decl.deadline_ms;
    info.objective = decl.objective;
    for (const auto& t : decl.type_names) info.type_names.push_back(t.text);

    std::vector<Node> nodes;
    std::map<std::string, std::size_t> index;
    for (const auto& c : decl.components) {
        if (index.contains(c.name.text)) continue;
        Node node;
        node.name = c.name.text;
        node.contract_name = c.name.text;
        node.span = c.name.span;
        for (const auto& p : c.ports) node.ports.push_back(Port{p.direction, p.data_type.text, p.port_name.text});
        for (const auto& v : c.versions) {
            Version version{v.version_name.text, {}};
            for (const auto& u : v.compatible_unit_types) version.unit_types.push_back(u.text);
            node.versions.push_back(std::move(version));
        }
        if (c.ft) node.replicas = c.ft->replicas;
        index.emplace(node.name, nodes.size());
        nodes.push_back(std::move(node));
    }

    // Only edges whose endpoints resolve take part in the structural checks; the
    // unresolved ones were already reported by check_declarations.
    std::vector<Edge> edges;
    std::set<std::tuple<std::string, std::string, std::string, std::string>> seen;
    for (const auto& e : decl.edges) {
        auto p = index.find(e.producer.component.text);
        auto c = index.find(e.consumer.component.text);
        if (p == index.end() || c == index.end()) continue;
        const Port* out = nodes[p->second].find_port(e.producer.port.text);
        const Port* in = nodes[c->second].find_port(e.consumer.port.text);
        if (out == nullptr || in == nullptr || out->direction != PortDirection::output ||
            in->direction != PortDirection::input) {
            continue;
        }
        if (!seen.insert({e.producer.component.text, e.producer.port.text, e.consumer.component.text,
                          e.consumer.port.text})
                 .second) {
            continue;
        }
        edges.push_back(Edge{p->second, e.producer.port.text, c->second, e.consumer.port.text, e.span});
    }

    auto graph = AppGraph::assemble(std::move(info), std::move(nodes), std::move(edges));
    diags.insert(diags.end(), graph.diagnostics().begin(), graph.diagnostics().end());
    if (!graph || has_errors(diags)) return Outcome<AppGraph>::failure(std::move(diags));
    return Outcome<AppGraph>(std::move(graph).value(), std::move(diags));
}

std::optional<NodeKind> classify_node(const AppGraph& graph, const std::string& node) {
    auto idx = graph.find(node);
    if (!idx) return std::nullopt;
    const Node& n = graph.node(*idx);
    NodeKind kind;
    if (!n.has_ports(PortDirection::input)) {
        kind.kind = NodeRole::source;
    } else if (!n.has_ports(PortDirection::output)) {
        kind.kind = NodeRole::sink;
    } else {
        kind.kind = NodeRole::interior;
    }
    kind.stateless = !n.has_ports(PortDirection::state);
    return kind;
}

std::vector<std::vector<std::string>> activation_sets(const AppGraph& graph) {
    std::vector<std::size_t> wave(graph.size(), 0);
    std::size_t depth = 0;
    for (std::size_t v : graph.topo_order()) {
        for (std::size_t u : graph.predecessors(v)) wave[v] = std::max(wave[v], wave[u] + 1);
        depth = std::max(depth, wave[v] + 1);
    }
    std::vector<std::vector<std::string>> waves(graph.empty() ? 0 : depth);
    for (std::size_t i = 0; i < graph.size(); ++i) waves[wave[i]].push_back(graph.node(i).name);
    for (auto& w : waves) std::sort(w.begin(), w.end());
    return waves;
}

AppDecl graph_to_decl(const AppGraph& graph) {
    AppDecl decl;
    const AppInfo& info = graph.info();
    decl.app_name = Ident{info.name, {}};
    decl.period_ms = info.period_ms;
    decl.deadline_ms = info.deadline_ms;
    decl.objective = info.objective;
    for (const auto& t : info.type_names) decl.type_names.push_back(Ident{t, {}});
    for (const auto& n : graph.nodes()) {
        ComponentDecl c;
        c.name = Ident{n.name, n.span};
        for (const auto& p : n.ports) c.ports.push_back(PortDecl{p.direction, Ident{p.type, {}}, Ident{p.name, {}}});
        for (const auto& v : n.versions) {
            VersionDecl vd{Ident{v.name, {}}, {}};
            for (const auto& u : v.unit_types) vd.compatible_unit_types.push_back(Ident{u, {}});
            c.versions.push_back(std::move(vd));
        }
        if (n.replicas > 0) c.ft = FtAnnotation{n.replicas, {}};
        decl.components.push_back(std::move(c));
    }
    for (const auto& e : graph.edges()) {
        EdgeDecl ed;
        ed.producer = PortRef{Ident{graph.node(e.producer).name, {}}, Ident{e.producer_port, {}}};
        ed.consumer = PortRef{Ident{graph.node(e.consumer).name, {}}, Ident{e.consumer_port, {}}};
        ed.span = e.span;
        decl.edges.push_back(std::move(ed));
    }
    return decl;
}

nlohmann::ordered_json graph_to_json(const AppGraph& graph) {
    using json = nlohmann::ordered_json;
    const AppInfo& info = graph.info();
    json doc;
    doc["app"] = info.name;
    doc["period_ms"] = info.period_ms;
    doc["deadline_ms"] = info.deadline_ms;
    doc["objective"] = to_string(info.objective);
    json nodes = json::array();
    for (const auto& n : graph.nodes()) {
        auto kind = classify_node(graph, n.name);
        json jn;
        jn["name"] = n.name;
        jn["contract"] = n.contract_name;
        jn["kind"] = to_string(kind->kind);
        jn["stateless"] = kind->stateless;
        json ports = json::array();
        for (const auto& p : n.ports) {
            ports.push_back(json{{"direction", to_string(p.direction)}, {"type", p.type}, {"name", p.name}});
        }
        jn["ports"] = std::move(ports);
        json versions = json::array();
        for (const auto& v : n.versions) versions.push_back(json{{"name", v.name}, {"unit_types", v.unit_types}});
        jn["versions"] = std::move(versions);
        if (n.replicas > 0) jn["replicas"] = n.replicas;
        if (!n.replica_of.empty()) jn["replica_of"] = n.replica_of;
        if (n.voter) jn["voter"] = true;
        nodes.push_back(std::move(jn));
    }
    doc["nodes"] = std::move(nodes);
    json edges = json::array();
    for (const auto& e : graph.edges()) {
        const Port* out = graph.node(e.producer).find_port(e.producer_port);
        edges.push_back(json{{"from", graph.node(e.producer).name + "." + e.producer_port},
                             {"to", graph.node(e.consumer).name + "." + e.consumer_port},
                             {"type", out->type}});
    }
    doc["edges"] = std::move(edges);
    doc["waves"] = activation_sets(graph);
    json topo = json::array();
    for (std::size_t v : graph.topo_order()) topo.push_back(graph.node(v).name);
    doc["topo_order"] = std::move(topo);
    return doc;
}

}  // namespace coordsched
