#include "coordsched/ft_expansion.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

namespace coordsched {

std::string replica_name(const std::string& component, int index) {
    return fmt::format("{}__r{}", component, index);
}

std::string voter_name(const std::string& component) { return component + "__voter"; }

namespace {

const Port* primary_output(const Node& node) {
    for (const auto& p : node.ports) {
        if (p.direction == PortDirection::output) return &p;
    }
    return nullptr;
}

}  // namespace

Outcome<AppGraph> expand_ft(const AppGraph& graph) {
    const auto& nodes = graph.nodes();
    bool any = std::any_of(nodes.begin(), nodes.end(), [](const Node& n) { return n.replicas > 0; });
    if (!any) return Outcome<AppGraph>(graph);

    std::vector<Diagnostic> diags;
    for (const auto& n : nodes) {
        if (n.replicas == 0) continue;
        std::set<std::string> out_types;
        for (const auto& p : n.ports) {
            if (p.direction == PortDirection::output) out_types.insert(p.type);
        }
        if (out_types.empty()) {
            diags.push_back(make_error(
                n.span, fmt::format("fault-tolerance on {} requires an output port to vote on", n.name)));
        } else if (out_types.size() > 1) {
            diags.push_back(make_error(
                n.span, fmt::format("fault-tolerance on {} is unsupported: output ports carry {} distinct types",
                                    n.name, out_types.size())));
        }
    }
    if (has_errors(diags)) return Outcome<AppGraph>::failure(std::move(diags));

    std::vector<Node> out_nodes;
    // For original node i: index of the node that now produces its outputs, and the
    // indices that now receive its inputs.
    std::vector<std::size_t> producer_of(nodes.size());
    std::vector<std::vector<std::size_t>> consumers_of(nodes.size());
    std::vector<Edge> out_edges;

    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Node& n = nodes[i];
        if (n.replicas == 0) {
            producer_of[i] = out_nodes.size();
            consumers_of[i] = {out_nodes.size()};
            out_nodes.push_back(n);
            continue;
        }
        const Port* out = primary_output(n);
        std::vector<std::size_t> replicas;
        for (int r = 1; r <= n.replicas; ++r) {
            Node rep = n;
            rep.name = replica_name(n.name, r);
            rep.replicas = 0;
            rep.replica_of = n.name;
            replicas.push_back(out_nodes.size());
            out_nodes.push_back(std::move(rep));
        }

        Node voter;
        voter.name = voter_name(n.name);
        voter.contract_name = kVoterContract;
        voter.voter = true;
        voter.span = n.span;
        for (int r = 1; r <= n.replicas; ++r) {
            voter.ports.push_back(Port{PortDirection::input, out->type, fmt::format("in{}", r)});
        }
        voter.ports.push_back(Port{PortDirection::output, out->type, out->name});
        Version any_unit{kVoterVersion, {}};
        for (const auto& v : n.versions) {
            for (const auto& u : v.unit_types) {
                if (!any_unit.runs_on(u)) any_unit.unit_types.push_back(u);
            }
        }
        voter.versions.push_back(std::move(any_unit));
        std::size_t voter_index = out_nodes.size();
        out_nodes.push_back(std::move(voter));

        for (std::size_t r = 0; r < replicas.size(); ++r) {
            out_edges.push_back(Edge{replicas[r], out->name, voter_index, fmt::format("in{}", r + 1), n.span});
        }
        producer_of[i] = voter_index;
        consumers_of[i] = std::move(replicas);
    }

    for (const auto& e : graph.edges()) {
        std::string port = e.producer_port;
        if (nodes[e.producer].replicas > 0) port = primary_output(nodes[e.producer])->name;
        for (std::size_t c : consumers_of[e.consumer]) {
            out_edges.push_back(Edge{producer_of[e.producer], port, c, e.consumer_port, e.span});
        }
    }

    auto expanded = AppGraph::assemble(graph.info(), std::move(out_nodes), std::move(out_edges));
    if (!expanded) return expanded;
    for (const auto& d : expanded.diagnostics()) diags.push_back(d);
    return Outcome<AppGraph>(std::move(expanded).value(), std::move(diags));
}

AppGraph strip_ft(const AppGraph& graph) {
    std::vector<Node> nodes = graph.nodes();
    for (auto& n : nodes) n.replicas = 0;
    // Same topology as an already-valid graph, so assembly cannot fail.
    return AppGraph::assemble(graph.info(), std::move(nodes), graph.edges()).value();
}

Outcome<AppGraph> with_replicas(const AppGraph& graph, const std::string& node, int replicas) {
    auto idx = graph.find(node);
    if (!idx) {
        return Outcome<AppGraph>::failure({make_error({}, fmt::format("unknown component {}", node))});
    }
    if (replicas != 0 && !is_supported_replica_count(replicas)) {
        return Outcome<AppGraph>::failure(
            {make_error(graph.node(*idx).span, fmt::format("unsupported replica count {}", replicas))});
    }
    std::vector<Node> nodes = graph.nodes();
    nodes[*idx].replicas = replicas;
    return AppGraph::assemble(graph.info(), std::move(nodes), graph.edges());
}

}  // namespace coordsched
