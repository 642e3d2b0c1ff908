#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "coordsched/ast.hpp"
#include "coordsched/diagnostic.hpp"

namespace coordsched {

struct Port {
    PortDirection direction = PortDirection::input;
    std::string type;
    std::string name;

    friend bool operator==(const Port&, const Port&) = default;
};

struct Version {
    std::string name;
    std::vector<std::string> unit_types;

    bool runs_on(const std::string& unit_type) const;

    friend bool operator==(const Version&, const Version&) = default;
};

/// A component instance in the streaming network. After fault-tolerance expansion a
/// node may be a replica (`replica_of` names the original) or a voter.
struct Node {
    std::string name;
    /// Component name under which non-functional contracts are looked up.
    std::string contract_name;
    std::vector<Port> ports;
    std::vector<Version> versions;
    int replicas = 0;  // 0 when not annotated
    std::string replica_of;
    bool voter = false;
    SourceSpan span;

    const Port* find_port(const std::string& port_name) const;
    const Version* find_version(const std::string& version_name) const;
    bool has_ports(PortDirection dir) const;

    friend bool operator==(const Node& a, const Node& b) {
        return a.name == b.name && a.contract_name == b.contract_name && a.ports == b.ports &&
               a.versions == b.versions && a.replicas == b.replicas && a.replica_of == b.replica_of &&
               a.voter == b.voter;
    }
};

struct Edge {
    std::size_t producer = 0;
    std::string producer_port;
    std::size_t consumer = 0;
    std::string consumer_port;
    SourceSpan span;

    friend bool operator==(const Edge& a, const Edge& b) {
        return a.producer == b.producer && a.producer_port == b.producer_port &&
               a.consumer == b.consumer && a.consumer_port == b.consumer_port;
    }
};

struct AppInfo {
    std::string name;
    double period_ms = 0.0;
    double deadline_ms = 0.0;
    Objective objective = Objective::minimize_energy;
    std::vector<std::string> type_names;

    friend bool operator==(const AppInfo&, const AppInfo&) = default;
};

/// Validated acyclic streaming network. Instances only come out of `assemble`
/// (and therefore `build_graph`), so every invariant holds for any AppGraph value.
class AppGraph {
public:
    /// Checks the structural invariants over already-resolved nodes and edges:
    /// matching port types, one producer per input port, connected inputs, acyclicity.
    /// Edges are stored in canonical (producer, port, consumer, port) name order.
    static Outcome<AppGraph> assemble(AppInfo info, std::vector<Node> nodes, std::vector<Edge> edges);

    const AppInfo& info() const { return info_; }
    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<std::size_t>& topo_order() const { return topo_; }
    std::size_t size() const { return nodes_.size(); }
    bool empty() const { return nodes_.empty(); }

    std::optional<std::size_t> find(const std::string& name) const;
    const Node& node(std::size_t index) const { return nodes_[index]; }

    /// Distinct predecessor / successor node indices, ascending.
    const std::vector<std::size_t>& predecessors(std::size_t index) const { return preds_[index]; }
    const std::vector<std::size_t>& successors(std::size_t index) const { return succs_[index]; }

    friend bool operator==(const AppGraph& a, const AppGraph& b) {
        return a.info_ == b.info_ && a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
    }

private:
    AppInfo info_;
    std::vector<Node> nodes_;
    std::vector<Edge> edges_;
    std::vector<std::size_t> topo_;
    std::vector<std::vector<std::size_t>> preds_;
    std::vector<std::vector<std::size_t>> succs_;
};

enum class NodeRole { source, sink, interior };

const char* to_string(NodeRole role);

struct NodeKind {
    NodeRole kind = NodeRole::interior;
    bool stateless = true;

    friend bool operator==(const NodeKind&, const NodeKind&) = default;
};

/// Validates a parsed declaration and builds its graph. All violated rules are reported.
Outcome<AppGraph> build_graph(const AppDecl& decl);

/// A node without input ports is a source (even if it also has no outputs).
std::optional<NodeKind> classify_node(const AppGraph& graph, const std::string& node);

/// Data-driven activation waves: wave 0 holds the sources, wave k the nodes whose
/// producers all sit in earlier waves. Names are sorted within each wave.
std::vector<std::vector<std::string>> activation_sets(const AppGraph& graph);

/// Turns a graph back into a declaration (used to print expanded graphs).
AppDecl graph_to_decl(const AppGraph& graph);

/// Node/edge/wave structure with a stable key order.
nlohmann::ordered_json graph_to_json(const AppGraph& graph);

}  // namespace coordsched
