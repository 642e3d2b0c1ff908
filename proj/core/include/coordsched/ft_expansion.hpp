#pragma once

#include <string>

#include "coordsched/diagnostic.hpp"
#include "coordsched/graph.hpp"

namespace coordsched {

/// Reserved contract-store component name for voter nodes.
inline constexpr const char* kVoterContract = "__voter";
/// Version name given to every voter node.
inline constexpr const char* kVoterVersion = "voter";

std::string replica_name(const std::string& component, int index);
std::string voter_name(const std::string& component);

/// N-modular-redundancy rewrite. Every node annotated with `replicas N` becomes
/// `<name>__r1..__rN` (same ports, versions and contract name) plus `<name>__voter`.
/// Each replica receives a copy of every original input edge; the voter has inputs
/// `in1..inN` fed by the replicas' first output port and one output named after that
/// port; all original consumers are rewired to the voter. Output ports of an
/// annotated node must share one type. The voter may run on every unit type any
/// version of the original runs on.
///
/// Graphs without annotations are returned unchanged. The result is re-validated.
Outcome<AppGraph> expand_ft(const AppGraph& graph);

/// Copy of `graph` with every fault-tolerance annotation removed.
AppGraph strip_ft(const AppGraph& graph);

/// Copy of `graph` with the annotation of `node` replaced; 0 removes it.
Outcome<AppGraph> with_replicas(const AppGraph& graph, const std::string& node, int replicas);

}  // namespace coordsched
