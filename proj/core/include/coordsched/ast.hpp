#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coordsched/diagnostic.hpp"

namespace coordsched {

/// An identifier together with where it was written. Spans do not take part in
/// equality: two declarations are structurally equal when their names agree.
struct Ident {
    std::string text;
    SourceSpan span;

    friend bool operator==(const Ident& a, const Ident& b) { return a.text == b.text; }
};

enum class PortDirection { input, output, state };
enum class Objective { minimize_energy, minimize_makespan };

const char* to_string(PortDirection dir);
const char* to_string(Objective objective);

struct PortDecl {
    PortDirection direction = PortDirection::input;
    Ident data_type;
    Ident port_name;

    friend bool operator==(const PortDecl&, const PortDecl&) = default;
};

struct VersionDecl {
    Ident version_name;
    std::vector<Ident> compatible_unit_types;

    friend bool operator==(const VersionDecl&, const VersionDecl&) = default;
};

struct FtAnnotation {
    int replicas = 2;
    SourceSpan span;

    friend bool operator==(const FtAnnotation& a, const FtAnnotation& b) {
        return a.replicas == b.replicas;
    }
};

/// Replica counts accepted by the fault-tolerance annotation.
bool is_supported_replica_count(int replicas);

struct ComponentDecl {
    Ident name;
    std::vector<PortDecl> ports;
    std::vector<VersionDecl> versions;
    std::optional<FtAnnotation> ft;

    friend bool operator==(const ComponentDecl&, const ComponentDecl&) = default;
};

struct PortRef {
    Ident component;
    Ident port;

    friend bool operator==(const PortRef&, const PortRef&) = default;
};

struct EdgeDecl {
    PortRef producer;
    PortRef consumer;
    SourceSpan span;

    friend bool operator==(const EdgeDecl& a, const EdgeDecl& b) {
        return a.producer == b.producer && a.consumer == b.consumer;
    }
};

struct AppDecl {
    Ident app_name;
    double period_ms = 0.0;
    double deadline_ms = 0.0;
    Objective objective = Objective::minimize_energy;
    std::vector<Ident> type_names;
    std::vector<ComponentDecl> components;
    std::vector<EdgeDecl> edges;

    friend bool operator==(const AppDecl&, const AppDecl&) = default;
};

}  // namespace coordsched
