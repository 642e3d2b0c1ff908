#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coordsched/diagnostic.hpp"
#include "coordsched/energy.hpp"
#include "coordsched/graph.hpp"
#include "coordsched/platform.hpp"

namespace coordsched {

struct TimeContract {
    double wcet_ms = 0.0;
    double acet_ms = 0.0;

    friend bool operator==(const TimeContract&, const TimeContract&) = default;
};

struct EnergyContract {
    double wce_mj = 0.0;
    double ace_mj = 0.0;

    friend bool operator==(const EnergyContract&, const EnergyContract&) = default;
};

/// (component, version, unit type, operating point). An empty `opp` is the
/// reference-point entry written as `opp = "ref"`.
struct ContractKey {
    std::string component;
    std::string version;
    std::string unit_type;
    std::optional<OperatingPoint> opp;

    std::string opp_id() const { return opp ? opp->id() : "ref"; }
    std::string to_string() const;

    friend bool operator==(const ContractKey&, const ContractKey&) = default;
    friend bool operator<(const ContractKey& a, const ContractKey& b);
};

struct ContractEntry {
    TimeContract time;
    EnergyContract energy;
    SourceSpan span;

    friend bool operator==(const ContractEntry& a, const ContractEntry& b) {
        return a.time == b.time && a.energy == b.energy;
    }
};

struct ContractLookup {
    TimeContract time;
    EnergyContract energy;
    /// True when the figures were scaled from a reference entry.
    bool derived = false;
};

/// The non-functional contract matrix. Read-only once loaded.
class ContractStore {
public:
    /// False (and no change) when the key is already present.
    bool insert(ContractKey key, ContractEntry entry);

    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const std::map<ContractKey, ContractEntry>& entries() const { return entries_; }
    const ContractEntry* find(const ContractKey& key) const;
    bool erase(const ContractKey& key) { return entries_.erase(key) > 0; }

    /// Per-unit-type reference operating points declared by `[reference]` records.
    const std::map<std::string, OperatingPoint>& reference_overrides() const { return references_; }
    void set_reference(const std::string& unit_type, const OperatingPoint& opp) { references_[unit_type] = opp; }

    friend bool operator==(const ContractStore&, const ContractStore&) = default;

private:
    std::map<ContractKey, ContractEntry> entries_;
    std::map<std::string, OperatingPoint> references_;
};

Outcome<ContractStore> parse_contracts(std::string_view text, const std::string& file_name);
Outcome<ContractStore> load_contracts(const std::string& path);

/// Writes the `.contracts` format; loading the result yields an equal store.
std::string serialize_contracts(const ContractStore& store);

/// Exact entry when present; otherwise the reference entry for the same
/// (component, version, unit type) scaled to `key.opp`; otherwise nullopt.
/// A reference entry is either `opp = "ref"` or an explicit entry at the type's
/// reference operating point (the explicit one wins).
std::optional<ContractLookup> lookup(const ContractStore& store, const ContractKey& key, const ScalingModel& scaling);

/// Every (node, version, unit type, operating point) combination the platform offers
/// that `lookup` cannot answer. Voter nodes are skipped because they fall back to a
/// default contract. Only unit types present on the platform are considered.
std::vector<ContractKey> coverage_report(const ContractStore& store, const AppGraph& graph, const Platform& platform,
                                         const ScalingModel& scaling);
std::vector<ContractKey> coverage_report(const ContractStore& store, const AppGraph& graph, const Platform& platform);

}  // namespace coordsched
