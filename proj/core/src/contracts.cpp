#include "coordsched/contracts.hpp"

#include <set>
#include <tuple>

#include <fmt/format.h>

#include "coordsched/parser.hpp"
#include "coordsched/records.hpp"

namespace coordsched {

std::string ContractKey::to_string() const {
    return fmt::format("{}/{}/{}/{}", component, version, unit_type, opp_id());
}

bool operator<(const ContractKey& a, const ContractKey& b) {
    if (auto c = std::tie(a.component, a.version, a.unit_type) <=> std::tie(b.component, b.version, b.unit_type); c != 0) {
        return c < 0;
    }
    // "ref" sorts before every concrete operating point.
    if (!a.opp || !b.opp) return !a.opp && b.opp;
    return *a.opp < *b.opp;
}

bool ContractStore::insert(ContractKey key, ContractEntry entry) {
    return entries_.emplace(std::move(key), std::move(entry)).second;
}

const ContractEntry* ContractStore::find(const ContractKey& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
}

Outcome<ContractStore> parse_contracts(std::string_view text, const std::string& file_name) {
    auto records = parse_records(text, file_name);
    if (!records) return Outcome<ContractStore>::failure(records.diagnostics());

    std::vector<Diagnostic> diags;
    ContractStore store;
    std::set<std::string> referenced_types;
    for (const auto& rec : records.value()) {
        if (rec.kind == "reference") {
            reject_unknown_fields(rec, {"unit_type", "opp"}, diags);
            auto type = require_string(rec, "unit_type", diags);
            auto opp_text = require_string(rec, "opp", diags);
            if (!type || !opp_text) continue;
            auto opp = OperatingPoint::parse(*opp_text);
            if (!opp) {
                diags.push_back(make_error(rec.find("opp")->span, fmt::format("malformed operating point '{}'", *opp_text)));
            } else if (!referenced_types.insert(*type).second) {
                diags.push_back(make_error(rec.span, fmt::format("duplicate reference for unit type {}", *type)));
            } else {
                store.set_reference(*type, *opp);
            }
            continue;
        }
        if (rec.kind != "contract") {
            diags.push_back(make_error(rec.span, fmt::format("unknown record kind [{}]", rec.kind)));
            continue;
        }
        reject_unknown_fields(rec, {"component", "version", "unit_type", "opp", "wcet_ms", "acet_ms", "wce_mj", "ace_mj"},
                              diags);
        std::size_t before = diags.size();
        auto component = require_string(rec, "component", diags);
        auto version = require_string(rec, "version", diags);
        auto unit_type = require_string(rec, "unit_type", diags);
        auto opp_text = require_string(rec, "opp", diags);
        auto wcet = require_number(rec, "wcet_ms", diags);
        auto acet = require_number(rec, "acet_ms", diags);
        auto wce = require_number(rec, "wce_mj", diags);
        auto ace = require_number(rec, "ace_mj", diags);
        if (diags.size() != before) continue;

        ContractKey key{*component, *version, *unit_type, std::nullopt};
        if (*opp_text != "ref") {
            key.opp = OperatingPoint::parse(*opp_text);
            if (!key.opp) {
                diags.push_back(make_error(rec.find("opp")->span,
                                           fmt::format("malformed operating point '{}' (expected \"<f>MHz@<v>V\" or \"ref\")", *opp_text)));
                continue;
            }
        }
        bool valid = true;
        auto positive = [&](const char* name, double value) {
            if (value <= 0.0) {
                diags.push_back(make_error(rec.find(name)->span, fmt::format("{} must be positive", name)));
                valid = false;
            }
        };
        positive("wcet_ms", *wcet);
        positive("acet_ms", *acet);
        positive("wce_mj", *wce);
        positive("ace_mj", *ace);
        if (*acet > *wcet) {
            diags.push_back(make_error(rec.find("acet_ms")->span,
                                       fmt::format("acet_ms {} exceeds wcet_ms {}", format_decimal(*acet), format_decimal(*wcet))));
            valid = false;
        }
        if (*ace > *wce) {
            diags.push_back(make_error(rec.find("ace_mj")->span,
                                       fmt::format("ace_mj {} exceeds wce_mj {}", format_decimal(*ace), format_decimal(*wce))));
            valid = false;
        }
        if (!valid) continue;
        ContractEntry entry{TimeContract{*wcet, *acet}, EnergyContract{*wce, *ace}, rec.span};
        if (const ContractEntry* prev = store.find(key)) {
            diags.push_back(make_error(rec.span, fmt::format("duplicate contract {} (first defined at line {})",
                                                             key.to_string(), prev->span.line)));
            continue;
        }
        store.insert(std::move(key), std::move(entry));
    }
    if (has_errors(diags)) return Outcome<ContractStore>::failure(std::move(diags));
    return Outcome<ContractStore>(std::move(store), std::move(diags));
}

Outcome<ContractStore> load_contracts(const std::string& path) {
    auto text = read_text_file(path);
    if (!text) return Outcome<ContractStore>::failure({make_error(SourceSpan{path, 1, 1, 1}, "cannot read file")});
    return parse_contracts(*text, path);
}

std::string serialize_contracts(const ContractStore& store) {
    std::string out;
    for (const auto& [type, opp] : store.reference_overrides()) {
        out += fmt::format("[reference]\nunit_type = {}\nopp = {}\n\n", quote(type), quote(opp.id()));
    }
    for (const auto& [key, entry] : store.entries()) {
        out += fmt::format("[contract]\ncomponent = {}\nversion   = {}\nunit_type = {}\nopp       = {}\n",
                           quote(key.component), quote(key.version), quote(key.unit_type), quote(key.opp_id()));
        out += fmt::format("wcet_ms = {}\nacet_ms = {}\nwce_mj  = {}\nace_mj  = {}\n\n", format_decimal(entry.time.wcet_ms),
                           format_decimal(entry.time.acet_ms), format_decimal(entry.energy.wce_mj),
                           format_decimal(entry.energy.ace_mj));
    }
    return out;
}

std::optional<ContractLookup> lookup(const ContractStore& store, const ContractKey& key, const ScalingModel& scaling) {
    if (const ContractEntry* exact = store.find(key)) {
        return ContractLookup{exact->time, exact->energy, false};
    }
    if (!key.opp) return std::nullopt;
    const OperatingPoint* ref = scaling.reference_for(key.unit_type);
    if (ref == nullptr) return std::nullopt;
    const ContractEntry* base = store.find(ContractKey{key.component, key.version, key.unit_type, *ref});
    if (base == nullptr) base = store.find(ContractKey{key.component, key.version, key.unit_type, std::nullopt});
    if (base == nullptr) return std::nullopt;
    const OperatingPoint& target = *key.opp;
    ContractLookup out;
    out.time.wcet_ms = scale_time(base->time.wcet_ms, *ref, target);
    out.time.acet_ms = scale_time(base->time.acet_ms, *ref, target);
    out.energy.wce_mj = scale_energy(base->energy.wce_mj, *ref, target);
    out.energy.ace_mj = scale_energy(base->energy.ace_mj, *ref, target);
    out.derived = true;
    return out;
}

std::vector<ContractKey> coverage_report(const ContractStore& store, const AppGraph& graph, const Platform& platform,
                                         const ScalingModel& scaling) {
    std::vector<ContractKey> missing;
    std::set<ContractKey> reported;
    const auto types = platform.unit_types();
    for (const auto& node : graph.nodes()) {
        if (node.voter) continue;
        for (const auto& version : node.versions) {
            for (const auto& type : version.unit_types) {
                if (std::find(types.begin(), types.end(), type) == types.end()) continue;
                for (const auto& opp : platform.opps_of_type(type)) {
                    ContractKey key{node.contract_name, version.name, type, opp};
                    if (lookup(store, key, scaling)) continue;
                    // Replicas share their original's contract keys; list each key once.
                    if (reported.insert(key).second) missing.push_back(std::move(key));
                }
            }
        }
    }
    return missing;
}

std::vector<ContractKey> coverage_report(const ContractStore& store, const AppGraph& graph, const Platform& platform) {
    auto scaling = ScalingModel::from_platform(platform, store.reference_overrides());
    if (!scaling) scaling = ScalingModel::from_platform(platform);
    return coverage_report(store, graph, platform, scaling.value());
}

}  // namespace coordsched
