#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coordsched/diagnostic.hpp"

namespace coordsched {

/// A DVFS operating point. Identity is numeric: "800MHz@0.9V" and "800MHz@0.90V"
/// name the same point.
struct OperatingPoint {
    double freq_mhz = 0.0;
    double voltage_v = 0.0;

    /// Canonical id, e.g. "1800MHz@1.10V".
    std::string id() const;
    /// Accepts "<freq>MHz@<voltage>V" with positive decimal numbers.
    static std::optional<OperatingPoint> parse(std::string_view text);

    friend auto operator<=>(const OperatingPoint&, const OperatingPoint&) = default;
};

struct ProcessingUnit {
    std::string name;
    std::string unit_type;
    std::vector<OperatingPoint> opps;
    double static_power_mw = 0.0;

    bool has_opp(const OperatingPoint& opp) const;

    friend bool operator==(const ProcessingUnit&, const ProcessingUnit&) = default;
};

struct Platform {
    std::string name;
    std::vector<ProcessingUnit> units;

    const ProcessingUnit* find_unit(std::string_view unit_name) const;
    /// Distinct unit types in first-appearance order.
    std::vector<std::string> unit_types() const;
    /// Union of the operating points of all units of `unit_type`, ascending.
    std::vector<OperatingPoint> opps_of_type(std::string_view unit_type) const;
    double total_static_power_mw() const;

    friend bool operator==(const Platform&, const Platform&) = default;
};

Outcome<Platform> parse_platform(std::string_view text, const std::string& file_name);
Outcome<Platform> load_platform(const std::string& path);

/// Writes the `.platform` format; parsing the result yields an equal Platform.
std::string serialize_platform(const Platform& platform);

/// Fixed-width unit/OPP table for `platform show`.
std::string render_platform_table(const Platform& platform);

/// Reads a whole file; nullopt when it cannot be opened.
std::optional<std::string> read_text_file(const std::string& path);

}  // namespace coordsched
