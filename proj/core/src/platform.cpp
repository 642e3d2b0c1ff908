#include "coordsched/platform.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "coordsched/parser.hpp"
#include "coordsched/records.hpp"

namespace coordsched {

std::string OperatingPoint::id() const {
    double cents = std::round(voltage_v * 100.0) / 100.0;
    std::string volts = cents == voltage_v ? fmt::format("{:.2f}", voltage_v) : format_decimal(voltage_v);
    return fmt::format("{}MHz@{}V", format_decimal(freq_mhz), volts);
}

namespace {

std::optional<double> parse_positive(std::string_view text) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value) ||
        value <= 0.0) {
        return std::nullopt;
    }
    return value;
}

}  // namespace

std::optional<OperatingPoint> OperatingPoint::parse(std::string_view text) {
    auto at = text.find('@');
    if (at == std::string_view::npos) return std::nullopt;
    std::string_view freq = text.substr(0, at);
    std::string_view volt = text.substr(at + 1);
    if (!freq.ends_with("MHz") || !volt.ends_with("V")) return std::nullopt;
    auto f = parse_positive(freq.substr(0, freq.size() - 3));
    auto v = parse_positive(volt.substr(0, volt.size() - 1));
    if (!f || !v) return std::nullopt;
    return OperatingPoint{*f, *v};
}

bool ProcessingUnit::has_opp(const OperatingPoint& opp) const {
    return std::find(opps.begin(), opps.end(), opp) != opps.end();
}

const ProcessingUnit* Platform::find_unit(std::string_view unit_name) const {
    for (const auto& u : units) {
        if (u.name == unit_name) return &u;
    }
    return nullptr;
}

std::vector<std::string> Platform::unit_types() const {
    std::vector<std::string> types;
    for (const auto& u : units) {
        if (std::find(types.begin(), types.end(), u.unit_type) == types.end()) types.push_back(u.unit_type);
    }
    return types;
}

std::vector<OperatingPoint> Platform::opps_of_type(std::string_view unit_type) const {
    std::set<OperatingPoint> all;
    for (const auto& u : units) {
        if (u.unit_type == unit_type) all.insert(u.opps.begin(), u.opps.end());
    }
    return {all.begin(), all.end()};
}

double Platform::total_static_power_mw() const {
    double sum = 0.0;
    for (const auto& u : units) sum += u.static_power_mw;
    return sum;
}

namespace {

bool is_identifier(std::string_view s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

}  // namespace

Outcome<Platform> parse_platform(std::string_view text, const std::string& file_name) {
    auto records = parse_records(text, file_name);
    if (!records) return Outcome<Platform>::failure(records.diagnostics());

    std::vector<Diagnostic> diags;
    Platform platform;
    platform.name = std::filesystem::path(file_name).stem().string();
    bool named = false;
    std::set<std::string> unit_names;
    for (const auto& rec : records.value()) {
        if (rec.kind == "platform") {
            reject_unknown_fields(rec, {"name"}, diags);
            if (named) diags.push_back(make_error(rec.span, "duplicate [platform] record"));
            named = true;
            if (auto name = require_string(rec, "name", diags)) platform.name = *name;
            continue;
        }
        if (rec.kind != "unit") {
            diags.push_back(make_error(rec.span, fmt::format("unknown record kind [{}]", rec.kind)));
            continue;
        }
        reject_unknown_fields(rec, {"name", "type", "static_power_mw", "opp"}, diags);
        ProcessingUnit unit;
        auto name = require_string(rec, "name", diags);
        auto type = require_string(rec, "type", diags);
        auto power = require_number(rec, "static_power_mw", diags);
        if (name) {
            if (!is_identifier(*name)) {
                diags.push_back(make_error(rec.find("name")->span, fmt::format("unit name '{}' is not an identifier", *name)));
            } else if (!unit_names.insert(*name).second) {
                diags.push_back(make_error(rec.find("name")->span, fmt::format("duplicate unit name '{}'", *name)));
            }
            unit.name = *name;
        }
        if (type) {
            if (!is_identifier(*type)) {
                diags.push_back(make_error(rec.find("type")->span, fmt::format("unit type '{}' is not an identifier", *type)));
            }
            unit.unit_type = *type;
        }
        if (power) {
            if (*power < 0.0) {
                diags.push_back(make_error(rec.find("static_power_mw")->span, "static_power_mw must not be negative"));
            }
            unit.static_power_mw = *power;
        }
        auto opps = rec.find_all("opp");
        if (opps.empty()) {
            diags.push_back(make_error(rec.span, fmt::format("unit '{}' has no operating points", unit.name)));
        }
        for (const Field* f : opps) {
            auto opp = f->quoted ? OperatingPoint::parse(f->text) : std::nullopt;
            if (!opp) {
                diags.push_back(make_error(f->span, fmt::format("malformed operating point '{}' (expected \"<f>MHz@<v>V\")", f->text)));
            } else if (unit.has_opp(*opp)) {
                diags.push_back(make_error(f->span, fmt::format("duplicate operating point {}", opp->id())));
            } else {
                unit.opps.push_back(*opp);
            }
        }
        platform.units.push_back(std::move(unit));
    }
    if (platform.units.empty() && !has_errors(diags)) {
        diags.push_back(make_error(SourceSpan{file_name, 1, 1, 1}, "platform declares no units"));
    }
    if (has_errors(diags)) return Outcome<Platform>::failure(std::move(diags));
    return Outcome<Platform>(std::move(platform), std::move(diags));
}

std::optional<std::string> read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Outcome<Platform> load_platform(const std::string& path) {
    auto text = read_text_file(path);
    if (!text) return Outcome<Platform>::failure({make_error(SourceSpan{path, 1, 1, 1}, "cannot read file")});
    return parse_platform(*text, path);
}

std::string serialize_platform(const Platform& platform) {
    std::string out = fmt::format("[platform]\nname = {}\n", quote(platform.name));
    for (const auto& u : platform.units) {
        out += fmt::format("\n[unit]\nname = {}\ntype = {}\nstatic_power_mw = {}\n", quote(u.name), quote(u.unit_type),
                           format_decimal(u.static_power_mw));
        for (const auto& o : u.opps) out += fmt::format("opp = {}\n", quote(o.id()));
    }
    return out;
}

std::string render_platform_table(const Platform& platform) {
    std::size_t name_w = 4, type_w = 4;
    for (const auto& u : platform.units) {
        name_w = std::max(name_w, u.name.size());
        type_w = std::max(type_w, u.unit_type.size());
    }
    std::string out = fmt::format("platform {} ({} units, static {:.3f} mW total)\n", platform.name,
                                  platform.units.size(), platform.total_static_power_mw());
    out += fmt::format("{:<{}}  {:<{}}  {:>12}  {}\n", "unit", name_w, "type", type_w, "static_mW", "operating points");
    for (const auto& u : platform.units) {
        std::string opps;
        for (const auto& o : u.opps) {
            if (!opps.empty()) opps += ", ";
            opps += o.id();
        }
        out += fmt::format("{:<{}}  {:<{}}  {:>12.3f}  {}\n", u.name, name_w, u.unit_type, type_w, u.static_power_mw, opps);
    }
    return out;
}

}  // namespace coordsched
