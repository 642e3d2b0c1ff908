#include "coordsched/diagnostic.hpp"

#include <algorithm>
#include <tuple>

#include <fmt/format.h>

namespace coordsched {

const char* to_string(Severity severity) {
    switch (severity) {
        case Severity::error:
            return "error";
        case Severity::warning:
            return "warning";
        case Severity::note:
            return "note";
    }
    return "error";
}

bool has_errors(const std::vector<Diagnostic>& diags) {
    return std::any_of(diags.begin(), diags.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::error; });
}

std::string render_diagnostics(std::vector<Diagnostic> diags) {
    std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) {
        return std::tie(a.span.file, a.span.line, a.span.column) <
               std::tie(b.span.file, b.span.line, b.span.column);
    });
    std::string out;
    for (const auto& d : diags) {
        out += fmt::format("{}:{}:{}: {}: {}\n", d.span.file, d.span.line, d.span.column,
                           to_string(d.severity), d.message);
    }
    return out;
}

}  // namespace coordsched
