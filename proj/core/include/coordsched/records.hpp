#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coordsched/diagnostic.hpp"

namespace coordsched {

// Flat `[record]` / `key = value` text shared by the .contracts and .platform files.
// Values are either double-quoted strings or decimal numbers; `#` starts a comment.

struct Field {
    std::string key;
    bool quoted = false;
    std::string text;  // string contents, or the number as written
    double number = 0.0;
    SourceSpan span;
};

struct Record {
    std::string kind;
    SourceSpan span;
    std::vector<Field> fields;

    const Field* find(std::string_view key) const;
    std::vector<const Field*> find_all(std::string_view key) const;
};

Outcome<std::vector<Record>> parse_records(std::string_view text, const std::string& file_name);

/// Reads a required scalar field and appends a diagnostic when it is absent,
/// repeated, or of the wrong kind.
std::optional<std::string> require_string(const Record& rec, std::string_view key, std::vector<Diagnostic>& diags);
std::optional<double> require_number(const Record& rec, std::string_view key, std::vector<Diagnostic>& diags);

/// Reports fields not listed in `known`.
void reject_unknown_fields(const Record& rec, const std::vector<std::string_view>& known,
                           std::vector<Diagnostic>& diags);

/// Quotes a string value for writing.
std::string quote(std::string_view value);

}  // namespace coordsched
