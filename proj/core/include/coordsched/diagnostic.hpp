#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace coordsched {

/// Location of a token or construct inside a source file. Lines and columns are 1-based.
struct SourceSpan {
    std::string file;
    int line = 1;
    int column = 1;
    int length = 1;

    friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

enum class Severity { error, warning, note };

const char* to_string(Severity severity);

struct Diagnostic {
    Severity severity = Severity::error;
    SourceSpan span;
    std::string message;
};

inline Diagnostic make_error(SourceSpan span, std::string message) {
    return Diagnostic{Severity::error, std::move(span), std::move(message)};
}

inline Diagnostic make_warning(SourceSpan span, std::string message) {
    return Diagnostic{Severity::warning, std::move(span), std::move(message)};
}

bool has_errors(const std::vector<Diagnostic>& diags);

/// One line per diagnostic, `file:line:col: severity: message`, sorted by position.
std::string render_diagnostics(std::vector<Diagnostic> diags);

/// Value-or-diagnostics result used by every loader and compiler pass.
/// Warnings may accompany a successful value.
template <typename T>
class Outcome {
public:
    Outcome(T value, std::vector<Diagnostic> diags = {})
        : value_(std::move(value)), diags_(std::move(diags)) {}

    static Outcome failure(std::vector<Diagnostic> diags) {
        Outcome out;
        out.diags_ = std::move(diags);
        return out;
    }

    bool ok() const { return value_.has_value(); }
    explicit operator bool() const { return ok(); }

    const T& value() const& { return *value_; }
    T& value() & { return *value_; }
    T&& value() && { return std::move(*value_); }
    const T* operator->() const { return &*value_; }

    const std::vector<Diagnostic>& diagnostics() const { return diags_; }

private:
    Outcome() = default;

    std::optional<T> value_;
    std::vector<Diagnostic> diags_;
};

}  // namespace coordsched
