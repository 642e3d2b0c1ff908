#include "coordsched/records.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

#include <fmt/format.h>

namespace coordsched {

const Field* Record::find(std::string_view key) const {
    for (const auto& f : fields) {
        if (f.key == key) return &f;
    }
    return nullptr;
}

std::vector<const Field*> Record::find_all(std::string_view key) const {
    std::vector<const Field*> out;
    for (const auto& f : fields) {
        if (f.key == key) out.push_back(&f);
    }
    return out;
}

namespace {

bool is_key_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::size_t skip_spaces(std::string_view line, std::size_t pos) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
    return pos;
}

bool rest_is_blank(std::string_view line, std::size_t pos) {
    pos = skip_spaces(line, pos);
    return pos >= line.size() || line[pos] == '#';
}

}  // namespace

Outcome<std::vector<Record>> parse_records(std::string_view text, const std::string& file_name) {
    std::vector<Record> records;
    std::vector<Diagnostic> diags;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        ++line_no;
        start = end + 1;

        auto span_at = [&](std::size_t col, std::size_t len) {
            return SourceSpan{file_name, line_no, static_cast<int>(col + 1), static_cast<int>(std::max<std::size_t>(len, 1))};
        };

        std::size_t pos = skip_spaces(line, 0);
        if (pos >= line.size() || line[pos] == '#') {
            if (end == text.size()) break;
            continue;
        }

        if (line[pos] == '[') {
            std::size_t close = line.find(']', pos);
            std::string_view name = close == std::string_view::npos ? std::string_view{} : line.substr(pos + 1, close - pos - 1);
            if (close == std::string_view::npos || name.empty() ||
                !std::all_of(name.begin(), name.end(), is_key_char) || !rest_is_blank(line, close + 1)) {
                diags.push_back(make_error(span_at(pos, line.size() - pos), "malformed record header"));
            } else {
                records.push_back(Record{std::string(name), span_at(pos, close - pos + 1), {}});
            }
        } else {
            std::size_t key_end = pos;
            while (key_end < line.size() && is_key_char(line[key_end])) ++key_end;
            std::size_t eq = skip_spaces(line, key_end);
            if (key_end == pos || eq >= line.size() || line[eq] != '=') {
                diags.push_back(make_error(span_at(pos, key_end - pos), "expected 'key = value'"));
            } else if (records.empty()) {
                diags.push_back(make_error(span_at(pos, key_end - pos), "field outside of a record"));
            } else {
                Field field;
                field.key = std::string(line.substr(pos, key_end - pos));
                std::size_t vpos = skip_spaces(line, eq + 1);
                field.span = span_at(vpos, 1);
                bool ok = true;
                std::size_t after = vpos;
                if (vpos < line.size() && line[vpos] == '"') {
                    field.quoted = true;
                    std::size_t i = vpos + 1;
                    bool closed = false;
                    while (i < line.size()) {
                        char c = line[i];
                        if (c == '\\' && i + 1 < line.size()) {
                            field.text += line[i + 1];
                            i += 2;
                        } else if (c == '"') {
                            closed = true;
                            ++i;
                            break;
                        } else {
                            field.text += c;
                            ++i;
                        }
                    }
                    ok = closed;
                    after = i;
                } else {
                    std::size_t i = vpos;
                    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '#' && line[i] != '\r') ++i;
                    field.text = std::string(line.substr(vpos, i - vpos));
                    const char* first = field.text.data();
                    const char* last = first + field.text.size();
                    if (!field.text.empty() && *first == '+') ++first;
                    auto [ptr, ec] = std::from_chars(first, last, field.number);
                    ok = !field.text.empty() && ec == std::errc{} && ptr == last && std::isfinite(field.number);
                    after = i;
                }
                field.span.length = static_cast<int>(std::max<std::size_t>(after - vpos, 1));
                if (!ok || !rest_is_blank(line, after)) {
                    diags.push_back(make_error(field.span, fmt::format("malformed value for '{}'", field.key)));
                } else {
                    records.back().fields.push_back(std::move(field));
                }
            }
        }
        if (end == text.size()) break;
    }
    if (has_errors(diags)) return Outcome<std::vector<Record>>::failure(std::move(diags));
    return Outcome<std::vector<Record>>(std::move(records), std::move(diags));
}

namespace {

const Field* require_single(const Record& rec, std::string_view key, std::vector<Diagnostic>& diags) {
    auto all = rec.find_all(key);
    if (all.empty()) {
        diags.push_back(make_error(rec.span, fmt::format("[{}] record is missing '{}'", rec.kind, key)));
        return nullptr;
    }
    if (all.size() > 1) {
        diags.push_back(make_error(all[1]->span, fmt::format("'{}' given more than once", key)));
        return nullptr;
    }
    return all.front();
}

}  // namespace

std::optional<std::string> require_string(const Record& rec, std::string_view key, std::vector<Diagnostic>& diags) {
    const Field* f = require_single(rec, key, diags);
    if (f == nullptr) return std::nullopt;
    if (!f->quoted) {
        diags.push_back(make_error(f->span, fmt::format("'{}' must be a quoted string", key)));
        return std::nullopt;
    }
    if (f->text.empty()) {
        diags.push_back(make_error(f->span, fmt::format("'{}' must not be empty", key)));
        return std::nullopt;
    }
    return f->text;
}

std::optional<double> require_number(const Record& rec, std::string_view key, std::vector<Diagnostic>& diags) {
    const Field* f = require_single(rec, key, diags);
    if (f == nullptr) return std::nullopt;
    if (f->quoted) {
        diags.push_back(make_error(f->span, fmt::format("'{}' must be a number", key)));
        return std::nullopt;
    }
    return f->number;
}

void reject_unknown_fields(const Record& rec, const std::vector<std::string_view>& known,
                           std::vector<Diagnostic>& diags) {
    for (const auto& f : rec.fields) {
        if (std::find(known.begin(), known.end(), f.key) == known.end()) {
            diags.push_back(make_error(f.span, fmt::format("unknown field '{}' in [{}] record", f.key, rec.kind)));
        }
    }
}

std::string quote(std::string_view value) {
    std::string out = "\"";
    for (char c : value) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace coordsched
