#include "coordsched/parser.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <set>

#include <fmt/format.h>

namespace coordsched {

const char* to_string(PortDirection dir) {
    switch (dir) {
        case PortDirection::input:
            return "in";
        case PortDirection::output:
            return "out";
        case PortDirection::state:
            return "state";
    }
    return "in";
}

const char* to_string(Objective objective) {
    return objective == Objective::minimize_energy ? "minimize_energy" : "minimize_makespan";
}

bool is_supported_replica_count(int replicas) {
    return replicas == 2 || replicas == 3 || replicas == 5 || replicas == 7;
}

namespace {

enum class Tok { ident, number, lbrace, rbrace, semi, comma, dot, arrow, end, bad };

struct Token {
    Tok kind = Tok::end;
    std::string text;
    SourceSpan span;
};

const char* describe(Tok kind) {
    switch (kind) {
        case Tok::ident:
            return "identifier";
        case Tok::number:
            return "number";
        case Tok::lbrace:
            return "'{'";
        case Tok::rbrace:
            return "'}'";
        case Tok::semi:
            return "';'";
        case Tok::comma:
            return "','";
        case Tok::dot:
            return "'.'";
        case Tok::arrow:
            return "'->'";
        case Tok::end:
            return "end of input";
        case Tok::bad:
            return "invalid character";
    }
    return "token";
}

class Lexer {
public:
    Lexer(std::string_view text, const std::string& file) : text_(text), file_(file) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_trivia();
            Token t = next();
            out.push_back(t);
            if (t.kind == Tok::end || t.kind == Tok::bad) break;
        }
        return out;
    }

private:
    bool at_end() const { return pos_ >= text_.size(); }
    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
    }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_trivia() {
        while (!at_end()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '#' || (c == '/' && peek(1) == '/')) {
                while (!at_end() && peek() != '\n') advance();
            } else {
                break;
            }
        }
    }

    static bool ident_start(char c) {
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    }
    static bool ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    }
    static bool digit(char c) { return c >= '0' && c <= '9'; }

    Token next() {
        Token t;
        t.span = SourceSpan{file_, line_, col_, 1};
        if (at_end()) {
            t.kind = Tok::end;
            return t;
        }
        std::size_t start = pos_;
        char c = peek();
        auto single = [&](Tok kind) {
            advance();
            t.kind = kind;
        };
        if (ident_start(c)) {
            while (!at_end() && ident_char(peek())) advance();
            t.kind = Tok::ident;
        } else if (digit(c)) {
            while (!at_end() && digit(peek())) advance();
            if (peek() == '.' && digit(peek(1))) {
                advance();
                while (!at_end() && digit(peek())) advance();
            }
            t.kind = Tok::number;
        } else if (c == '-' && peek(1) == '>') {
            advance();
            advance();
            t.kind = Tok::arrow;
        } else if (c == '{') {
            single(Tok::lbrace);
        } else if (c == '}') {
            single(Tok::rbrace);
        } else if (c == ';') {
            single(Tok::semi);
        } else if (c == ',') {
            single(Tok::comma);
        } else if (c == '.') {
            single(Tok::dot);
        } else {
            single(Tok::bad);
        }
        t.text = std::string(text_.substr(start, pos_ - start));
        t.span.length = static_cast<int>(std::max<std::size_t>(1, pos_ - start));
        return t;
    }

    std::string_view text_;
    const std::string& file_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

struct SyntaxError {
    Diagnostic diag;
};

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    AppDecl parse() {
        AppDecl app;
        expect_keyword("app");
        app.app_name = expect_ident("application name");
        expect(Tok::lbrace, "after application name");
        bool saw_period = false;
        bool saw_deadline = false;
        while (!check(Tok::rbrace)) {
            const Token& kw = expect_ident_token("declaration keyword");
            if (kw.text == "period") {
                app.period_ms = parse_duration();
                saw_period = true;
                expect(Tok::semi, "after period");
            } else if (kw.text == "deadline") {
                app.deadline_ms = parse_duration();
                saw_deadline = true;
                expect(Tok::semi, "after deadline");
            } else if (kw.text == "objective") {
                Ident obj = expect_ident("objective");
                if (obj.text == "minimize_energy") {
                    app.objective = Objective::minimize_energy;
                } else if (obj.text == "minimize_makespan") {
                    app.objective = Objective::minimize_makespan;
                } else {
                    fail(obj.span, fmt::format("unknown objective '{}'", obj.text));
                }
                expect(Tok::semi, "after objective");
            } else if (kw.text == "type") {
                app.type_names.push_back(expect_ident("type name"));
                expect(Tok::semi, "after type declaration");
            } else if (kw.text == "component") {
                app.components.push_back(parse_component());
            } else if (kw.text == "edge") {
                app.edges.push_back(parse_edge(kw.span));
            } else {
                fail(kw.span, fmt::format("unexpected '{}' in application body", kw.text));
            }
        }
        const Token& close = toks_[pos_];
        expect(Tok::rbrace, "to close application");
        if (!check(Tok::end)) {
            fail(toks_[pos_].span, "unexpected input after application");
        }
        if (!saw_period) fail(close.span, "missing 'period' declaration");
        if (!saw_deadline) fail(close.span, "missing 'deadline' declaration");
        return app;
    }

private:
    [[noreturn]] void fail(const SourceSpan& span, std::string message) {
        throw SyntaxError{make_error(span, std::move(message))};
    }

    bool check(Tok kind) const { return toks_[pos_].kind == kind; }

    bool check_keyword(std::string_view kw) const {
        return toks_[pos_].kind == Tok::ident && toks_[pos_].text == kw;
    }

    const Token& advance() {
        const Token& t = toks_[pos_];
        if (t.kind != Tok::end && t.kind != Tok::bad) ++pos_;
        return t;
    }

    [[noreturn]] void unexpected(const std::string& wanted) {
        const Token& t = toks_[pos_];
        if (t.kind == Tok::bad) {
            fail(t.span, fmt::format("invalid character '{}'", printable(t.text)));
        }
        std::string got = t.kind == Tok::end ? "end of input" : fmt::format("'{}'", t.text);
        fail(t.span, fmt::format("expected {}, found {}", wanted, got));
    }

    static std::string printable(const std::string& s) {
        std::string out;
        for (unsigned char c : s) {
            if (c >= 0x20 && c < 0x7f) {
                out += static_cast<char>(c);
            } else {
                out += fmt::format("\\x{:02x}", c);
            }
        }
        return out;
    }

    const Token& expect(Tok kind, const char* context) {
        if (!check(kind)) unexpected(fmt::format("{} {}", describe(kind), context));
        return advance();
    }

    const Token& expect_ident_token(const char* what) {
        if (!check(Tok::ident)) unexpected(what);
        return advance();
    }

    Ident expect_ident(const char* what) {
        const Token& t = expect_ident_token(what);
        return Ident{t.text, t.span};
    }

    void expect_keyword(std::string_view kw) {
        if (!check_keyword(kw)) unexpected(fmt::format("'{}'", kw));
        advance();
    }

    double parse_number(const Token& t) {
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
        if (ec != std::errc{} || ptr != t.text.data() + t.text.size() || !std::isfinite(value)) {
            fail(t.span, fmt::format("malformed number '{}'", t.text));
        }
        return value;
    }

    double parse_duration() {
        const Token& num = expect(Tok::number, "for duration");
        double value = parse_number(num);
        if (!check(Tok::ident)) unexpected("time unit 'ms'");
        const Token& unit = advance();
        if (unit.text != "ms") {
            fail(unit.span, fmt::format("unsupported time unit '{}'; only 'ms' is accepted", unit.text));
        }
        if (value <= 0.0) fail(num.span, "duration must be positive");
        return value;
    }

    ComponentDecl parse_component() {
        ComponentDecl comp;
        comp.name = expect_ident("component name");
        expect(Tok::lbrace, "after component name");
        while (!check(Tok::rbrace)) {
            const Token& kw = expect_ident_token("port, version or ft declaration");
            if (kw.text == "in" || kw.text == "out" || kw.text == "state") {
                PortDecl port;
                port.direction = kw.text == "in"    ? PortDirection::input
                                 : kw.text == "out" ? PortDirection::output
                                                    : PortDirection::state;
                port.data_type = expect_ident("port type");
                port.port_name = expect_ident("port name");
                expect(Tok::semi, "after port declaration");
                comp.ports.push_back(std::move(port));
            } else if (kw.text == "version") {
                VersionDecl version;
                version.version_name = expect_ident("version name");
                expect_keyword("on");
                version.compatible_unit_types.push_back(expect_ident("unit type"));
                while (check(Tok::comma)) {
                    advance();
                    version.compatible_unit_types.push_back(expect_ident("unit type"));
                }
                expect(Tok::semi, "after version declaration");
                comp.versions.push_back(std::move(version));
            } else if (kw.text == "ft") {
                if (comp.ft) fail(kw.span, "duplicate ft annotation");
                expect(Tok::lbrace, "after 'ft'");
                expect_keyword("replicas");
                const Token& num = expect(Tok::number, "for replica count");
                double value = parse_number(num);
                if (value != std::floor(value) || value > 1000.0) {
                    fail(num.span, "replica count must be an integer");
                }
                expect(Tok::semi, "after replica count");
                expect(Tok::rbrace, "to close ft annotation");
                comp.ft = FtAnnotation{static_cast<int>(value), num.span};
            } else {
                fail(kw.span, fmt::format("unexpected '{}' in component body", kw.text));
            }
        }
        advance();
        return comp;
    }

    EdgeDecl parse_edge(const SourceSpan& start) {
        EdgeDecl edge;
        edge.producer.component = expect_ident("producer component");
        expect(Tok::dot, "between component and port");
        edge.producer.port = expect_ident("producer port");
        expect(Tok::arrow, "between edge endpoints");
        edge.consumer.component = expect_ident("consumer component");
        expect(Tok::dot, "between component and port");
        edge.consumer.port = expect_ident("consumer port");
        const Token& semi = expect(Tok::semi, "after edge");
        edge.span = start;
        if (semi.span.line == start.line) {
            edge.span.length = semi.span.column + 1 - start.column;
        }
        return edge;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

template <typename Range, typename Key>
void report_duplicates(const Range& items, Key key, const std::string& what,
                       std::vector<Diagnostic>& diags) {
    std::set<std::string> seen;
    for (const auto& item : items) {
        const Ident& id = key(item);
        if (!seen.insert(id.text).second) {
            diags.push_back(make_error(id.span, fmt::format("duplicate {} '{}'", what, id.text)));
        }
    }
}

const PortDecl* find_port(const ComponentDecl& comp, const std::string& name) {
    for (const auto& p : comp.ports) {
        if (p.port_name.text == name) return &p;
    }
    return nullptr;
}

}  // namespace

std::vector<Diagnostic> check_declarations(const AppDecl& decl) {
    std::vector<Diagnostic> diags;
    const SourceSpan& app_span = decl.app_name.span;

    if (decl.period_ms <= 0.0) diags.push_back(make_error(app_span, "period must be positive"));
    if (decl.deadline_ms <= 0.0) diags.push_back(make_error(app_span, "deadline must be positive"));
    if (decl.deadline_ms > decl.period_ms && decl.period_ms > 0.0) {
        diags.push_back(make_error(
            app_span, fmt::format("deadline {}ms exceeds period {}ms", format_decimal(decl.deadline_ms),
                                  format_decimal(decl.period_ms))));
    }

    report_duplicates(decl.type_names, [](const Ident& i) -> const Ident& { return i; }, "type", diags);
    report_duplicates(decl.components, [](const ComponentDecl& c) -> const Ident& { return c.name; },
                      "component", diags);

    std::set<std::string> types;
    for (const auto& t : decl.type_names) types.insert(t.text);

    std::map<std::string, const ComponentDecl*> components;
    for (const auto& c : decl.components) components.emplace(c.name.text, &c);

    for (const auto& comp : decl.components) {
        report_duplicates(comp.ports, [](const PortDecl& p) -> const Ident& { return p.port_name; },
                          fmt::format("port in component '{}':", comp.name.text), diags);
        report_duplicates(comp.versions,
                          [](const VersionDecl& v) -> const Ident& { return v.version_name; },
                          fmt::format("version in component '{}':", comp.name.text), diags);
        for (const auto& p : comp.ports) {
            if (!types.contains(p.data_type.text)) {
                diags.push_back(make_error(p.data_type.span,
                                           fmt::format("unknown type {}", p.data_type.text)));
            }
        }
        if (comp.versions.empty()) {
            diags.push_back(make_error(comp.name.span,
                                       fmt::format("component {} declares no version", comp.name.text)));
        }
        for (const auto& v : comp.versions) {
            if (v.compatible_unit_types.empty()) {
                diags.push_back(make_error(v.version_name.span,
                                           fmt::format("version {} has no unit type", v.version_name.text)));
            }
            std::set<std::string> seen;
            for (const auto& u : v.compatible_unit_types) {
                if (!seen.insert(u.text).second) {
                    diags.push_back(make_error(u.span, fmt::format("duplicate unit type '{}'", u.text)));
                }
            }
        }
        if (comp.ft && !is_supported_replica_count(comp.ft->replicas)) {
            diags.push_back(make_error(
                comp.ft->span,
                fmt::format("unsupported replica count {} (expected 2, 3, 5 or 7)", comp.ft->replicas)));
        }
    }

    std::set<std::pair<std::string, std::string>> seen_edges;
    for (const auto& e : decl.edges) {
        bool resolved = true;
        auto resolve = [&](const PortRef& ref, PortDirection wanted) {
            auto it = components.find(ref.component.text);
            if (it == components.end()) {
                diags.push_back(make_error(e.span, fmt::format("unknown component {}", ref.component.text)));
                resolved = false;
                return;
            }
            const PortDecl* port = find_port(*it->second, ref.port.text);
            if (port == nullptr) {
                diags.push_back(make_error(
                    e.span, fmt::format("unknown port {}.{}", ref.component.text, ref.port.text)));
                resolved = false;
                return;
            }
            if (port->direction != wanted) {
                diags.push_back(make_error(
                    e.span, fmt::format("port {}.{} is declared '{}' but used as {}", ref.component.text,
                                        ref.port.text, to_string(port->direction),
                                        wanted == PortDirection::output ? "a producer" : "a consumer")));
                resolved = false;
            }
        };
        resolve(e.producer, PortDirection::output);
        resolve(e.consumer, PortDirection::input);
        if (!resolved) continue;
        auto key = std::make_pair(e.producer.component.text + "." + e.producer.port.text,
                                  e.consumer.component.text + "." + e.consumer.port.text);
        if (!seen_edges.insert(key).second) {
            diags.push_back(make_error(e.span, fmt::format("duplicate edge {} -> {}", key.first, key.second)));
        }
    }
    return diags;
}

Outcome<AppDecl> parse_app(std::string_view source_text, const std::string& file_name) {
    Lexer lexer(source_text, file_name);
    Parser parser(lexer.run());
    AppDecl decl;
    try {
        decl = parser.parse();
    } catch (const SyntaxError& err) {
        return Outcome<AppDecl>::failure({err.diag});
    }
    auto diags = check_declarations(decl);
    if (has_errors(diags)) return Outcome<AppDecl>::failure(std::move(diags));
    return Outcome<AppDecl>(std::move(decl), std::move(diags));
}

std::string format_decimal(double value) {
    std::string s = fmt::format("{}", value);
    if (s.find_first_of("eE") == std::string::npos) return s;
    s = fmt::format("{:.17f}", value);
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

std::string print_app(const AppDecl& decl) {
    std::string out = fmt::format("app {} {{\n", decl.app_name.text);
    out += fmt::format("  period {}ms; deadline {}ms; objective {};\n", format_decimal(decl.period_ms),
                       format_decimal(decl.deadline_ms), to_string(decl.objective));
    for (const auto& t : decl.type_names) out += fmt::format("  type {};\n", t.text);
    for (const auto& c : decl.components) {
        out += fmt::format("  component {} {{\n", c.name.text);
        for (const auto& p : c.ports) {
            out += fmt::format("    {} {} {};\n", to_string(p.direction), p.data_type.text, p.port_name.text);
        }
        for (const auto& v : c.versions) {
            std::string units;
            for (const auto& u : v.compatible_unit_types) {
                if (!units.empty()) units += ", ";
                units += u.text;
            }
            out += fmt::format("    version {} on {};\n", v.version_name.text, units);
        }
        if (c.ft) out += fmt::format("    ft {{ replicas {}; }}\n", c.ft->replicas);
        out += "  }\n";
    }
    for (const auto& e : decl.edges) {
        out += fmt::format("  edge {}.{} -> {}.{};\n", e.producer.component.text, e.producer.port.text,
                           e.consumer.component.text, e.consumer.port.text);
    }
    out += "}\n";
    return out;
}

}  // namespace coordsched
