#include <gtest/gtest.h>

#include <random>

#include "coordsched/parser.hpp"
#include "fixtures.hpp"
#include "random_apps.hpp"

using namespace coordsched;
using namespace coordsched::testing;

namespace {

AppDecl parse_ok(const std::string& text) {
    auto r = parse_app(text, "t.coord");
    EXPECT_TRUE(r.ok()) << render_diagnostics(r.diagnostics());
    return r.ok() ? r.value() : AppDecl{};
}

std::vector<Diagnostic> parse_errors(const std::string& text) {
    auto r = parse_app(text, "t.coord");
    if (!r.ok()) return r.diagnostics();
    return check_declarations(r.value());
}

}  // namespace

TEST(Parser, VisionFixture) {
    auto text = read_text_file(data_path("vision.coord"));
    ASSERT_TRUE(text);
    AppDecl decl = parse_ok(*text);
    EXPECT_EQ(decl.app_name.text, "VisionPipeline");
    EXPECT_EQ(decl.components.size(), 5u);
    EXPECT_EQ(decl.edges.size(), 5u);
    EXPECT_DOUBLE_EQ(decl.period_ms, 40.0);
    EXPECT_DOUBLE_EQ(decl.deadline_ms, 40.0);
    EXPECT_EQ(decl.objective, Objective::minimize_energy);
    ASSERT_TRUE(decl.components[3].ft);
    EXPECT_EQ(decl.components[3].ft->replicas, 3);
    EXPECT_EQ(decl.components[1].versions.size(), 2u);
    EXPECT_TRUE(check_declarations(decl).empty());
}

TEST(Parser, EmptyApplication) {
    AppDecl decl = parse_ok("app A { period 10ms; deadline 10ms; }");
    EXPECT_EQ(decl.app_name.text, "A");
    EXPECT_TRUE(decl.components.empty());
    EXPECT_TRUE(decl.edges.empty());
    EXPECT_EQ(decl.objective, Objective::minimize_energy);
}

TEST(Parser, UnknownComponentAtEdgeSpan) {
    const std::string text =
        "app A { period 10ms; deadline 10ms; type t;\n"
        "  component X { out t out; version v on big; }\n"
        "  edge X.out -> Y.in;\n"
        "}\n";
    auto diags = parse_errors(text);
    ASSERT_EQ(diags.size(), 1u) << render_diagnostics(diags);
    EXPECT_EQ(diags[0].message, "unknown component Y");
    EXPECT_EQ(diags[0].span.line, 3);
    EXPECT_EQ(diags[0].span.column, 3);
    EXPECT_EQ(render_diagnostics(diags), "t.coord:3:3: error: unknown component Y\n");
}

TEST(Parser, DecimalDeadlineAndObjective) {
    AppDecl decl = parse_ok("app A { period 20ms; deadline 10.5ms; objective minimize_makespan; }");
    EXPECT_DOUBLE_EQ(decl.deadline_ms, 10.5);
    EXPECT_EQ(decl.objective, Objective::minimize_makespan);
}

TEST(Parser, CommentsAreIgnored) {
    AppDecl decl = parse_ok("# leading\napp A { // trailing\n period 1ms; deadline 1ms; }\n");
    EXPECT_EQ(decl.app_name.text, "A");
}

TEST(Parser, SyntaxErrorsCarryPositions) {
    auto r = parse_app("app A {\n  period 10s;\n  deadline 5ms;\n}", "s.coord");
    ASSERT_FALSE(r.ok());
    ASSERT_FALSE(r.diagnostics().empty());
    EXPECT_EQ(r.diagnostics()[0].span.file, "s.coord");
    EXPECT_EQ(r.diagnostics()[0].span.line, 2);

    for (const char* bad : {"", "app", "app A {", "app A { period 10s; deadline 1ms; }", "app A { deadline 1ms; }",
                            "app A { period 1ms; }", "app A { period 1ms; deadline 1ms; } trailing",
                            "app A { period 1ms; deadline 1ms; component C { in t; } }", "app A { period -1ms; deadline 1ms; }",
                            "app A { period 1ms; deadline 1ms; objective fastest; }", "app A { period 1ms; deadline 1ms; @ }"}) {
        auto res = parse_app(bad, "b.coord");
        EXPECT_FALSE(res.ok()) << bad;
        EXPECT_FALSE(res.diagnostics().empty()) << bad;
    }
}

TEST(Parser, DeclarationRules) {
    auto has = [](const std::vector<Diagnostic>& diags, const std::string& needle) {
        for (const auto& d : diags) {
            if (d.message.find(needle) != std::string::npos) return true;
        }
        return false;
    };
    EXPECT_TRUE(has(parse_errors("app A { period 10ms; deadline 20ms; }"), "exceeds period"));
    EXPECT_TRUE(has(parse_errors("app A { period 1ms; deadline 1ms; type t; type t; }"), "duplicate type"));
    EXPECT_TRUE(has(parse_errors("app A { period 1ms; deadline 1ms; type t;"
                                 " component C { out t o; version v on big; } component C { version v on big; } }"),
                    "duplicate component"));
    EXPECT_TRUE(has(parse_errors("app A { period 1ms; deadline 1ms; component C { out u o; version v on big; } }"),
                    "unknown type u"));
    EXPECT_TRUE(has(parse_errors("app A { period 1ms; deadline 1ms; type t; component C { out t o; } }"),
                    "declares no version"));
    EXPECT_TRUE(has(parse_errors("app A { period 1ms; deadline 1ms; type t;"
                                 " component C { out t o; version v on big; ft { replicas 4; } } }"),
                    "unsupported replica count 4"));
    EXPECT_TRUE(has(parse_errors("app A { period 1ms; deadline 1ms; type t;"
                                 " component C { out t o; out t o; version v on big; } }"),
                    "duplicate port"));
    EXPECT_TRUE(has(parse_errors("app A { period 1ms; deadline 1ms; type t;"
                                 " component C { out t o; version v on big, big; } }"),
                    "duplicate unit type"));
    EXPECT_TRUE(has(parse_errors("app A { period 1ms; deadline 1ms; type t;"
                                 " component C { out t o; version v on big; }"
                                 " component D { in t i; version v on big; }"
                                 " edge C.o -> D.nope; }"),
                    "unknown port D.nope"));
    EXPECT_TRUE(has(parse_errors("app A { period 1ms; deadline 1ms; type t;"
                                 " component C { in t o; version v on big; }"
                                 " component D { in t i; version v on big; }"
                                 " edge C.o -> D.i; }"),
                    "used as a producer"));
    EXPECT_TRUE(has(parse_errors("app A { period 1ms; deadline 1ms; type t;"
                                 " component C { out t o; version v on big; }"
                                 " component D { in t i; version v on big; }"
                                 " edge C.o -> D.i; edge C.o -> D.i; }"),
                    "duplicate edge"));
}

TEST(Parser, SpansPointIntoSource) {
    auto text = read_text_file(data_path("vision.coord"));
    ASSERT_TRUE(text);
    AppDecl decl = parse_ok(*text);
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= text->size()) {
        auto nl = text->find('\n', start);
        lines.push_back(text->substr(start, nl == std::string::npos ? std::string::npos : nl - start));
        if (nl == std::string::npos) break;
        start = nl + 1;
    }
    auto check = [&](const Ident& id) {
        ASSERT_GE(id.span.line, 1);
        ASSERT_LE(static_cast<std::size_t>(id.span.line), lines.size());
        const auto& line = lines[static_cast<std::size_t>(id.span.line - 1)];
        ASSERT_GE(id.span.column, 1);
        EXPECT_EQ(line.substr(static_cast<std::size_t>(id.span.column - 1), id.text.size()), id.text);
        EXPECT_EQ(id.span.length, static_cast<int>(id.text.size()));
    };
    check(decl.app_name);
    for (const auto& t : decl.type_names) check(t);
    for (const auto& c : decl.components) {
        check(c.name);
        for (const auto& p : c.ports) {
            check(p.data_type);
            check(p.port_name);
        }
        for (const auto& v : c.versions) {
            check(v.version_name);
            for (const auto& u : v.compatible_unit_types) check(u);
        }
    }
    for (const auto& e : decl.edges) {
        check(e.producer.component);
        check(e.producer.port);
        check(e.consumer.component);
        check(e.consumer.port);
    }
}

TEST(Parser, PrintRoundTrip) {
    auto text = read_text_file(data_path("vision.coord"));
    ASSERT_TRUE(text);
    AppDecl decl = parse_ok(*text);
    AppDecl again = parse_ok(print_app(decl));
    EXPECT_EQ(decl, again);
    EXPECT_EQ(print_app(decl), print_app(again));
}

TEST(Parser, FormatDecimal) {
    EXPECT_EQ(format_decimal(40.0), "40");
    EXPECT_EQ(format_decimal(10.5), "10.5");
    EXPECT_EQ(format_decimal(0.125), "0.125");
    EXPECT_EQ(format_decimal(1e-7), "0.0000001");
}

TEST(Diagnostics, RenderFormatAndOrder) {
    EXPECT_EQ(render_diagnostics({}), "");
    std::vector<Diagnostic> one{make_error({"a.coord", 3, 5, 1}, "boom")};
    EXPECT_EQ(render_diagnostics(one), "a.coord:3:5: error: boom\n");
    std::vector<Diagnostic> two{make_warning({"b.coord", 1, 1, 1}, "later file"), make_error({"a.coord", 9, 2, 1}, "second"),
                                make_error({"a.coord", 2, 7, 1}, "first")};
    EXPECT_EQ(render_diagnostics(two),
              "a.coord:2:7: error: first\na.coord:9:2: error: second\nb.coord:1:1: warning: later file\n");
}

TEST(ParserProperty, RandomAppsRoundTrip) {
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        AppGenOptions opts;
        opts.ft_probability = 0.3;
        AppDecl decl = random_valid_app(rng, opts);
        const std::string printed = print_app(decl);
        auto parsed = parse_app(printed, "r.coord");
        ASSERT_TRUE(parsed.ok()) << printed << render_diagnostics(parsed.diagnostics());
        EXPECT_EQ(parsed.value(), decl) << printed;
        EXPECT_EQ(print_app(parsed.value()), printed);
    }
}

TEST(ParserProperty, ArbitraryBytesNeverCrash) {
    Rng rng(5);
    auto text = read_text_file(data_path("vision.coord"));
    ASSERT_TRUE(text);
    const std::string alphabet = "app{};,.->#/ \n\tmsXY019_component edge in out version on ft replicas period deadline";
    for (int i = 0; i < 2000; ++i) {
        std::string s;
        if (i % 2 == 0) {
            // Mutate the fixture.
            s = *text;
            int edits = std::uniform_int_distribution<int>(1, 5)(rng);
            for (int k = 0; k < edits && !s.empty(); ++k) {
                auto pos = std::uniform_int_distribution<std::size_t>(0, s.size() - 1)(rng);
                switch (rng() % 3) {
                    case 0: s.erase(pos, 1); break;
                    case 1: s.insert(pos, 1, alphabet[rng() % alphabet.size()]); break;
                    default: s[pos] = static_cast<char>(rng() % 256); break;
                }
            }
        } else {
            auto len = std::uniform_int_distribution<int>(0, 80)(rng);
            for (int k = 0; k < len; ++k) s += static_cast<char>(rng() % 256);
        }
        auto r = parse_app(s, "fuzz.coord");
        if (r.ok()) {
            (void)check_declarations(r.value());
        } else {
            EXPECT_FALSE(r.diagnostics().empty());
        }
    }
}
