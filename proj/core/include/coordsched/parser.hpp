#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "coordsched/ast.hpp"
#include "coordsched/diagnostic.hpp"

namespace coordsched {

/// Parses `.coord` source text. Syntax errors stop parsing at the first offending
/// token; name-resolution errors are all collected. Never throws on malformed input.
Outcome<AppDecl> parse_app(std::string_view source_text, const std::string& file_name);

/// Name-resolution and well-formedness checks shared by the parser and the graph builder:
/// duplicate identifiers, undeclared types, unknown edge endpoints, port directions,
/// replica counts, timing attributes.
std::vector<Diagnostic> check_declarations(const AppDecl& decl);

/// Canonical `.coord` rendering. `parse_app(print_app(d))` is structurally equal to `d`.
std::string print_app(const AppDecl& decl);

/// Shortest decimal rendering that reads back to the same double; never uses exponents.
std::string format_decimal(double value);

}  // namespace coordsched
