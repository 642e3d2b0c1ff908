#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace coordsched::cli {

std::string sha256_hex(std::string_view data);

struct InputFile {
    std::string path;
    std::string sha256;
};

/// Inputs, configuration and tool version of one scheduling run.
struct RunManifest {
    InputFile app;
    InputFile platform;
    InputFile contracts;
    nlohmann::ordered_json config;
    std::string tool_version;

    nlohmann::ordered_json to_json() const;
    static std::optional<RunManifest> from_json(const nlohmann::json& doc);
};

}  // namespace coordsched::cli
