#include "manifest.hpp"

#include <array>

#include <fmt/format.h>
#include <openssl/evp.h>

namespace coordsched::cli {

std::string sha256_hex(std::string_view data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int length = 0;
    EVP_Digest(data.data(), data.size(), digest.data(), &length, EVP_sha256(), nullptr);
    std::string hex;
    for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
    return hex;
}

nlohmann::ordered_json RunManifest::to_json() const {
    using json = nlohmann::ordered_json;
    json doc;
    doc["tool"] = "coordsched";
    doc["version"] = tool_version;
    auto file = [](const InputFile& f) { return json{{"path", f.path}, {"sha256", f.sha256}}; };
    doc["app"] = file(app);
    doc["platform"] = file(platform);
    doc["contracts"] = file(contracts);
    doc["config"] = config;
    return doc;
}

std::optional<RunManifest> RunManifest::from_json(const nlohmann::json& doc) {
    try {
        RunManifest m;
        m.tool_version = doc.at("version").get<std::string>();
        auto file = [](const nlohmann::json& j) {
            return InputFile{j.at("path").get<std::string>(), j.at("sha256").get<std::string>()};
        };
        m.app = file(doc.at("app"));
        m.platform = file(doc.at("platform"));
        m.contracts = file(doc.at("contracts"));
        if (doc.contains("config")) m.config = nlohmann::ordered_json::parse(doc.at("config").dump());
        return m;
    } catch (const nlohmann::json::exception&) {
        return std::nullopt;
    }
}

}  // namespace coordsched::cli
