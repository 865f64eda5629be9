#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace collab::tools {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Shortest round-trip decimal form.
std::string format_number(double v);

void write_text(const std::filesystem::path& path, std::string_view text);

// {"schema_version", "command", "metadata", "result"}. Everything that can
// differ between identical runs lives under "metadata".
json envelope(std::string_view command, json result, const std::vector<std::string>& args);

void write_json(const std::filesystem::path& path, const json& doc);

// Drops the metadata block so two runs can be compared.
json strip_metadata(json doc);

}  // namespace collab::tools
