#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace celllit {

// Writes one compact JSON value per line. The file is written next to its
// destination and renamed into place.
void write_jsonl(const std::filesystem::path& path, const std::vector<nlohmann::json>& records);

// Reads every non-blank line as JSON; throws FormatError naming the line.
std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace celllit
