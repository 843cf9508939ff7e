#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace mfgsim {

// Preserving key order keeps serialized output byte-stable.
using ojson = nlohmann::ordered_json;

void write_jsonl(const std::filesystem::path& file, const std::vector<ojson>& rows);
std::vector<ojson> read_jsonl(const std::filesystem::path& file);

void write_text_atomic(const std::filesystem::path& file, const std::string& text);
std::string read_text(const std::filesystem::path& file);

}  // namespace mfgsim
