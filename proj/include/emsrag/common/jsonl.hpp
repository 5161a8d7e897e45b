#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace emsrag::jsonl {

// One JSON value per non-empty line. Throws IoError on unreadable files and
// MalformedResponse-style parse failures as IoError with the line number.
std::vector<nlohmann::json> read_file(const std::filesystem::path& path);

// Serializes one value per line. Writes are atomic: a temporary file in the
// same directory is renamed over the target once fully written.
void write_file(const std::filesystem::path& path, const std::vector<nlohmann::json>& rows);

// Atomic whole-file text write (temp file + rename).
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_text(const std::filesystem::path& path);

}  // namespace emsrag::jsonl
