#include "emsrag/common/jsonl.hpp"

#include <unistd.h>

#include <fstream>
#include <sstream>

#include "emsrag/common/error.hpp"
#include "emsrag/common/hash.hpp"

namespace emsrag::jsonl {

std::vector<nlohmann::json> read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<nlohmann::json> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            rows.push_back(nlohmann::json::parse(line));
        } catch (const nlohmann::json::parse_error& e) {
            throw IoError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return rows;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    std::error_code ec;
    fs::create_directories(dir, ec);
    const std::string tag = to_hex(fnv1a64(path.string()) ^ static_cast<std::uint64_t>(::getpid()));
    const fs::path tmp = dir / (path.filename().string() + ".tmp." + tag.substr(0, 8));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open temp file " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw IoError("short write to " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw IoError("rename " + tmp.string() + " -> " + path.string() + ": " + ec.message());
    }
}

void write_file(const std::filesystem::path& path, const std::vector<nlohmann::json>& rows) {
    std::ostringstream out;
    for (const auto& row : rows) out << row.dump() << '\n';
    write_text_atomic(path, out.str());
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace emsrag::jsonl
