#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace emsrag {

// Flat key=value configuration. Lines are `key = value`, `#` starts a
// comment. Environment variables override file values: key `backend.chat.url`
// maps to EMSRAG_BACKEND_CHAT_URL. Secrets (API keys) should only ever come
// in through the environment.
class Config {
public:
    Config() = default;

    static Config load(const std::filesystem::path& path);
    static Config from_string(const std::string& text);

    void set(const std::string& key, const std::string& value) { kv_[key] = value; }
    bool has(const std::string& key) const { return kv_.count(key) > 0; }

    std::string get(const std::string& key, const std::string& fallback) const;
    std::string require(const std::string& key) const;
    long get_int(const std::string& key, long fallback) const;
    double get_double(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    // Applies EMSRAG_* environment overrides to every known key.
    void apply_env_overrides(const std::string& prefix = "EMSRAG_");

    // Stable digest of the resolved configuration; embedded in run reports so
    // results can be tied to the exact settings that produced them.
    std::string fingerprint() const;
    std::string dump() const;

    const std::map<std::string, std::string>& entries() const { return kv_; }

    static std::string env_name(const std::string& key, const std::string& prefix = "EMSRAG_");

private:
    std::map<std::string, std::string> kv_;
};

}  // namespace emsrag
