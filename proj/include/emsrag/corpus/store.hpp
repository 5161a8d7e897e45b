#pragma once

#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "emsrag/corpus/types.hpp"

namespace emsrag::corpus {

// Chunk lookup by id, preserving insertion order. Retrieval resolves index
// hits through this to hand full chunk texts to the prompt builder.
class ChunkStore {
public:
    void add(Chunk chunk);
    const Chunk* find(const std::string& id) const;
    const Chunk& require(const std::string& id) const;  // throws IoError when absent
    const std::vector<Chunk>& all() const { return chunks_; }
    std::size_t size() const { return chunks_.size(); }
    bool empty() const { return chunks_.empty(); }

    static ChunkStore load_jsonl(const std::filesystem::path& path);
    void save_jsonl(const std::filesystem::path& path) const;

private:
    std::vector<Chunk> chunks_;
    std::unordered_map<std::string, std::size_t> by_id_;
};

}  // namespace emsrag::corpus
