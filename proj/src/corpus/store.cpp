#include "emsrag/corpus/store.hpp"

#include <stdexcept>

#include "emsrag/common/error.hpp"
#include "emsrag/common/jsonl.hpp"
#include "emsrag/corpus/json_io.hpp"

namespace emsrag::corpus {

void ChunkStore::add(Chunk chunk) {
    if (by_id_.count(chunk.id) > 0)
        throw std::invalid_argument("ChunkStore: duplicate chunk id " + chunk.id);
    by_id_.emplace(chunk.id, chunks_.size());
    chunks_.push_back(std::move(chunk));
}

const Chunk* ChunkStore::find(const std::string& id) const {
    const auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &chunks_[it->second];
}

const Chunk& ChunkStore::require(const std::string& id) const {
    const Chunk* chunk = find(id);
    if (chunk == nullptr) throw IoError("chunk id not in store: " + id);
    return *chunk;
}

ChunkStore ChunkStore::load_jsonl(const std::filesystem::path& path) {
    ChunkStore store;
    for (const auto& row : jsonl::read_file(path)) store.add(row.get<Chunk>());
    return store;
}

void ChunkStore::save_jsonl(const std::filesystem::path& path) const {
    std::vector<nlohmann::json> rows;
    rows.reserve(chunks_.size());
    for (const auto& chunk : chunks_) rows.emplace_back(chunk);
    jsonl::write_file(path, rows);
}

}  // namespace emsrag::corpus
