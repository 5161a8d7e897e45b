#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "emsrag/corpus/types.hpp"

namespace emsrag::index {

// Cosine of the angle between u and v. Throws DimensionMismatch on unequal
// lengths and ZeroVector when either norm is zero.
double cosine_similarity(std::span<const float> u, std::span<const float> v);

struct SearchHit {
    std::string id;
    double score;  // cosine similarity in [-1, 1]
};

// Optional metadata filter applied before ranking.
struct SearchPredicate {
    std::optional<std::set<corpus::SubjectArea>> subjects;
    std::optional<corpus::CorpusTag> corpus;

    bool matches(corpus::SubjectArea subject, corpus::CorpusTag tag) const {
        if (subjects && subjects->count(subject) == 0) return false;
        if (corpus && *corpus != tag) return false;
        return true;
    }
};

// Exact top-k cosine index. Vectors are L2-normalized at insert so ranking
// reduces to dot products. Build is single-writer; after freeze() the index
// is immutable and search() is safe from any number of threads.
class VectorIndex {
public:
    struct Entry {
        std::string id;
        corpus::SubjectArea subject;
        corpus::CorpusTag corpus;
    };

    explicit VectorIndex(int dim);

    // Throws DimensionMismatch, ZeroVector, std::invalid_argument (duplicate
    // id or frozen index).
    void insert(const std::string& id, std::span<const float> vec, corpus::SubjectArea subject,
                corpus::CorpusTag corpus);

    void freeze() { frozen_ = true; }
    bool frozen() const { return frozen_; }

    int dim() const { return dim_; }
    std::size_t size() const { return entries_.size(); }
    const Entry& entry(std::size_t i) const { return entries_[i]; }
    std::span<const float> vector(std::size_t i) const {
        return std::span<const float>(data_.data() + i * static_cast<std::size_t>(dim_),
                                      static_cast<std::size_t>(dim_));
    }

    // Top-k by descending cosine score, ties broken by ascending chunk id.
    // Returns min(k, matching entries) hits. Throws EmptyIndex when the index
    // holds no entries at all, ZeroVector / DimensionMismatch on a bad query,
    // std::invalid_argument when k == 0.
    std::vector<SearchHit> search(std::span<const float> query, std::size_t k,
                                  const SearchPredicate* predicate = nullptr) const;

    // Binary persistence: `path` holds a header (magic, version, dim, count)
    // followed by packed little-endian float32 vectors; `path`.meta.jsonl is
    // the id/subject/corpus sidecar, one row per entry in storage order.
    void save(const std::filesystem::path& path) const;
    static VectorIndex load(const std::filesystem::path& path);

private:
    int dim_;
    bool frozen_ = false;
    std::vector<float> data_;  // entries_.size() * dim_, normalized
    std::vector<Entry> entries_;
    std::unordered_map<std::string, std::size_t> by_id_;
};

}  // namespace emsrag::index
