#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "emsrag/corpus/store.hpp"
#include "emsrag/corpus/types.hpp"
#include "emsrag/index/vector_index.hpp"

namespace emsrag::retrieval {

enum class Strategy { Global, FTR, RTF };
const char* strategy_name(Strategy s);
std::optional<Strategy> strategy_from_string(std::string_view name);

struct RetrievalConfig {
    std::size_t M = 32;          // knowledge-base chunks per question
    std::size_t N = 8;           // patient-record chunks per question
    std::size_t oversample = 10; // RTF candidate multiplier
    Strategy strategy = Strategy::Global;
};

struct ScoredChunk {
    corpus::Chunk chunk;
    double score;
};

struct RetrievalBundle {
    Strategy strategy = Strategy::Global;
    std::set<corpus::SubjectArea> subjects;  // predicate used (empty for Global)
    std::vector<ScoredChunk> kb_hits;        // descending score
    std::vector<ScoredChunk> pr_hits;        // descending score

    bool pr_index_absent = false;        // no PR corpus configured
    bool kb_filter_empty = false;        // FTR: no KB chunk matched the subjects
    bool pr_fallback_unfiltered = false; // FTR: PR filter empty, fell back to unfiltered
};

// Top-M KB and top-N PR by cosine score, no metadata predicate.
RetrievalBundle retrieve_global(std::span<const float> query, const index::VectorIndex* kb_index,
                                const corpus::ChunkStore* kb_chunks,
                                const index::VectorIndex* pr_index,
                                const corpus::ChunkStore* pr_chunks,
                                const RetrievalConfig& config);

// Filter-then-retrieve: restrict each corpus to chunks whose subject is in
// `subjects`, then rank. An empty KB filter result yields empty kb_hits with
// kb_filter_empty set; an empty PR filter result falls back to unfiltered PR
// retrieval with pr_fallback_unfiltered set. Requires non-empty subjects.
RetrievalBundle retrieve_ftr(std::span<const float> query,
                             const std::set<corpus::SubjectArea>& subjects,
                             const index::VectorIndex* kb_index,
                             const corpus::ChunkStore* kb_chunks,
                             const index::VectorIndex* pr_index,
                             const corpus::ChunkStore* pr_chunks, const RetrievalConfig& config);

// Retrieve-then-filter: pull oversample*M (KB) / oversample*N (PR) unfiltered
// candidates, drop those whose subject is not in `subjects`, keep the top
// M / N survivors in score order. May underfill; never tops up.
RetrievalBundle retrieve_rtf(std::span<const float> query,
                             const std::set<corpus::SubjectArea>& subjects,
                             const index::VectorIndex* kb_index,
                             const corpus::ChunkStore* kb_chunks,
                             const index::VectorIndex* pr_index,
                             const corpus::ChunkStore* pr_chunks, const RetrievalConfig& config);

// Dispatches on config.strategy. Global ignores `subjects`.
RetrievalBundle retrieve(std::span<const float> query,
                         const std::set<corpus::SubjectArea>& subjects,
                         const index::VectorIndex* kb_index, const corpus::ChunkStore* kb_chunks,
                         const index::VectorIndex* pr_index, const corpus::ChunkStore* pr_chunks,
                         const RetrievalConfig& config);

}  // namespace emsrag::retrieval
