#include "emsrag/retrieval/strategies.hpp"

#include <stdexcept>

#include "emsrag/common/error.hpp"

namespace emsrag::retrieval {

const char* strategy_name(Strategy s) {
    switch (s) {
        case Strategy::Global: return "global";
        case Strategy::FTR: return "ftr";
        case Strategy::RTF: return "rtf";
    }
    return "global";
}

std::optional<Strategy> strategy_from_string(std::string_view name) {
    if (name == "global") return Strategy::Global;
    if (name == "ftr") return Strategy::FTR;
    if (name == "rtf") return Strategy::RTF;
    return std::nullopt;
}

namespace {

std::vector<ScoredChunk> resolve(const std::vector<index::SearchHit>& hits,
                                 const corpus::ChunkStore& chunks) {
    std::vector<ScoredChunk> out;
    out.reserve(hits.size());
    for (const auto& hit : hits) out.push_back(ScoredChunk{chunks.require(hit.id), hit.score});
    return out;
}

void check_kb(const index::VectorIndex* kb_index, const corpus::ChunkStore* kb_chunks) {
    if (kb_index == nullptr || kb_chunks == nullptr || kb_index->size() == 0)
        throw EmptyIndex("retrieval requires a non-empty knowledge-base index");
}

bool has_pr(const index::VectorIndex* pr_index, const corpus::ChunkStore* pr_chunks) {
    return pr_index != nullptr && pr_chunks != nullptr && pr_index->size() > 0;
}

// search() throws on k == 0; retrieval treats M == 0 or N == 0 as "none".
std::vector<index::SearchHit> search_top(const index::VectorIndex& index,
                                         std::span<const float> query, std::size_t k,
                                         const index::SearchPredicate* predicate = nullptr) {
    if (k == 0) return {};
    return index.search(query, k, predicate);
}

}  // namespace

RetrievalBundle retrieve_global(std::span<const float> query, const index::VectorIndex* kb_index,
                                const corpus::ChunkStore* kb_chunks,
                                const index::VectorIndex* pr_index,
                                const corpus::ChunkStore* pr_chunks,
                                const RetrievalConfig& config) {
    check_kb(kb_index, kb_chunks);
    RetrievalBundle bundle;
    bundle.strategy = Strategy::Global;
    bundle.kb_hits = resolve(search_top(*kb_index, query, config.M), *kb_chunks);
    if (has_pr(pr_index, pr_chunks))
        bundle.pr_hits = resolve(search_top(*pr_index, query, config.N), *pr_chunks);
    else
        bundle.pr_index_absent = true;
    return bundle;
}

RetrievalBundle retrieve_ftr(std::span<const float> query,
                             const std::set<corpus::SubjectArea>& subjects,
                             const index::VectorIndex* kb_index,
                             const corpus::ChunkStore* kb_chunks,
                             const index::VectorIndex* pr_index,
                             const corpus::ChunkStore* pr_chunks, const RetrievalConfig& config) {
    if (subjects.empty()) throw std::invalid_argument("retrieve_ftr: empty subject set");
    check_kb(kb_index, kb_chunks);

    RetrievalBundle bundle;
    bundle.strategy = Strategy::FTR;
    bundle.subjects = subjects;

    index::SearchPredicate predicate;
    predicate.subjects = subjects;

    bundle.kb_hits = resolve(search_top(*kb_index, query, config.M, &predicate), *kb_chunks);
    if (bundle.kb_hits.empty() && config.M > 0) bundle.kb_filter_empty = true;

    if (has_pr(pr_index, pr_chunks)) {
        bundle.pr_hits = resolve(search_top(*pr_index, query, config.N, &predicate), *pr_chunks);
        if (bundle.pr_hits.empty() && config.N > 0) {
            // The PR taxonomy covers only seven areas; rather than hand the
            // prompt an empty patient-record context, retry unfiltered and
            // flag the bundle.
            bundle.pr_hits = resolve(search_top(*pr_index, query, config.N), *pr_chunks);
            bundle.pr_fallback_unfiltered = true;
        }
    } else {
        bundle.pr_index_absent = true;
    }
    return bundle;
}

RetrievalBundle retrieve_rtf(std::span<const float> query,
                             const std::set<corpus::SubjectArea>& subjects,
                             const index::VectorIndex* kb_index,
                             const corpus::ChunkStore* kb_chunks,
                             const index::VectorIndex* pr_index,
                             const corpus::ChunkStore* pr_chunks, const RetrievalConfig& config) {
    if (subjects.empty()) throw std::invalid_argument("retrieve_rtf: empty subject set");
    if (config.oversample == 0) throw std::invalid_argument("retrieve_rtf: oversample must be >= 1");
    check_kb(kb_index, kb_chunks);

    RetrievalBundle bundle;
    bundle.strategy = Strategy::RTF;
    bundle.subjects = subjects;

    auto filter_top = [&subjects](std::vector<index::SearchHit> candidates,
                                  const corpus::ChunkStore& chunks, std::size_t keep) {
        std::vector<ScoredChunk> out;
        out.reserve(keep);
        for (const auto& hit : candidates) {
            if (out.size() == keep) break;
            const corpus::Chunk& chunk = chunks.require(hit.id);
            if (subjects.count(chunk.subject) > 0) out.push_back(ScoredChunk{chunk, hit.score});
        }
        return out;
    };

    bundle.kb_hits = filter_top(search_top(*kb_index, query, config.oversample * config.M),
                                *kb_chunks, config.M);
    if (has_pr(pr_index, pr_chunks))
        bundle.pr_hits = filter_top(search_top(*pr_index, query, config.oversample * config.N),
                                    *pr_chunks, config.N);
    else
        bundle.pr_index_absent = true;
    return bundle;
}

RetrievalBundle retrieve(std::span<const float> query,
                         const std::set<corpus::SubjectArea>& subjects,
                         const index::VectorIndex* kb_index, const corpus::ChunkStore* kb_chunks,
                         const index::VectorIndex* pr_index, const corpus::ChunkStore* pr_chunks,
                         const RetrievalConfig& config) {
    switch (config.strategy) {
        case Strategy::Global:
            return retrieve_global(query, kb_index, kb_chunks, pr_index, pr_chunks, config);
        case Strategy::FTR:
            return retrieve_ftr(query, subjects, kb_index, kb_chunks, pr_index, pr_chunks, config);
        case Strategy::RTF:
            return retrieve_rtf(query, subjects, kb_index, kb_chunks, pr_index, pr_chunks, config);
    }
    throw std::invalid_argument("retrieve: unknown strategy");
}

}  // namespace emsrag::retrieval
