#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "emsrag/backends/embedding.hpp"
#include "emsrag/index/vector_index.hpp"

namespace emsrag::coverage {

// Vocabulary policy: lowercase, split on non-alphanumeric runs, drop stopwords.
std::vector<std::string> vocab_tokens(std::string_view text, const std::set<std::string>& stopwords);
std::set<std::string> vocabulary(const std::vector<std::string>& texts,
                                 const std::set<std::string>& stopwords);

struct OverlapCounts {
    std::size_t qa = 0;
    std::size_t corpus = 0;
    std::size_t intersection = 0;
    double hit_rate = 0.0;  // intersection / qa
};

// hit rate = |corpus_vocab ∩ qa_vocab| / |qa_vocab|. Throws EmptyQA when the
// QA side contributes no vocabulary.
OverlapCounts vocab_hit_rate(const std::vector<std::string>& qa_texts,
                             const std::vector<std::string>& corpus_texts,
                             const std::set<std::string>& stopwords);

// Same formula over pre-built term sets (also used for concept overlap).
OverlapCounts set_overlap(const std::set<std::string>& qa_terms,
                          const std::set<std::string>& corpus_terms);

// Recomputes the ratio from published counts without the underlying texts.
double hit_rate_from_counts(std::size_t intersection, std::size_t qa_vocab);

const std::set<std::string>& builtin_stopwords();
std::set<std::string> load_stopwords(const std::filesystem::path& path);  // one word per line, # comments

// Mean over questions of the cosine score of each question's single best
// chunk. Index must be frozen and non-empty; throws EmptyDataset on no
// questions and propagates EmptyIndex from the search.
double avg_top1_similarity(const std::vector<std::string>& questions,
                           const index::VectorIndex& index,
                           backends::EmbeddingBackend& embedder);

struct CoverageReport {
    std::string label;  // which corpus the QA side is compared against
    std::optional<double> avg_top1;
    OverlapCounts vocab;
    std::optional<OverlapCounts> concepts_raw;         // before normalization
    std::optional<OverlapCounts> concepts_normalized;  // after whitelist filtering
};

std::string render_coverage(const CoverageReport& report);
void write_coverage(const CoverageReport& report, const std::filesystem::path& path);
std::vector<nlohmann::json> coverage_rows(const CoverageReport& report);

}  // namespace emsrag::coverage
