#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "emsrag/corpus/types.hpp"

namespace emsrag::corpus {

// Strips markup tags, decodes HTML entities (repeatedly, so double-encoded
// text like "BP&amp;nbsp;120/80" fully resolves), drops control characters,
// and collapses whitespace runs to single spaces with the ends trimmed.
// Idempotent: clean_text(clean_text(x)) == clean_text(x).
std::string clean_text(std::string_view raw);

// Edit distance over characters after ASCII lowercasing.
std::size_t levenshtein_distance(std::string_view a, std::string_view b);

// 1 - distance / max(len). Both strings empty -> 1.0.
double levenshtein_similarity(std::string_view a, std::string_view b);

struct DedupStats {
    std::size_t input = 0;
    std::size_t kept = 0;
    std::size_t dropped = 0;
};

// Near-duplicate removal over question text. Records whose pairwise
// similarity is strictly greater than `threshold` fall into one cluster
// (transitively); the first-seen record of each cluster survives, in input
// order. A pair at exactly the threshold is NOT a duplicate.
std::vector<QuestionRecord> dedup_questions(const std::vector<QuestionRecord>& records,
                                            double threshold = 0.9,
                                            DedupStats* stats = nullptr);

}  // namespace emsrag::corpus
