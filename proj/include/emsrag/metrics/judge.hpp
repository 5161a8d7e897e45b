#pragma once

#include <string>
#include <string_view>

#include "emsrag/backends/chat.hpp"

namespace emsrag::metrics {

enum class Relevance { Relevant, Irrelevant };
enum class Supportiveness { Fully, Partially, None };

// One rubric judgment for a retrieved chunk. The binary views collapse the
// labels: r_rel = 1 iff Relevant; r_sup = 1 iff Fully or Partially.
struct JudgedChunk {
    Relevance relevance = Relevance::Irrelevant;
    Supportiveness supportiveness = Supportiveness::None;

    int r_rel() const { return relevance == Relevance::Relevant ? 1 : 0; }
    int r_sup() const { return supportiveness == Supportiveness::None ? 0 : 1; }
};

// The chunk-grading rubric sent to the judge model. The three placeholders are
// {question}, {answer} (gold letters joined ", "), and {chunk}.
const std::string& judge_prompt_template();

std::string render_judge_prompt(std::string_view question, std::string_view answer,
                                std::string_view chunk);

// Case-insensitive label extraction from a judge completion. "Irrelevant" is
// matched before "Relevant" (the former contains the latter as a substring).
// Throws UnparseableJudgment when either label is missing.
JudgedChunk parse_judgment(std::string_view completion);

JudgedChunk judge_chunk(std::string_view question, std::string_view answer,
                        std::string_view chunk, backends::ChatBackend& backend,
                        const std::string& model);

}  // namespace emsrag::metrics
