#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "emsrag/corpus/types.hpp"
#include "emsrag/prompting/templates.hpp"
#include "emsrag/retrieval/strategies.hpp"

namespace emsrag::prompting {

enum class PromptFamily { ZeroShot, FewShot, CoT, ExpertCoT, RAG, ExpertRAG };
const char* prompt_family_name(PromptFamily f);
std::optional<PromptFamily> prompt_family_from_string(std::string_view name);

struct Expertise {
    corpus::Certification certification = corpus::Certification::NA;
    std::set<corpus::SubjectArea> subjects;

    bool degenerate() const {
        return certification == corpus::Certification::NA && subjects.empty();
    }
};

struct PromptBundle {
    std::string system;
    std::string user;
    PromptFamily family = PromptFamily::ZeroShot;
    int fewshot_k = 0;
    std::optional<Expertise> injected;   // set for Expert* families
    std::size_t context_chunks = 0;      // chunks embedded (RAG families)
    std::string template_version;
};

// "A. text" per line, in option order, no trailing newline.
std::string render_options(const corpus::QuestionRecord& record);

// Builds the (system, user) pair for one question under the given family.
//  - FewShot requires non-null `exemplars` (throws std::invalid_argument).
//  - ExpertCoT / ExpertRAG require `expertise` (throws MissingExpertise).
//  - RAG / ExpertRAG require `bundle` (throws MissingBundle).
// A degenerate expertise of (NA, {}) renders an empty expertise block, so
// ExpertCoT collapses byte-identically to CoT (and ExpertRAG to RAG).
// Retrieved chunks are embedded verbatim in bundle rank order, KB before PR.
PromptBundle render(const TemplateSet& templates, PromptFamily family,
                    const corpus::QuestionRecord& record,
                    const std::vector<corpus::QuestionRecord>* exemplars = nullptr,
                    const Expertise* expertise = nullptr,
                    const retrieval::RetrievalBundle* bundle = nullptr);

// Seeded uniform sample of k exemplars without replacement, deterministic in
// (train order, k, seed). Throws InsufficientTrain when k > train.size().
std::vector<corpus::QuestionRecord> select_exemplars(
    const std::vector<corpus::QuestionRecord>& train, std::size_t k, std::uint64_t seed);

}  // namespace emsrag::prompting
