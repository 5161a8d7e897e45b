#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "emsrag/backends/chat.hpp"
#include "emsrag/backends/embedding.hpp"
#include "emsrag/corpus/store.hpp"
#include "emsrag/corpus/types.hpp"
#include "emsrag/expertise/heads.hpp"
#include "emsrag/index/vector_index.hpp"
#include "emsrag/metrics/report.hpp"
#include "emsrag/prompting/render.hpp"
#include "emsrag/retrieval/strategies.hpp"

namespace emsrag::pipeline {

// Where the per-question expertise comes from:
//  - None: degenerate (NA, {}) — expert families collapse to their plain form.
//  - GroundTruth: the record's own annotations.
//  - Filter: the trained heads over the frozen embedding backend.
enum class ExpertiseSource { None, GroundTruth, Filter };
const char* expertise_source_name(ExpertiseSource s);
std::optional<ExpertiseSource> expertise_source_from_string(std::string_view name);

struct EngineConfig {
    prompting::PromptFamily family = prompting::PromptFamily::ZeroShot;
    retrieval::RetrievalConfig retrieval;
    ExpertiseSource expertise = ExpertiseSource::None;
    std::size_t fewshot_k = 5;
    std::uint64_t seed = 42;
    std::string model;  // chat model name passed to the backend
    int jobs = 1;       // benchmark parallelism; ordering is by id regardless
};

// Everything one question needs before the chat call.
struct Prepared {
    prompting::PromptBundle bundle;
    prompting::Expertise expertise;
    std::optional<retrieval::RetrievalBundle> retrieval;
};

// Wires expertise inference, retrieval, prompting, the chat backend, answer
// parsing, and scoring into one per-question path. Indexes, stores, heads,
// and the exemplar pool are optional — only the parts the configured family
// and strategy require must be present (checked at construction).
class Engine {
public:
    struct Deps {
        std::shared_ptr<backends::ChatBackend> chat;
        std::shared_ptr<backends::EmbeddingBackend> embedder;
        std::shared_ptr<const index::VectorIndex> kb_index;
        std::shared_ptr<const corpus::ChunkStore> kb_chunks;
        std::shared_ptr<const index::VectorIndex> pr_index;
        std::shared_ptr<const corpus::ChunkStore> pr_chunks;
        std::shared_ptr<const expertise::ExpertiseHeads> heads;
        std::shared_ptr<const std::vector<corpus::QuestionRecord>> train_pool;
        prompting::TemplateSet templates;
    };

    Engine(EngineConfig config, Deps deps);  // throws ConfigError on missing deps

    // Pure preparation: expertise + retrieval + rendered prompt, no chat call.
    Prepared prepare(const corpus::QuestionRecord& record) const;

    // prepare + chat + parse + score. Backend errors propagate.
    metrics::QuestionResult answer_one(const corpus::QuestionRecord& record) const;

    // answer_one over a split with config.jobs workers. A per-question failure
    // scores that question incorrect instead of aborting the run.
    std::vector<metrics::QuestionResult> run(const std::vector<corpus::QuestionRecord>& records) const;

    const EngineConfig& config() const { return config_; }
    const prompting::TemplateSet& templates() const { return deps_.templates; }
    std::string backend_id() const;

private:
    prompting::Expertise expertise_for(const corpus::QuestionRecord& record) const;
    std::vector<float> embed_query(const std::string& text) const;

    EngineConfig config_;
    Deps deps_;
};

}  // namespace emsrag::pipeline
