#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "emsrag/backends/chat.hpp"
#include "emsrag/backends/embedding.hpp"
#include "emsrag/common/config.hpp"
#include "emsrag/pipeline/engine.hpp"
#include "emsrag/prompting/templates.hpp"

// Command implementations behind the executable. Each returns a process exit
// code and reports problems on stderr; outputs are written atomically so an
// interrupted command never leaves a truncated file behind.

namespace emsrag::cli {

// Chat/embedding backends resolved from config (backend.chat.* and
// backend.embed.*): mode "mock" gives the deterministic stand-ins (scriptable
// via backend.*.script), mode "http" the wire clients. API keys are read from
// the environment variable named by backend.chat.api_key_env — never from the
// config file itself. An audit.path key attaches call logging.
struct BackendBundle {
    std::shared_ptr<backends::ChatBackend> chat;
    std::shared_ptr<backends::EmbeddingBackend> embedder;
    std::shared_ptr<backends::AuditLog> audit;
    std::string chat_model;
};
BackendBundle make_backends(const Config& config);

// templates.dir overrides the built-in v1 set.
prompting::TemplateSet make_templates(const Config& config);

// --- ingest ----------------------------------------------------------------
struct IngestOptions {
    std::string questions_in;  // raw question records (optional)
    std::string kb_in;         // raw KB documents (optional)
    std::string pr_in;         // raw patient records (optional)
    std::string out_dir;
    std::size_t window = 512;
    std::size_t overlap = 128;
    double dedup_threshold = 0.9;
    double pr_reject_fraction = 0.30;
};
int cmd_ingest(const IngestOptions& options, const Config& config);

// --- index -----------------------------------------------------------------
struct IndexOptions {
    std::string chunks_in;
    std::string out;
    std::size_t batch_size = 64;
};
int cmd_index(const IndexOptions& options, const Config& config);

// --- train-filter ----------------------------------------------------------
struct TrainFilterOptions {
    std::string questions_in;
    std::string out;
    std::uint64_t seed = 42;
    int epochs = 200;
    std::size_t batch_size = 64;  // embedding batch size
};
int cmd_train_filter(const TrainFilterOptions& options, const Config& config);

// --- classify --------------------------------------------------------------
struct ClassifyOptions {
    std::string questions_in;
    std::string heads_in;
    std::string out;
    double threshold = 0.5;
};
int cmd_classify(const ClassifyOptions& options, const Config& config);

// --- answer / benchmark / exam share the engine wiring ----------------------
struct EngineOptions {
    std::string prompt = "0shot";     // 0shot|kshot|cot|expert-cot|rag|expert-rag
    std::string strategy = "global";  // global|ftr|rtf
    std::size_t M = 32;
    std::size_t N = 8;
    std::size_t oversample = 10;
    std::string expertise = "none";   // none|gt|filter
    std::size_t fewshot_k = 5;
    std::uint64_t seed = 42;
    int jobs = 1;

    std::string kb_index;   // paths; loaded only when the family needs them
    std::string kb_chunks;
    std::string pr_index;
    std::string pr_chunks;
    std::string heads;      // expertise filter heads
    std::string train_pool; // few-shot exemplar source
};
pipeline::Engine make_engine(const EngineOptions& options, const Config& config,
                             const BackendBundle& backends);

struct AnswerOptions {
    std::string question_file;
    std::string out;
    EngineOptions engine;
};
int cmd_answer(const AnswerOptions& options, const Config& config);

struct BenchmarkOptions {
    std::string questions_in;
    std::string split;  // train|val|test or empty for all
    std::string out;
    EngineOptions engine;
};
int cmd_benchmark(const BenchmarkOptions& options, const Config& config);

// --- coverage ----------------------------------------------------------------
struct CoverageOptions {
    // Published-counts mode: recompute the ratio without the texts.
    std::optional<std::size_t> qa_count;
    std::optional<std::size_t> intersection_count;

    // Corpus mode.
    std::string qa_in;         // question records
    std::string kb_chunks;     // chunk files to compare against
    std::string pr_chunks;
    std::string stopwords;     // file; empty = builtin list
    std::string kb_index;      // enables avg top-1 similarity
    std::string pr_index;
    bool with_concepts = false;  // concept extraction via the chat backend
    bool keep_unknown = true;    // identity normalizer emits type "unknown"
    std::string out;
};
int cmd_coverage(const CoverageOptions& options, const Config& config);

// --- exam --------------------------------------------------------------------
struct ExamOptions {
    std::string questions_in;
    std::string out;
    double budget_min = 150.0;
    double pass_threshold = 0.70;
    EngineOptions engine;
};
int cmd_exam(const ExamOptions& options, const Config& config);

}  // namespace emsrag::cli
