#include "emsrag/pipeline/engine.hpp"

#include <atomic>
#include <chrono>
#include <iostream>
#include <thread>

#include "emsrag/common/error.hpp"
#include "emsrag/common/hash.hpp"
#include "emsrag/expertise/train.hpp"
#include "emsrag/index/embed.hpp"
#include "emsrag/metrics/scoring.hpp"
#include "emsrag/prompting/parse.hpp"

namespace emsrag::pipeline {

const char* expertise_source_name(ExpertiseSource s) {
    switch (s) {
        case ExpertiseSource::None: return "none";
        case ExpertiseSource::GroundTruth: return "gt";
        case ExpertiseSource::Filter: return "filter";
    }
    return "none";
}

std::optional<ExpertiseSource> expertise_source_from_string(std::string_view name) {
    if (name == "none") return ExpertiseSource::None;
    if (name == "gt") return ExpertiseSource::GroundTruth;
    if (name == "filter") return ExpertiseSource::Filter;
    return std::nullopt;
}

namespace {

bool family_retrieves(prompting::PromptFamily family) {
    return family == prompting::PromptFamily::RAG ||
           family == prompting::PromptFamily::ExpertRAG;
}

bool family_injects(prompting::PromptFamily family) {
    return family == prompting::PromptFamily::ExpertCoT ||
           family == prompting::PromptFamily::ExpertRAG;
}

}  // namespace

Engine::Engine(EngineConfig config, Deps deps)
    : config_(std::move(config)), deps_(std::move(deps)) {
    if (!deps_.chat) throw ConfigError("engine needs a chat backend");
    if (family_retrieves(config_.family)) {
        if (!deps_.embedder) throw ConfigError("retrieval needs an embedding backend");
        if (!deps_.kb_index || !deps_.kb_chunks)
            throw ConfigError("retrieval needs a knowledge-base index");
        if (config_.retrieval.strategy != retrieval::Strategy::Global &&
            config_.expertise == ExpertiseSource::None)
            throw ConfigError("subject-filtered retrieval needs an expertise source");
    }
    if (config_.expertise == ExpertiseSource::Filter) {
        if (!deps_.heads || !deps_.embedder)
            throw ConfigError("the filter expertise source needs heads and an embedding backend");
    }
    if (config_.family == prompting::PromptFamily::FewShot &&
        (!deps_.train_pool || deps_.train_pool->empty()))
        throw ConfigError("few-shot prompting needs a train pool");
}

prompting::Expertise Engine::expertise_for(const corpus::QuestionRecord& record) const {
    prompting::Expertise expertise;
    switch (config_.expertise) {
        case ExpertiseSource::None:
            break;  // degenerate (NA, {})
        case ExpertiseSource::GroundTruth:
            expertise.certification = record.certification;
            expertise.subjects = record.subjects;
            break;
        case ExpertiseSource::Filter: {
            const auto prediction =
                expertise::classify_question(record, *deps_.embedder, *deps_.heads);
            expertise.certification = prediction.certification;
            expertise.subjects = prediction.subjects;
            break;
        }
    }
    return expertise;
}

std::vector<float> Engine::embed_query(const std::string& text) const {
    return index::embed_texts(*deps_.embedder, {text}).front();
}

Prepared Engine::prepare(const corpus::QuestionRecord& record) const {
    Prepared prepared;
    prepared.expertise = expertise_for(record);

    if (family_retrieves(config_.family)) {
        // the bare question is the retrieval query
        const std::vector<float> query = embed_query(record.question);
        prepared.retrieval = retrieval::retrieve(
            query, prepared.expertise.subjects, deps_.kb_index.get(), deps_.kb_chunks.get(),
            deps_.pr_index.get(), deps_.pr_chunks.get(), config_.retrieval);
    }

    std::vector<corpus::QuestionRecord> exemplars;
    const std::vector<corpus::QuestionRecord>* exemplars_ptr = nullptr;
    if (config_.family == prompting::PromptFamily::FewShot) {
        // per-question seed mix keeps runs reproducible without reusing one sample
        exemplars = prompting::select_exemplars(*deps_.train_pool, config_.fewshot_k,
                                                config_.seed ^ fnv1a64(record.id));
        exemplars_ptr = &exemplars;
    }

    const prompting::Expertise* expertise_ptr =
        family_injects(config_.family) ? &prepared.expertise : nullptr;
    const retrieval::RetrievalBundle* bundle_ptr =
        prepared.retrieval ? &*prepared.retrieval : nullptr;
    prepared.bundle = prompting::render(deps_.templates, config_.family, record, exemplars_ptr,
                                        expertise_ptr, bundle_ptr);
    return prepared;
}

metrics::QuestionResult Engine::answer_one(const corpus::QuestionRecord& record) const {
    const Prepared prepared = prepare(record);

    backends::ChatRequest request;
    request.model = config_.model;
    request.messages.push_back({"system", prepared.bundle.system});
    request.messages.push_back({"user", prepared.bundle.user});

    const auto started = std::chrono::steady_clock::now();
    const backends::ChatResponse response = deps_.chat->chat(request);
    const auto finished = std::chrono::steady_clock::now();

    metrics::QuestionResult row;
    row.id = record.id;
    row.strategy = prepared.retrieval
                       ? retrieval::strategy_name(prepared.retrieval->strategy)
                       : "none";
    row.family = prompting::prompt_family_name(config_.family);
    row.certification_used = prepared.expertise.certification;
    row.subjects_used = prepared.expertise.subjects;
    row.gold = record.gold;
    row.gold_subjects = record.subjects;
    row.gold_certification = record.certification;
    row.latency_ms =
        std::chrono::duration<double, std::milli>(finished - started).count();
    row.retries = response.retries;
    if (prepared.retrieval) {
        for (const auto& hit : prepared.retrieval->kb_hits)
            row.kb_chunk_ids.push_back(hit.chunk.id);
        for (const auto& hit : prepared.retrieval->pr_hits)
            row.pr_chunk_ids.push_back(hit.chunk.id);
    }

    const auto parsed = prompting::parse_answer(response.text, record.options);
    if (parsed) {
        row.parsed = true;
        row.parse_method = prompting::parse_method_name(parsed->method);
        row.predicted = parsed->labels;
        row.correct = row.predicted == record.gold;
        row.sample_f1 = metrics::sample_f1(row.predicted, record.gold);
    }
    return row;
}

std::vector<metrics::QuestionResult> Engine::run(
    const std::vector<corpus::QuestionRecord>& records) const {
    if (records.empty()) throw EmptyDataset("no questions to run");

    std::vector<metrics::QuestionResult> rows(records.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= records.size()) break;
            try {
                rows[i] = answer_one(records[i]);
            } catch (const std::exception& e) {
                // scored incorrect; the run continues
                metrics::QuestionResult row;
                row.id = records[i].id;
                row.strategy = retrieval::strategy_name(config_.retrieval.strategy);
                row.family = prompting::prompt_family_name(config_.family);
                row.gold = records[i].gold;
                row.gold_subjects = records[i].subjects;
                row.gold_certification = records[i].certification;
                rows[i] = std::move(row);
                std::cerr << "question " << records[i].id << " failed: " << e.what() << "\n";
            }
        }
    };

    const int jobs = std::max(1, config_.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(jobs));
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return rows;
}

std::string Engine::backend_id() const { return deps_.chat->id(); }

}  // namespace emsrag::pipeline
