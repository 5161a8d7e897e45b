#include "emsrag/cli/commands.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <nlohmann/json.hpp>

#include "emsrag/common/error.hpp"
#include "emsrag/common/jsonl.hpp"
#include "emsrag/corpus/chunker.hpp"
#include "emsrag/corpus/clean.hpp"
#include "emsrag/corpus/json_io.hpp"
#include "emsrag/corpus/patient.hpp"
#include "emsrag/corpus/store.hpp"
#include "emsrag/coverage/concepts.hpp"
#include "emsrag/coverage/overlap.hpp"
#include "emsrag/exam/session.hpp"
#include "emsrag/expertise/train.hpp"
#include "emsrag/index/embed.hpp"
#include "emsrag/metrics/report.hpp"

namespace emsrag::cli {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------- backends

BackendBundle make_backends(const Config& config) {
    BackendBundle bundle;

    backends::BackendPolicy policy;
    policy.max_concurrent = static_cast<int>(config.get_int("backend.max_concurrent", 4));
    policy.retry = static_cast<int>(config.get_int("backend.retry", 3));
    policy.backoff_base_sec = config.get_double("backend.backoff_base_sec", 0.5);
    policy.rate_per_minute = static_cast<int>(config.get_int("backend.rate_per_minute", 0));

    const std::string audit_path = config.get("audit.path", "");
    if (!audit_path.empty()) bundle.audit = std::make_shared<backends::AuditLog>(audit_path);

    const std::string chat_mode = config.get("backend.chat.mode", "mock");
    bundle.chat_model = config.get("backend.chat.model", "mock-model");
    if (chat_mode == "mock") {
        auto mock = std::make_shared<backends::MockChatBackend>(
            config.get("backend.chat.default_completion", "Answer: A"));
        mock->set_echo(config.get_bool("backend.chat.echo", false));
        const std::string script = config.get("backend.chat.script", "");
        if (!script.empty()) mock->load_script_jsonl(script);
        mock->set_delay_ms(static_cast<int>(config.get_int("backend.chat.delay_ms", 0)));
        if (bundle.audit) mock->set_audit(bundle.audit);
        bundle.chat = std::move(mock);
    } else if (chat_mode == "http") {
        std::string api_key;
        const std::string key_env = config.get("backend.chat.api_key_env", "");
        if (!key_env.empty()) {
            const char* value = std::getenv(key_env.c_str());
            if (value != nullptr) api_key = value;
        }
        auto http = std::make_shared<backends::HttpChatBackend>(
            config.require("backend.chat.url"), bundle.chat_model, policy, api_key,
            config.get("backend.chat.endpoint", "/v1/chat/completions"));
        if (bundle.audit) http->set_audit(bundle.audit);
        bundle.chat = std::move(http);
    } else {
        throw ConfigError("backend.chat.mode must be mock or http, got " + chat_mode);
    }

    const std::string embed_mode = config.get("backend.embed.mode", "mock");
    if (embed_mode == "mock") {
        auto mock = std::make_shared<backends::MockEmbeddingBackend>(
            static_cast<int>(config.get_int("backend.embed.dim", 64)));
        const std::string script = config.get("backend.embed.script", "");
        if (!script.empty()) mock->load_script_jsonl(script);
        bundle.embedder = std::move(mock);
    } else if (embed_mode == "http") {
        std::string api_key;
        const std::string key_env = config.get("backend.embed.api_key_env",
                                               config.get("backend.chat.api_key_env", ""));
        if (!key_env.empty()) {
            const char* value = std::getenv(key_env.c_str());
            if (value != nullptr) api_key = value;
        }
        bundle.embedder = std::make_shared<backends::HttpEmbeddingBackend>(
            config.require("backend.embed.url"), config.require("backend.embed.model"),
            static_cast<int>(config.get_int("backend.embed.dim", 0)), policy, api_key,
            config.get("backend.embed.endpoint", "/v1/embeddings"));
    } else {
        throw ConfigError("backend.embed.mode must be mock or http, got " + embed_mode);
    }

    return bundle;
}

prompting::TemplateSet make_templates(const Config& config) {
    const std::string dir = config.get("templates.dir", "");
    if (dir.empty()) return prompting::TemplateSet::builtin_v1();
    return prompting::TemplateSet::load_dir(dir);
}

// ------------------------------------------------------------------ helpers

namespace {

std::vector<corpus::QuestionRecord> load_questions(const fs::path& path) {
    std::vector<corpus::QuestionRecord> records;
    for (const json& row : jsonl::read_file(path))
        records.push_back(row.get<corpus::QuestionRecord>());
    return records;
}

std::shared_ptr<const index::VectorIndex> load_index(const std::string& path) {
    return std::make_shared<const index::VectorIndex>(index::VectorIndex::load(path));
}

std::shared_ptr<const corpus::ChunkStore> load_chunks(const std::string& path) {
    return std::make_shared<const corpus::ChunkStore>(corpus::ChunkStore::load_jsonl(path));
}

}  // namespace

// ------------------------------------------------------------------- ingest

int cmd_ingest(const IngestOptions& options, const Config& config) {
    (void)config;
    if (options.out_dir.empty()) throw ConfigError("ingest needs --out-dir");
    fs::create_directories(options.out_dir);
    const fs::path out_dir = options.out_dir;

    const corpus::ChunkingConfig chunking{options.window, options.overlap};
    const corpus::WhitespaceTokenizer tokenizer;

    if (!options.questions_in.empty()) {
        std::vector<corpus::QuestionRecord> records = load_questions(options.questions_in);
        std::size_t invalid = 0;
        std::vector<corpus::QuestionRecord> valid;
        for (corpus::QuestionRecord& record : records) {
            record.question = corpus::clean_text(record.question);
            for (corpus::Option& option : record.options)
                option.text = corpus::clean_text(option.text);
            if (record.explanation) record.explanation = corpus::clean_text(*record.explanation);
            const auto problems = record.validate();
            if (!problems.empty()) {
                ++invalid;
                std::cerr << "skipping " << record.id << ": " << problems.front() << "\n";
                continue;
            }
            valid.push_back(std::move(record));
        }
        corpus::DedupStats stats;
        std::vector<corpus::QuestionRecord> kept =
            corpus::dedup_questions(valid, options.dedup_threshold, &stats);
        std::vector<json> rows;
        rows.reserve(kept.size());
        for (const auto& record : kept) rows.push_back(json(record));
        jsonl::write_file(out_dir / "questions.jsonl", rows);
        std::cout << "questions: " << records.size() << " in, " << invalid << " invalid, "
                  << stats.dropped << " near-duplicates, " << kept.size() << " kept\n";
    }

    if (!options.kb_in.empty()) {
        std::size_t docs = 0, empty = 0;
        std::vector<json> rows;
        for (const json& row : jsonl::read_file(options.kb_in)) {
            auto doc = row.get<corpus::KbDocument>();
            ++docs;
            doc.body = corpus::clean_text(doc.body);
            try {
                for (corpus::Chunk& chunk : corpus::chunk_text(
                         doc.body, chunking, tokenizer, doc.id, corpus::CorpusTag::KB, doc.subject))
                    rows.push_back(json(chunk));
            } catch (const EmptyText&) {
                ++empty;
            }
        }
        jsonl::write_file(out_dir / "kb_chunks.jsonl", rows);
        std::cout << "kb: " << docs << " documents, " << empty << " empty, " << rows.size()
                  << " chunks\n";
    }

    if (!options.pr_in.empty()) {
        std::size_t in = 0, rejected = 0, unmapped = 0;
        std::vector<json> chunk_rows;
        std::vector<json> record_rows;
        for (const json& row : jsonl::read_file(options.pr_in)) {
            ++in;
            std::vector<std::pair<std::string, std::string>> fields;
            const json& raw_fields = row.at("fields");
            if (raw_fields.is_object()) {
                for (const auto& [key, value] : raw_fields.items())
                    fields.emplace_back(corpus::clean_text(key),
                                        corpus::clean_text(value.is_string()
                                                               ? value.get<std::string>()
                                                               : value.dump()));
            } else {
                for (const json& pair : raw_fields)
                    fields.emplace_back(corpus::clean_text(pair.at(0).get<std::string>()),
                                        corpus::clean_text(pair.at(1).get<std::string>()));
            }
            const auto filtered =
                corpus::filter_patient_fields(fields, options.pr_reject_fraction);
            if (!filtered) {
                ++rejected;
                continue;
            }
            const std::string protocol = row.at("protocol").get<std::string>();
            if (!corpus::protocol_is_mapped(protocol)) ++unmapped;

            corpus::PatientRecord record;
            record.id = row.at("id").get<std::string>();
            record.fields = filtered->fields;
            record.subject = corpus::map_protocol_to_subject(protocol);
            record.text = corpus::flatten_patient_record(filtered->fields);
            record_rows.push_back(json(record));
            for (corpus::Chunk& chunk :
                 corpus::chunk_text(record.text, chunking, tokenizer, record.id,
                                    corpus::CorpusTag::PR, record.subject))
                chunk_rows.push_back(json(chunk));
        }
        jsonl::write_file(out_dir / "patient_records.jsonl", record_rows);
        jsonl::write_file(out_dir / "pr_chunks.jsonl", chunk_rows);
        std::cout << "pr: " << in << " records, " << rejected << " rejected, " << unmapped
                  << " unmapped protocols, " << chunk_rows.size() << " chunks\n";
    }

    return 0;
}

// -------------------------------------------------------------------- index

int cmd_index(const IndexOptions& options, const Config& config) {
    const BackendBundle backends = make_backends(config);
    const corpus::ChunkStore store = corpus::ChunkStore::load_jsonl(options.chunks_in);
    if (store.empty()) throw EmptyDataset("no chunks in " + options.chunks_in);

    std::vector<std::string> texts;
    texts.reserve(store.size());
    for (const corpus::Chunk& chunk : store.all()) texts.push_back(chunk.text);
    const auto vectors = index::embed_texts(*backends.embedder, texts, options.batch_size);

    index::VectorIndex idx(backends.embedder->dim());
    for (std::size_t i = 0; i < store.size(); ++i) {
        const corpus::Chunk& chunk = store.all()[i];
        idx.insert(chunk.id, vectors[i], chunk.subject, chunk.corpus);
    }
    idx.freeze();
    idx.save(options.out);
    std::cout << "indexed " << idx.size() << " chunks at dim " << idx.dim() << " -> "
              << options.out << "\n";
    return 0;
}

// ------------------------------------------------------------- train-filter

int cmd_train_filter(const TrainFilterOptions& options, const Config& config) {
    const BackendBundle backends = make_backends(config);
    const std::vector<corpus::QuestionRecord> records = load_questions(options.questions_in);

    std::vector<const corpus::QuestionRecord*> usable;
    std::size_t skipped = 0;
    for (const corpus::QuestionRecord& record : records) {
        // trainable rows need a certification class and at least one subject
        if (record.split != corpus::Split::train ||
            record.certification == corpus::Certification::NA || record.subjects.empty()) {
            ++skipped;
            continue;
        }
        usable.push_back(&record);
    }
    if (usable.empty()) throw EmptyDataset("no trainable records in " + options.questions_in);

    std::vector<std::string> texts;
    texts.reserve(usable.size());
    for (const auto* record : usable)
        texts.push_back(expertise::classify_feature_text(*record));
    const auto vectors = index::embed_texts(*backends.embedder, texts, options.batch_size);

    std::vector<expertise::TrainSample> samples(usable.size());
    for (std::size_t i = 0; i < usable.size(); ++i) {
        samples[i].features.assign(vectors[i].begin(), vectors[i].end());
        for (corpus::SubjectArea subject : usable[i]->subjects)
            samples[i].y_sub[static_cast<std::size_t>(subject)] = 1.0;
        samples[i].y_lvl[static_cast<std::size_t>(usable[i]->certification)] = 1.0;
    }

    expertise::TrainConfig train_config;
    train_config.epochs = options.epochs;
    train_config.seed = options.seed;
    expertise::TrainTrace trace;
    expertise::ExpertiseHeads heads = expertise::train(samples, train_config, &trace);
    heads.feature_backend = backends.embedder->id();
    heads.save(options.out);

    std::cout << "trained on " << usable.size() << " records (" << skipped
              << " skipped), final loss " << trace.epoch_loss.back() << " -> " << options.out
              << "\n";
    return 0;
}

// ----------------------------------------------------------------- classify

int cmd_classify(const ClassifyOptions& options, const Config& config) {
    const BackendBundle backends = make_backends(config);
    const auto heads = expertise::ExpertiseHeads::load(options.heads_in);
    const std::vector<corpus::QuestionRecord> records = load_questions(options.questions_in);
    if (records.empty()) throw EmptyDataset("no questions in " + options.questions_in);

    std::vector<json> rows;
    rows.reserve(records.size());
    for (const corpus::QuestionRecord& record : records) {
        const auto prediction =
            expertise::classify_question(record, *backends.embedder, heads, options.threshold);
        json subjects = json::array();
        for (corpus::SubjectArea subject : prediction.subjects)
            subjects.push_back(corpus::subject_id(subject));
        rows.push_back(json{{"id", record.id},
                            {"subjects", subjects},
                            {"certification", corpus::certification_name(prediction.certification)},
                            {"p_sub", prediction.p_sub},
                            {"p_lvl", prediction.p_lvl}});
    }
    jsonl::write_file(options.out, rows);
    std::cout << "classified " << rows.size() << " questions -> " << options.out << "\n";
    return 0;
}

// ------------------------------------------------------------------- engine

pipeline::Engine make_engine(const EngineOptions& options, const Config& config,
                             const BackendBundle& backends) {
    pipeline::EngineConfig engine_config;
    const auto family = prompting::prompt_family_from_string(options.prompt);
    if (!family) throw ConfigError("unknown prompt family: " + options.prompt);
    engine_config.family = *family;
    const auto strategy = retrieval::strategy_from_string(options.strategy);
    if (!strategy) throw ConfigError("unknown strategy: " + options.strategy);
    engine_config.retrieval.strategy = *strategy;
    engine_config.retrieval.M = options.M;
    engine_config.retrieval.N = options.N;
    engine_config.retrieval.oversample = options.oversample;
    const auto source = pipeline::expertise_source_from_string(options.expertise);
    if (!source) throw ConfigError("unknown expertise source: " + options.expertise);
    engine_config.expertise = *source;
    engine_config.fewshot_k = options.fewshot_k;
    engine_config.seed = options.seed;
    engine_config.jobs = options.jobs;
    engine_config.model = backends.chat_model;

    pipeline::Engine::Deps deps;
    deps.chat = backends.chat;
    deps.embedder = backends.embedder;
    deps.templates = make_templates(config);

    const bool retrieves = engine_config.family == prompting::PromptFamily::RAG ||
                           engine_config.family == prompting::PromptFamily::ExpertRAG;
    if (retrieves) {
        if (options.kb_index.empty() || options.kb_chunks.empty())
            throw ConfigError("RAG prompting needs --kb-index and --kb-chunks");
        deps.kb_index = load_index(options.kb_index);
        deps.kb_chunks = load_chunks(options.kb_chunks);
        if (options.pr_index.empty() != options.pr_chunks.empty())
            throw ConfigError("--pr-index and --pr-chunks must be given together");
        if (!options.pr_index.empty()) {
            deps.pr_index = load_index(options.pr_index);
            deps.pr_chunks = load_chunks(options.pr_chunks);
        }
    }
    if (*source == pipeline::ExpertiseSource::Filter) {
        if (options.heads.empty()) throw ConfigError("--expertise filter needs --heads");
        deps.heads = std::make_shared<const expertise::ExpertiseHeads>(
            expertise::ExpertiseHeads::load(options.heads));
    }
    if (engine_config.family == prompting::PromptFamily::FewShot) {
        if (options.train_pool.empty()) throw ConfigError("k-shot prompting needs --train-pool");
        auto pool = std::make_shared<std::vector<corpus::QuestionRecord>>();
        for (corpus::QuestionRecord& record : load_questions(options.train_pool))
            if (record.split == corpus::Split::train) pool->push_back(std::move(record));
        deps.train_pool = pool;
    }
    return pipeline::Engine(std::move(engine_config), std::move(deps));
}

// --------------------------------------------------------- answer/benchmark

namespace {

int run_benchmark(const std::vector<corpus::QuestionRecord>& records,
                  const EngineOptions& engine_options, const Config& config,
                  const std::string& out) {
    const BackendBundle backends = make_backends(config);
    const pipeline::Engine engine = make_engine(engine_options, config, backends);

    const auto started = std::chrono::steady_clock::now();
    std::vector<metrics::QuestionResult> rows = engine.run(records);
    const auto finished = std::chrono::steady_clock::now();

    metrics::RunMeta meta;
    const bool retrieves = engine.config().family == prompting::PromptFamily::RAG ||
                           engine.config().family == prompting::PromptFamily::ExpertRAG;
    meta.strategy =
        retrieves ? retrieval::strategy_name(engine.config().retrieval.strategy) : "none";
    meta.family = prompting::prompt_family_name(engine.config().family);
    meta.backend_id = engine.backend_id();
    meta.config_fingerprint = config.fingerprint();
    meta.template_version = engine.templates().version;
    meta.elapsed_sec = std::chrono::duration<double>(finished - started).count();

    const metrics::RunReport report = metrics::build_report(std::move(rows), std::move(meta));
    if (!out.empty()) metrics::write_report(report, out);
    std::cout << metrics::render_summary(report);
    if (!out.empty()) std::cout << "report -> " << out << "\n";
    return 0;
}

}  // namespace

int cmd_answer(const AnswerOptions& options, const Config& config) {
    const std::vector<corpus::QuestionRecord> records = load_questions(options.question_file);
    if (records.empty()) throw EmptyDataset("no questions in " + options.question_file);
    return run_benchmark(records, options.engine, config, options.out);
}

int cmd_benchmark(const BenchmarkOptions& options, const Config& config) {
    std::vector<corpus::QuestionRecord> records = load_questions(options.questions_in);
    if (!options.split.empty()) {
        const auto split = corpus::split_from_string(options.split);
        if (!split) throw ConfigError("unknown split: " + options.split);
        std::erase_if(records,
                      [&](const corpus::QuestionRecord& r) { return r.split != *split; });
    }
    if (records.empty()) throw EmptyDataset("no questions selected from " + options.questions_in);
    return run_benchmark(records, options.engine, config, options.out);
}

// ----------------------------------------------------------------- coverage

int cmd_coverage(const CoverageOptions& options, const Config& config) {
    // published-counts mode needs no corpora at all
    if (options.qa_count || options.intersection_count) {
        if (!options.qa_count || !options.intersection_count)
            throw ConfigError("--qa-count and --intersection-count must be given together");
        const double rate =
            coverage::hit_rate_from_counts(*options.intersection_count, *options.qa_count);
        std::cout << "vocab hit rate: " << rate * 100.0 << "% (" << *options.intersection_count
                  << "/" << *options.qa_count << ")\n";
        if (!options.out.empty())
            jsonl::write_file(options.out, {json{{"record", "vocab_from_counts"},
                                                 {"qa", *options.qa_count},
                                                 {"intersection", *options.intersection_count},
                                                 {"hit_rate", rate}}});
        return 0;
    }

    if (options.qa_in.empty()) throw ConfigError("coverage needs --qa (or the counts flags)");
    const std::vector<corpus::QuestionRecord> records = load_questions(options.qa_in);
    std::vector<std::string> qa_texts;
    qa_texts.reserve(records.size());
    std::vector<std::string> question_texts;
    question_texts.reserve(records.size());
    for (const corpus::QuestionRecord& record : records) {
        std::string text = record.question;
        for (const corpus::Option& option : record.options) {
            text += ' ';
            text += option.text;
        }
        qa_texts.push_back(std::move(text));
        question_texts.push_back(record.question);
    }

    const std::set<std::string> stopwords = options.stopwords.empty()
                                                ? coverage::builtin_stopwords()
                                                : coverage::load_stopwords(options.stopwords);

    const BackendBundle backends = make_backends(config);
    coverage::IdentityNormalizer normalizer;

    auto concept_set = [&](const std::vector<std::string>& texts, bool normalized) {
        std::set<std::string> concepts;
        for (const std::string& text : texts) {
            const auto extracted =
                coverage::extract_concepts(text, *backends.chat, backends.chat_model);
            if (!normalized) {
                concepts.insert(extracted.begin(), extracted.end());
                continue;
            }
            for (const auto& normalized_concept :
                 coverage::normalize_concepts(extracted, normalizer, options.keep_unknown))
                concepts.insert(normalized_concept.canonical);
        }
        return concepts;
    };

    auto report_for = [&](const std::string& label, const std::string& chunks_path,
                          const std::string& index_path) {
        coverage::CoverageReport report;
        report.label = label;
        const corpus::ChunkStore store = corpus::ChunkStore::load_jsonl(chunks_path);
        std::vector<std::string> corpus_texts;
        corpus_texts.reserve(store.size());
        for (const corpus::Chunk& chunk : store.all()) corpus_texts.push_back(chunk.text);
        report.vocab = coverage::vocab_hit_rate(qa_texts, corpus_texts, stopwords);
        if (!index_path.empty()) {
            const auto idx = index::VectorIndex::load(index_path);
            report.avg_top1 =
                coverage::avg_top1_similarity(question_texts, idx, *backends.embedder);
        }
        if (options.with_concepts) {
            const auto qa_concepts = concept_set(qa_texts, false);
            const auto corpus_concepts = concept_set(corpus_texts, false);
            report.concepts_raw = coverage::set_overlap(qa_concepts, corpus_concepts);
            report.concepts_normalized = coverage::set_overlap(concept_set(qa_texts, true),
                                                               concept_set(corpus_texts, true));
        }
        return report;
    };

    std::vector<json> all_rows;
    bool any = false;
    for (const auto& [label, chunks_path, index_path] :
         {std::tuple{std::string("KB"), options.kb_chunks, options.kb_index},
          std::tuple{std::string("PR"), options.pr_chunks, options.pr_index}}) {
        if (chunks_path.empty()) continue;
        any = true;
        const coverage::CoverageReport report = report_for(label, chunks_path, index_path);
        std::cout << coverage::render_coverage(report);
        for (json& row : coverage::coverage_rows(report)) all_rows.push_back(std::move(row));
    }
    if (!any) throw ConfigError("coverage needs --kb-chunks and/or --pr-chunks");
    if (!options.out.empty()) jsonl::write_file(options.out, all_rows);
    return 0;
}

// --------------------------------------------------------------------- exam

int cmd_exam(const ExamOptions& options, const Config& config) {
    const BackendBundle backends = make_backends(config);
    const pipeline::Engine engine = make_engine(options.engine, config, backends);

    exam::ExamSession session;
    session.questions = load_questions(options.questions_in);
    session.time_budget_sec = options.budget_min * 60.0;
    session.pass_threshold = options.pass_threshold;

    const exam::ExamReport report =
        exam::run_exam(session, [&engine](const corpus::QuestionRecord& record) {
            const metrics::QuestionResult row = engine.answer_one(record);
            return std::make_pair(row.predicted, row.latency_ms / 1000.0);
        });

    if (!options.out.empty()) {
        std::vector<json> rows;
        rows.push_back(json{{"record", "exam"},
                            {"outcome", exam::outcome_name(report.outcome)},
                            {"accuracy", report.accuracy},
                            {"score", report.score ? json(*report.score) : json()},
                            {"elapsed_sec", report.elapsed_sec},
                            {"answered", report.answered},
                            {"correct", report.correct},
                            {"questions", session.questions.size()},
                            {"config_fingerprint", config.fingerprint()}});
        for (const exam::QuestionLog& log : report.log) {
            json predicted = json::array();
            for (char c : log.predicted) predicted.push_back(std::string(1, c));
            rows.push_back(json{{"record", "question"},
                                {"id", log.id},
                                {"administered", log.administered},
                                {"correct", log.correct},
                                {"predicted", predicted},
                                {"latency_sec", log.latency_sec},
                                {"error", log.error}});
        }
        jsonl::write_file(options.out, rows);
    }
    std::cout << exam::render_exam_summary(report);
    return 0;
}

}  // namespace emsrag::cli
