#pragma once

// Deterministic fixture generators and brute-force reference implementations
// shared by the unit suites and the acceptance gate. Everything here is
// seeded so failures reproduce exactly.

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "emsrag/backends/chat.hpp"
#include "emsrag/common/jsonl.hpp"
#include "emsrag/common/rng.hpp"
#include "emsrag/corpus/json_io.hpp"
#include "emsrag/corpus/store.hpp"
#include "emsrag/corpus/types.hpp"
#include "emsrag/expertise/train.hpp"
#include "emsrag/index/vector_index.hpp"
#include "emsrag/pipeline/engine.hpp"

namespace testsupport {

namespace fs = std::filesystem;

// --------------------------------------------------------------- temp dirs

// Unique scratch directory removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<unsigned> counter{0};
        path_ = fs::temp_directory_path() /
                ("emsrag_" + tag + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter.fetch_add(1)));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const { return path_; }
    fs::path operator/(const std::string& name) const { return path_ / name; }

private:
    fs::path path_;
};

// --------------------------------------------------------- question fixtures

// Deterministic question with four options, single gold answer, one gold
// subject, and a gold certification. Ids sort in generation order.
inline emsrag::corpus::QuestionRecord make_question(int i,
                                                    emsrag::corpus::Split split =
                                                        emsrag::corpus::Split::test) {
    using namespace emsrag::corpus;
    QuestionRecord record;
    char id[16];
    std::snprintf(id, sizeof(id), "q%04d", i);
    record.id = id;
    const SubjectArea subject = static_cast<SubjectArea>(i % kSubjectCount);
    record.question = "What is the indicated action for scenario " + std::to_string(i) +
                      " involving " + subject_display(subject) + "?";
    for (int k = 0; k < 4; ++k) {
        Option option;
        option.label = static_cast<char>('A' + k);
        option.text = "perform intervention " + std::to_string(i) + "-" + std::to_string(k);
        record.options.push_back(std::move(option));
    }
    record.gold = {static_cast<char>('A' + i % 4)};
    record.certification = static_cast<Certification>(i % kCertificationCount);
    record.subjects = {subject};
    record.split = split;
    return record;
}

inline std::vector<emsrag::corpus::QuestionRecord> make_questions(
    int n, emsrag::corpus::Split split = emsrag::corpus::Split::test) {
    std::vector<emsrag::corpus::QuestionRecord> records;
    records.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) records.push_back(make_question(i, split));
    return records;
}

inline void write_questions_jsonl(const fs::path& path,
                                  const std::vector<emsrag::corpus::QuestionRecord>& records) {
    std::vector<nlohmann::json> rows;
    rows.reserve(records.size());
    for (const auto& record : records) rows.push_back(nlohmann::json(record));
    emsrag::jsonl::write_file(path, rows);
}

inline std::string gold_completion(const emsrag::corpus::QuestionRecord& record) {
    std::string letters;
    for (const char g : record.gold) {
        if (!letters.empty()) letters += ", ";
        letters += g;
    }
    return "Answer: " + letters;
}

// ------------------------------------------------------------ vector fixtures

inline std::vector<float> random_unit_vector(emsrag::rng::SplitMix64& gen, int dim) {
    std::vector<float> v(static_cast<std::size_t>(dim));
    double norm = 0.0;
    do {
        norm = 0.0;
        for (auto& x : v) {
            x = static_cast<float>(gen.gaussian());
            norm += static_cast<double>(x) * x;
        }
    } while (!(norm > 0.0));
    const double inv = 1.0 / std::sqrt(norm);
    for (auto& x : v) x = static_cast<float>(x * inv);
    return v;
}

// A random chunk corpus plus a frozen index over it. Chunk i of each corpus
// carries a random subject and the text names its own id.
struct BuiltCorpus {
    std::shared_ptr<emsrag::corpus::ChunkStore> kb_chunks;
    std::shared_ptr<emsrag::corpus::ChunkStore> pr_chunks;
    std::shared_ptr<emsrag::index::VectorIndex> kb_index;
    std::shared_ptr<emsrag::index::VectorIndex> pr_index;
};

inline BuiltCorpus random_corpus(emsrag::rng::SplitMix64& gen, std::size_t kb_n, std::size_t pr_n,
                                 int dim) {
    using namespace emsrag;
    BuiltCorpus built;
    built.kb_chunks = std::make_shared<corpus::ChunkStore>();
    built.pr_chunks = std::make_shared<corpus::ChunkStore>();
    built.kb_index = std::make_shared<index::VectorIndex>(dim);
    built.pr_index = std::make_shared<index::VectorIndex>(dim);

    auto fill = [&](corpus::ChunkStore& store, index::VectorIndex& idx, std::size_t n,
                    corpus::CorpusTag tag, const char* prefix) {
        for (std::size_t i = 0; i < n; ++i) {
            corpus::Chunk chunk;
            chunk.id = std::string(prefix) + std::to_string(i);
            chunk.parent_id = prefix;
            chunk.corpus = tag;
            chunk.subject = static_cast<corpus::SubjectArea>(gen.index(corpus::kSubjectCount));
            chunk.text = "chunk text for " + chunk.id;
            const std::vector<float> vec = random_unit_vector(gen, dim);
            idx.insert(chunk.id, vec, chunk.subject, tag);
            store.add(std::move(chunk));
        }
        idx.freeze();
    };
    fill(*built.kb_chunks, *built.kb_index, kb_n, corpus::CorpusTag::KB, "kb");
    fill(*built.pr_chunks, *built.pr_index, pr_n, corpus::CorpusTag::PR, "pr");
    return built;
}

// ------------------------------------------------------- brute-force oracles

// Reference top-k: normalize the query exactly like the index does, score
// every entry with the same double-accumulated dot product, full-sort by
// (score desc, id asc), truncate. Shares the index's stored vectors so the
// comparison isolates the selection logic (predicate, ordering, truncation).
inline std::vector<emsrag::index::SearchHit> brute_force_search(
    const emsrag::index::VectorIndex& idx, std::span<const float> query, std::size_t k,
    const emsrag::index::SearchPredicate* predicate = nullptr) {
    double norm = 0.0;
    for (const float x : query) norm += static_cast<double>(x) * x;
    norm = std::sqrt(norm);
    std::vector<float> q(query.begin(), query.end());
    for (auto& x : q) x = static_cast<float>(x / norm);

    std::vector<emsrag::index::SearchHit> hits;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const auto& entry = idx.entry(i);
        if (predicate != nullptr && !predicate->matches(entry.subject, entry.corpus)) continue;
        const std::span<const float> v = idx.vector(i);
        double acc = 0.0;
        for (std::size_t d = 0; d < q.size(); ++d) acc += static_cast<double>(q[d]) * v[d];
        hits.push_back(emsrag::index::SearchHit{entry.id, acc});
    }
    std::sort(hits.begin(), hits.end(),
              [](const emsrag::index::SearchHit& a, const emsrag::index::SearchHit& b) {
                  if (a.score != b.score) return a.score > b.score;
                  return a.id < b.id;
              });
    if (hits.size() > k) hits.resize(k);
    return hits;
}

inline std::vector<std::string> hit_ids(const std::vector<emsrag::index::SearchHit>& hits) {
    std::vector<std::string> ids;
    ids.reserve(hits.size());
    for (const auto& hit : hits) ids.push_back(hit.id);
    return ids;
}

// Reference filter-then-retrieve over one corpus: restrict to the subject
// set, then top-k.
inline std::vector<std::string> oracle_ftr_ids(const emsrag::index::VectorIndex& idx,
                                               std::span<const float> query,
                                               const std::set<emsrag::corpus::SubjectArea>& subjects,
                                               std::size_t k) {
    if (k == 0) return {};
    emsrag::index::SearchPredicate predicate;
    predicate.subjects = subjects;
    return hit_ids(brute_force_search(idx, query, k, &predicate));
}

// Reference retrieve-then-filter: unfiltered top (oversample*k) candidates,
// drop subject misses, keep the first k survivors.
inline std::vector<std::string> oracle_rtf_ids(const emsrag::index::VectorIndex& idx,
                                               const emsrag::corpus::ChunkStore& chunks,
                                               std::span<const float> query,
                                               const std::set<emsrag::corpus::SubjectArea>& subjects,
                                               std::size_t k, std::size_t oversample) {
    if (k == 0) return {};
    std::vector<std::string> out;
    for (const auto& hit : brute_force_search(idx, query, oversample * k)) {
        if (out.size() == k) break;
        if (subjects.count(chunks.require(hit.id).subject) > 0) out.push_back(hit.id);
    }
    return out;
}

inline std::vector<std::string> oracle_global_ids(const emsrag::index::VectorIndex& idx,
                                                  std::span<const float> query, std::size_t k) {
    if (k == 0) return {};
    return hit_ids(brute_force_search(idx, query, k));
}

// ------------------------------------------------- separable expertise data

// Linearly separable multitask dataset: subject j lights up feature dim j,
// certification c lights up dim 10+c, everything else is low-variance noise.
struct SyntheticExpertise {
    std::vector<emsrag::expertise::TrainSample> samples;
    std::vector<std::set<int>> gold_subjects;
    std::vector<int> gold_levels;
};

inline SyntheticExpertise separable_expertise(std::size_t n, int dim, std::uint64_t seed) {
    using namespace emsrag;
    if (dim < corpus::kSubjectCount + corpus::kCertificationCount)
        throw std::invalid_argument("separable_expertise: dim too small");
    rng::SplitMix64 gen(seed);
    SyntheticExpertise data;
    data.samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        expertise::TrainSample sample;
        sample.features.resize(static_cast<std::size_t>(dim));
        for (auto& f : sample.features) f = gen.gaussian() * 0.3;

        const std::size_t subject_count = 1 + gen.index(3);
        const auto subjects =
            rng::sample_without_replacement(corpus::kSubjectCount, subject_count, gen);
        std::set<int> gold;
        for (const std::size_t j : subjects) {
            sample.features[j] += 3.0;
            sample.y_sub[j] = 1.0;
            gold.insert(static_cast<int>(j));
        }

        const std::size_t level = gen.index(corpus::kCertificationCount);
        sample.features[static_cast<std::size_t>(corpus::kSubjectCount) + level] += 3.0;
        sample.y_lvl[level] = 1.0;

        data.gold_subjects.push_back(std::move(gold));
        data.gold_levels.push_back(static_cast<int>(level));
        data.samples.push_back(std::move(sample));
    }
    return data;
}

// -------------------------------------------- independent confusion counting

// Per-label confusion counted from scratch; micro and macro F1 assembled from
// precision/recall directly (the production path pools counts first).
struct ConfusionF1 {
    double micro = 0.0;
    double macro_ = 0.0;
};

inline ConfusionF1 confusion_f1(const std::vector<std::set<int>>& predicted,
                                const std::vector<std::set<int>>& gold, int label_count) {
    std::vector<long> tp(static_cast<std::size_t>(label_count), 0);
    std::vector<long> fp(tp), fn(tp);
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        for (int label = 0; label < label_count; ++label) {
            const bool p = predicted[i].count(label) > 0;
            const bool g = gold[i].count(label) > 0;
            if (p && g) ++tp[static_cast<std::size_t>(label)];
            if (p && !g) ++fp[static_cast<std::size_t>(label)];
            if (!p && g) ++fn[static_cast<std::size_t>(label)];
        }
    }
    auto f1_of = [](double tp_, double fp_, double fn_) {
        const double precision = tp_ + fp_ == 0.0 ? 0.0 : tp_ / (tp_ + fp_);
        const double recall = tp_ + fn_ == 0.0 ? 0.0 : tp_ / (tp_ + fn_);
        return precision + recall == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
    };
    ConfusionF1 out;
    long tp_all = 0, fp_all = 0, fn_all = 0;
    double macro_sum = 0.0;
    for (int label = 0; label < label_count; ++label) {
        const auto l = static_cast<std::size_t>(label);
        tp_all += tp[l];
        fp_all += fp[l];
        fn_all += fn[l];
        macro_sum += f1_of(static_cast<double>(tp[l]), static_cast<double>(fp[l]),
                           static_cast<double>(fn[l]));
    }
    out.micro = f1_of(static_cast<double>(tp_all), static_cast<double>(fp_all),
                      static_cast<double>(fn_all));
    out.macro_ = macro_sum / static_cast<double>(label_count);
    return out;
}

// ------------------------------------------------------------ mock scripting

// Scripts the mock chat backend so every fixture question gets its gold
// answer back. Prompts come from the same engine configuration the run will
// use, so fingerprints line up by construction.
inline void script_gold_answers(emsrag::backends::MockChatBackend& mock,
                                const emsrag::pipeline::Engine& engine,
                                const std::vector<emsrag::corpus::QuestionRecord>& records) {
    for (const auto& record : records) {
        const auto prepared = engine.prepare(record);
        mock.script(prepared.bundle.system, prepared.bundle.user, gold_completion(record));
    }
}

// Same scripting as JSONL rows for the CLI's backend.chat.script key.
inline std::vector<nlohmann::json> gold_script_rows(
    const emsrag::pipeline::Engine& engine,
    const std::vector<emsrag::corpus::QuestionRecord>& records) {
    std::vector<nlohmann::json> rows;
    rows.reserve(records.size());
    for (const auto& record : records) {
        const auto prepared = engine.prepare(record);
        rows.push_back(nlohmann::json{
            {"fingerprint",
             emsrag::backends::prompt_fingerprint(prepared.bundle.system, prepared.bundle.user)},
            {"completion", gold_completion(record)}});
    }
    return rows;
}

}  // namespace testsupport
