#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "emsrag/corpus/types.hpp"

namespace emsrag::metrics {

// One benchmark row: what was asked, what the model answered, how it scored.
struct QuestionResult {
    std::string id;
    std::string strategy;  // "none" when no retrieval ran
    std::string family;
    corpus::Certification certification_used = corpus::Certification::NA;
    std::set<corpus::SubjectArea> subjects_used;
    std::set<char> predicted;  // empty when unparsed
    std::set<char> gold;
    bool parsed = false;
    std::string parse_method;  // empty when unparsed
    bool correct = false;
    double sample_f1 = 0.0;
    double latency_ms = 0.0;
    int retries = 0;
    std::vector<std::string> kb_chunk_ids;
    std::vector<std::string> pr_chunk_ids;

    // Ground-truth annotations driving the per-group breakdowns.
    std::set<corpus::SubjectArea> gold_subjects;
    corpus::Certification gold_certification = corpus::Certification::NA;
};

struct GroupStats {
    std::size_t count = 0;
    double accuracy = 0.0;
    double sample_f1 = 0.0;
};

struct RunMeta {
    std::string strategy;
    std::string family;
    std::string backend_id;
    std::string config_fingerprint;
    std::string template_version;
    double elapsed_sec = 0.0;
};

struct RunReport {
    RunMeta meta;
    std::vector<QuestionResult> rows;  // sorted by id
    double accuracy = 0.0;             // mean of correct flags
    double mean_sample_f1 = 0.0;
    std::size_t unparseable = 0;       // scored 0, counted separately
    std::map<std::string, GroupStats> by_subject;        // keyed by canonical subject id
    std::map<std::string, GroupStats> by_certification;  // keyed by level name
};

// Sorts rows by id and computes every aggregate. Throws EmptyDataset on no rows.
RunReport build_report(std::vector<QuestionResult> rows, RunMeta meta);

// Line-delimited emission: one "run" record carrying the aggregates, then one
// "question" record per row. Written atomically.
void write_report(const RunReport& report, const std::filesystem::path& path);
RunReport load_report(const std::filesystem::path& path);

// Human-readable summary table (overall plus per-group breakdowns).
std::string render_summary(const RunReport& report);

}  // namespace emsrag::metrics
