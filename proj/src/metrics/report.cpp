#include "emsrag/metrics/report.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "emsrag/common/error.hpp"
#include "emsrag/common/jsonl.hpp"

namespace emsrag::metrics {

namespace {

using nlohmann::json;

json labels_to_json(const std::set<char>& labels) {
    json arr = json::array();
    for (char c : labels) arr.push_back(std::string(1, c));
    return arr;
}

std::set<char> labels_from_json(const json& arr) {
    std::set<char> out;
    for (const auto& v : arr) {
        const std::string s = v.get<std::string>();
        if (s.size() != 1) throw IoError("label must be a single letter: " + s);
        out.insert(s[0]);
    }
    return out;
}

json subjects_to_json(const std::set<corpus::SubjectArea>& subjects) {
    json arr = json::array();
    for (auto s : subjects) arr.push_back(corpus::subject_id(s));
    return arr;
}

std::set<corpus::SubjectArea> subjects_from_json(const json& arr) {
    std::set<corpus::SubjectArea> out;
    for (const auto& v : arr) {
        const auto s = corpus::subject_from_string(v.get<std::string>());
        if (!s) throw IoError("unknown subject: " + v.get<std::string>());
        out.insert(*s);
    }
    return out;
}

json row_to_json(const QuestionResult& r) {
    return json{{"record", "question"},
                {"id", r.id},
                {"strategy", r.strategy},
                {"family", r.family},
                {"certification_used", corpus::certification_name(r.certification_used)},
                {"subjects_used", subjects_to_json(r.subjects_used)},
                {"predicted", labels_to_json(r.predicted)},
                {"gold", labels_to_json(r.gold)},
                {"parsed", r.parsed},
                {"parse_method", r.parse_method},
                {"correct", r.correct},
                {"sample_f1", r.sample_f1},
                {"latency_ms", r.latency_ms},
                {"retries", r.retries},
                {"kb_chunk_ids", r.kb_chunk_ids},
                {"pr_chunk_ids", r.pr_chunk_ids},
                {"gold_subjects", subjects_to_json(r.gold_subjects)},
                {"gold_certification", corpus::certification_name(r.gold_certification)}};
}

QuestionResult row_from_json(const json& j) {
    QuestionResult r;
    r.id = j.at("id").get<std::string>();
    r.strategy = j.at("strategy").get<std::string>();
    r.family = j.at("family").get<std::string>();
    r.certification_used =
        corpus::certification_from_string(j.at("certification_used").get<std::string>())
            .value_or(corpus::Certification::NA);
    r.subjects_used = subjects_from_json(j.at("subjects_used"));
    r.predicted = labels_from_json(j.at("predicted"));
    r.gold = labels_from_json(j.at("gold"));
    r.parsed = j.at("parsed").get<bool>();
    r.parse_method = j.at("parse_method").get<std::string>();
    r.correct = j.at("correct").get<bool>();
    r.sample_f1 = j.at("sample_f1").get<double>();
    r.latency_ms = j.at("latency_ms").get<double>();
    r.retries = j.at("retries").get<int>();
    r.kb_chunk_ids = j.at("kb_chunk_ids").get<std::vector<std::string>>();
    r.pr_chunk_ids = j.at("pr_chunk_ids").get<std::vector<std::string>>();
    r.gold_subjects = subjects_from_json(j.at("gold_subjects"));
    r.gold_certification =
        corpus::certification_from_string(j.at("gold_certification").get<std::string>())
            .value_or(corpus::Certification::NA);
    return r;
}

json groups_to_json(const std::map<std::string, GroupStats>& groups) {
    json out = json::object();
    for (const auto& [key, g] : groups)
        out[key] = json{{"count", g.count}, {"accuracy", g.accuracy}, {"sample_f1", g.sample_f1}};
    return out;
}

std::map<std::string, GroupStats> groups_from_json(const json& j) {
    std::map<std::string, GroupStats> out;
    for (const auto& [key, v] : j.items()) {
        GroupStats g;
        g.count = v.at("count").get<std::size_t>();
        g.accuracy = v.at("accuracy").get<double>();
        g.sample_f1 = v.at("sample_f1").get<double>();
        out[key] = g;
    }
    return out;
}

struct Accumulator {
    std::size_t count = 0;
    double correct = 0.0;
    double f1 = 0.0;

    void add(const QuestionResult& r) {
        ++count;
        correct += r.correct ? 1.0 : 0.0;
        f1 += r.sample_f1;
    }
    GroupStats stats() const {
        GroupStats g;
        g.count = count;
        g.accuracy = count == 0 ? 0.0 : correct / static_cast<double>(count);
        g.sample_f1 = count == 0 ? 0.0 : f1 / static_cast<double>(count);
        return g;
    }
};

}  // namespace

RunReport build_report(std::vector<QuestionResult> rows, RunMeta meta) {
    if (rows.empty()) throw EmptyDataset("no question results");
    std::sort(rows.begin(), rows.end(),
              [](const QuestionResult& a, const QuestionResult& b) { return a.id < b.id; });

    RunReport report;
    report.meta = std::move(meta);

    Accumulator overall;
    std::map<std::string, Accumulator> by_subject;
    std::map<std::string, Accumulator> by_certification;
    for (const QuestionResult& r : rows) {
        overall.add(r);
        if (!r.parsed) ++report.unparseable;
        for (auto s : r.gold_subjects) by_subject[corpus::subject_id(s)].add(r);
        by_certification[corpus::certification_name(r.gold_certification)].add(r);
    }
    const GroupStats total = overall.stats();
    report.accuracy = total.accuracy;
    report.mean_sample_f1 = total.sample_f1;
    for (const auto& [key, acc] : by_subject) report.by_subject[key] = acc.stats();
    for (const auto& [key, acc] : by_certification) report.by_certification[key] = acc.stats();
    report.rows = std::move(rows);
    return report;
}

void write_report(const RunReport& report, const std::filesystem::path& path) {
    std::vector<json> lines;
    lines.reserve(report.rows.size() + 1);
    lines.push_back(json{{"record", "run"},
                         {"strategy", report.meta.strategy},
                         {"family", report.meta.family},
                         {"backend_id", report.meta.backend_id},
                         {"config_fingerprint", report.meta.config_fingerprint},
                         {"template_version", report.meta.template_version},
                         {"elapsed_sec", report.meta.elapsed_sec},
                         {"questions", report.rows.size()},
                         {"accuracy", report.accuracy},
                         {"mean_sample_f1", report.mean_sample_f1},
                         {"unparseable", report.unparseable},
                         {"by_subject", groups_to_json(report.by_subject)},
                         {"by_certification", groups_to_json(report.by_certification)}});
    for (const QuestionResult& r : report.rows) lines.push_back(row_to_json(r));
    jsonl::write_file(path, lines);
}

RunReport load_report(const std::filesystem::path& path) {
    const std::vector<json> lines = jsonl::read_file(path);
    if (lines.empty() || lines.front().value("record", "") != "run")
        throw IoError("report must start with a run record: " + path.string());

    RunReport report;
    const json& head = lines.front();
    report.meta.strategy = head.at("strategy").get<std::string>();
    report.meta.family = head.at("family").get<std::string>();
    report.meta.backend_id = head.at("backend_id").get<std::string>();
    report.meta.config_fingerprint = head.at("config_fingerprint").get<std::string>();
    report.meta.template_version = head.at("template_version").get<std::string>();
    report.meta.elapsed_sec = head.at("elapsed_sec").get<double>();
    report.accuracy = head.at("accuracy").get<double>();
    report.mean_sample_f1 = head.at("mean_sample_f1").get<double>();
    report.unparseable = head.at("unparseable").get<std::size_t>();
    report.by_subject = groups_from_json(head.at("by_subject"));
    report.by_certification = groups_from_json(head.at("by_certification"));
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].value("record", "") != "question")
            throw IoError("unexpected record type at line " + std::to_string(i + 1));
        report.rows.push_back(row_from_json(lines[i]));
    }
    return report;
}

namespace {

void render_group(std::ostringstream& out, const std::string& heading,
                  const std::map<std::string, GroupStats>& groups) {
    if (groups.empty()) return;
    out << heading << "\n";
    for (const auto& [key, g] : groups) {
        out << "  " << std::left << std::setw(18) << key << std::right << std::setw(6) << g.count
            << "  acc " << std::fixed << std::setprecision(4) << g.accuracy << "  f1 "
            << g.sample_f1 << "\n";
    }
}

}  // namespace

std::string render_summary(const RunReport& report) {
    std::ostringstream out;
    out << "run: strategy=" << report.meta.strategy << " family=" << report.meta.family
        << " backend=" << report.meta.backend_id << " templates=" << report.meta.template_version
        << " config=" << report.meta.config_fingerprint << "\n";
    out << "questions: " << report.rows.size() << "  unparseable: " << report.unparseable
        << "  elapsed: " << std::fixed << std::setprecision(2) << report.meta.elapsed_sec << "s\n";
    out << "accuracy: " << std::fixed << std::setprecision(4) << report.accuracy
        << "  sample-F1: " << report.mean_sample_f1 << "\n";
    render_group(out, "by subject:", report.by_subject);
    render_group(out, "by certification:", report.by_certification);
    return out.str();
}

}  // namespace emsrag::metrics
