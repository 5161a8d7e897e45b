#include "emsrag/coverage/overlap.hpp"

#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "emsrag/common/error.hpp"
#include "emsrag/common/jsonl.hpp"
#include "emsrag/index/embed.hpp"

namespace emsrag::coverage {

std::vector<std::string> vocab_tokens(std::string_view text,
                                      const std::set<std::string>& stopwords) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (!current.empty() && stopwords.count(current) == 0) tokens.push_back(current);
        current.clear();
    };
    for (char raw : text) {
        const auto c = static_cast<unsigned char>(raw);
        if (std::isalnum(c))
            current.push_back(static_cast<char>(std::tolower(c)));
        else
            flush();
    }
    flush();
    return tokens;
}

std::set<std::string> vocabulary(const std::vector<std::string>& texts,
                                 const std::set<std::string>& stopwords) {
    std::set<std::string> vocab;
    for (const std::string& text : texts)
        for (std::string& token : vocab_tokens(text, stopwords)) vocab.insert(std::move(token));
    return vocab;
}

OverlapCounts set_overlap(const std::set<std::string>& qa_terms,
                          const std::set<std::string>& corpus_terms) {
    if (qa_terms.empty()) throw EmptyQA("QA side contributes no terms");
    OverlapCounts counts;
    counts.qa = qa_terms.size();
    counts.corpus = corpus_terms.size();
    for (const std::string& term : qa_terms)
        if (corpus_terms.count(term) > 0) ++counts.intersection;
    counts.hit_rate = static_cast<double>(counts.intersection) / static_cast<double>(counts.qa);
    return counts;
}

OverlapCounts vocab_hit_rate(const std::vector<std::string>& qa_texts,
                             const std::vector<std::string>& corpus_texts,
                             const std::set<std::string>& stopwords) {
    return set_overlap(vocabulary(qa_texts, stopwords), vocabulary(corpus_texts, stopwords));
}

double hit_rate_from_counts(std::size_t intersection, std::size_t qa_vocab) {
    if (qa_vocab == 0) throw EmptyQA("QA vocabulary count is zero");
    return static_cast<double>(intersection) / static_cast<double>(qa_vocab);
}

const std::set<std::string>& builtin_stopwords() {
    static const std::set<std::string> words = {
        "a",       "about",   "above",   "after",   "again",    "against", "all",     "am",
        "an",      "and",     "any",     "are",     "aren",     "as",      "at",      "be",
        "because", "been",    "before",  "being",   "below",    "between", "both",    "but",
        "by",      "can",     "cannot",  "could",   "couldn",   "did",     "didn",    "do",
        "does",    "doesn",   "doing",   "don",     "down",     "during",  "each",    "few",
        "for",     "from",    "further", "had",     "hadn",     "has",     "hasn",    "have",
        "haven",   "having",  "he",      "her",     "here",     "hers",    "herself", "him",
        "himself", "his",     "how",     "i",       "if",       "in",      "into",    "is",
        "isn",     "it",      "its",     "itself",  "just",     "ll",      "me",      "more",
        "most",    "mustn",   "my",      "myself",  "no",       "nor",     "not",     "now",
        "of",      "off",     "on",      "once",    "only",     "or",      "other",   "ought",
        "our",     "ours",    "ourselves", "out",   "over",     "own",     "re",      "s",
        "same",    "shan",    "she",     "should",  "shouldn",  "so",      "some",    "such",
        "t",       "than",    "that",    "the",     "their",    "theirs",  "them",    "themselves",
        "then",    "there",   "these",   "they",    "this",     "those",   "through", "to",
        "too",     "under",   "until",   "up",      "ve",       "very",    "was",     "wasn",
        "we",      "were",    "weren",   "what",    "when",     "where",   "which",   "while",
        "who",     "whom",    "why",     "will",    "with",     "won",     "would",   "wouldn",
        "you",     "your",    "yours",   "yourself", "yourselves",
    };
    return words;
}

std::set<std::string> load_stopwords(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open stopword list: " + path.string());
    std::set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::size_t begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos) continue;
        std::size_t end = line.find_last_not_of(" \t\r");
        words.insert(line.substr(begin, end - begin + 1));
    }
    return words;
}

double avg_top1_similarity(const std::vector<std::string>& questions,
                           const index::VectorIndex& index,
                           backends::EmbeddingBackend& embedder) {
    if (questions.empty()) throw EmptyDataset("no questions");
    const auto vectors = index::embed_texts(embedder, questions);
    double sum = 0.0;
    for (const auto& vec : vectors) {
        const auto hits = index.search(vec, 1);
        sum += hits.front().score;
    }
    return sum / static_cast<double>(questions.size());
}

namespace {

std::string percent(double ratio) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(2) << ratio * 100.0 << "%";
    return out.str();
}

nlohmann::json counts_to_json(const OverlapCounts& c) {
    return nlohmann::json{
        {"qa", c.qa}, {"corpus", c.corpus}, {"intersection", c.intersection}, {"hit_rate", c.hit_rate}};
}

}  // namespace

std::string render_coverage(const CoverageReport& report) {
    std::ostringstream out;
    if (!report.label.empty()) out << "== QA vs " << report.label << " ==\n";
    out << std::left << std::setw(16) << "row" << std::right << std::setw(10) << "qa"
        << std::setw(10) << "corpus" << std::setw(12) << "overlap" << std::setw(10) << "rate"
        << "\n";
    if (report.avg_top1)
        out << std::left << std::setw(16) << "avg-sim" << std::right << std::setw(42)
            << std::fixed << std::setprecision(4) << *report.avg_top1 << "\n";
    auto row = [&out](const char* name, const OverlapCounts& c) {
        out << std::left << std::setw(16) << name << std::right << std::setw(10) << c.qa
            << std::setw(10) << c.corpus << std::setw(12) << c.intersection << std::setw(10)
            << percent(c.hit_rate) << "\n";
    };
    row("vocab", report.vocab);
    if (report.concepts_raw) row("cpt-no-norm", *report.concepts_raw);
    if (report.concepts_normalized) row("cpt-norm", *report.concepts_normalized);
    return out.str();
}

std::vector<nlohmann::json> coverage_rows(const CoverageReport& report) {
    std::vector<nlohmann::json> rows;
    if (report.avg_top1)
        rows.push_back({{"record", "avg_top1_similarity"},
                        {"corpus", report.label},
                        {"value", *report.avg_top1}});
    {
        nlohmann::json j = counts_to_json(report.vocab);
        j["record"] = "vocab";
        j["corpus"] = report.label;
        rows.push_back(j);
    }
    if (report.concepts_raw) {
        nlohmann::json j = counts_to_json(*report.concepts_raw);
        j["record"] = "concepts_raw";
        j["corpus"] = report.label;
        rows.push_back(j);
    }
    if (report.concepts_normalized) {
        nlohmann::json j = counts_to_json(*report.concepts_normalized);
        j["record"] = "concepts_normalized";
        j["corpus"] = report.label;
        rows.push_back(j);
    }
    return rows;
}

void write_coverage(const CoverageReport& report, const std::filesystem::path& path) {
    jsonl::write_file(path, coverage_rows(report));
}

}  // namespace emsrag::coverage
