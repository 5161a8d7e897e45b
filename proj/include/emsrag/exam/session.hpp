#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "emsrag/corpus/types.hpp"

namespace emsrag::exam {

enum class Outcome { Pass, Fail, Aborted };
const char* outcome_name(Outcome o);

// Maps final accuracy to a reported scaled score. Optional; absent means the
// raw accuracy is compared against pass_threshold directly.
using ScoreMapper = std::function<double(double accuracy)>;

struct ExamSession {
    std::vector<corpus::QuestionRecord> questions;  // administered in this order
    double time_budget_sec = 150.0 * 60.0;
    double pass_threshold = 0.70;
    std::optional<ScoreMapper> score_mapper;
    // When set, the mapped score is compared against this instead of accuracy
    // against pass_threshold.
    std::optional<double> score_pass_threshold;
};

struct QuestionLog {
    std::string id;
    bool administered = false;  // false when the budget ran out first
    bool correct = false;
    std::set<char> predicted;
    double latency_sec = 0.0;
    std::string error;  // backend failure note; the question scores incorrect
};

struct ExamReport {
    Outcome outcome = Outcome::Fail;
    double accuracy = 0.0;          // over all questions, unseen scored incorrect
    std::optional<double> score;    // mapped score when a mapper is configured
    double elapsed_sec = 0.0;       // sum of per-question latencies
    std::size_t answered = 0;
    std::size_t correct = 0;
    std::vector<QuestionLog> log;
};

// Answers one question: predicted label set + wall-clock seconds spent.
using QuestionRunner =
    std::function<std::pair<std::set<char>, double>(const corpus::QuestionRecord&)>;

// Administers questions strictly in order. Before each question the remaining
// budget is checked; once exhausted, the rest are scored incorrect and the
// outcome is Aborted. A backend error fails only that question. Otherwise the
// outcome is Pass iff the pass rule holds.
ExamReport run_exam(const ExamSession& session, const QuestionRunner& runner);

std::string render_exam_summary(const ExamReport& report);

}  // namespace emsrag::exam
