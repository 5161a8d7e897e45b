#include "emsrag/exam/session.hpp"

#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace emsrag::exam {

const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Pass: return "Pass";
        case Outcome::Fail: return "Fail";
        case Outcome::Aborted: return "Aborted";
    }
    return "Fail";
}

ExamReport run_exam(const ExamSession& session, const QuestionRunner& runner) {
    if (session.questions.empty()) throw std::invalid_argument("exam has no questions");
    if (session.time_budget_sec < 0.0) throw std::invalid_argument("negative time budget");

    ExamReport report;
    bool aborted = false;
    for (const corpus::QuestionRecord& question : session.questions) {
        QuestionLog log;
        log.id = question.id;
        if (aborted || report.elapsed_sec >= session.time_budget_sec) {
            aborted = true;  // budget exhausted: remaining questions score incorrect
            report.log.push_back(std::move(log));
            continue;
        }
        log.administered = true;
        try {
            auto [predicted, latency_sec] = runner(question);
            log.predicted = std::move(predicted);
            log.latency_sec = latency_sec;
            log.correct = log.predicted == question.gold;
        } catch (const std::exception& e) {
            log.error = e.what();  // this question only; the session continues
        }
        report.elapsed_sec += log.latency_sec;
        ++report.answered;
        if (log.correct) ++report.correct;
        report.log.push_back(std::move(log));
    }

    const auto total = static_cast<double>(session.questions.size());
    report.accuracy = static_cast<double>(report.correct) / total;
    if (session.score_mapper) report.score = (*session.score_mapper)(report.accuracy);

    auto passes = [&](double accuracy) {
        if (session.score_mapper && session.score_pass_threshold)
            return (*session.score_mapper)(accuracy) >= *session.score_pass_threshold;
        return accuracy >= session.pass_threshold;
    };
    if (!aborted) {
        report.outcome = passes(report.accuracy) ? Outcome::Pass : Outcome::Fail;
    } else {
        // An interrupted session still gets an outcome when no completion of the
        // remaining questions could change it.
        const double best_case =
            (static_cast<double>(report.correct) + total - static_cast<double>(report.answered)) /
            total;
        if (passes(report.accuracy))
            report.outcome = Outcome::Pass;
        else if (!passes(best_case))
            report.outcome = Outcome::Fail;
        else
            report.outcome = Outcome::Aborted;
    }
    return report;
}

std::string render_exam_summary(const ExamReport& report) {
    std::ostringstream out;
    out << "outcome: " << outcome_name(report.outcome) << "\n";
    out << "accuracy: " << std::fixed << std::setprecision(4) << report.accuracy << " ("
        << report.correct << "/" << report.log.size() << ", " << report.answered << " administered)\n";
    if (report.score) out << "score: " << std::setprecision(1) << *report.score << "\n";
    out << "elapsed: " << std::setprecision(1) << report.elapsed_sec << "s\n";
    return out.str();
}

}  // namespace emsrag::exam
