#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "emsrag/cli/commands.hpp"
#include "emsrag/common/config.hpp"
#include "emsrag/common/error.hpp"

namespace {

emsrag::Config load_config(const std::string& path) {
    emsrag::Config config =
        path.empty() ? emsrag::Config() : emsrag::Config::load(path);
    config.apply_env_overrides();
    return config;
}

void add_engine_flags(CLI::App* cmd, emsrag::cli::EngineOptions& options) {
    cmd->add_option("--prompt", options.prompt, "prompt family")
        ->check(CLI::IsMember({"0shot", "kshot", "cot", "expert-cot", "rag", "expert-rag"}));
    cmd->add_option("--strategy", options.strategy, "retrieval strategy")
        ->check(CLI::IsMember({"global", "ftr", "rtf"}));
    cmd->add_option("--M", options.M, "knowledge-base chunks per question");
    cmd->add_option("--N", options.N, "patient-record chunks per question");
    cmd->add_option("--oversample", options.oversample, "RTF candidate multiplier");
    cmd->add_option("--expertise", options.expertise, "expertise source")
        ->check(CLI::IsMember({"none", "gt", "filter"}));
    cmd->add_option("--k", options.fewshot_k, "exemplars for k-shot prompting");
    cmd->add_option("--seed", options.seed, "run seed");
    cmd->add_option("--jobs", options.jobs, "parallel questions")->check(CLI::PositiveNumber);
    cmd->add_option("--kb-index", options.kb_index, "knowledge-base vector index");
    cmd->add_option("--kb-chunks", options.kb_chunks, "knowledge-base chunk file");
    cmd->add_option("--pr-index", options.pr_index, "patient-record vector index");
    cmd->add_option("--pr-chunks", options.pr_chunks, "patient-record chunk file");
    cmd->add_option("--heads", options.heads, "trained expertise heads file");
    cmd->add_option("--train-pool", options.train_pool, "exemplar source records");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"retrieval-augmented EMS multiple-choice QA engine"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "key=value configuration file")
        ->envname("EMSRAG_CONFIG");

    emsrag::cli::IngestOptions ingest;
    CLI::App* cmd_ingest = app.add_subcommand("ingest", "build canonical corpora");
    cmd_ingest->add_option("--questions", ingest.questions_in, "raw question records");
    cmd_ingest->add_option("--kb", ingest.kb_in, "raw knowledge-base documents");
    cmd_ingest->add_option("--pr", ingest.pr_in, "raw patient records");
    cmd_ingest->add_option("--out-dir", ingest.out_dir, "output directory")->required();
    cmd_ingest->add_option("--window", ingest.window, "chunk window in tokens");
    cmd_ingest->add_option("--overlap", ingest.overlap, "chunk overlap in tokens");
    cmd_ingest->add_option("--dedup-threshold", ingest.dedup_threshold,
                           "near-duplicate similarity threshold");
    cmd_ingest->add_option("--pr-reject-fraction", ingest.pr_reject_fraction,
                           "max dropped-field share before a record is rejected");

    emsrag::cli::IndexOptions index;
    CLI::App* cmd_index = app.add_subcommand("index", "embed chunks into a frozen index");
    cmd_index->add_option("--chunks", index.chunks_in, "chunk file")->required();
    cmd_index->add_option("--out", index.out, "index output path")->required();
    cmd_index->add_option("--batch-size", index.batch_size, "embedding batch size");

    emsrag::cli::TrainFilterOptions train;
    CLI::App* cmd_train = app.add_subcommand("train-filter", "train the expertise heads");
    cmd_train->add_option("--questions", train.questions_in, "canonical question records")
        ->required();
    cmd_train->add_option("--out", train.out, "heads output path")->required();
    cmd_train->add_option("--seed", train.seed, "training seed");
    cmd_train->add_option("--epochs", train.epochs, "training epochs");
    cmd_train->add_option("--batch-size", train.batch_size, "embedding batch size");

    emsrag::cli::ClassifyOptions classify;
    CLI::App* cmd_classify = app.add_subcommand("classify", "predict per-question expertise");
    cmd_classify->add_option("--questions", classify.questions_in, "question records")->required();
    cmd_classify->add_option("--heads", classify.heads_in, "trained heads file")->required();
    cmd_classify->add_option("--out", classify.out, "predictions output")->required();
    cmd_classify->add_option("--threshold", classify.threshold, "subject decision threshold");

    emsrag::cli::AnswerOptions answer;
    CLI::App* cmd_answer = app.add_subcommand("answer", "answer question records end-to-end");
    cmd_answer->add_option("--question-file", answer.question_file, "question records")
        ->required();
    cmd_answer->add_option("--out", answer.out, "report output");
    add_engine_flags(cmd_answer, answer.engine);

    emsrag::cli::BenchmarkOptions benchmark;
    CLI::App* cmd_benchmark = app.add_subcommand("benchmark", "run a split and score it");
    cmd_benchmark->add_option("--questions", benchmark.questions_in, "question records")
        ->required();
    cmd_benchmark->add_option("--split", benchmark.split, "restrict to one split")
        ->check(CLI::IsMember({"train", "val", "test"}));
    cmd_benchmark->add_option("--out", benchmark.out, "report output");
    add_engine_flags(cmd_benchmark, benchmark.engine);

    emsrag::cli::CoverageOptions coverage;
    CLI::App* cmd_coverage = app.add_subcommand("coverage", "corpus-vs-QA overlap report");
    std::size_t qa_count = 0, intersection_count = 0;
    CLI::Option* qa_count_opt =
        cmd_coverage->add_option("--qa-count", qa_count, "published QA vocabulary size");
    CLI::Option* intersection_opt = cmd_coverage->add_option(
        "--intersection-count", intersection_count, "published intersection size");
    cmd_coverage->add_option("--qa", coverage.qa_in, "question records");
    cmd_coverage->add_option("--kb-chunks", coverage.kb_chunks, "knowledge-base chunk file");
    cmd_coverage->add_option("--pr-chunks", coverage.pr_chunks, "patient-record chunk file");
    cmd_coverage->add_option("--stopwords", coverage.stopwords, "stopword list file");
    cmd_coverage->add_option("--kb-index", coverage.kb_index,
                             "enables avg top-1 similarity against the KB");
    cmd_coverage->add_option("--pr-index", coverage.pr_index,
                             "enables avg top-1 similarity against the PR corpus");
    cmd_coverage->add_flag("--with-concepts", coverage.with_concepts,
                           "extract concepts via the chat backend");
    cmd_coverage->add_flag("!--drop-unknown", coverage.keep_unknown,
                           "drop concepts the normalizer cannot type");
    cmd_coverage->add_option("--out", coverage.out, "report output");

    emsrag::cli::ExamOptions exam;
    CLI::App* cmd_exam = app.add_subcommand("exam", "administer a timed exam session");
    cmd_exam->add_option("--questions", exam.questions_in, "exam question records")->required();
    cmd_exam->add_option("--out", exam.out, "exam report output");
    cmd_exam->add_option("--budget-min", exam.budget_min, "time budget in minutes");
    cmd_exam->add_option("--pass-threshold", exam.pass_threshold, "accuracy needed to pass");
    add_engine_flags(cmd_exam, exam.engine);

    CLI11_PARSE(app, argc, argv);

    try {
        const emsrag::Config config = load_config(config_path);
        if (cmd_ingest->parsed()) return emsrag::cli::cmd_ingest(ingest, config);
        if (cmd_index->parsed()) return emsrag::cli::cmd_index(index, config);
        if (cmd_train->parsed()) return emsrag::cli::cmd_train_filter(train, config);
        if (cmd_classify->parsed()) return emsrag::cli::cmd_classify(classify, config);
        if (cmd_answer->parsed()) return emsrag::cli::cmd_answer(answer, config);
        if (cmd_benchmark->parsed()) return emsrag::cli::cmd_benchmark(benchmark, config);
        if (cmd_coverage->parsed()) {
            if (qa_count_opt->count() > 0) coverage.qa_count = qa_count;
            if (intersection_opt->count() > 0) coverage.intersection_count = intersection_count;
            return emsrag::cli::cmd_coverage(coverage, config);
        }
        if (cmd_exam->parsed()) return emsrag::cli::cmd_exam(exam, config);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
