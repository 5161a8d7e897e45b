#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "emsrag/backends/embedding.hpp"
#include "emsrag/corpus/types.hpp"
#include "emsrag/expertise/heads.hpp"

namespace emsrag::expertise {

struct TrainSample {
    std::vector<double> features;
    std::array<double, kSubjectHeadSize> y_sub{};  // 0/1 multilabel targets
    std::array<double, kLevelHeadSize> y_lvl{};    // one-hot certification target
};

struct TrainConfig {
    int epochs = 200;
    int batch_size = 32;
    double lr = 0.02;
    double weight_decay = 0.01;  // decoupled
    std::uint64_t seed = 42;
    double dwa_temperature = 2.0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_eps = 1e-8;
};

struct TrainTrace {
    std::vector<double> epoch_loss;                          // weighted total per epoch
    std::vector<std::pair<double, double>> task_losses;      // (L_sub, L_lvl) per epoch
    std::vector<std::pair<double, double>> task_weights;     // DWA weights used per epoch
};

// Mini-batch gradient descent with adaptive-moment updates and decoupled
// weight decay, task-weighted by dynamic weight averaging recomputed each
// epoch. Fully deterministic for a given (dataset, config): seeded uniform
// init scaled by 1/sqrt(dim), seeded epoch shuffles, single-threaded math —
// two runs produce bitwise-identical weights.
// Throws EmptyDataset on no samples and Divergence if the loss goes
// non-finite.
ExpertiseHeads train(const std::vector<TrainSample>& dataset, const TrainConfig& config = {},
                     TrainTrace* trace = nullptr);

// Text encoded for expertise classification: question, options as "A. text"
// lines, then the classify marker.
std::string classify_feature_text(const corpus::QuestionRecord& record);

// Embeds the record's feature text with the frozen backend and runs the heads.
ExpertisePrediction classify_question(const corpus::QuestionRecord& record,
                                      backends::EmbeddingBackend& backend,
                                      const ExpertiseHeads& heads, double threshold = 0.5);

}  // namespace emsrag::expertise
