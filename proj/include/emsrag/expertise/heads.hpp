#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "emsrag/corpus/types.hpp"

namespace emsrag::expertise {

inline constexpr int kSubjectHeadSize = corpus::kSubjectCount;       // 10, sigmoid multilabel
inline constexpr int kLevelHeadSize = corpus::kCertificationCount;   // 4, softmax single-label

// Two linear heads over a frozen feature vector: a per-subject sigmoid head
// and a softmax certification-level head. Row-major float64 weights,
// w[d * head_size + j] pairs feature d with output j.
struct ExpertiseHeads {
    int dim = 0;
    std::vector<double> w_sub;  // dim * 10
    std::array<double, kSubjectHeadSize> b_sub{};
    std::vector<double> w_lvl;  // dim * 4
    std::array<double, kLevelHeadSize> b_lvl{};

    std::uint64_t seed = 0;     // training metadata
    int epochs = 0;
    std::string feature_backend;

    // Versioned binary file (magic, version, dims, metadata, packed
    // little-endian float64 weights).
    void save(const std::filesystem::path& path) const;
    static ExpertiseHeads load(const std::filesystem::path& path);
};

struct ExpertisePrediction {
    std::array<double, kSubjectHeadSize> p_sub{};  // independent probabilities
    std::array<double, kLevelHeadSize> p_lvl{};    // sums to 1
    std::set<corpus::SubjectArea> subjects;
    corpus::Certification certification = corpus::Certification::NA;
};

// Subjects: every index with probability strictly above `threshold`; if none
// clears it, the single highest-probability subject (lowest index on ties).
// Certification: argmax of p_lvl (lowest index on ties).
std::pair<std::set<corpus::SubjectArea>, corpus::Certification> decide(
    std::span<const double> p_sub, std::span<const double> p_lvl, double threshold = 0.5);

// Runs both heads on a feature vector and applies decide().
// Throws DimensionMismatch when features.size() != heads.dim.
ExpertisePrediction predict(const ExpertiseHeads& heads, std::span<const double> features,
                            double threshold = 0.5);

}  // namespace emsrag::expertise
