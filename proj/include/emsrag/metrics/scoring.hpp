#pragma once

#include <set>
#include <string>
#include <vector>

namespace emsrag::metrics {

// Fraction of questions whose predicted label set equals the gold set exactly.
// Throws LengthMismatch when the two lists differ in size, EmptyDataset when empty.
double exact_match_accuracy(const std::vector<std::set<char>>& predicted,
                            const std::vector<std::set<char>>& gold);

// Per-question F1 between predicted and gold label sets.
// Precision = |pred ∩ gold| / |pred| (0 when pred is empty),
// recall = |pred ∩ gold| / |gold| (0 when gold is empty),
// F1 = 2PR/(P+R) with 0 when both are 0.
double sample_f1(const std::set<char>& predicted, const std::set<char>& gold);

// Mean of sample_f1 across paired lists. Same length/emptiness contract as
// exact_match_accuracy.
double mean_sample_f1(const std::vector<std::set<char>>& predicted,
                      const std::vector<std::set<char>>& gold);

struct LabelCounts {
    long tp = 0;
    long fp = 0;
    long fn = 0;
};

struct MultiLabelF1 {
    double micro = 0.0;
    double macro_ = 0.0;  // mean of per-label F1; zero-support labels count as 0
    std::vector<LabelCounts> per_label;
};

// Micro/macro F1 over multilabel indicator rows. Each row i holds the active
// label indices for sample i; `label_count` fixes the label universe so that
// labels absent from both lists still enter the macro average as 0.
// Throws LengthMismatch on ragged input, invalid_argument when label_count == 0
// or an index is out of range.
MultiLabelF1 multilabel_f1(const std::vector<std::set<int>>& predicted,
                           const std::vector<std::set<int>>& gold, int label_count);

// Single-label (argmax) accuracy over paired index lists.
double label_accuracy(const std::vector<int>& predicted, const std::vector<int>& gold);

}  // namespace emsrag::metrics
