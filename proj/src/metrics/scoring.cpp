#include "emsrag/metrics/scoring.hpp"

#include <algorithm>
#include <stdexcept>

#include "emsrag/common/error.hpp"

namespace emsrag::metrics {

namespace {

void check_paired(std::size_t predicted, std::size_t gold) {
    if (predicted != gold)
        throw LengthMismatch("predicted has " + std::to_string(predicted) + " entries, gold has " +
                             std::to_string(gold));
    if (predicted == 0) throw EmptyDataset("no samples to score");
}

template <typename T>
std::size_t intersection_size(const std::set<T>& a, const std::set<T>& b) {
    const std::set<T>& small = a.size() <= b.size() ? a : b;
    const std::set<T>& large = a.size() <= b.size() ? b : a;
    std::size_t n = 0;
    for (const T& v : small) n += large.count(v);
    return n;
}

}  // namespace

double exact_match_accuracy(const std::vector<std::set<char>>& predicted,
                            const std::vector<std::set<char>>& gold) {
    check_paired(predicted.size(), gold.size());
    std::size_t correct = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i)
        if (predicted[i] == gold[i]) ++correct;
    return static_cast<double>(correct) / static_cast<double>(predicted.size());
}

double sample_f1(const std::set<char>& predicted, const std::set<char>& gold) {
    const std::size_t inter = intersection_size(predicted, gold);
    const double precision =
        predicted.empty() ? 0.0 : static_cast<double>(inter) / static_cast<double>(predicted.size());
    const double recall =
        gold.empty() ? 0.0 : static_cast<double>(inter) / static_cast<double>(gold.size());
    if (precision + recall == 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

double mean_sample_f1(const std::vector<std::set<char>>& predicted,
                      const std::vector<std::set<char>>& gold) {
    check_paired(predicted.size(), gold.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) sum += sample_f1(predicted[i], gold[i]);
    return sum / static_cast<double>(predicted.size());
}

MultiLabelF1 multilabel_f1(const std::vector<std::set<int>>& predicted,
                           const std::vector<std::set<int>>& gold, int label_count) {
    check_paired(predicted.size(), gold.size());
    if (label_count <= 0) throw std::invalid_argument("label_count must be positive");

    MultiLabelF1 out;
    out.per_label.resize(static_cast<std::size_t>(label_count));
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        for (int label : predicted[i]) {
            if (label < 0 || label >= label_count)
                throw std::invalid_argument("label index out of range: " + std::to_string(label));
            if (gold[i].count(label) > 0)
                ++out.per_label[static_cast<std::size_t>(label)].tp;
            else
                ++out.per_label[static_cast<std::size_t>(label)].fp;
        }
        for (int label : gold[i]) {
            if (label < 0 || label >= label_count)
                throw std::invalid_argument("label index out of range: " + std::to_string(label));
            if (predicted[i].count(label) == 0) ++out.per_label[static_cast<std::size_t>(label)].fn;
        }
    }

    long tp = 0, fp = 0, fn = 0;
    double macro_sum = 0.0;
    for (const LabelCounts& c : out.per_label) {
        tp += c.tp;
        fp += c.fp;
        fn += c.fn;
        const double denom = static_cast<double>(2 * c.tp + c.fp + c.fn);
        macro_sum += denom == 0.0 ? 0.0 : 2.0 * static_cast<double>(c.tp) / denom;
    }
    const double micro_denom = static_cast<double>(2 * tp + fp + fn);
    out.micro = micro_denom == 0.0 ? 0.0 : 2.0 * static_cast<double>(tp) / micro_denom;
    out.macro_ = macro_sum / static_cast<double>(label_count);
    return out;
}

double label_accuracy(const std::vector<int>& predicted, const std::vector<int>& gold) {
    check_paired(predicted.size(), gold.size());
    std::size_t correct = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i)
        if (predicted[i] == gold[i]) ++correct;
    return static_cast<double>(correct) / static_cast<double>(predicted.size());
}

}  // namespace emsrag::metrics
