#include "emsrag/expertise/train.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "emsrag/common/error.hpp"
#include "emsrag/common/rng.hpp"
#include "emsrag/expertise/loss.hpp"
#include "emsrag/index/embed.hpp"

namespace emsrag::expertise {

namespace {

constexpr double kProbEps = 1e-7;

double clamp_prob(double p) { return std::min(1.0 - kProbEps, std::max(kProbEps, p)); }

// Adam state for one parameter block.
struct Moments {
    std::vector<double> m, v;
    explicit Moments(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
};

struct Forward {
    std::array<double, kSubjectHeadSize> p_sub{};
    std::array<double, kLevelHeadSize> p_lvl{};
};

Forward forward_one(const ExpertiseHeads& heads, const std::vector<double>& h) {
    Forward f;
    for (int j = 0; j < kSubjectHeadSize; ++j) {
        double z = heads.b_sub[static_cast<std::size_t>(j)];
        for (int d = 0; d < heads.dim; ++d)
            z += heads.w_sub[static_cast<std::size_t>(d) * kSubjectHeadSize +
                             static_cast<std::size_t>(j)] * h[static_cast<std::size_t>(d)];
        f.p_sub[static_cast<std::size_t>(j)] = 1.0 / (1.0 + std::exp(-z));
    }
    std::array<double, kLevelHeadSize> logits{};
    double max_logit = -1e300;
    for (int j = 0; j < kLevelHeadSize; ++j) {
        double z = heads.b_lvl[static_cast<std::size_t>(j)];
        for (int d = 0; d < heads.dim; ++d)
            z += heads.w_lvl[static_cast<std::size_t>(d) * kLevelHeadSize +
                             static_cast<std::size_t>(j)] * h[static_cast<std::size_t>(d)];
        logits[static_cast<std::size_t>(j)] = z;
        max_logit = std::max(max_logit, z);
    }
    double denom = 0.0;
    for (auto& z : logits) {
        z = std::exp(z - max_logit);
        denom += z;
    }
    for (int j = 0; j < kLevelHeadSize; ++j)
        f.p_lvl[static_cast<std::size_t>(j)] = logits[static_cast<std::size_t>(j)] / denom;
    return f;
}

void adamw_step(std::vector<double>& w, std::vector<double>& g, Moments& mom,
                const TrainConfig& cfg, long t) {
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));
    for (std::size_t i = 0; i < w.size(); ++i) {
        mom.m[i] = cfg.beta1 * mom.m[i] + (1.0 - cfg.beta1) * g[i];
        mom.v[i] = cfg.beta2 * mom.v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
        const double m_hat = mom.m[i] / bc1;
        const double v_hat = mom.v[i] / bc2;
        w[i] -= cfg.lr * (m_hat / (std::sqrt(v_hat) + cfg.adam_eps) + cfg.weight_decay * w[i]);
    }
}

}  // namespace

ExpertiseHeads train(const std::vector<TrainSample>& dataset, const TrainConfig& config,
                     TrainTrace* trace) {
    if (dataset.empty()) throw EmptyDataset("train: no samples");
    if (config.batch_size <= 0 || config.epochs <= 0)
        throw std::invalid_argument("train: epochs and batch_size must be positive");
    const int dim = static_cast<int>(dataset[0].features.size());
    if (dim <= 0) throw std::invalid_argument("train: zero-dimensional features");
    for (const auto& sample : dataset)
        if (static_cast<int>(sample.features.size()) != dim)
            throw DimensionMismatch("train: inconsistent feature dims in dataset");

    ExpertiseHeads heads;
    heads.dim = dim;
    heads.seed = config.seed;
    heads.w_sub.resize(static_cast<std::size_t>(dim) * kSubjectHeadSize);
    heads.w_lvl.resize(static_cast<std::size_t>(dim) * kLevelHeadSize);

    rng::SplitMix64 gen(config.seed);
    const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
    for (auto& w : heads.w_sub) w = gen.uniform(-scale, scale);
    for (auto& w : heads.w_lvl) w = gen.uniform(-scale, scale);
    // biases start at zero

    Moments mom_wsub(heads.w_sub.size());
    Moments mom_bsub(heads.b_sub.size());
    Moments mom_wlvl(heads.w_lvl.size());
    Moments mom_blvl(heads.b_lvl.size());

    std::vector<double> g_wsub(heads.w_sub.size());
    std::vector<double> g_bsub(heads.b_sub.size());
    std::vector<double> g_wlvl(heads.w_lvl.size());
    std::vector<double> g_blvl(heads.b_lvl.size());
    std::vector<double> b_sub_vec(heads.b_sub.begin(), heads.b_sub.end());
    std::vector<double> b_lvl_vec(heads.b_lvl.begin(), heads.b_lvl.end());

    std::vector<std::size_t> order(dataset.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    std::vector<std::pair<double, double>> history;
    long step = 0;

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        const auto [w_sub_task, w_lvl_task] = dwa_weights(history, config.dwa_temperature);
        rng::shuffle(order, gen);

        double epoch_sub = 0.0;
        double epoch_lvl = 0.0;

        for (std::size_t batch_start = 0; batch_start < order.size();
             batch_start += static_cast<std::size_t>(config.batch_size)) {
            const std::size_t batch_end =
                std::min(order.size(), batch_start + static_cast<std::size_t>(config.batch_size));
            const double inv_batch = 1.0 / static_cast<double>(batch_end - batch_start);

            std::fill(g_wsub.begin(), g_wsub.end(), 0.0);
            std::fill(g_bsub.begin(), g_bsub.end(), 0.0);
            std::fill(g_wlvl.begin(), g_wlvl.end(), 0.0);
            std::fill(g_blvl.begin(), g_blvl.end(), 0.0);

            for (std::size_t bi = batch_start; bi < batch_end; ++bi) {
                const TrainSample& sample = dataset[order[bi]];
                const Forward f = forward_one(heads, sample.features);

                epoch_sub += subject_bce(f.p_sub, sample.y_sub);
                epoch_lvl += level_ce(f.p_lvl, sample.y_lvl);

                // dL/dz for sigmoid+mean-BCE and softmax+CE, task-weighted.
                std::array<double, kSubjectHeadSize> dz_sub{};
                for (int j = 0; j < kSubjectHeadSize; ++j) {
                    const auto sj = static_cast<std::size_t>(j);
                    const double p = clamp_prob(f.p_sub[sj]);
                    dz_sub[sj] = w_sub_task * (p - sample.y_sub[sj]) /
                                 static_cast<double>(kSubjectHeadSize);
                }
                std::array<double, kLevelHeadSize> dz_lvl{};
                for (int j = 0; j < kLevelHeadSize; ++j) {
                    const auto sj = static_cast<std::size_t>(j);
                    dz_lvl[sj] = w_lvl_task * (f.p_lvl[sj] - sample.y_lvl[sj]);
                }

                for (int d = 0; d < dim; ++d) {
                    const double h = sample.features[static_cast<std::size_t>(d)];
                    if (h == 0.0) continue;
                    double* grad_row = g_wsub.data() +
                                       static_cast<std::size_t>(d) * kSubjectHeadSize;
                    for (int j = 0; j < kSubjectHeadSize; ++j)
                        grad_row[j] += dz_sub[static_cast<std::size_t>(j)] * h;
                    double* grad_row_lvl =
                        g_wlvl.data() + static_cast<std::size_t>(d) * kLevelHeadSize;
                    for (int j = 0; j < kLevelHeadSize; ++j)
                        grad_row_lvl[j] += dz_lvl[static_cast<std::size_t>(j)] * h;
                }
                for (int j = 0; j < kSubjectHeadSize; ++j)
                    g_bsub[static_cast<std::size_t>(j)] += dz_sub[static_cast<std::size_t>(j)];
                for (int j = 0; j < kLevelHeadSize; ++j)
                    g_blvl[static_cast<std::size_t>(j)] += dz_lvl[static_cast<std::size_t>(j)];
            }

            for (auto& g : g_wsub) g *= inv_batch;
            for (auto& g : g_bsub) g *= inv_batch;
            for (auto& g : g_wlvl) g *= inv_batch;
            for (auto& g : g_blvl) g *= inv_batch;

            ++step;
            adamw_step(heads.w_sub, g_wsub, mom_wsub, config, step);
            adamw_step(b_sub_vec, g_bsub, mom_bsub, config, step);
            adamw_step(heads.w_lvl, g_wlvl, mom_wlvl, config, step);
            adamw_step(b_lvl_vec, g_blvl, mom_blvl, config, step);
            std::copy(b_sub_vec.begin(), b_sub_vec.end(), heads.b_sub.begin());
            std::copy(b_lvl_vec.begin(), b_lvl_vec.end(), heads.b_lvl.begin());
        }

        const double n = static_cast<double>(dataset.size());
        const double mean_sub = epoch_sub / n;
        const double mean_lvl = epoch_lvl / n;
        const double total = w_sub_task * mean_sub + w_lvl_task * mean_lvl;
        if (!std::isfinite(total))
            throw Divergence("train: non-finite loss at epoch " + std::to_string(epoch));
        history.emplace_back(mean_sub, mean_lvl);
        if (trace != nullptr) {
            trace->epoch_loss.push_back(total);
            trace->task_losses.emplace_back(mean_sub, mean_lvl);
            trace->task_weights.emplace_back(w_sub_task, w_lvl_task);
        }
    }

    heads.epochs = config.epochs;
    return heads;
}

std::string classify_feature_text(const corpus::QuestionRecord& record) {
    std::string text = record.question;
    for (const auto& option : record.options) {
        text += '\n';
        text += option.label;
        text += ". ";
        text += option.text;
    }
    text += "\n<classify>";
    return text;
}

ExpertisePrediction classify_question(const corpus::QuestionRecord& record,
                                      backends::EmbeddingBackend& backend,
                                      const ExpertiseHeads& heads, double threshold) {
    const auto vectors = index::embed_texts(backend, {classify_feature_text(record)});
    std::vector<double> features(vectors[0].begin(), vectors[0].end());
    return predict(heads, features, threshold);
}

}  // namespace emsrag::expertise
