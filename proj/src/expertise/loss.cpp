#include "emsrag/expertise/loss.hpp"

#include <algorithm>
#include <cmath>

#include "emsrag/common/error.hpp"
#include "emsrag/expertise/heads.hpp"

namespace emsrag::expertise {

namespace {

constexpr double kProbEps = 1e-7;

double clamp_prob(double p) { return std::min(1.0 - kProbEps, std::max(kProbEps, p)); }

}  // namespace

double subject_bce(std::span<const double> p_sub, std::span<const double> y_sub) {
    if (p_sub.size() != y_sub.size() || p_sub.empty())
        throw DimensionMismatch("subject_bce: size mismatch");
    double total = 0.0;
    for (std::size_t j = 0; j < p_sub.size(); ++j) {
        const double p = clamp_prob(p_sub[j]);
        total += -(y_sub[j] * std::log(p) + (1.0 - y_sub[j]) * std::log(1.0 - p));
    }
    return total / static_cast<double>(p_sub.size());
}

double level_ce(std::span<const double> p_lvl, std::span<const double> y_lvl) {
    if (p_lvl.size() != y_lvl.size() || p_lvl.empty())
        throw DimensionMismatch("level_ce: size mismatch");
    double total = 0.0;
    for (std::size_t j = 0; j < p_lvl.size(); ++j)
        if (y_lvl[j] != 0.0) total += -y_lvl[j] * std::log(clamp_prob(p_lvl[j]));
    return total;
}

double multitask_loss(std::span<const double> p_sub, std::span<const double> y_sub,
                      std::span<const double> p_lvl, std::span<const double> y_lvl, double w_sub,
                      double w_lvl) {
    return w_sub * subject_bce(p_sub, y_sub) + w_lvl * level_ce(p_lvl, y_lvl);
}

std::pair<double, double> dwa_weights(const std::vector<std::pair<double, double>>& history,
                                      double temperature) {
    if (history.size() < 2) return {1.0, 1.0};
    const auto& [sub_prev, lvl_prev] = history[history.size() - 1];
    const auto& [sub_prev2, lvl_prev2] = history[history.size() - 2];
    // Near-zero denominators mean the task has converged; treating the ratio
    // as 1 keeps the weights finite.
    const double r_sub = sub_prev2 > 1e-12 ? sub_prev / sub_prev2 : 1.0;
    const double r_lvl = lvl_prev2 > 1e-12 ? lvl_prev / lvl_prev2 : 1.0;
    const double e_sub = std::exp(r_sub / temperature);
    const double e_lvl = std::exp(r_lvl / temperature);
    const double denom = e_sub + e_lvl;
    return {2.0 * e_sub / denom, 2.0 * e_lvl / denom};
}

}  // namespace emsrag::expertise
