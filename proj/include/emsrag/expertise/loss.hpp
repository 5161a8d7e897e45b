#pragma once

#include <span>
#include <utility>
#include <vector>

namespace emsrag::expertise {

// Mean binary cross-entropy over the subject labels. Probabilities are
// clamped to [1e-7, 1 - 1e-7] before the log.
double subject_bce(std::span<const double> p_sub, std::span<const double> y_sub);

// Cross-entropy of the one-hot certification target against softmax output,
// with the same clamping.
double level_ce(std::span<const double> p_lvl, std::span<const double> y_lvl);

// w_sub * subject_bce + w_lvl * level_ce. Non-negative for valid inputs.
double multitask_loss(std::span<const double> p_sub, std::span<const double> y_sub,
                      std::span<const double> p_lvl, std::span<const double> y_lvl,
                      double w_sub = 1.0, double w_lvl = 1.0);

// Dynamic weight averaging over a two-task loss history (one (L_sub, L_lvl)
// entry per completed epoch). With fewer than two epochs both weights are 1.
// Otherwise r_k = L_k(t-1) / L_k(t-2) and
// w_k = 2 * exp(r_k / temperature) / sum_j exp(r_j / temperature),
// so the weights always sum to 2.
std::pair<double, double> dwa_weights(const std::vector<std::pair<double, double>>& history,
                                      double temperature = 2.0);

}  // namespace emsrag::expertise
