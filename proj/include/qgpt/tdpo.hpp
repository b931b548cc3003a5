#pragma once
//
// Truncated-DPO loss kernel over per-token log-probabilities: implicit
// reward margin, Bradley-Terry preference probability, stable loss, and
// analytic gradients. Natural-log convention throughout.
//
#include <vector>

namespace qgpt {

struct WindowLogProbs {
    std::vector<double> policy_w, ref_w;  // winner window, equal lengths
    std::vector<double> policy_l, ref_l;  // loser window, equal lengths
    double beta = 0.1;
};

struct TdpoResult {
    double loss = 0.0;
    double preference_prob = 0.0;  // sigma(z)
    double margin = 0.0;           // z
    // d loss / d policy log-prob; constant within each window:
    // -beta*sigma(-z) per winner token, +beta*sigma(-z) per loser token.
    std::vector<double> grad_policy_w;
    std::vector<double> grad_policy_l;
};

// z = beta * [(sum policy_w - sum ref_w) - (sum policy_l - sum ref_l)].
// Throws InvalidInput on NaN/inf entries or mismatched list lengths.
double implicit_reward_margin(const WindowLogProbs& w);

// loss = -log(sigma(z)) in log-sum-exp form, finite up to |z| ~ 1e4.
TdpoResult tdpo_loss(const WindowLogProbs& w);

struct BatchResult {
    double mean_loss = 0.0;
    std::vector<TdpoResult> per_pair;
};

// Arithmetic mean over pairs, summed in input order.
BatchResult batch_loss(const std::vector<WindowLogProbs>& pairs);

// -log(sigma(z)) evaluated stably.
double stable_softplus_neg(double z);

} // namespace qgpt
