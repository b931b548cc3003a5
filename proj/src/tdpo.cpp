#include "qgpt/tdpo.hpp"

#include <cmath>

#include "qgpt/error.hpp"

namespace qgpt {

namespace {

double checked_sum(const std::vector<double>& xs, const char* name) {
    double s = 0.0;
    for (double x : xs) {
        if (!std::isfinite(x))
            throw InvalidInput(std::string("tdpo: non-finite value in ") + name);
        s += x;
    }
    return s;
}

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    double e = std::exp(z);
    return e / (1.0 + e);
}

} // namespace

double stable_softplus_neg(double z) {
    // -ln sigma(z) = ln(1 + e^-z) for z >= 0, -z + ln(1 + e^z) otherwise.
    if (z >= 0.0) return std::log1p(std::exp(-z));
    return -z + std::log1p(std::exp(z));
}

double implicit_reward_margin(const WindowLogProbs& w) {
    if (w.policy_w.size() != w.ref_w.size() || w.policy_l.size() != w.ref_l.size())
        throw InvalidInput("tdpo: policy/reference lengths differ");
    if (!std::isfinite(w.beta) || w.beta <= 0.0)
        throw InvalidInput("tdpo: beta must be positive and finite");
    double ratio_w = checked_sum(w.policy_w, "policy_w") - checked_sum(w.ref_w, "ref_w");
    double ratio_l = checked_sum(w.policy_l, "policy_l") - checked_sum(w.ref_l, "ref_l");
    return w.beta * (ratio_w - ratio_l);
}

TdpoResult tdpo_loss(const WindowLogProbs& w) {
    TdpoResult r;
    r.margin = implicit_reward_margin(w);
    r.loss = stable_softplus_neg(r.margin);
    r.preference_prob = sigmoid(r.margin);
    const double g = w.beta * sigmoid(-r.margin);
    r.grad_policy_w.assign(w.policy_w.size(), -g);
    r.grad_policy_l.assign(w.policy_l.size(), +g);
    return r;
}

BatchResult batch_loss(const std::vector<WindowLogProbs>& pairs) {
    if (pairs.empty()) throw InvalidInput("tdpo: empty batch");
    BatchResult b;
    b.per_pair.reserve(pairs.size());
    double sum = 0.0;
    for (const WindowLogProbs& w : pairs) {
        b.per_pair.push_back(tdpo_loss(w));
        sum += b.per_pair.back().loss;
    }
    b.mean_loss = sum / double(pairs.size());
    return b;
}

} // namespace qgpt
