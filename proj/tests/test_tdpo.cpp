#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qgpt/error.hpp"
#include "qgpt/tdpo.hpp"

using namespace qgpt;

namespace {

// Margin z = beta * [(sum pw - sum rw) - (sum pl - sum rl)]; build a pair
// hitting a requested z with beta fixed.
WindowLogProbs pair_with_margin(double z, double beta = 0.1, std::size_t len = 3) {
    WindowLogProbs w;
    w.beta = beta;
    w.policy_w.assign(len, 0.0);
    w.ref_w.assign(len, 0.0);
    w.policy_l.assign(len, 0.0);
    w.ref_l.assign(len, 0.0);
    w.policy_w[0] = z / beta;  // all the margin on one winner token
    return w;
}

WindowLogProbs random_pair(std::mt19937_64& rng, std::size_t len) {
    std::uniform_real_distribution<double> u(-3.0, 0.0);
    WindowLogProbs w;
    w.beta = 0.1;
    for (std::size_t i = 0; i < len; ++i) {
        w.policy_w.push_back(u(rng));
        w.ref_w.push_back(u(rng));
        w.policy_l.push_back(u(rng));
        w.ref_l.push_back(u(rng));
    }
    return w;
}

double loss_of(const WindowLogProbs& w) { return tdpo_loss(w).loss; }

} // namespace

TEST_CASE("margin is the beta-scaled difference of log-ratio sums") {
    WindowLogProbs w;
    w.beta = 0.5;
    w.policy_w = {-1.0, -2.0};
    w.ref_w = {-1.5, -2.5};
    w.policy_l = {-4.0};
    w.ref_l = {-3.0};
    // (sum pw - sum rw) = 1.0, (sum pl - sum rl) = -1.0 -> z = 0.5 * 2.0
    CHECK(implicit_reward_margin(w) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("a shared per-token shift cancels out of the margin") {
    std::mt19937_64 rng(1);
    WindowLogProbs w = random_pair(rng, 8);
    double z0 = implicit_reward_margin(w);
    // add the same offset to policy and reference on both windows
    for (std::size_t i = 0; i < 8; ++i) {
        w.policy_w[i] += 0.7;
        w.ref_w[i] += 0.7;
        w.policy_l[i] -= 1.3;
        w.ref_l[i] -= 1.3;
    }
    CHECK(implicit_reward_margin(w) == doctest::Approx(z0).epsilon(1e-12));
}

TEST_CASE("loss oracle values") {
    TdpoResult zero = tdpo_loss(pair_with_margin(0.0));
    CHECK(zero.loss == doctest::Approx(0.693147180559945309).epsilon(1e-15));
    CHECK(zero.preference_prob == doctest::Approx(0.5).epsilon(1e-15));

    TdpoResult r = tdpo_loss(pair_with_margin(0.2));
    CHECK(r.margin == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(r.loss == doctest::Approx(0.598138869381591840).epsilon(1e-15));
    CHECK(r.preference_prob == doctest::Approx(0.549833997312477909).epsilon(1e-15));
}

TEST_CASE("gradients are constant per window: -beta*sigma(-z) and +beta*sigma(-z)") {
    TdpoResult r = tdpo_loss(pair_with_margin(0.0, 0.1, 5));
    REQUIRE(r.grad_policy_w.size() == 5);
    REQUIRE(r.grad_policy_l.size() == 5);
    for (double g : r.grad_policy_w) CHECK(g == doctest::Approx(-0.05).epsilon(1e-15));
    for (double g : r.grad_policy_l) CHECK(g == doctest::Approx(+0.05).epsilon(1e-15));
}

TEST_CASE("analytic gradients match central finite differences") {
    std::mt19937_64 rng(42);
    const double h = 1e-5;
    for (int trial = 0; trial < 20; ++trial) {
        WindowLogProbs w = random_pair(rng, 4);
        TdpoResult r = tdpo_loss(w);
        for (std::size_t i = 0; i < 4; ++i) {
            WindowLogProbs up = w, dn = w;
            up.policy_w[i] += h;
            dn.policy_w[i] -= h;
            double fd = (loss_of(up) - loss_of(dn)) / (2 * h);
            CHECK(std::abs(fd - r.grad_policy_w[i]) < 1e-5 * std::max(1.0, std::abs(fd)));

            up = dn = w;
            up.policy_l[i] += h;
            dn.policy_l[i] -= h;
            fd = (loss_of(up) - loss_of(dn)) / (2 * h);
            CHECK(std::abs(fd - r.grad_policy_l[i]) < 1e-5 * std::max(1.0, std::abs(fd)));
        }
    }
}

TEST_CASE("numerically stable at extreme margins") {
    TdpoResult big = tdpo_loss(pair_with_margin(1e4));
    CHECK(std::isfinite(big.loss));
    CHECK(big.loss >= 0.0);
    CHECK(big.loss < 1e-300);  // sigma(z) ~ 1, loss underflows gracefully
    CHECK(big.preference_prob == doctest::Approx(1.0));

    TdpoResult small = tdpo_loss(pair_with_margin(-1e4));
    CHECK(std::isfinite(small.loss));
    CHECK(small.loss == doctest::Approx(1e4).epsilon(1e-12));
    CHECK(small.preference_prob == doctest::Approx(0.0));
}

TEST_CASE("input validation") {
    WindowLogProbs w = pair_with_margin(0.0);
    w.policy_w[1] = std::nan("");
    CHECK_THROWS_AS(tdpo_loss(w), InvalidInput);

    WindowLogProbs inf = pair_with_margin(0.0);
    inf.ref_l[0] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(tdpo_loss(inf), InvalidInput);

    WindowLogProbs mismatched = pair_with_margin(0.0);
    mismatched.ref_w.pop_back();
    CHECK_THROWS_AS(tdpo_loss(mismatched), InvalidInput);

    WindowLogProbs bad_beta = pair_with_margin(0.0);
    bad_beta.beta = 0.0;
    CHECK_THROWS_AS(tdpo_loss(bad_beta), InvalidInput);

    CHECK_THROWS_AS(batch_loss({}), InvalidInput);
}

TEST_CASE("batch loss is the arithmetic mean in input order") {
    std::vector<WindowLogProbs> batch{pair_with_margin(0.0), pair_with_margin(0.2)};
    BatchResult b = batch_loss(batch);
    CHECK(b.mean_loss == doctest::Approx(0.645643024970768575).epsilon(1e-15));
    REQUIRE(b.per_pair.size() == 2);
    CHECK(b.per_pair[0].loss == doctest::Approx(0.693147180559945309).epsilon(1e-15));

    BatchResult single = batch_loss({pair_with_margin(0.2)});
    CHECK(single.mean_loss == b.per_pair[1].loss);

    std::vector<WindowLogProbs> same(5, pair_with_margin(0.0));
    CHECK(batch_loss(same).mean_loss == doctest::Approx(std::log(2.0)).epsilon(1e-15));
}
