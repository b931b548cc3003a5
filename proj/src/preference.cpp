#include "qgpt/preference.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "qgpt/error.hpp"

namespace qgpt {

Candidate make_candidate(const std::string& condition_id, TokenSequence tokens,
                         const TopoConfig& cfg) {
    Candidate c;
    c.condition_id = condition_id;
    c.tokens = std::move(tokens);
    c.mesh = detokenize(c.tokens, DetokenizeMode::Lenient);
    c.score = topo_score(c.mesh, cfg);
    return c;
}

bool dominates(const TopoScore& a, const TopoScore& b) {
    return a.l_avg > b.l_avg && a.r_frac < b.r_frac;
}

RankResult rank_candidates(const std::vector<Candidate>& cands) {
    if (cands.size() < 2)
        throw InvalidInput("rank_candidates: need at least 2 candidates");
    RankResult r;
    for (std::size_t i = 0; i < cands.size(); ++i)
        for (std::size_t j = i + 1; j < cands.size(); ++j) {
            if (dominates(cands[i].score, cands[j].score))
                r.pairs.emplace_back(int(i), int(j));
            else if (dominates(cands[j].score, cands[i].score))
                r.pairs.emplace_back(int(j), int(i));
            else
                ++r.discarded;
        }
    return r;
}

PreferencePair sample_prefix_window(const TokenSequence& winner, const TokenSequence& loser,
                                    std::size_t tau, std::uint64_t seed) {
    if (tau == 0 || tau % kBlockTokens != 0)
        throw InvalidInput("tau must be a positive multiple of 12");
    if (winner.size() < kBlockTokens || loser.size() < kBlockTokens)
        throw InvalidInput("sequences must hold at least one block");

    const std::size_t min_len = std::min(winner.size(), loser.size());
    const std::size_t max_m_blocks = (min_len - kBlockTokens) / kBlockTokens;

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> dist(0, max_m_blocks);
    const std::size_t m = dist(rng) * kBlockTokens;

    auto slice = [&](const TokenSequence& s) {
        std::size_t end = std::min(s.size(), m + tau);
        return TokenSequence(s.begin() + std::min(m, s.size()), s.begin() + end);
    };

    PreferencePair pair;
    pair.winner_window = slice(winner);
    pair.loser_window = slice(loser);
    pair.prefix_offset = m;
    pair.window_len = tau;
    return pair;
}

DatasetManifest build_dataset(const std::vector<std::vector<Candidate>>& conditions,
                              std::size_t tau, std::size_t pairs_per_condition,
                              std::uint64_t seed) {
    DatasetManifest manifest;
    manifest.conditions = static_cast<int>(conditions.size());

    std::uint64_t pair_counter = 0;
    for (const auto& cands : conditions) {
        manifest.candidates += static_cast<int>(cands.size());
        RankResult ranked = rank_candidates(cands);
        manifest.dominance_pairs += static_cast<int>(ranked.pairs.size());
        manifest.discarded += ranked.discarded;

        std::size_t take = std::min(pairs_per_condition, ranked.pairs.size());
        for (std::size_t k = 0; k < take; ++k) {
            auto [w, l] = ranked.pairs[k];
            // Per-pair seed derived from the dataset seed; splitmix-style mix.
            std::uint64_t s = seed + 0x9e3779b97f4a7c15ull * (++pair_counter);
            PreferencePair p = sample_prefix_window(cands[w].tokens, cands[l].tokens, tau, s);
            p.condition_id = cands[w].condition_id;
            p.winner_index = w;
            p.loser_index = l;
            p.winner_score = cands[w].score;
            p.loser_score = cands[l].score;
            manifest.pairs.push_back(std::move(p));
        }
    }
    return manifest;
}

} // namespace qgpt
