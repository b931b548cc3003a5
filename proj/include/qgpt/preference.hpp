#pragma once
//
// Preference-pair construction: candidates scored on full sequences, ranked
// by strict topological dominance (higher l_avg AND lower r_frac), then
// truncated to random block-aligned prefix windows.
//
#include <cstdint>
#include <string>
#include <vector>

#include "qgpt/codec.hpp"
#include "qgpt/topo_metrics.hpp"

namespace qgpt {

struct Candidate {
    std::string condition_id;
    std::string source_file;   // token file the sequence came from, may be empty
    TokenSequence tokens;
    Mesh mesh;                 // lenient detokenization of tokens
    TopoScore score;
};

// Detokenizes leniently and scores with face order = token order.
Candidate make_candidate(const std::string& condition_id, TokenSequence tokens,
                         const TopoConfig& cfg = {});

struct PreferencePair {
    std::string condition_id;
    int winner_index = -1;     // indices into the candidate list
    int loser_index = -1;
    TokenSequence winner_window;
    TokenSequence loser_window;
    std::size_t prefix_offset = 0;  // m, block-aligned token index
    std::size_t window_len = 0;     // tau
    TopoScore winner_score;
    TopoScore loser_score;
};

// True iff a strictly dominates b: l_avg(a) > l_avg(b) and
// r_frac(a) < r_frac(b).
bool dominates(const TopoScore& a, const TopoScore& b);

struct RankResult {
    std::vector<std::pair<int, int>> pairs;  // (winner, loser) candidate indices
    int discarded = 0;                       // unordered pairs with ties/conflicts
};

// All ordered pairs under strict dominance; ties and conflicting orderings
// are discarded and counted.
RankResult rank_candidates(const std::vector<Candidate>& cands);

// Draws m uniformly over block boundaries {0, 12, ...} up to
// min(len_w, len_l) - 12, then slices [m, m+tau) from both sequences,
// clipped at each sequence end. Deterministic per seed.
PreferencePair sample_prefix_window(const TokenSequence& winner, const TokenSequence& loser,
                                    std::size_t tau, std::uint64_t seed);

struct DatasetManifest {
    std::vector<PreferencePair> pairs;
    int conditions = 0;
    int candidates = 0;
    int dominance_pairs = 0;
    int discarded = 0;
};

// Per condition: rank, then window up to pairs_per_condition dominance pairs
// (deterministic order, per-pair seeds derived from `seed`).
DatasetManifest build_dataset(const std::vector<std::vector<Candidate>>& conditions,
                              std::size_t tau, std::size_t pairs_per_condition,
                              std::uint64_t seed);

} // namespace qgpt
