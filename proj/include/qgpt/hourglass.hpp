#pragma once
//
// Desk-scale hourglass transformer: forward-only verification model with
// seeded-random (or file-loaded) weights. Stage lengths L -> L/4 -> L/12,
// causality-preserving shortening (right shift by factor-1 with a boundary
// vector, then a grouped linear map), repeat-upsampling with residuals from
// the pre-shorten states, cross-attention conditioning at the bottleneck,
// and top-k / nucleus / temperature decoding.
//
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qgpt/codec.hpp"
#include "qgpt/mesh.hpp"

namespace qgpt {

struct HourglassConfig {
    int vocab = kVocabSize;
    int d0 = 16, d1 = 32, d2 = 64;          // widths per stage
    int heads0 = 2, heads1 = 2, heads2 = 4;
    int layers0 = 1, layers1 = 1, layers2 = 1;  // per-stage self-attention layers
    int cond_dim = 32;                      // shape-embedding width
    int max_len = 144;                      // L, multiple of 12
    std::uint64_t seed = 0;

    void validate() const;
};

struct ConditionSpec {
    std::vector<float> shape_embedding;  // width = cond_dim
    double quad_dominance = 1.0;         // r in [0, 1]
};

struct SamplerConfig {
    int top_k = 10;
    double top_p = 0.95;
    double temperature = 0.5;
    std::uint64_t seed = 0;
};

// Row-major matrix of float32 weights/activations.
struct Tensor {
    int rows = 0, cols = 0;
    std::vector<float> data;

    Tensor() = default;
    Tensor(int r, int c) : rows(r), cols(c), data(std::size_t(r) * c, 0.0f) {}
    float* row(int r) { return data.data() + std::size_t(r) * cols; }
    const float* row(int r) const { return data.data() + std::size_t(r) * cols; }
    float& at(int r, int c) { return data[std::size_t(r) * cols + c]; }
    float at(int r, int c) const { return data[std::size_t(r) * cols + c]; }
};

// Deterministic permutation-invariant point-cloud embedding: mean/covariance
// pooling over canonically sorted points, then a fixed seeded random
// projection to `dim`. Stands in for the out-of-scope pre-trained encoder.
std::vector<float> stub_shape_encoder(const PointCloud& cloud, int dim, std::uint64_t seed);

class HourglassModel {
public:
    explicit HourglassModel(const HourglassConfig& cfg);

    const HourglassConfig& config() const { return cfg_; }

    // Per-position logits over the vocabulary; row i predicts token i+1.
    // Input is right-padded with PAD internally to a multiple of 12; only
    // rows for the original length are returned. Token count (after padding)
    // must not exceed max_len.
    Tensor forward(const TokenSequence& tokens, const ConditionSpec& cond) const;

    // Autoregressive extension of `prefix` until EOS or max_tokens.
    TokenSequence generate(const TokenSequence& prefix, const ConditionSpec& cond,
                           const SamplerConfig& sampler, std::size_t max_tokens) const;

    // log pi(token_t) for positions t in [m, m+tau), from a BOS-prefixed
    // pass so t=0 is defined. m must be block-aligned, m+tau <= length.
    std::vector<double> window_logprobs(const TokenSequence& tokens, std::size_t m,
                                        std::size_t tau, const ConditionSpec& cond) const;

    // Flat binary weight file: magic "QGHW", version, config header,
    // little-endian float32 tensors in construction order.
    void save_weights(const std::string& path) const;
    static HourglassModel load_weights(const std::string& path);

private:
    struct AttnLayer {
        Tensor wq, wk, wv, wo;          // d x d
        Tensor ln1_g, ln1_b, ln2_g, ln2_b;  // 1 x d
        Tensor mlp_in, mlp_out;         // d x 4d, 4d x d
        int heads = 0;
        // bottleneck-only cross-attention to the shape embedding
        bool has_cross = false;
        Tensor xq, xk, xv, xo;          // d x d, cond x d, cond x d, d x d
        Tensor lnx_g, lnx_b;
    };

    HourglassConfig cfg_;
    Tensor tok_embed_;                  // vocab x d0
    Tensor pos_embed_;                  // max_len x d0
    Tensor r_embed_;                    // 8 x d0, linearly interpolated by r
    std::vector<AttnLayer> stage0_, stage1_, stage2_, stage1_up_, stage0_up_;
    Tensor shorten1_boundary_, shorten1_w_;   // 1 x d0, (4*d0) x d1
    Tensor shorten2_boundary_, shorten2_w_;   // 1 x d1, (3*d1) x d2
    Tensor up2_w_, up1_w_;                    // d2 x d1, d1 x d0
    Tensor final_ln_g_, final_ln_b_;          // 1 x d0
    Tensor head_;                             // d0 x vocab

    HourglassModel() = default;
    void init_weights();
    Tensor run(const std::vector<Token>& padded, const ConditionSpec& cond) const;
    template <typename Fn> void for_each_tensor(Fn&& fn);
};

// Mean cross-entropy of logits rows 0..n-2 against targets 1..n-1. Throws on
// fewer than 2 targets or insufficient logits rows.
double next_token_loss(const Tensor& logits, const TokenSequence& targets);

// Temperature -> top-k -> minimal nucleus -> renormalize -> seeded draw;
// ties broken toward the lower token id.
Token sample_step(const std::vector<float>& logits, const SamplerConfig& s);
Token sample_step(const std::vector<float>& logits, const SamplerConfig& s,
                  std::mt19937_64& rng);

// Softmax support actually sampleable under the config (after top-k and
// nucleus truncation); exposed for the sampler tests.
std::vector<int> sampler_support(const std::vector<float>& logits, const SamplerConfig& s);

} // namespace qgpt
