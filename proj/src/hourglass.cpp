#include "qgpt/hourglass.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "qgpt/error.hpp"

namespace qgpt {

void HourglassConfig::validate() const {
    if (max_len <= 0 || max_len % kBlockTokens != 0)
        throw InvalidInput("max_len must be a positive multiple of 12");
    if (!(d0 <= d1 && d1 <= d2))
        throw InvalidInput("stage widths must widen toward the bottleneck (d0 <= d1 <= d2)");
    if (d0 % heads0 || d1 % heads1 || d2 % heads2)
        throw InvalidInput("stage width must be divisible by its head count");
    if (vocab < 2) throw InvalidInput("vocab too small");
}

// ---- small dense kernels ---------------------------------------------------

namespace {

// C = A (n x k) * B (k x m)
Tensor matmul(const Tensor& a, const Tensor& b) {
    Tensor c(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i) {
        const float* ar = a.row(i);
        float* cr = c.row(i);
        for (int k = 0; k < a.cols; ++k) {
            float av = ar[k];
            if (av == 0.0f) continue;
            const float* br = b.row(k);
            for (int j = 0; j < b.cols; ++j) cr[j] += av * br[j];
        }
    }
    return c;
}

void layer_norm_row(float* x, int d, const float* g, const float* b) {
    double mean = 0.0;
    for (int i = 0; i < d; ++i) mean += x[i];
    mean /= d;
    double var = 0.0;
    for (int i = 0; i < d; ++i) var += (x[i] - mean) * (x[i] - mean);
    var /= d;
    double inv = 1.0 / std::sqrt(var + 1e-5);
    for (int i = 0; i < d; ++i)
        x[i] = static_cast<float>((x[i] - mean) * inv * g[i] + b[i]);
}

Tensor layer_norm(const Tensor& x, const Tensor& g, const Tensor& b) {
    Tensor out = x;
    for (int i = 0; i < out.rows; ++i) layer_norm_row(out.row(i), out.cols, g.row(0), b.row(0));
    return out;
}

float gelu(float x) {
    return 0.5f * x * (1.0f + std::tanh(0.7978845608028654f * (x + 0.044715f * x * x * x)));
}

} // namespace

// ---- shape encoder stub ----------------------------------------------------

std::vector<float> stub_shape_encoder(const PointCloud& cloud, int dim, std::uint64_t seed) {
    if (cloud.points.empty()) throw InvalidInput("stub_shape_encoder: empty point cloud");

    // Canonical point order makes the pooled sums exactly permutation
    // invariant.
    std::vector<std::array<double, 6>> pts = cloud.points;
    std::sort(pts.begin(), pts.end());

    const double n = double(pts.size());
    std::array<double, 6> mean{};
    for (const auto& p : pts)
        for (int i = 0; i < 6; ++i) mean[i] += p[i];
    for (double& m : mean) m /= n;

    std::array<double, 21> cov{};
    for (const auto& p : pts) {
        int k = 0;
        for (int i = 0; i < 6; ++i)
            for (int j = i; j < 6; ++j) cov[k++] += (p[i] - mean[i]) * (p[j] - mean[j]);
    }
    for (double& c : cov) c /= n;

    std::array<double, 27> feat{};
    for (int i = 0; i < 6; ++i) feat[i] = mean[i];
    for (int i = 0; i < 21; ++i) feat[6 + i] = cov[i];

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<float> out(dim);
    const double scale = 1.0 / std::sqrt(27.0);
    for (int i = 0; i < dim; ++i) {
        double acc = 0.0;
        for (int j = 0; j < 27; ++j) acc += gauss(rng) * feat[j];
        out[i] = static_cast<float>(acc * scale);
    }
    return out;
}

// ---- model -----------------------------------------------------------------

HourglassModel::HourglassModel(const HourglassConfig& cfg) : cfg_(cfg) {
    cfg_.validate();

    auto make_layer = [&](int d, int heads, bool cross) {
        AttnLayer l;
        l.heads = heads;
        l.wq = Tensor(d, d);
        l.wk = Tensor(d, d);
        l.wv = Tensor(d, d);
        l.wo = Tensor(d, d);
        l.ln1_g = Tensor(1, d);
        l.ln1_b = Tensor(1, d);
        l.ln2_g = Tensor(1, d);
        l.ln2_b = Tensor(1, d);
        l.mlp_in = Tensor(d, 4 * d);
        l.mlp_out = Tensor(4 * d, d);
        l.has_cross = cross;
        if (cross) {
            l.xq = Tensor(d, d);
            l.xk = Tensor(cfg_.cond_dim, d);
            l.xv = Tensor(cfg_.cond_dim, d);
            l.xo = Tensor(d, d);
            l.lnx_g = Tensor(1, d);
            l.lnx_b = Tensor(1, d);
        }
        return l;
    };

    tok_embed_ = Tensor(cfg_.vocab, cfg_.d0);
    pos_embed_ = Tensor(cfg_.max_len, cfg_.d0);
    r_embed_ = Tensor(8, cfg_.d0);
    for (int i = 0; i < cfg_.layers0; ++i) stage0_.push_back(make_layer(cfg_.d0, cfg_.heads0, false));
    shorten1_boundary_ = Tensor(1, cfg_.d0);
    shorten1_w_ = Tensor(4 * cfg_.d0, cfg_.d1);
    for (int i = 0; i < cfg_.layers1; ++i) stage1_.push_back(make_layer(cfg_.d1, cfg_.heads1, false));
    shorten2_boundary_ = Tensor(1, cfg_.d1);
    shorten2_w_ = Tensor(3 * cfg_.d1, cfg_.d2);
    for (int i = 0; i < cfg_.layers2; ++i) stage2_.push_back(make_layer(cfg_.d2, cfg_.heads2, true));
    up2_w_ = Tensor(cfg_.d2, cfg_.d1);
    for (int i = 0; i < cfg_.layers1; ++i) stage1_up_.push_back(make_layer(cfg_.d1, cfg_.heads1, false));
    up1_w_ = Tensor(cfg_.d1, cfg_.d0);
    for (int i = 0; i < cfg_.layers0; ++i) stage0_up_.push_back(make_layer(cfg_.d0, cfg_.heads0, false));
    final_ln_g_ = Tensor(1, cfg_.d0);
    final_ln_b_ = Tensor(1, cfg_.d0);
    head_ = Tensor(cfg_.d0, cfg_.vocab);

    init_weights();
}

template <typename Fn>
void HourglassModel::for_each_tensor(Fn&& fn) {
    auto layer_tensors = [&](AttnLayer& l) {
        fn(l.wq); fn(l.wk); fn(l.wv); fn(l.wo);
        fn(l.ln1_g); fn(l.ln1_b); fn(l.ln2_g); fn(l.ln2_b);
        fn(l.mlp_in); fn(l.mlp_out);
        if (l.has_cross) {
            fn(l.xq); fn(l.xk); fn(l.xv); fn(l.xo);
            fn(l.lnx_g); fn(l.lnx_b);
        }
    };
    fn(tok_embed_);
    fn(pos_embed_);
    fn(r_embed_);
    for (auto& l : stage0_) layer_tensors(l);
    fn(shorten1_boundary_); fn(shorten1_w_);
    for (auto& l : stage1_) layer_tensors(l);
    fn(shorten2_boundary_); fn(shorten2_w_);
    for (auto& l : stage2_) layer_tensors(l);
    fn(up2_w_);
    for (auto& l : stage1_up_) layer_tensors(l);
    fn(up1_w_);
    for (auto& l : stage0_up_) layer_tensors(l);
    fn(final_ln_g_); fn(final_ln_b_);
    fn(head_);
}

void HourglassModel::init_weights() {
    std::mt19937_64 rng(cfg_.seed);
    std::normal_distribution<double> gauss(0.0, 0.08);
    for_each_tensor([&](Tensor& t) {
        for (float& x : t.data) x = static_cast<float>(gauss(rng));
    });
    // LayerNorm affine: identity.
    auto set_identity = [](Tensor& g, Tensor& b) {
        std::fill(g.data.begin(), g.data.end(), 1.0f);
        std::fill(b.data.begin(), b.data.end(), 0.0f);
    };
    auto fix_layer = [&](AttnLayer& l) {
        set_identity(l.ln1_g, l.ln1_b);
        set_identity(l.ln2_g, l.ln2_b);
        if (l.has_cross) set_identity(l.lnx_g, l.lnx_b);
    };
    for (auto& l : stage0_) fix_layer(l);
    for (auto& l : stage1_) fix_layer(l);
    for (auto& l : stage2_) fix_layer(l);
    for (auto& l : stage1_up_) fix_layer(l);
    for (auto& l : stage0_up_) fix_layer(l);
    set_identity(final_ln_g_, final_ln_b_);
}

namespace {

// Causal multi-head self-attention over x (pre-normed input), residual added
// by the caller.
Tensor causal_self_attention(const Tensor& x, const Tensor& wq, const Tensor& wk,
                             const Tensor& wv, const Tensor& wo, int heads) {
    const int n = x.rows, d = x.cols, dh = d / heads;
    Tensor q = matmul(x, wq), k = matmul(x, wk), v = matmul(x, wv);
    Tensor ctx(n, d);
    const double scale = 1.0 / std::sqrt(double(dh));
    std::vector<double> scores;
    for (int h = 0; h < heads; ++h) {
        const int off = h * dh;
        for (int i = 0; i < n; ++i) {
            scores.assign(i + 1, 0.0);
            double mx = -1e300;
            for (int j = 0; j <= i; ++j) {
                double s = 0.0;
                const float* qi = q.row(i) + off;
                const float* kj = k.row(j) + off;
                for (int t = 0; t < dh; ++t) s += double(qi[t]) * kj[t];
                scores[j] = s * scale;
                mx = std::max(mx, scores[j]);
            }
            double denom = 0.0;
            for (int j = 0; j <= i; ++j) {
                scores[j] = std::exp(scores[j] - mx);
                denom += scores[j];
            }
            float* out = ctx.row(i) + off;
            for (int j = 0; j <= i; ++j) {
                const double w = scores[j] / denom;
                const float* vj = v.row(j) + off;
                for (int t = 0; t < dh; ++t) out[t] += static_cast<float>(w * vj[t]);
            }
        }
    }
    return matmul(ctx, wo);
}

} // namespace

Tensor HourglassModel::run(const std::vector<Token>& padded, const ConditionSpec& cond) const {
    const int n = static_cast<int>(padded.size());
    if (n > cfg_.max_len)
        throw InvalidInput("sequence length " + std::to_string(n) + " exceeds max_len " +
                           std::to_string(cfg_.max_len));
    if (n % kBlockTokens != 0)
        throw InvalidInput("internal: padded length not a multiple of 12");
    if (cond.quad_dominance < 0.0 || cond.quad_dominance > 1.0)
        throw InvalidInput("quad-dominance r must lie in [0, 1]");
    if (static_cast<int>(cond.shape_embedding.size()) != cfg_.cond_dim)
        throw InvalidInput("shape embedding width mismatch");

    // r conditioning: 8-bucket embedding, linear interpolation.
    const double t = cond.quad_dominance * 7.0;
    const int b0 = std::min(6, static_cast<int>(t));
    const double frac = t - b0;
    std::vector<float> r_vec(cfg_.d0);
    for (int i = 0; i < cfg_.d0; ++i)
        r_vec[i] = static_cast<float>((1.0 - frac) * r_embed_.at(b0, i) +
                                      frac * r_embed_.at(b0 + 1, i));

    Tensor x(n, cfg_.d0);
    for (int i = 0; i < n; ++i) {
        const Token tok = padded[i];
        if (tok >= cfg_.vocab) throw InvalidInput("token out of vocabulary");
        for (int c = 0; c < cfg_.d0; ++c)
            x.at(i, c) = tok_embed_.at(tok, c) + pos_embed_.at(i, c) + r_vec[c];
    }

    auto transformer_block = [&](Tensor& h, const AttnLayer& l) {
        Tensor normed = layer_norm(h, l.ln1_g, l.ln1_b);
        Tensor attn = causal_self_attention(normed, l.wq, l.wk, l.wv, l.wo, l.heads);
        for (std::size_t i = 0; i < h.data.size(); ++i) h.data[i] += attn.data[i];

        if (l.has_cross) {
            // Cross-attention to the (single-slot) shape embedding.
            Tensor cn = layer_norm(h, l.lnx_g, l.lnx_b);
            Tensor q = matmul(cn, l.xq);
            const int d = h.cols;
            std::vector<float> val(d, 0.0f);
            for (int c = 0; c < cfg_.cond_dim; ++c)
                for (int j = 0; j < d; ++j)
                    val[j] += cond.shape_embedding[c] * l.xv.at(c, j);
            Tensor ctx(h.rows, d);
            for (int i = 0; i < h.rows; ++i)
                for (int j = 0; j < d; ++j) ctx.at(i, j) = val[j];  // softmax over one key = 1
            Tensor proj = matmul(ctx, l.xo);
            for (std::size_t i = 0; i < h.data.size(); ++i) h.data[i] += proj.data[i];
        }

        Tensor normed2 = layer_norm(h, l.ln2_g, l.ln2_b);
        Tensor mid = matmul(normed2, l.mlp_in);
        for (float& v : mid.data) v = gelu(v);
        Tensor out = matmul(mid, l.mlp_out);
        for (std::size_t i = 0; i < h.data.size(); ++i) h.data[i] += out.data[i];
    };

    auto shorten = [&](const Tensor& h, int factor, const Tensor& boundary, const Tensor& w) {
        // Right shift by factor-1 with a boundary vector, then a grouped
        // linear map: coarse position g sees originals <= factor*g.
        const int nf = h.rows / factor, d = h.cols;
        Tensor grouped(nf, factor * d);
        for (int g = 0; g < nf; ++g)
            for (int s = 0; s < factor; ++s) {
                const int shifted = g * factor + s;
                const int src = shifted - (factor - 1);
                const float* from = src < 0 ? boundary.row(0) : h.row(src);
                std::memcpy(grouped.row(g) + s * d, from, sizeof(float) * d);
            }
        return matmul(grouped, w);
    };

    auto upsample = [&](const Tensor& coarse, int factor, const Tensor& w, const Tensor& residual) {
        Tensor proj = matmul(coarse, w);
        Tensor fine = residual;
        for (int i = 0; i < fine.rows; ++i) {
            const float* src = proj.row(i / factor);
            float* dst = fine.row(i);
            for (int c = 0; c < fine.cols; ++c) dst[c] += src[c];
        }
        return fine;
    };

    for (const auto& l : stage0_) transformer_block(x, l);
    Tensor skip0 = x;
    Tensor x1 = shorten(x, 4, shorten1_boundary_, shorten1_w_);
    for (const auto& l : stage1_) transformer_block(x1, l);
    Tensor skip1 = x1;
    Tensor x2 = shorten(x1, 3, shorten2_boundary_, shorten2_w_);
    for (const auto& l : stage2_) transformer_block(x2, l);
    Tensor u1 = upsample(x2, 3, up2_w_, skip1);
    for (const auto& l : stage1_up_) transformer_block(u1, l);
    Tensor u0 = upsample(u1, 4, up1_w_, skip0);
    for (const auto& l : stage0_up_) transformer_block(u0, l);

    Tensor normed = layer_norm(u0, final_ln_g_, final_ln_b_);
    return matmul(normed, head_);
}

Tensor HourglassModel::forward(const TokenSequence& tokens, const ConditionSpec& cond) const {
    std::vector<Token> padded = tokens;
    while (padded.size() % kBlockTokens != 0) padded.push_back(kPad);
    if (padded.empty()) throw InvalidInput("forward: empty sequence");
    Tensor logits = run(padded, cond);
    logits.rows = static_cast<int>(tokens.size());
    logits.data.resize(std::size_t(logits.rows) * logits.cols);
    return logits;
}

double next_token_loss(const Tensor& logits, const TokenSequence& targets) {
    if (targets.size() < 2)
        throw InvalidInput("next_token_loss: need at least 2 tokens");
    if (logits.rows < static_cast<int>(targets.size()) - 1)
        throw InvalidInput("next_token_loss: not enough logit rows");

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < targets.size(); ++i) {
        const float* row = logits.row(static_cast<int>(i));
        double mx = row[0];
        for (int c = 1; c < logits.cols; ++c) mx = std::max(mx, double(row[c]));
        double denom = 0.0;
        for (int c = 0; c < logits.cols; ++c) denom += std::exp(double(row[c]) - mx);
        total += mx + std::log(denom) - double(row[targets[i + 1]]);
    }
    return total / double(targets.size() - 1);
}

namespace {

// Sorted candidate list after temperature + top-k + nucleus truncation, with
// renormalized probabilities.
std::vector<std::pair<int, double>> truncated_distribution(const std::vector<float>& logits,
                                                           const SamplerConfig& s) {
    if (s.top_k < 1 || s.top_p <= 0.0 || s.top_p > 1.0 || s.temperature <= 0.0)
        throw InvalidInput("invalid sampler configuration");
    const int vocab = static_cast<int>(logits.size());
    std::vector<double> scaled(vocab);
    double mx = -1e300;
    for (int i = 0; i < vocab; ++i) {
        if (!std::isfinite(logits[i])) throw InvalidInput("non-finite logit");
        scaled[i] = double(logits[i]) / s.temperature;
        mx = std::max(mx, scaled[i]);
    }
    double denom = 0.0;
    for (double& v : scaled) {
        v = std::exp(v - mx);
        denom += v;
    }

    std::vector<int> order(vocab);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (scaled[a] != scaled[b]) return scaled[a] > scaled[b];
        return a < b;  // ties toward lower token id
    });

    const int k = std::min(s.top_k, vocab);
    double topk_mass = 0.0;
    for (int i = 0; i < k; ++i) topk_mass += scaled[order[i]];

    // Minimal prefix of the top-k reaching top_p of the full distribution.
    std::vector<std::pair<int, double>> kept;
    double cum = 0.0;
    for (int i = 0; i < k; ++i) {
        kept.emplace_back(order[i], scaled[order[i]]);
        cum += scaled[order[i]] / denom;
        if (cum >= s.top_p - 1e-12) break;
    }
    double mass = 0.0;
    for (auto& [id, p] : kept) mass += p;
    for (auto& [id, p] : kept) p /= mass;
    (void)topk_mass;
    return kept;
}

} // namespace

std::vector<int> sampler_support(const std::vector<float>& logits, const SamplerConfig& s) {
    std::vector<int> ids;
    for (auto& [id, p] : truncated_distribution(logits, s)) ids.push_back(id);
    return ids;
}

Token sample_step(const std::vector<float>& logits, const SamplerConfig& s,
                  std::mt19937_64& rng) {
    auto dist = truncated_distribution(logits, s);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double u = uni(rng), cum = 0.0;
    for (const auto& [id, p] : dist) {
        cum += p;
        if (u < cum) return static_cast<Token>(id);
    }
    return static_cast<Token>(dist.back().first);
}

Token sample_step(const std::vector<float>& logits, const SamplerConfig& s) {
    std::mt19937_64 rng(s.seed);
    return sample_step(logits, s, rng);
}

TokenSequence HourglassModel::generate(const TokenSequence& prefix, const ConditionSpec& cond,
                                       const SamplerConfig& sampler,
                                       std::size_t max_tokens) const {
    if (max_tokens > static_cast<std::size_t>(cfg_.max_len))
        throw InvalidInput("max_tokens exceeds model context");
    if (prefix.size() > max_tokens)
        throw InvalidInput("prefix longer than max_tokens");

    TokenSequence seq = prefix;
    std::mt19937_64 rng(sampler.seed);
    while (seq.size() < max_tokens) {
        std::vector<Token> input;
        input.reserve(seq.size() + 1);
        input.push_back(kBos);
        input.insert(input.end(), seq.begin(), seq.end());
        while (input.size() % kBlockTokens != 0) input.push_back(kPad);
        Tensor logits = run(input, cond);
        const float* row = logits.row(static_cast<int>(seq.size()));
        std::vector<float> last(row, row + logits.cols);
        Token next = sample_step(last, sampler, rng);
        seq.push_back(next);
        if (next == kEos) break;
    }
    return seq;
}

std::vector<double> HourglassModel::window_logprobs(const TokenSequence& tokens, std::size_t m,
                                                    std::size_t tau,
                                                    const ConditionSpec& cond) const {
    if (m % kBlockTokens != 0) throw InvalidInput("window offset m must be block-aligned");
    if (m + tau > tokens.size()) throw InvalidInput("window exceeds sequence length");

    // BOS-prefixed pass so the token at position 0 has a predictor row.
    std::vector<Token> input;
    input.reserve(tokens.size() + 1);
    input.push_back(kBos);
    input.insert(input.end(), tokens.begin(), tokens.end());
    while (input.size() % kBlockTokens != 0) input.push_back(kPad);
    Tensor logits = run(input, cond);

    std::vector<double> out;
    out.reserve(tau);
    for (std::size_t t = m; t < m + tau; ++t) {
        const float* row = logits.row(static_cast<int>(t));  // row t predicts tokens[t]
        double mx = row[0];
        for (int c = 1; c < logits.cols; ++c) mx = std::max(mx, double(row[c]));
        double denom = 0.0;
        for (int c = 0; c < logits.cols; ++c) denom += std::exp(double(row[c]) - mx);
        out.push_back(double(row[tokens[t]]) - mx - std::log(denom));
    }
    return out;
}

// ---- weight file -----------------------------------------------------------

namespace {
constexpr char kWeightMagic[4] = {'Q', 'G', 'H', 'W'};
constexpr unsigned char kWeightVersion = 0x01;

void put_i32(std::ostream& out, std::int32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff),
                          static_cast<unsigned char>((v >> 16) & 0xff),
                          static_cast<unsigned char>((v >> 24) & 0xff)};
    out.write(reinterpret_cast<char*>(b), 4);
}

std::int32_t get_i32(std::istream& in) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) throw ParseError("truncated weight file");
    return std::int32_t(b[0]) | (std::int32_t(b[1]) << 8) | (std::int32_t(b[2]) << 16) |
           (std::int32_t(b[3]) << 24);
}

} // namespace

void HourglassModel::save_weights(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open file for writing: " + path);
    out.write(kWeightMagic, 4);
    out.put(static_cast<char>(kWeightVersion));
    const HourglassConfig& c = cfg_;
    for (std::int32_t v : {c.vocab, c.d0, c.d1, c.d2, c.heads0, c.heads1, c.heads2,
                           c.layers0, c.layers1, c.layers2, c.cond_dim, c.max_len})
        put_i32(out, v);
    const_cast<HourglassModel*>(this)->for_each_tensor([&](Tensor& t) {
        put_i32(out, t.rows);
        put_i32(out, t.cols);
        static_assert(sizeof(float) == 4);
        out.write(reinterpret_cast<const char*>(t.data.data()),
                  std::streamsize(t.data.size() * 4));
    });
    if (!out) throw IoError("write failure: " + path);
}

HourglassModel HourglassModel::load_weights(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open weight file: " + path);
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kWeightMagic, 4) != 0)
        throw ParseError("bad magic in weight file: " + path);
    char version = 0;
    if (!in.get(version) || static_cast<unsigned char>(version) != kWeightVersion)
        throw ParseError("unknown weight file version");

    HourglassConfig cfg;
    cfg.vocab = get_i32(in);
    cfg.d0 = get_i32(in);
    cfg.d1 = get_i32(in);
    cfg.d2 = get_i32(in);
    cfg.heads0 = get_i32(in);
    cfg.heads1 = get_i32(in);
    cfg.heads2 = get_i32(in);
    cfg.layers0 = get_i32(in);
    cfg.layers1 = get_i32(in);
    cfg.layers2 = get_i32(in);
    cfg.cond_dim = get_i32(in);
    cfg.max_len = get_i32(in);

    HourglassModel model(cfg);
    model.for_each_tensor([&](Tensor& t) {
        std::int32_t rows = get_i32(in), cols = get_i32(in);
        if (rows != t.rows || cols != t.cols)
            throw ParseError("weight tensor shape mismatch in " + path);
        if (!in.read(reinterpret_cast<char*>(t.data.data()), std::streamsize(t.data.size() * 4)))
            throw ParseError("truncated weight file: " + path);
    });
    return model;
}

} // namespace qgpt
