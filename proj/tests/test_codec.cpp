#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "qgpt/codec.hpp"
#include "qgpt/error.hpp"
#include "qgpt/mesh.hpp"

using namespace qgpt;
namespace fx = qgpt::fixtures;

TEST_CASE("coordinate quantization") {
    CHECK(quantize_coord(0.0) == 512);
    CHECK(quantize_coord(-0.95) == 0);
    CHECK(quantize_coord(0.95) == 1023);
    CHECK(quantize_coord(-2.0) == 0);     // clamped
    CHECK(quantize_coord(2.0) == 1023);

    // round-trip error bounded by half a bin
    const double half_bin = 0.5 * 1.9 / 1023.0;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-0.95, 0.95);
    for (int i = 0; i < 2000; ++i) {
        double c = u(rng);
        int q = quantize_coord(c);
        CHECK(q >= 0);
        CHECK(q <= 1023);
        CHECK(std::abs(dequantize_coord(q) - c) <= half_bin + 1e-12);
    }
    // quantize(dequantize(q)) == q exactly
    for (int q = 0; q < 1024; ++q) CHECK(quantize_coord(dequantize_coord(q)) == q);
}

TEST_CASE("cube tokenizes to six 12-token quad blocks") {
    QuantizedMesh qm = canonicalize(normalize(fx::quad_cube()));
    CHECK(qm.vertices.size() == 8);
    CHECK(qm.faces.size() == 6);
    TokenSequence seq = tokenize(qm);
    REQUIRE(seq.size() == 72);
    for (Token t : seq) CHECK(t < 1024);  // no PAD in an all-quad mesh

    // vertices are strictly sorted lex by (z, x, y)
    for (std::size_t i = 1; i < qm.vertices.size(); ++i) {
        auto key = [](const std::array<int, 3>& v) {
            return std::array<int, 3>{v[2], v[0], v[1]};
        };
        CHECK(key(qm.vertices[i - 1]) < key(qm.vertices[i]));
    }
}

TEST_CASE("triangle blocks carry a 3-PAD prefix") {
    QuantizedMesh qm = canonicalize(normalize(fx::tri_cube()));
    TokenSequence seq = tokenize(qm);
    REQUIRE(seq.size() == 12 * 144 / 12);  // 12 triangles x 12 tokens
    for (std::size_t b = 0; b < seq.size(); b += 12) {
        CHECK(seq[b] == kPad);
        CHECK(seq[b + 1] == kPad);
        CHECK(seq[b + 2] == kPad);
        for (int k = 3; k < 12; ++k) CHECK(seq[b + k] < 1024);
    }
}

TEST_CASE("canonical form is invariant to index permutation and face rotation") {
    Mesh base = normalize(fx::tri_cube());
    QuantizedMesh ref = canonicalize(base);
    TokenSequence ref_tokens = tokenize(ref);

    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 25; ++trial) {
        Mesh shuffled = base;
        std::vector<int> perm(base.vertices.size());
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        for (std::size_t i = 0; i < perm.size(); ++i)
            shuffled.vertices[perm[i]] = base.vertices[i];
        for (Face& f : shuffled.faces)
            for (int i = 0; i < f.arity; ++i) f.v[i] = perm[f.v[i]];
        std::shuffle(shuffled.faces.begin(), shuffled.faces.end(), rng);
        for (Face& f : shuffled.faces) {
            int r = int(rng() % f.arity);
            std::array<int, 4> rot = f.v;
            for (int i = 0; i < f.arity; ++i) rot[i] = f.v[(i + r) % f.arity];
            f.v = rot;
        }
        QuantizedMesh qm = canonicalize(shuffled);
        CHECK(qm == ref);
        CHECK(tokenize(qm) == ref_tokens);
    }
}

TEST_CASE("tokenize/detokenize round trip on random meshes") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Mesh m = normalize(fx::random_tri_blob(seed));
        QuantizedMesh qm = canonicalize(m);
        TokenSequence seq = tokenize(qm);
        Mesh back = detokenize(seq, DetokenizeMode::Strict);
        CHECK(canonicalize(back) == qm);
    }
}

TEST_CASE("delimiters wrap the payload and round trip") {
    QuantizedMesh qm = canonicalize(normalize(fx::quad_cube()));
    TokenSequence wrapped = tokenize(qm, true);
    REQUIRE(wrapped.size() == 74);
    CHECK(wrapped.front() == kBos);
    CHECK(wrapped.back() == kEos);
    CHECK(canonicalize(detokenize(wrapped, DetokenizeMode::Strict)) == qm);
}

TEST_CASE("strict detokenization rejects malformed sequences") {
    QuantizedMesh qm = canonicalize(normalize(fx::quad_cube()));
    TokenSequence good = tokenize(qm);

    TokenSequence truncated(good.begin(), good.end() - 5);
    CHECK_THROWS_AS(detokenize(truncated, DetokenizeMode::Strict), ParseError);

    TokenSequence misplaced_pad = good;
    misplaced_pad[5] = kPad;  // PAD only legal at block offsets 0-2
    CHECK_THROWS_AS(detokenize(misplaced_pad, DetokenizeMode::Strict), ParseError);

    TokenSequence partial_pad = good;
    partial_pad[0] = kPad;  // 1 PAD is not a triangle prefix
    CHECK_THROWS_AS(detokenize(partial_pad, DetokenizeMode::Strict), ParseError);

    TokenSequence oov = good;
    oov[3] = 2000;
    CHECK_THROWS_AS(detokenize(oov, DetokenizeMode::Strict), ParseError);

    TokenSequence inner_bos = good;
    inner_bos[12] = kBos;
    CHECK_THROWS_AS(detokenize(inner_bos, DetokenizeMode::Strict), ParseError);
}

TEST_CASE("lenient detokenization recovers the valid prefix of a truncated generation") {
    QuantizedMesh qm = canonicalize(normalize(fx::quad_cube()));
    TokenSequence good = tokenize(qm);

    TokenSequence truncated(good.begin(), good.end() - 5);
    DetokenizeDiagnostics diag;
    Mesh m = detokenize(truncated, DetokenizeMode::Lenient, &diag);
    CHECK(diag.faces_parsed == 5);
    CHECK(diag.partial_blocks == 1);
    CHECK(diag.tokens_dropped == 7);
    CHECK(m.faces.size() == 5);

    TokenSequence corrupt = good;
    corrupt[2 * 12 + 5] = kPad;  // block 2 malformed; lenient stops there
    DetokenizeDiagnostics diag2;
    Mesh m2 = detokenize(corrupt, DetokenizeMode::Lenient, &diag2);
    CHECK(diag2.faces_parsed == 2);
    CHECK(diag2.malformed_blocks == 1);
    CHECK(m2.faces.size() == 2);
}

TEST_CASE("truncate_windows produces block-aligned slices") {
    TokenSequence seq(7 * 12);
    for (std::size_t i = 0; i < seq.size(); ++i) seq[i] = Token(i % 1024);
    auto windows = truncate_windows(seq, 36);
    REQUIRE(windows.size() == 3);
    CHECK(windows[0].size() == 36);
    CHECK(windows[1].size() == 36);
    CHECK(windows[2].size() == 12);
    CHECK(windows[0][0] == seq[0]);
    CHECK(windows[2][0] == seq[72]);

    CHECK_THROWS_AS(truncate_windows(seq, 35), InvalidInput);
    TokenSequence ragged(13, Token(0));
    CHECK_THROWS_AS(truncate_windows(ragged, 12), InvalidInput);
}

TEST_CASE("token file I/O: text, binary, auto-sniff") {
    QuantizedMesh qm = canonicalize(normalize(fx::tri_cube()));
    TokenSequence seq = tokenize(qm, true);

    std::string tpath = fx::tmp_path("tokens.txt");
    write_tokens_text(seq, tpath);
    CHECK(read_tokens_text(tpath) == seq);
    CHECK(read_tokens_auto(tpath) == seq);

    std::string bpath = fx::tmp_path("tokens.bin");
    write_tokens_binary(seq, bpath);
    CHECK(read_tokens_binary(bpath) == seq);
    CHECK(read_tokens_auto(bpath) == seq);

    // comments and blank lines in text form
    std::string cpath = fx::tmp_path("commented.txt");
    {
        std::ofstream out(cpath);
        out << "# header\n\n12\n# mid\n1024\n";
    }
    TokenSequence expect{12, 1024};
    CHECK(read_tokens_text(cpath) == expect);
}
