#pragma once
//
// Canonical serialization of a mixed-element mesh to and from the flat
// 12-token face-block sequence. Vocabulary: coordinate tokens 0..1023,
// PAD=1024, BOS=1025, EOS=1026. A quad block is 12 coordinate tokens; a
// triangle block is 3 PAD tokens followed by 9 coordinate tokens.
//
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qgpt/mesh.hpp"

namespace qgpt {

using Token = std::uint16_t;

constexpr Token kPad = 1024;
constexpr Token kBos = 1025;
constexpr Token kEos = 1026;
constexpr int kVocabSize = 1027;
constexpr int kQuantLevels = 1024;
constexpr int kBlockTokens = 12;

using TokenSequence = std::vector<Token>;

// Quantized, canonically ordered mesh. Vertices are (x,y,z) integer triples
// in {0..1023}^3, strictly increasing under lexicographic (z,x,y) order.
struct QuantizedMesh {
    std::vector<std::array<int, 3>> vertices;
    std::vector<Face> faces;
    // Faces that collapsed to repeated vertex ids under quantization and
    // were dropped.
    int dropped_degenerate = 0;

    bool operator==(const QuantizedMesh& o) const {
        return vertices == o.vertices && faces == o.faces;
    }
};

// Maps a normalized coordinate in [-0.95, 0.95] (clamped) to {0..1023},
// round half away from zero.
int quantize_coord(double c);

// Center-of-bin inverse of quantize_coord.
double dequantize_coord(int q);

// Quantize, merge duplicate vertices, sort vertices lex by (z,x,y), rotate
// each face so its smallest vertex id comes first (winding preserved), drop
// faces degenerating under quantization, sort faces by (min id, rotated
// tuple). Input mesh must already be normalized to [-0.95, 0.95]^3.
QuantizedMesh canonicalize(const Mesh& mesh);

// One 12-token block per face in canonical order; per vertex the coordinates
// are emitted in (z,x,y) order. Optionally wrapped in BOS...EOS.
TokenSequence tokenize(const QuantizedMesh& qm, bool with_delimiters = false);

enum class DetokenizeMode { Strict, Lenient };

struct DetokenizeDiagnostics {
    std::size_t faces_parsed = 0;
    std::size_t tokens_dropped = 0;   // trailing tokens not forming a full block
    std::size_t partial_blocks = 0;   // 0 or 1
    std::size_t malformed_blocks = 0; // blocks skipped in lenient mode
};

// Inverse of tokenize. Strict mode throws ParseError on any structural
// violation (PAD outside offsets 0-2, incomplete PAD prefix, payload not a
// multiple of 12, token out of vocabulary, misplaced BOS/EOS). Lenient mode
// stops at the first malformed block and drops a trailing partial block,
// reporting counts; it is the mode for truncated generations.
Mesh detokenize(const TokenSequence& seq, DetokenizeMode mode,
                DetokenizeDiagnostics* diag = nullptr);

// Consecutive block-aligned windows of window_len tokens; the final window
// may be shorter. seq must satisfy the block invariant (length multiple of
// 12, no delimiters) and window_len must be a positive multiple of 12.
std::vector<TokenSequence> truncate_windows(const TokenSequence& seq,
                                            std::size_t window_len);

// ---- token file I/O --------------------------------------------------------
// Text: one decimal token per line, '#' comment lines allowed.
// Binary: magic "QGPT", version byte 0x01, little-endian u16 tokens.

TokenSequence read_tokens_text(const std::string& path);
void write_tokens_text(const TokenSequence& seq, const std::string& path);

TokenSequence read_tokens_binary(const std::string& path);
void write_tokens_binary(const TokenSequence& seq, const std::string& path);

// Sniffs the binary magic, falls back to text.
TokenSequence read_tokens_auto(const std::string& path);

} // namespace qgpt
