#include "qgpt/codec.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "qgpt/error.hpp"

namespace qgpt {

int quantize_coord(double c) {
    c = std::clamp(c, -0.95, 0.95);
    double t = (c + 0.95) / 1.9 * (kQuantLevels - 1);
    int q = static_cast<int>(std::floor(t + 0.5));  // round half away from zero (t >= 0)
    return std::clamp(q, 0, kQuantLevels - 1);
}

double dequantize_coord(int q) {
    return static_cast<double>(q) / (kQuantLevels - 1) * 1.9 - 0.95;
}

namespace {

// Sort key is (z, x, y).
struct ZxyLess {
    bool operator()(const std::array<int, 3>& a, const std::array<int, 3>& b) const {
        if (a[2] != b[2]) return a[2] < b[2];
        if (a[0] != b[0]) return a[0] < b[0];
        return a[1] < b[1];
    }
};

Face rotate_min_first(const Face& f) {
    int best = 0;
    for (int i = 1; i < f.arity; ++i)
        if (f.v[i] < f.v[best]) best = i;
    Face out;
    out.arity = f.arity;
    for (int i = 0; i < f.arity; ++i) out.v[i] = f.v[(best + i) % f.arity];
    return out;
}

bool face_key_less(const Face& a, const Face& b) {
    // Faces are already rotated min-first, so v[0] is the min id.
    const int n = std::min(a.arity, b.arity);
    for (int i = 0; i < n; ++i)
        if (a.v[i] != b.v[i]) return a.v[i] < b.v[i];
    return a.arity < b.arity;
}

} // namespace

QuantizedMesh canonicalize(const Mesh& mesh) {
    mesh.validate();

    std::vector<std::array<int, 3>> quantized(mesh.vertices.size());
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        const Vec3& v = mesh.vertices[i];
        quantized[i] = {quantize_coord(v.x), quantize_coord(v.y), quantize_coord(v.z)};
    }

    // Merge duplicates and assign canonical (z,x,y)-sorted ids.
    std::map<std::array<int, 3>, int, ZxyLess> vertex_id;
    for (const auto& q : quantized) vertex_id.emplace(q, 0);
    QuantizedMesh out;
    out.vertices.reserve(vertex_id.size());
    for (auto& [q, id] : vertex_id) {
        id = static_cast<int>(out.vertices.size());
        out.vertices.push_back(q);
    }

    for (const Face& f : mesh.faces) {
        Face remapped = f;
        for (int i = 0; i < f.arity; ++i) remapped.v[i] = vertex_id.at(quantized[f.v[i]]);
        bool degenerate = false;
        for (int i = 0; i < remapped.arity && !degenerate; ++i)
            for (int j = i + 1; j < remapped.arity; ++j)
                if (remapped.v[i] == remapped.v[j]) { degenerate = true; break; }
        if (degenerate) {
            ++out.dropped_degenerate;
            continue;
        }
        out.faces.push_back(rotate_min_first(remapped));
    }
    std::sort(out.faces.begin(), out.faces.end(), face_key_less);
    return out;
}

TokenSequence tokenize(const QuantizedMesh& qm, bool with_delimiters) {
    TokenSequence seq;
    seq.reserve(qm.faces.size() * kBlockTokens + 2);
    if (with_delimiters) seq.push_back(kBos);
    for (const Face& f : qm.faces) {
        if (f.arity == 3) {
            seq.push_back(kPad);
            seq.push_back(kPad);
            seq.push_back(kPad);
        }
        for (int i = 0; i < f.arity; ++i) {
            const auto& v = qm.vertices[f.v[i]];
            seq.push_back(static_cast<Token>(v[2]));  // z
            seq.push_back(static_cast<Token>(v[0]));  // x
            seq.push_back(static_cast<Token>(v[1]));  // y
        }
    }
    if (with_delimiters) seq.push_back(kEos);
    return seq;
}

namespace {

[[noreturn]] void malformed(std::size_t block, std::size_t offset, const std::string& why) {
    throw ParseError("malformed block " + std::to_string(block) + " at offset " +
                     std::to_string(offset) + ": " + why);
}

} // namespace

Mesh detokenize(const TokenSequence& seq, DetokenizeMode mode, DetokenizeDiagnostics* diag) {
    DetokenizeDiagnostics local;
    DetokenizeDiagnostics& d = diag ? *diag : local;
    d = {};
    const bool strict = mode == DetokenizeMode::Strict;

    // Strip delimiters. Strict requires BOS only at position 0 and EOS only
    // at the end; lenient stops at the first EOS.
    std::size_t begin = 0, end = seq.size();
    if (begin < end && seq[begin] == kBos) ++begin;
    if (strict) {
        if (end > begin && seq[end - 1] == kEos) --end;
        for (std::size_t i = begin; i < end; ++i) {
            if (seq[i] == kBos || seq[i] == kEos)
                malformed((i - begin) / kBlockTokens, (i - begin) % kBlockTokens,
                          "misplaced BOS/EOS");
            if (seq[i] > kEos)
                malformed((i - begin) / kBlockTokens, (i - begin) % kBlockTokens,
                          "token out of vocabulary");
        }
        if ((end - begin) % kBlockTokens != 0)
            throw ParseError("payload length " + std::to_string(end - begin) +
                             " is not a multiple of 12");
    } else {
        for (std::size_t i = begin; i < end; ++i) {
            if (seq[i] == kEos) { end = i; break; }
        }
    }

    Mesh mesh;
    std::map<std::array<int, 3>, int> vertex_id;
    auto intern = [&](int z, int x, int y) {
        auto [it, inserted] =
            vertex_id.emplace(std::array<int, 3>{x, y, z}, static_cast<int>(mesh.vertices.size()));
        if (inserted)
            mesh.vertices.push_back({dequantize_coord(x), dequantize_coord(y), dequantize_coord(z)});
        return it->second;
    };

    for (std::size_t pos = begin; pos + kBlockTokens <= end; pos += kBlockTokens) {
        const std::size_t block = (pos - begin) / kBlockTokens;
        const Token* b = seq.data() + pos;

        int pad_prefix = 0;
        while (pad_prefix < 3 && b[pad_prefix] == kPad) ++pad_prefix;
        bool bad = false;
        std::size_t bad_offset = 0;
        std::string why;
        if (pad_prefix != 0 && pad_prefix != 3) {
            bad = true;
            bad_offset = pad_prefix;
            why = "incomplete PAD prefix";
        }
        for (int i = pad_prefix; i < kBlockTokens && !bad; ++i) {
            if (b[i] >= kQuantLevels) {
                bad = true;
                bad_offset = i;
                why = b[i] == kPad ? "PAD at coordinate offset" : "non-coordinate token";
            }
        }
        if (bad) {
            if (strict) malformed(block, bad_offset, why);
            ++d.malformed_blocks;
            d.tokens_dropped += end - pos;
            if (diag) *diag = d;
            mesh.validate();
            return mesh;
        }

        const int arity = pad_prefix == 3 ? 3 : 4;
        Face f;
        f.arity = arity;
        bool degenerate = false;
        for (int i = 0; i < arity; ++i) {
            const Token* t = b + pad_prefix + 3 * i;
            f.v[i] = intern(t[0], t[1], t[2]);  // tokens are (z,x,y)
            for (int j = 0; j < i; ++j)
                if (f.v[j] == f.v[i]) degenerate = true;
        }
        if (degenerate) {
            // Repeated vertex after dedup; representable only as a dropped face.
            ++d.malformed_blocks;
            if (strict) malformed(block, 0, "face repeats a vertex");
            continue;
        }
        mesh.faces.push_back(f);
        ++d.faces_parsed;
    }

    const std::size_t tail = (end - begin) % kBlockTokens;
    if (tail != 0) {
        d.partial_blocks = 1;
        d.tokens_dropped += tail;
    }
    if (diag) *diag = d;
    mesh.validate();
    return mesh;
}

std::vector<TokenSequence> truncate_windows(const TokenSequence& seq, std::size_t window_len) {
    if (window_len == 0 || window_len % kBlockTokens != 0)
        throw InvalidInput("window length must be a positive multiple of 12");
    if (seq.size() % kBlockTokens != 0)
        throw InvalidInput("sequence length " + std::to_string(seq.size()) +
                           " violates the 12-token block invariant");
    std::vector<TokenSequence> windows;
    for (std::size_t pos = 0; pos < seq.size(); pos += window_len) {
        std::size_t n = std::min(window_len, seq.size() - pos);
        windows.emplace_back(seq.begin() + pos, seq.begin() + pos + n);
    }
    return windows;
}

// ---- token file I/O --------------------------------------------------------

TokenSequence read_tokens_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open token file: " + path);
    TokenSequence seq;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;
        long value = 0;
        try {
            value = std::stol(line.substr(start));
        } catch (const std::exception&) {
            throw ParseError("malformed token line", lineno);
        }
        if (value < 0 || value >= kVocabSize)
            throw ParseError("token " + std::to_string(value) + " out of vocabulary", lineno);
        seq.push_back(static_cast<Token>(value));
    }
    return seq;
}

void write_tokens_text(const TokenSequence& seq, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open file for writing: " + path);
    for (Token t : seq) out << t << '\n';
    if (!out) throw IoError("write failure: " + path);
}

namespace {
constexpr char kMagic[4] = {'Q', 'G', 'P', 'T'};
constexpr unsigned char kBinaryVersion = 0x01;
} // namespace

TokenSequence read_tokens_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open token file: " + path);
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
        throw ParseError("bad magic in binary token file: " + path);
    char version = 0;
    if (!in.get(version)) throw ParseError("truncated binary token file: " + path);
    if (static_cast<unsigned char>(version) != kBinaryVersion)
        throw ParseError("unknown binary token format version " +
                         std::to_string(static_cast<unsigned char>(version)));
    TokenSequence seq;
    unsigned char b[2];
    while (in.read(reinterpret_cast<char*>(b), 2))
        seq.push_back(static_cast<Token>(b[0] | (b[1] << 8)));
    if (in.gcount() != 0) throw ParseError("trailing byte in binary token file: " + path);
    return seq;
}

void write_tokens_binary(const TokenSequence& seq, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open file for writing: " + path);
    out.write(kMagic, 4);
    out.put(static_cast<char>(kBinaryVersion));
    for (Token t : seq) {
        unsigned char b[2] = {static_cast<unsigned char>(t & 0xff),
                              static_cast<unsigned char>(t >> 8)};
        out.write(reinterpret_cast<char*>(b), 2);
    }
    if (!out) throw IoError("write failure: " + path);
}

TokenSequence read_tokens_auto(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open token file: " + path);
    char magic[4] = {};
    in.read(magic, 4);
    in.close();
    if (std::memcmp(magic, kMagic, 4) == 0) return read_tokens_binary(path);
    return read_tokens_text(path);
}

} // namespace qgpt
