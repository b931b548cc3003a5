#include "qgpt/obj_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "qgpt/error.hpp"

namespace qgpt {

namespace {

// Face vertex fields may be `i`, `i/t`, `i/t/n` or `i//n`; only the vertex
// index matters here.
int parse_face_index(const std::string& field, int vertex_count, long line) {
    std::string head = field.substr(0, field.find('/'));
    int idx = 0;
    auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), idx);
    if (ec != std::errc{} || ptr != head.data() + head.size())
        throw ParseError("malformed face index '" + field + "'", line);
    if (idx < 0) idx = vertex_count + idx + 1;  // negative = relative to end
    if (idx < 1 || idx > vertex_count)
        throw ParseError("face index " + std::to_string(idx) + " out of range", line);
    return idx - 1;
}

} // namespace

Mesh read_obj(std::istream& in, const ObjReadOptions& opts) {
    Mesh mesh;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag[0] == '#') continue;
        if (tag == "v") {
            Vec3 v;
            if (!(ls >> v.x >> v.y >> v.z))
                throw ParseError("malformed vertex record", lineno);
            mesh.vertices.push_back(v);
        } else if (tag == "f") {
            std::vector<int> idx;
            std::string field;
            while (ls >> field)
                idx.push_back(parse_face_index(field, static_cast<int>(mesh.vertices.size()), lineno));
            if (idx.size() < 3)
                throw ParseError("face with fewer than 3 vertices", lineno);
            if (idx.size() > 4 && !opts.triangulate_ngons)
                throw ParseError("face with " + std::to_string(idx.size()) +
                                 " vertices (arity >4 not supported)", lineno);
            if (idx.size() == 3) {
                mesh.faces.push_back(Face::tri(idx[0], idx[1], idx[2]));
            } else if (idx.size() == 4) {
                mesh.faces.push_back(Face::quad(idx[0], idx[1], idx[2], idx[3]));
            } else {
                for (std::size_t i = 1; i + 1 < idx.size(); ++i)
                    mesh.faces.push_back(Face::tri(idx[0], idx[i], idx[i + 1]));
            }
        }
        // vn, vt, comments, groups, materials: skipped
    }
    mesh.validate();
    return mesh;
}

Mesh load_obj(const std::string& path, const ObjReadOptions& opts) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open OBJ file: " + path);
    return read_obj(in, opts);
}

void write_obj(const Mesh& mesh, std::ostream& out) {
    char buf[128];
    for (const Vec3& v : mesh.vertices) {
        std::snprintf(buf, sizeof buf, "v %.6f %.6f %.6f\n", v.x, v.y, v.z);
        out << buf;
    }
    for (const Face& f : mesh.faces) {
        out << 'f';
        for (int i = 0; i < f.arity; ++i) out << ' ' << (f.v[i] + 1);
        out << '\n';
    }
}

void save_obj(const Mesh& mesh, const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary: keep LF on all platforms
    if (!out) throw IoError("cannot open file for writing: " + path);
    write_obj(mesh, out);
    if (!out) throw IoError("write failure: " + path);
}

} // namespace qgpt
