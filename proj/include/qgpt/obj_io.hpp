#pragma once
//
// Wavefront OBJ reader/writer restricted to `v` and `f` records.
// Faces of arity 3 or 4 only; n-gons are rejected unless fan-triangulation
// is requested. `vn`/`vt`, comments and unknown records are skipped on read.
//
#include <iosfwd>
#include <string>

#include "qgpt/mesh.hpp"

namespace qgpt {

struct ObjReadOptions {
    // Fan-triangulate polygons with >4 vertices instead of rejecting them.
    bool triangulate_ngons = false;
};

Mesh load_obj(const std::string& path, const ObjReadOptions& opts = {});
Mesh read_obj(std::istream& in, const ObjReadOptions& opts = {});

// Writes `v` lines with 6-decimal fixed-point coordinates, then `f` lines
// (1-based indices), LF line endings.
void save_obj(const Mesh& mesh, const std::string& path);
void write_obj(const Mesh& mesh, std::ostream& out);

} // namespace qgpt
