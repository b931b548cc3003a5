#pragma once
//
// Rule-based dataset curation: fractured-geometry detection via test
// welding, per-face aspect-ratio screening, and face-count bounds.
//
#include <string>
#include <vector>

#include "qgpt/mesh.hpp"

namespace qgpt {

struct FilterConfig {
    int tau_vtx_min = 16;          // components below this vertex count are ignored
    double tau_weld = 1e-4;        // weld distance, fraction of bbox diagonal
    int tau_edge_delta = 4;        // minimum edge-count drop signaling a fracture
    double aspect_max = 8.0;       // max longest/shortest edge per face
    int face_min = 500;
    int face_max = 20000;
};

struct FilterVerdict {
    bool face_count_ok = false;
    bool aspect_ok = false;
    bool no_fracture = false;
    bool pass = false;

    int face_count = 0;
    int component_count = 0;
    double worst_aspect = 0.0;
    bool fracture = false;

    std::vector<std::string> failed_rules() const;
};

// Merges vertices closer than `distance`; faces keep their (remapped)
// indices and are never dropped, so face count is unchanged by welding.
Mesh merge_vertices_by_distance(const Mesh& mesh, double distance);

// Every edge has at most 2 incident faces and every vertex star is a single
// fan (closed or open).
bool is_manifold(const Mesh& mesh);

// Number of undirected edges with distinct endpoints.
std::size_t count_edges(const Mesh& mesh);

// Open-seam detection: after removing duplicate/loose vertices and splitting
// into components, each non-manifold component above the vertex threshold is
// test-welded; a fracture is reported when the edge count drops by more than
// tau_edge_delta while the face count is unchanged.
bool detect_fracture(const Mesh& mesh, const FilterConfig& cfg);

// (pass, worst longest/shortest edge ratio). Throws InvalidInput on a
// zero-length edge.
std::pair<bool, double> check_aspect_ratio(const Mesh& mesh, double aspect_max);

FilterVerdict run_filter(const Mesh& mesh, const FilterConfig& cfg);

} // namespace qgpt
