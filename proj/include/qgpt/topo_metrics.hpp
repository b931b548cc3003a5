#pragma once
//
// Topological reward primitives (fracture count, quad ring/line discovery)
// and geometric evaluation metrics (Chamfer, Hausdorff, quad ratio).
//
#include <vector>

#include "qgpt/mesh.hpp"

namespace qgpt {

enum class Axis { X = 0, Y = 1, Z = 2 };

enum class WalkMode {
    PaperLiteral,   // one direction per start edge, canonical edge order
    Bidirectional,  // both directions stitched; start-edge independent
};

struct TopoConfig {
    Axis up_axis = Axis::Y;
    WalkMode walk_mode = WalkMode::Bidirectional;
};

struct TopoScore {
    int fracture_count = 0;            // C_frac
    double r_frac = 0.0;               // C_frac / max(1, face count)
    std::vector<std::vector<int>> rings;
    std::vector<std::vector<int>> lines;
    double l_avg = 0.0;                // mean open-line length in faces; 0 when no lines
    double ring_face_ratio = 0.0;      // fraction of faces in at least one ring
};

struct GeoScore {
    double chamfer = 0.0;
    double hausdorff = 0.0;
    double quad_ratio = 0.0;
};

// Frontier = min up-axis coordinate over the vertices of the last face in
// face_order; counts boundary faces whose vertices all lie at or below the
// frontier (1e-9 slack). 0 for an empty mesh.
int fracture_count(const Mesh& mesh, const std::vector<int>& face_order, Axis up_axis);

// Walks across quads via opposite edges. A walk that returns to its start
// edge is a ring; one that terminates (no adjacent quad, or a non-manifold
// edge) is a line. Triangles only terminate walks. Empty walks (edges with
// no adjacent quad) are discarded.
std::pair<std::vector<std::vector<int>>, std::vector<std::vector<int>>>
discover_rings_and_lines(const Mesh& mesh, WalkMode mode = WalkMode::Bidirectional);

TopoScore topo_score(const Mesh& mesh, const std::vector<int>& face_order,
                     const TopoConfig& cfg = {});

// Convenience: face_order = file order.
TopoScore topo_score(const Mesh& mesh, const TopoConfig& cfg = {});

// Symmetric mean nearest-neighbor distance over positions,
// 0.5*mean_a min_b + 0.5*mean_b min_a. Exact search.
double chamfer_distance(const PointCloud& a, const PointCloud& b);

// max(max_a min_b, max_b min_a), exact.
double hausdorff_distance(const PointCloud& a, const PointCloud& b);

// Fraction of arity-4 faces; throws InvalidInput on an empty mesh.
double quad_ratio(const Mesh& mesh);

} // namespace qgpt
