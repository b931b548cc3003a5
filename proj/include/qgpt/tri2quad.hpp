#pragma once
//
// Triangle-to-quad conversion by maximum-weight matching on the triangle
// adjacency dual graph. One candidate per interior manifold edge whose
// merged quad is admissible; each triangle joins at most one merge.
//
#include <cstdint>
#include <vector>

#include "qgpt/mesh.hpp"

namespace qgpt {

struct MergeCandidate {
    int edge_id;             // dense candidate index
    int tri_a, tri_b;        // the two triangles sharing the dissolved edge
    double weight;           // quality score in [0, 1]
    Face quad;               // merged quad, winding consistent with sources
};

struct MatchingProblem {
    int triangle_count = 0;
    std::vector<MergeCandidate> candidates;
};

struct MatchingSolution {
    std::vector<int> selected;    // candidate edge ids, sorted ascending
    double total_weight = 0.0;
    std::vector<bool> tri_used;   // per-triangle usage flag
};

struct ConversionStats {
    int merged = 0;
    int split_back = 0;
    double quad_ratio = 0.0;
};

constexpr int kExactSolverBound = 24;
constexpr double kAdmissibleWeightMin = 1e-4;
constexpr double kDefaultMaxAngleDeg = 150.0;

// Quality score of the quad formed by dissolving the shared edge:
// w = a * p, where a = clamp(1 - max_i|theta_i - 90deg| / 90deg, 0, 1) over
// the quad's interior angles measured in its least-squares plane, and
// p = max(0, cos(dihedral)) between the two triangle normals. Returns 0 for
// inadmissible merges (non-convex or self-intersecting in projection).
double merge_weight(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

// Maximum interior angle (degrees) of a quad measured in its least-squares
// plane.
double max_interior_angle_deg(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

// All-triangle mesh required. Edges shared by more than two faces are
// skipped; candidates below the admissibility threshold are excluded.
MatchingProblem build_problem(const Mesh& mesh);

// Global maximum-weight matching by branch and bound. Tie-break: the
// lexicographically smallest selected-edge id set among optima. Throws
// InvalidInput above kExactSolverBound triangles.
MatchingSolution solve_exact(const MatchingProblem& p);

// Descending-weight greedy (ties by edge id); weight >= 1/2 of the optimum.
MatchingSolution solve_greedy(const MatchingProblem& p);

// Merge each selected pair into a quad; quads whose maximum interior angle
// exceeds max_angle_deg are split back into their two source triangles.
std::pair<Mesh, ConversionStats> apply_and_validate(const Mesh& mesh,
                                                    const MatchingProblem& p,
                                                    const MatchingSolution& sol,
                                                    double max_angle_deg = kDefaultMaxAngleDeg);

} // namespace qgpt
