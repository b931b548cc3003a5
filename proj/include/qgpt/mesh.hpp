#pragma once
//
// Indexed mixed-element mesh (triangles + quads), adjacency queries,
// normalization and surface point sampling. Faces keep consistent winding;
// indices are 0-based in memory (OBJ is 1-based, converted in obj_io).
//
#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "qgpt/vec3.hpp"

namespace qgpt {

// A face of arity 3 or 4. Slot 3 is unused for triangles.
struct Face {
    std::array<int, 4> v{-1, -1, -1, -1};
    int arity{0};

    static Face tri(int a, int b, int c) { return {{a, b, c, -1}, 3}; }
    static Face quad(int a, int b, int c, int d) { return {{a, b, c, d}, 4}; }

    bool operator==(const Face& o) const = default;
};

struct Mesh {
    std::vector<Vec3> vertices;
    std::vector<Face> faces;

    // Checks the structural invariants: index range, arity 3/4, no repeated
    // vertex within a face. Throws InvalidInput on violation.
    void validate() const;

    Vec3 bbox_min() const;
    Vec3 bbox_max() const;
    double bbox_diagonal() const;
};

// Undirected edge key: vertex-index pair with a < b.
struct EdgeKey {
    int a, b;
    EdgeKey(int u, int v) : a(u < v ? u : v), b(u < v ? v : u) {}
    auto operator<=>(const EdgeKey&) const = default;
};

// Edge -> incident face ids. 1 incident face = boundary edge, 2 = interior,
// >2 = non-manifold.
class EdgeAdjacency {
public:
    explicit EdgeAdjacency(const Mesh& mesh);

    const std::vector<int>* faces_of(const EdgeKey& e) const;
    const std::map<EdgeKey, std::vector<int>>& edges() const { return edge_faces_; }
    std::size_t edge_count() const { return edge_faces_.size(); }

    bool is_boundary(const EdgeKey& e) const;
    bool is_non_manifold(const EdgeKey& e) const;

    // For a quad face, the edge opposite to e (an involution on the 4 edges).
    // Throws InvalidInput if face is not a quad or e is not one of its edges.
    static EdgeKey opposite_edge(const Face& f, const EdgeKey& e);

private:
    std::map<EdgeKey, std::vector<int>> edge_faces_;
};

struct PointCloud {
    // position xyz + unit normal xyz
    std::vector<std::array<double, 6>> points;
};

// Uniform scale + translation mapping the bbox center to the origin and the
// longest bbox axis to exactly [-0.95, 0.95]. Throws InvalidInput when the
// bbox diagonal is zero.
Mesh normalize(const Mesh& mesh);

// Partition of faces by vertex-sharing connectivity; each component is
// re-indexed over its own vertices. Unused vertices are dropped.
std::vector<Mesh> connected_components(const Mesh& mesh);

// Faces having at least one edge with exactly one incident face.
std::set<int> boundary_faces(const Mesh& mesh);

// Area-uniform surface sampling with face normals; quads are split along the
// (v0,v2) diagonal for sampling only. Positions are perturbed by isotropic
// Gaussian noise with sigma = noise_scale * bbox diagonal. Deterministic per
// seed. Throws InvalidInput when total surface area is zero.
PointCloud sample_point_cloud(const Mesh& mesh, std::size_t n, double noise_scale,
                              std::uint64_t seed);

constexpr double kDefaultNoiseScale = 0.005;

} // namespace qgpt
