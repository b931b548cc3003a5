#include "qgpt/quality_filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

#include "qgpt/error.hpp"

namespace qgpt {

std::vector<std::string> FilterVerdict::failed_rules() const {
    std::vector<std::string> out;
    if (!face_count_ok) out.push_back("face_count");
    if (!aspect_ok) out.push_back("aspect_ratio");
    if (!no_fracture) out.push_back("fracture");
    return out;
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

// Remaps face indices through `remap`; faces are kept verbatim even when
// they degenerate, so face counts are comparable before/after.
Mesh remap_mesh(const Mesh& mesh, const std::vector<int>& remap,
                const std::vector<Vec3>& new_vertices) {
    Mesh out;
    out.vertices = new_vertices;
    out.faces = mesh.faces;
    for (Face& f : out.faces)
        for (int i = 0; i < f.arity; ++i) f.v[i] = remap[f.v[i]];
    return out;
}

} // namespace

Mesh merge_vertices_by_distance(const Mesh& mesh, double distance) {
    const std::size_t nv = mesh.vertices.size();
    UnionFind uf(nv);

    if (distance > 0.0 && nv > 0) {
        // Spatial hash with cell size = distance; candidates live in the
        // 27-cell neighborhood.
        const double cell = distance;
        auto key = [&](const Vec3& v) {
            auto c = [&](double x) { return static_cast<long long>(std::floor(x / cell)); };
            return std::array<long long, 3>{c(v.x), c(v.y), c(v.z)};
        };
        std::map<std::array<long long, 3>, std::vector<int>> grid;
        for (std::size_t i = 0; i < nv; ++i) grid[key(mesh.vertices[i])].push_back(int(i));

        const double d2 = distance * distance;
        for (std::size_t i = 0; i < nv; ++i) {
            auto k = key(mesh.vertices[i]);
            for (long long dx = -1; dx <= 1; ++dx)
                for (long long dy = -1; dy <= 1; ++dy)
                    for (long long dz = -1; dz <= 1; ++dz) {
                        auto it = grid.find({k[0] + dx, k[1] + dy, k[2] + dz});
                        if (it == grid.end()) continue;
                        for (int j : it->second)
                            if (j > int(i) &&
                                norm2(mesh.vertices[i] - mesh.vertices[j]) <= d2)
                                uf.unite(int(i), j);
                    }
        }
    }

    std::vector<int> remap(nv, -1);
    std::vector<Vec3> verts;
    for (std::size_t i = 0; i < nv; ++i) {
        int root = uf.find(int(i));
        if (remap[root] < 0) {
            remap[root] = static_cast<int>(verts.size());
            verts.push_back(mesh.vertices[root]);
        }
        remap[i] = remap[root];
    }
    return remap_mesh(mesh, remap, verts);
}

std::size_t count_edges(const Mesh& mesh) {
    std::set<EdgeKey> edges;
    for (const Face& f : mesh.faces)
        for (int i = 0; i < f.arity; ++i) {
            int a = f.v[i], b = f.v[(i + 1) % f.arity];
            if (a != b) edges.insert(EdgeKey(a, b));
        }
    return edges.size();
}

bool is_manifold(const Mesh& mesh) {
    EdgeAdjacency adj(mesh);
    for (const auto& [edge, fs] : adj.edges())
        if (fs.size() > 2) return false;

    // Vertex stars must be single fans: the faces incident to a vertex,
    // linked through that vertex's edges, form one connected path or cycle.
    std::unordered_map<int, std::vector<int>> vertex_faces;
    for (std::size_t fi = 0; fi < mesh.faces.size(); ++fi)
        for (int i = 0; i < mesh.faces[fi].arity; ++i)
            vertex_faces[mesh.faces[fi].v[i]].push_back(int(fi));

    for (auto& [v, fs] : vertex_faces) {
        std::sort(fs.begin(), fs.end());
        fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
        if (fs.size() <= 1) continue;

        std::unordered_map<int, int> local;  // face id -> dense index
        for (std::size_t i = 0; i < fs.size(); ++i) local[fs[i]] = int(i);
        UnionFind uf(fs.size());
        std::map<EdgeKey, std::vector<int>> star_edges;
        for (int fi : fs) {
            const Face& f = mesh.faces[fi];
            for (int i = 0; i < f.arity; ++i) {
                int a = f.v[i], b = f.v[(i + 1) % f.arity];
                if (a == v || b == v) star_edges[EdgeKey(a, b)].push_back(fi);
            }
        }
        for (const auto& [e, efs] : star_edges)
            for (std::size_t i = 1; i < efs.size(); ++i)
                uf.unite(local[efs[0]], local[efs[i]]);
        int root = uf.find(0);
        for (std::size_t i = 1; i < fs.size(); ++i)
            if (uf.find(int(i)) != root) return false;
    }
    return true;
}

namespace {

// "Remove duplicates and loose geometry": merge bitwise-identical vertex
// coordinates and drop vertices referenced by no face.
Mesh preprocess(const Mesh& mesh) {
    std::map<std::tuple<double, double, double>, int> seen;
    std::vector<int> remap(mesh.vertices.size());
    std::vector<Vec3> verts;
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        const Vec3& v = mesh.vertices[i];
        auto [it, inserted] =
            seen.emplace(std::make_tuple(v.x, v.y, v.z), static_cast<int>(verts.size()));
        if (inserted) verts.push_back(v);
        remap[i] = it->second;
    }
    Mesh merged = remap_mesh(mesh, remap, verts);

    std::vector<bool> used(merged.vertices.size(), false);
    for (const Face& f : merged.faces)
        for (int i = 0; i < f.arity; ++i) used[f.v[i]] = true;
    std::vector<int> remap2(merged.vertices.size(), -1);
    std::vector<Vec3> verts2;
    for (std::size_t i = 0; i < merged.vertices.size(); ++i)
        if (used[i]) {
            remap2[i] = static_cast<int>(verts2.size());
            verts2.push_back(merged.vertices[i]);
        }
    Mesh out;
    out.vertices = verts2;
    out.faces = merged.faces;
    for (Face& f : out.faces)
        for (int i = 0; i < f.arity; ++i) f.v[i] = remap2[f.v[i]];
    return out;
}

} // namespace

bool detect_fracture(const Mesh& mesh, const FilterConfig& cfg) {
    Mesh clean = preprocess(mesh);
    if (clean.faces.empty()) return false;
    const double weld_dist = cfg.tau_weld * clean.bbox_diagonal();

    for (const Mesh& comp : connected_components(clean)) {
        if (static_cast<int>(comp.vertices.size()) < cfg.tau_vtx_min) continue;
        if (is_manifold(comp)) continue;

        const std::size_t edges_before = count_edges(comp);
        const std::size_t faces_before = comp.faces.size();
        Mesh welded = merge_vertices_by_distance(comp, weld_dist);
        const std::size_t edges_after = count_edges(welded);
        const std::size_t faces_after = welded.faces.size();
        if (edges_before > edges_after &&
            edges_before - edges_after > static_cast<std::size_t>(cfg.tau_edge_delta) &&
            faces_before == faces_after)
            return true;
    }
    return false;
}

std::pair<bool, double> check_aspect_ratio(const Mesh& mesh, double aspect_max) {
    double worst = 0.0;
    for (const Face& f : mesh.faces) {
        double longest = 0.0, shortest = std::numeric_limits<double>::infinity();
        for (int i = 0; i < f.arity; ++i) {
            double len = norm(mesh.vertices[f.v[i]] - mesh.vertices[f.v[(i + 1) % f.arity]]);
            longest = std::max(longest, len);
            shortest = std::min(shortest, len);
        }
        if (shortest <= 0.0) throw InvalidInput("check_aspect_ratio: zero-length edge");
        worst = std::max(worst, longest / shortest);
    }
    return {worst <= aspect_max, worst};
}

FilterVerdict run_filter(const Mesh& mesh, const FilterConfig& cfg) {
    FilterVerdict v;
    v.face_count = static_cast<int>(mesh.faces.size());
    v.component_count = static_cast<int>(connected_components(mesh).size());
    v.face_count_ok = v.face_count >= cfg.face_min && v.face_count <= cfg.face_max;
    auto [aspect_ok, worst] = check_aspect_ratio(mesh, cfg.aspect_max);
    v.aspect_ok = aspect_ok;
    v.worst_aspect = worst;
    v.fracture = detect_fracture(mesh, cfg);
    v.no_fracture = !v.fracture;
    v.pass = v.face_count_ok && v.aspect_ok && v.no_fracture;
    return v;
}

} // namespace qgpt
