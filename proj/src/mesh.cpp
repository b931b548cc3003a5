#include "qgpt/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <unordered_map>

#include "qgpt/error.hpp"

namespace qgpt {

void Mesh::validate() const {
    const int nv = static_cast<int>(vertices.size());
    for (std::size_t fi = 0; fi < faces.size(); ++fi) {
        const Face& f = faces[fi];
        if (f.arity != 3 && f.arity != 4)
            throw InvalidInput("face " + std::to_string(fi) + " has arity " +
                               std::to_string(f.arity));
        for (int i = 0; i < f.arity; ++i) {
            if (f.v[i] < 0 || f.v[i] >= nv)
                throw InvalidInput("face " + std::to_string(fi) +
                                   " references vertex " + std::to_string(f.v[i]) +
                                   " out of range");
            for (int j = i + 1; j < f.arity; ++j)
                if (f.v[i] == f.v[j])
                    throw InvalidInput("face " + std::to_string(fi) +
                                       " repeats vertex " + std::to_string(f.v[i]));
        }
    }
}

Vec3 Mesh::bbox_min() const {
    Vec3 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()};
    for (const Vec3& v : vertices) {
        lo.x = std::min(lo.x, v.x);
        lo.y = std::min(lo.y, v.y);
        lo.z = std::min(lo.z, v.z);
    }
    return lo;
}

Vec3 Mesh::bbox_max() const {
    Vec3 hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
            -std::numeric_limits<double>::infinity()};
    for (const Vec3& v : vertices) {
        hi.x = std::max(hi.x, v.x);
        hi.y = std::max(hi.y, v.y);
        hi.z = std::max(hi.z, v.z);
    }
    return hi;
}

double Mesh::bbox_diagonal() const {
    if (vertices.empty()) return 0.0;
    return norm(bbox_max() - bbox_min());
}

EdgeAdjacency::EdgeAdjacency(const Mesh& mesh) {
    for (std::size_t fi = 0; fi < mesh.faces.size(); ++fi) {
        const Face& f = mesh.faces[fi];
        for (int i = 0; i < f.arity; ++i) {
            EdgeKey e(f.v[i], f.v[(i + 1) % f.arity]);
            edge_faces_[e].push_back(static_cast<int>(fi));
        }
    }
}

const std::vector<int>* EdgeAdjacency::faces_of(const EdgeKey& e) const {
    auto it = edge_faces_.find(e);
    return it == edge_faces_.end() ? nullptr : &it->second;
}

bool EdgeAdjacency::is_boundary(const EdgeKey& e) const {
    const auto* fs = faces_of(e);
    return fs && fs->size() == 1;
}

bool EdgeAdjacency::is_non_manifold(const EdgeKey& e) const {
    const auto* fs = faces_of(e);
    return fs && fs->size() > 2;
}

EdgeKey EdgeAdjacency::opposite_edge(const Face& f, const EdgeKey& e) {
    if (f.arity != 4) throw InvalidInput("opposite_edge requires a quad face");
    for (int i = 0; i < 4; ++i) {
        EdgeKey side(f.v[i], f.v[(i + 1) % 4]);
        if (side == e) return EdgeKey(f.v[(i + 2) % 4], f.v[(i + 3) % 4]);
    }
    throw InvalidInput("edge is not a side of the given quad");
}

Mesh normalize(const Mesh& mesh) {
    if (mesh.vertices.empty()) throw InvalidInput("normalize: mesh has no vertices");
    for (const Vec3& v : mesh.vertices)
        if (!std::isfinite(v.x) || !std::isfinite(v.y) || !std::isfinite(v.z))
            throw InvalidInput("normalize: non-finite vertex coordinate");

    const Vec3 lo = mesh.bbox_min();
    const Vec3 hi = mesh.bbox_max();
    const Vec3 extent = hi - lo;
    const double longest = std::max({extent.x, extent.y, extent.z});
    if (longest <= 0.0) throw InvalidInput("normalize: degenerate bounding box extent");

    const Vec3 center = (lo + hi) * 0.5;
    const double scale = 1.9 / longest;

    Mesh out = mesh;
    for (Vec3& v : out.vertices) v = (v - center) * scale;
    return out;
}

std::vector<Mesh> connected_components(const Mesh& mesh) {
    const std::size_t nf = mesh.faces.size();
    if (nf == 0) return {};

    // Union-find over faces via shared vertices.
    std::vector<int> parent(nf);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    };

    std::unordered_map<int, int> vertex_first_face;
    for (std::size_t fi = 0; fi < nf; ++fi) {
        const Face& f = mesh.faces[fi];
        for (int i = 0; i < f.arity; ++i) {
            auto [it, inserted] = vertex_first_face.emplace(f.v[i], static_cast<int>(fi));
            if (!inserted) unite(it->second, static_cast<int>(fi));
        }
    }

    // Components keyed by root, in order of first appearance.
    std::unordered_map<int, int> root_to_comp;
    std::vector<Mesh> comps;
    std::vector<std::unordered_map<int, int>> vertex_remap;
    for (std::size_t fi = 0; fi < nf; ++fi) {
        int root = find(static_cast<int>(fi));
        auto [it, inserted] = root_to_comp.emplace(root, static_cast<int>(comps.size()));
        if (inserted) {
            comps.emplace_back();
            vertex_remap.emplace_back();
        }
        Mesh& comp = comps[it->second];
        auto& remap = vertex_remap[it->second];
        Face nf2 = mesh.faces[fi];
        for (int i = 0; i < nf2.arity; ++i) {
            auto [vit, vnew] = remap.emplace(nf2.v[i], static_cast<int>(comp.vertices.size()));
            if (vnew) comp.vertices.push_back(mesh.vertices[nf2.v[i]]);
            nf2.v[i] = vit->second;
        }
        comp.faces.push_back(nf2);
    }
    return comps;
}

std::set<int> boundary_faces(const Mesh& mesh) {
    EdgeAdjacency adj(mesh);
    std::set<int> out;
    for (const auto& [edge, fs] : adj.edges())
        if (fs.size() == 1) out.insert(fs.front());
    return out;
}

namespace {

struct SampleTri {
    Vec3 a, b, c;
    Vec3 normal;
    double area;
};

} // namespace

PointCloud sample_point_cloud(const Mesh& mesh, std::size_t n, double noise_scale,
                              std::uint64_t seed) {
    std::vector<SampleTri> tris;
    for (const Face& f : mesh.faces) {
        auto add = [&](int i, int j, int k) {
            const Vec3& a = mesh.vertices[f.v[i]];
            const Vec3& b = mesh.vertices[f.v[j]];
            const Vec3& c = mesh.vertices[f.v[k]];
            Vec3 cr = cross(b - a, c - a);
            double area = 0.5 * norm(cr);
            if (area > 0.0) tris.push_back({a, b, c, normalized(cr), area});
        };
        add(0, 1, 2);
        if (f.arity == 4) add(0, 2, 3);  // split along the (v0,v2) diagonal
    }

    double total_area = 0.0;
    for (const SampleTri& t : tris) total_area += t.area;
    if (tris.empty() || total_area <= 0.0)
        throw InvalidInput("sample_point_cloud: mesh has zero total surface area");

    std::vector<double> cum(tris.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < tris.size(); ++i) {
        acc += tris[i].area;
        cum[i] = acc;
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double sigma = noise_scale * mesh.bbox_diagonal();

    PointCloud cloud;
    cloud.points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double r = uni(rng) * total_area;
        std::size_t ti = std::lower_bound(cum.begin(), cum.end(), r) - cum.begin();
        if (ti >= tris.size()) ti = tris.size() - 1;
        const SampleTri& t = tris[ti];

        double u = uni(rng), v = uni(rng);
        if (u + v > 1.0) {
            u = 1.0 - u;
            v = 1.0 - v;
        }
        Vec3 p = t.a + (t.b - t.a) * u + (t.c - t.a) * v;
        if (sigma > 0.0) p += Vec3{gauss(rng), gauss(rng), gauss(rng)} * sigma;
        cloud.points.push_back({p.x, p.y, p.z, t.normal.x, t.normal.y, t.normal.z});
    }
    return cloud;
}

} // namespace qgpt
