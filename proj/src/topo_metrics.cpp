#include "qgpt/topo_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "qgpt/error.hpp"

namespace qgpt {

int fracture_count(const Mesh& mesh, const std::vector<int>& face_order, Axis up_axis) {
    if (mesh.faces.empty() || face_order.empty()) return 0;
    const int up = static_cast<int>(up_axis);

    const Face& last = mesh.faces.at(face_order.back());
    double frontier = std::numeric_limits<double>::infinity();
    for (int i = 0; i < last.arity; ++i)
        frontier = std::min(frontier, mesh.vertices[last.v[i]][up]);

    int count = 0;
    for (int fi : boundary_faces(mesh)) {
        const Face& f = mesh.faces[fi];
        bool below = true;
        for (int i = 0; i < f.arity && below; ++i)
            below = mesh.vertices[f.v[i]][up] <= frontier + 1e-9;
        count += below;
    }
    return count;
}

namespace {

struct WalkTables {
    const Mesh* mesh;
    EdgeAdjacency adj;
    explicit WalkTables(const Mesh& m) : mesh(&m), adj(m) {}

    // Quads adjacent to e, excluding prev_face; empty when e is non-manifold
    // (walks terminate there). Sorted ascending by face id.
    std::vector<int> next_quads(const EdgeKey& e, int prev_face) const {
        std::vector<int> out;
        const auto* fs = adj.faces_of(e);
        if (!fs || fs->size() > 2) return out;
        for (int fi : *fs)
            if (fi != prev_face && mesh->faces[fi].arity == 4) out.push_back(fi);
        std::sort(out.begin(), out.end());
        return out;
    }
};

struct WalkResult {
    std::vector<int> faces;
    std::vector<EdgeKey> edges;
    bool closed = false;  // returned to the start edge
};

// One-directional walk per Algorithm semantics: follow opposite edges across
// quads until no next quad exists or an already-seen edge is reached.
// `seen` carries edges from a previous direction so a stitched walk cannot
// re-consume them.
WalkResult walk_from(const WalkTables& t, const EdgeKey& start, int first_prev,
                     const std::set<EdgeKey>& seen) {
    WalkResult r;
    std::set<EdgeKey> path_edges = seen;
    EdgeKey current = start;
    int prev = first_prev;
    while (true) {
        if (path_edges.count(current)) {
            r.closed = current == start;
            break;
        }
        path_edges.insert(current);
        r.edges.push_back(current);
        std::vector<int> quads = t.next_quads(current, prev);
        if (quads.empty()) break;
        int q = quads.front();  // lowest face id on ambiguity
        r.faces.push_back(q);
        current = EdgeAdjacency::opposite_edge(t.mesh->faces[q], current);
        prev = q;
    }
    return r;
}

} // namespace

std::pair<std::vector<std::vector<int>>, std::vector<std::vector<int>>>
discover_rings_and_lines(const Mesh& mesh, WalkMode mode) {
    WalkTables tables(mesh);
    std::set<EdgeKey> processed;
    std::vector<std::vector<int>> rings, lines;

    for (const auto& [start, incident] : tables.adj.edges()) {
        if (processed.count(start)) continue;

        WalkResult fwd = walk_from(tables, start, -1, {});
        std::vector<int> faces = fwd.faces;
        std::vector<EdgeKey> edges = fwd.edges;
        bool closed = fwd.closed;

        if (!closed && mode == WalkMode::Bidirectional && !fwd.faces.empty()) {
            // Walk the other way: exclude the quad taken first.
            std::set<EdgeKey> seen(fwd.edges.begin() + 1, fwd.edges.end());
            WalkResult back = walk_from(tables, start, fwd.faces.front(), seen);
            if (!back.faces.empty()) {
                std::reverse(back.faces.begin(), back.faces.end());
                faces.insert(faces.begin(), back.faces.begin(), back.faces.end());
                // back.edges[0] == start, already recorded
                edges.insert(edges.end(), back.edges.begin() + 1, back.edges.end());
            }
        }

        for (const EdgeKey& e : edges) processed.insert(e);
        if (faces.empty()) continue;
        if (closed) rings.push_back(std::move(faces));
        else lines.push_back(std::move(faces));
    }
    return {std::move(rings), std::move(lines)};
}

TopoScore topo_score(const Mesh& mesh, const std::vector<int>& face_order,
                     const TopoConfig& cfg) {
    TopoScore s;
    s.fracture_count = fracture_count(mesh, face_order, cfg.up_axis);
    s.r_frac = double(s.fracture_count) / double(std::max<std::size_t>(1, mesh.faces.size()));

    auto [rings, lines] = discover_rings_and_lines(mesh, cfg.walk_mode);
    s.rings = std::move(rings);
    s.lines = std::move(lines);

    if (!s.lines.empty()) {
        std::size_t total = 0;
        for (const auto& l : s.lines) total += l.size();
        s.l_avg = double(total) / double(s.lines.size());
    }

    if (!mesh.faces.empty()) {
        std::set<int> ring_faces;
        for (const auto& r : s.rings) ring_faces.insert(r.begin(), r.end());
        s.ring_face_ratio = double(ring_faces.size()) / double(mesh.faces.size());
    }
    return s;
}

TopoScore topo_score(const Mesh& mesh, const TopoConfig& cfg) {
    std::vector<int> order(mesh.faces.size());
    std::iota(order.begin(), order.end(), 0);
    return topo_score(mesh, order, cfg);
}

// ---- point-cloud distances -------------------------------------------------

namespace {

// Minimal exact kd-tree over xyz.
class KdTree {
public:
    explicit KdTree(const PointCloud& cloud) {
        pts_.reserve(cloud.points.size());
        for (const auto& p : cloud.points) pts_.push_back({p[0], p[1], p[2]});
        index_.resize(pts_.size());
        std::iota(index_.begin(), index_.end(), 0);
        nodes_.reserve(2 * pts_.size());
        root_ = build(0, pts_.size());
    }

    double nearest_dist2(const Vec3& q) const {
        double best = std::numeric_limits<double>::infinity();
        query(root_, q, best);
        return best;
    }

private:
    struct Node {
        int axis = -1;        // -1 = leaf
        double split = 0.0;
        int left = -1, right = -1;
        std::size_t begin = 0, end = 0;
    };

    int build(std::size_t begin, std::size_t end) {
        Node n;
        n.begin = begin;
        n.end = end;
        if (end - begin <= 8) {
            nodes_.push_back(n);
            return static_cast<int>(nodes_.size() - 1);
        }
        Vec3 lo{1e300, 1e300, 1e300}, hi{-1e300, -1e300, -1e300};
        for (std::size_t i = begin; i < end; ++i) {
            const Vec3& p = pts_[index_[i]];
            lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
            hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
        }
        Vec3 ext = hi - lo;
        n.axis = ext.x >= ext.y && ext.x >= ext.z ? 0 : (ext.y >= ext.z ? 1 : 2);
        std::size_t mid = (begin + end) / 2;
        std::nth_element(index_.begin() + begin, index_.begin() + mid, index_.begin() + end,
                         [&](int a, int b) { return pts_[a][n.axis] < pts_[b][n.axis]; });
        n.split = pts_[index_[mid]][n.axis];
        int self = static_cast<int>(nodes_.size());
        nodes_.push_back(n);
        int left = build(begin, mid);
        int right = build(mid, end);
        nodes_[self].left = left;
        nodes_[self].right = right;
        return self;
    }

    void query(int node_id, const Vec3& q, double& best) const {
        const Node& n = nodes_[node_id];
        if (n.axis < 0) {
            for (std::size_t i = n.begin; i < n.end; ++i)
                best = std::min(best, norm2(pts_[index_[i]] - q));
            return;
        }
        double delta = q[n.axis] - n.split;
        int near = delta < 0 ? n.left : n.right;
        int far = delta < 0 ? n.right : n.left;
        query(near, q, best);
        if (delta * delta < best) query(far, q, best);
    }

    std::vector<Vec3> pts_;
    std::vector<int> index_;
    std::vector<Node> nodes_;
    int root_ = -1;
};

void require_nonempty(const PointCloud& a, const PointCloud& b) {
    if (a.points.empty() || b.points.empty())
        throw InvalidInput("point-cloud distance requires nonempty clouds");
}

} // namespace

double chamfer_distance(const PointCloud& a, const PointCloud& b) {
    require_nonempty(a, b);
    KdTree ta(a), tb(b);
    double sum_ab = 0.0, sum_ba = 0.0;
    for (const auto& p : a.points) sum_ab += std::sqrt(tb.nearest_dist2({p[0], p[1], p[2]}));
    for (const auto& p : b.points) sum_ba += std::sqrt(ta.nearest_dist2({p[0], p[1], p[2]}));
    return 0.5 * sum_ab / double(a.points.size()) + 0.5 * sum_ba / double(b.points.size());
}

double hausdorff_distance(const PointCloud& a, const PointCloud& b) {
    require_nonempty(a, b);
    KdTree ta(a), tb(b);
    double max_ab = 0.0, max_ba = 0.0;
    for (const auto& p : a.points) max_ab = std::max(max_ab, tb.nearest_dist2({p[0], p[1], p[2]}));
    for (const auto& p : b.points) max_ba = std::max(max_ba, ta.nearest_dist2({p[0], p[1], p[2]}));
    return std::sqrt(std::max(max_ab, max_ba));
}

double quad_ratio(const Mesh& mesh) {
    if (mesh.faces.empty()) throw InvalidInput("quad_ratio: empty mesh");
    std::size_t quads = 0;
    for (const Face& f : mesh.faces) quads += f.arity == 4;
    return double(quads) / double(mesh.faces.size());
}

} // namespace qgpt
