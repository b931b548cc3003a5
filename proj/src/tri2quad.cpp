#include "qgpt/tri2quad.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qgpt/error.hpp"

namespace qgpt {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Newell normal, a stable plane normal for near-planar polygons.
Vec3 newell_normal(const Vec3* pts, int n) {
    Vec3 nrm{};
    for (int i = 0; i < n; ++i) {
        const Vec3& p = pts[i];
        const Vec3& q = pts[(i + 1) % n];
        nrm.x += (p.y - q.y) * (p.z + q.z);
        nrm.y += (p.z - q.z) * (p.x + q.x);
        nrm.z += (p.x - q.x) * (p.y + q.y);
    }
    return normalized(nrm);
}

struct ProjectedQuad {
    double u[4], v[4];
    bool valid = false;  // convex and simple in projection
};

// Projects the quad onto its least-squares plane and checks that it is a
// simple convex polygon there (all corner cross products same sign).
ProjectedQuad project_quad(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    const Vec3 pts[4] = {a, b, c, d};
    ProjectedQuad out;
    Vec3 n = newell_normal(pts, 4);
    if (norm(n) == 0.0) return out;

    // Plane basis.
    Vec3 ref = std::abs(n.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    Vec3 e1 = normalized(cross(n, ref));
    Vec3 e2 = cross(n, e1);
    Vec3 centroid = (a + b + c + d) * 0.25;
    for (int i = 0; i < 4; ++i) {
        Vec3 r = pts[i] - centroid;
        out.u[i] = dot(r, e1);
        out.v[i] = dot(r, e2);
    }

    int sign = 0;
    for (int i = 0; i < 4; ++i) {
        int j = (i + 1) % 4, k = (i + 2) % 4;
        double cr = (out.u[j] - out.u[i]) * (out.v[k] - out.v[j]) -
                    (out.v[j] - out.v[i]) * (out.u[k] - out.u[j]);
        if (cr == 0.0) return out;  // collinear corner
        int s = cr > 0 ? 1 : -1;
        if (sign == 0) sign = s;
        else if (s != sign) return out;  // non-convex or self-intersecting
    }
    out.valid = true;
    return out;
}

double projected_angle_deg(const ProjectedQuad& q, int i) {
    int prev = (i + 3) % 4, next = (i + 1) % 4;
    double ax = q.u[prev] - q.u[i], ay = q.v[prev] - q.v[i];
    double bx = q.u[next] - q.u[i], by = q.v[next] - q.v[i];
    double la = std::hypot(ax, ay), lb = std::hypot(bx, by);
    if (la == 0.0 || lb == 0.0) return 180.0;
    double cosang = std::clamp((ax * bx + ay * by) / (la * lb), -1.0, 1.0);
    return std::acos(cosang) * 180.0 / kPi;
}

} // namespace

double max_interior_angle_deg(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    ProjectedQuad q = project_quad(a, b, c, d);
    double worst = 0.0;
    for (int i = 0; i < 4; ++i) worst = std::max(worst, projected_angle_deg(q, i));
    return worst;
}

double merge_weight(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    ProjectedQuad q = project_quad(a, b, c, d);
    if (!q.valid) return 0.0;

    double worst_dev = 0.0;
    for (int i = 0; i < 4; ++i)
        worst_dev = std::max(worst_dev, std::abs(projected_angle_deg(q, i) - 90.0));
    double angle_term = std::clamp(1.0 - worst_dev / 90.0, 0.0, 1.0);

    // Dihedral between the two source triangles (a,b,c) | (a,c,d) split is
    // not what was merged; use the triangles on either side of the dissolved
    // diagonal (b,d): (b,c,d) and (d,a,b).
    Vec3 n1 = normalized(cross(c - b, d - b));
    Vec3 n2 = normalized(cross(a - d, b - d));
    double planarity = std::max(0.0, dot(n1, n2));

    return angle_term * planarity;
}

MatchingProblem build_problem(const Mesh& mesh) {
    mesh.validate();
    for (const Face& f : mesh.faces)
        if (f.arity != 3)
            throw InvalidInput("build_problem: mesh contains non-triangle faces");

    MatchingProblem p;
    p.triangle_count = static_cast<int>(mesh.faces.size());

    EdgeAdjacency adj(mesh);
    for (const auto& [edge, fs] : adj.edges()) {
        if (fs.size() != 2) continue;  // boundary or non-manifold
        int ta = fs[0], tb = fs[1];
        const Face& f1 = mesh.faces[ta];
        const Face& f2 = mesh.faces[tb];

        // Find the directed occurrence u->v of the shared edge in f1; with
        // consistent winding f2 holds v->u. Quad = (w1, u, w2, v) where w1/w2
        // are the off-edge vertices.
        int u = -1, v = -1, w1 = -1, w2 = -1;
        for (int i = 0; i < 3; ++i) {
            int s = f1.v[i], t = f1.v[(i + 1) % 3];
            if (EdgeKey(s, t) == edge) {
                u = s;
                v = t;
                w1 = f1.v[(i + 2) % 3];
                break;
            }
        }
        for (int i = 0; i < 3; ++i)
            if (f2.v[i] != u && f2.v[i] != v) w2 = f2.v[i];
        if (u < 0 || w2 < 0) continue;

        Face quad = Face::quad(w1, u, w2, v);
        double w = merge_weight(mesh.vertices[w1], mesh.vertices[u],
                                mesh.vertices[w2], mesh.vertices[v]);
        if (w < kAdmissibleWeightMin) continue;

        MergeCandidate cand;
        cand.edge_id = static_cast<int>(p.candidates.size());
        cand.tri_a = std::min(ta, tb);
        cand.tri_b = std::max(ta, tb);
        cand.weight = w;
        cand.quad = quad;
        p.candidates.push_back(cand);
    }
    return p;
}

namespace {

struct BnbState {
    const MatchingProblem* p;
    std::vector<int> order;        // candidate ids, descending weight
    std::vector<double> suffix;    // suffix weight sums over `order`
    std::vector<bool> used;
    std::vector<int> current;
    std::vector<int> best_set;
    double best_weight = -1.0;

    void search(std::size_t i, double acc) {
        if (i == order.size()) {
            finish(acc);
            return;
        }
        if (acc + suffix[i] < best_weight - 1e-12) return;

        const MergeCandidate& c = p->candidates[order[i]];
        if (!used[c.tri_a] && !used[c.tri_b]) {
            used[c.tri_a] = used[c.tri_b] = true;
            current.push_back(c.edge_id);
            search(i + 1, acc + c.weight);
            current.pop_back();
            used[c.tri_a] = used[c.tri_b] = false;
        }
        search(i + 1, acc);
    }

    void finish(double acc) {
        std::vector<int> sorted = current;
        std::sort(sorted.begin(), sorted.end());
        if (acc > best_weight + 1e-12 ||
            (std::abs(acc - best_weight) <= 1e-12 && sorted < best_set)) {
            best_weight = acc;
            best_set = std::move(sorted);
        }
    }
};

} // namespace

MatchingSolution solve_exact(const MatchingProblem& p) {
    if (p.triangle_count > kExactSolverBound)
        throw InvalidInput("solve_exact: " + std::to_string(p.triangle_count) +
                           " triangles exceeds the exact-solver bound of " +
                           std::to_string(kExactSolverBound));

    BnbState st;
    st.p = &p;
    st.order.resize(p.candidates.size());
    std::iota(st.order.begin(), st.order.end(), 0);
    std::sort(st.order.begin(), st.order.end(), [&](int a, int b) {
        if (p.candidates[a].weight != p.candidates[b].weight)
            return p.candidates[a].weight > p.candidates[b].weight;
        return a < b;
    });
    st.suffix.assign(st.order.size() + 1, 0.0);
    for (std::size_t i = st.order.size(); i-- > 0;)
        st.suffix[i] = st.suffix[i + 1] + p.candidates[st.order[i]].weight;
    st.used.assign(std::max(p.triangle_count, 1), false);
    st.best_weight = -1.0;
    st.search(0, 0.0);

    MatchingSolution sol;
    sol.selected = st.best_set;
    sol.tri_used.assign(p.triangle_count, false);
    for (int id : sol.selected) {
        const MergeCandidate& c = p.candidates[id];
        sol.total_weight += c.weight;
        sol.tri_used[c.tri_a] = sol.tri_used[c.tri_b] = true;
    }
    return sol;
}

MatchingSolution solve_greedy(const MatchingProblem& p) {
    std::vector<int> order(p.candidates.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (p.candidates[a].weight != p.candidates[b].weight)
            return p.candidates[a].weight > p.candidates[b].weight;
        return a < b;
    });

    MatchingSolution sol;
    sol.tri_used.assign(p.triangle_count, false);
    for (int id : order) {
        const MergeCandidate& c = p.candidates[id];
        if (sol.tri_used[c.tri_a] || sol.tri_used[c.tri_b]) continue;
        sol.tri_used[c.tri_a] = sol.tri_used[c.tri_b] = true;
        sol.selected.push_back(id);
        sol.total_weight += c.weight;
    }
    std::sort(sol.selected.begin(), sol.selected.end());
    return sol;
}

std::pair<Mesh, ConversionStats> apply_and_validate(const Mesh& mesh,
                                                    const MatchingProblem& p,
                                                    const MatchingSolution& sol,
                                                    double max_angle_deg) {
    // Per-triangle: id of the surviving merge it belongs to, or -1.
    std::vector<int> merge_of(mesh.faces.size(), -1);
    ConversionStats stats;
    for (int id : sol.selected) {
        const MergeCandidate& c = p.candidates[id];
        const Face& q = c.quad;
        double worst = max_interior_angle_deg(mesh.vertices[q.v[0]], mesh.vertices[q.v[1]],
                                              mesh.vertices[q.v[2]], mesh.vertices[q.v[3]]);
        if (worst > max_angle_deg) {
            ++stats.split_back;
            continue;
        }
        merge_of[c.tri_a] = id;
        merge_of[c.tri_b] = id;
        ++stats.merged;
    }

    Mesh out;
    out.vertices = mesh.vertices;
    std::vector<bool> emitted(p.candidates.size(), false);
    for (std::size_t fi = 0; fi < mesh.faces.size(); ++fi) {
        int id = merge_of[fi];
        if (id < 0) {
            out.faces.push_back(mesh.faces[fi]);
        } else if (!emitted[id]) {
            emitted[id] = true;
            out.faces.push_back(p.candidates[id].quad);
        }
    }

    std::size_t quads = 0;
    for (const Face& f : out.faces) quads += f.arity == 4;
    stats.quad_ratio = out.faces.empty() ? 0.0 : double(quads) / double(out.faces.size());
    return {std::move(out), stats};
}

} // namespace qgpt
