#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "qgpt/codec.hpp"
#include "qgpt/error.hpp"
#include "qgpt/tri2quad.hpp"

using namespace qgpt;
namespace fx = qgpt::fixtures;

namespace {

// Exhaustive maximum-weight matching oracle, lex-smallest optimum.
void brute_force(const MatchingProblem& p, std::size_t idx, std::vector<bool>& used,
                 std::vector<int>& cur, double cur_w, std::vector<int>& best,
                 double& best_w) {
    if (idx == p.candidates.size()) {
        if (cur_w > best_w + 1e-12 ||
            (std::abs(cur_w - best_w) <= 1e-12 && cur < best)) {
            best_w = cur_w;
            best = cur;
        }
        return;
    }
    const MergeCandidate& c = p.candidates[idx];
    brute_force(p, idx + 1, used, cur, cur_w, best, best_w);
    if (!used[c.tri_a] && !used[c.tri_b]) {
        used[c.tri_a] = used[c.tri_b] = true;
        cur.push_back(c.edge_id);
        brute_force(p, idx + 1, used, cur, cur_w + c.weight, best, best_w);
        cur.pop_back();
        used[c.tri_a] = used[c.tri_b] = false;
    }
}

std::pair<std::vector<int>, double> brute_force_solve(const MatchingProblem& p) {
    std::vector<bool> used(p.triangle_count, false);
    std::vector<int> cur, best{};
    double best_w = -1.0;
    brute_force(p, 0, used, cur, 0.0, best, best_w);
    return {best, best_w};
}

MatchingProblem random_problem(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    MatchingProblem p;
    p.triangle_count = 4 + int(rng() % 7);
    std::uniform_real_distribution<double> w(0.05, 1.0);
    int id = 0;
    for (int a = 0; a < p.triangle_count; ++a)
        for (int b = a + 1; b < p.triangle_count; ++b)
            if (rng() % 3 != 0)
                p.candidates.push_back({id++, a, b, w(rng), Face::quad(0, 1, 2, 3)});
    return p;
}

} // namespace

TEST_CASE("merge weight of a perfect planar square is 1") {
    Vec3 a{0, 0, 0}, b{1, 0, 0}, c{1, 1, 0}, d{0, 1, 0};
    CHECK(merge_weight(a, b, c, d) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(max_interior_angle_deg(a, b, c, d) == doctest::Approx(90.0).epsilon(1e-9));
}

TEST_CASE("merge weight degrades with angle skew and dihedral fold") {
    Vec3 a{0, 0, 0}, b{1, 0, 0}, c{1.8, 0.6, 0}, d{0, 1, 0};
    double skewed = merge_weight(a, b, c, d);
    CHECK(skewed > 0.0);
    CHECK(skewed < 1.0);

    // fold the square along the (a,c) diagonal: dihedral reduces p
    Vec3 d_up{0, 1, 0.8};
    double folded = merge_weight(a, b, c, d_up);
    CHECK(folded < merge_weight(a, b, c, Vec3{0, 1, 0}));

    // fold past 90 degrees across the (b,d) diagonal: p clamps to 0
    CHECK(merge_weight(Vec3{0.5, 1, 0}, Vec3{0, 0, 0}, Vec3{0.5, 0.5, -2.0},
                       Vec3{1, 0, 0}) == 0.0);

    // non-convex projection is inadmissible
    Vec3 c_in{0.2, 0.2, 0};
    CHECK(merge_weight(a, b, c_in, d) == 0.0);
}

TEST_CASE("triangulated cube converts exactly to the quad cube") {
    Mesh tri = fx::tri_cube();
    MatchingProblem p = build_problem(tri);
    // one admissible candidate per face diagonal; cross-face merges fold 90deg
    CHECK(p.candidates.size() == 6);
    MatchingSolution sol = solve_exact(p);
    CHECK(sol.selected.size() == 6);
    CHECK(sol.total_weight == doctest::Approx(6.0).epsilon(1e-9));

    auto [converted, stats] = apply_and_validate(tri, p, sol);
    CHECK(stats.merged == 6);
    CHECK(stats.split_back == 0);
    CHECK(stats.quad_ratio == doctest::Approx(1.0));
    REQUIRE(converted.faces.size() == 6);
    CHECK(canonicalize(normalize(converted)) == canonicalize(normalize(fx::quad_cube())));
}

TEST_CASE("planar grids become all-quad under the exact solver") {
    for (auto [nx, ny] : {std::pair{2, 2}, std::pair{3, 2}}) {
        Mesh tri = fx::tri_grid(nx, ny);
        MatchingProblem p = build_problem(tri);
        MatchingSolution sol = solve_exact(p);
        auto [converted, stats] = apply_and_validate(tri, p, sol);
        CHECK(stats.quad_ratio == doctest::Approx(1.0));
        CHECK(int(converted.faces.size()) == nx * ny);
    }
}

TEST_CASE("exact solver matches the brute-force oracle, including tie-breaks") {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        MatchingProblem p = random_problem(seed);
        auto [oracle_sel, oracle_w] = brute_force_solve(p);
        MatchingSolution sol = solve_exact(p);
        CHECK(sol.total_weight == doctest::Approx(oracle_w).epsilon(1e-12));
        CHECK(sol.selected == oracle_sel);
    }
}

TEST_CASE("tied optima resolve to the lexicographically smallest edge set") {
    // two disjoint pairs with equal weights in both pairings
    MatchingProblem p;
    p.triangle_count = 4;
    p.candidates = {{0, 0, 1, 0.5, Face::quad(0, 1, 2, 3)},
                    {1, 2, 3, 0.5, Face::quad(0, 1, 2, 3)},
                    {2, 0, 2, 0.5, Face::quad(0, 1, 2, 3)},
                    {3, 1, 3, 0.5, Face::quad(0, 1, 2, 3)}};
    MatchingSolution sol = solve_exact(p);
    CHECK(sol.selected == std::vector<int>{0, 1});
}

TEST_CASE("greedy achieves at least half the optimal weight") {
    for (std::uint64_t seed = 100; seed < 160; ++seed) {
        MatchingProblem p = random_problem(seed);
        auto [oracle_sel, oracle_w] = brute_force_solve(p);
        MatchingSolution g = solve_greedy(p);
        CHECK(g.total_weight >= 0.5 * oracle_w - 1e-12);
        // greedy output is a valid matching
        std::vector<int> uses(p.triangle_count, 0);
        for (int id : g.selected) {
            ++uses[p.candidates[id].tri_a];
            ++uses[p.candidates[id].tri_b];
        }
        for (int u : uses) CHECK(u <= 1);
    }
}

TEST_CASE("exact solver refuses oversized instances, greedy handles them") {
    Mesh big = fx::tri_grid(4, 4);  // 32 triangles
    MatchingProblem p = build_problem(big);
    CHECK_THROWS_AS(solve_exact(p), InvalidInput);
    MatchingSolution g = solve_greedy(p);
    auto [converted, stats] = apply_and_validate(big, p, g);
    CHECK(stats.quad_ratio > 0.0);
    converted.validate();
}

TEST_CASE("quads exceeding the angle cap are split back into their triangles") {
    // planar quad with a ~170 degree interior angle at vertex b
    Mesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {2, 0.176, 0}, {0.5, 1.5, 0}};
    m.faces = {Face::tri(0, 1, 2), Face::tri(0, 2, 3)};
    MatchingProblem p = build_problem(m);
    REQUIRE(p.candidates.size() == 1);
    double worst = max_interior_angle_deg(m.vertices[0], m.vertices[1], m.vertices[2],
                                          m.vertices[3]);
    CHECK(worst > 150.0);
    CHECK(worst < 175.0);

    MatchingSolution sol = solve_exact(p);
    REQUIRE(sol.selected.size() == 1);

    auto [strict, strict_stats] = apply_and_validate(m, p, sol, 150.0);
    CHECK(strict_stats.split_back == 1);
    CHECK(strict_stats.merged == 0);
    CHECK(strict.faces.size() == 2);
    for (const Face& f : strict.faces) CHECK(f.arity == 3);

    auto [loose, loose_stats] = apply_and_validate(m, p, sol, 179.0);
    CHECK(loose_stats.split_back == 0);
    CHECK(loose_stats.merged == 1);
    REQUIRE(loose.faces.size() == 1);
    CHECK(loose.faces[0].arity == 4);
}

TEST_CASE("conversion preserves input face order for unmatched triangles") {
    Mesh tri = fx::tri_cube();
    MatchingProblem p = build_problem(tri);
    MatchingSolution none;
    none.tri_used.assign(tri.faces.size(), false);
    auto [out, stats] = apply_and_validate(tri, p, none);
    CHECK(stats.merged == 0);
    CHECK(out.faces == tri.faces);
}
