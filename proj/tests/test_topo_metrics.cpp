#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "qgpt/error.hpp"
#include "qgpt/topo_metrics.hpp"

using namespace qgpt;
namespace fx = qgpt::fixtures;

namespace {

std::vector<std::size_t> sorted_sizes(const std::vector<std::vector<int>>& walks) {
    std::vector<std::size_t> s;
    for (const auto& w : walks) s.push_back(w.size());
    std::sort(s.begin(), s.end());
    return s;
}

PointCloud cloud_of(std::vector<std::array<double, 3>> pts) {
    PointCloud c;
    for (auto& p : pts) c.points.push_back({p[0], p[1], p[2], 0, 0, 1});
    return c;
}

} // namespace

TEST_CASE("cube: three rings of four faces, no lines") {
    auto [rings, lines] = discover_rings_and_lines(fx::quad_cube());
    CHECK(lines.empty());
    REQUIRE(rings.size() == 3);
    for (const auto& r : rings) CHECK(r.size() == 4);
    // the three rings partition nothing -- every face sits on exactly 2 rings
    std::vector<int> face_hits(6, 0);
    for (const auto& r : rings)
        for (int f : r) ++face_hits[f];
    for (int h : face_hits) CHECK(h == 2);

    TopoScore s = topo_score(fx::quad_cube());
    CHECK(s.l_avg == 0.0);
    CHECK(s.ring_face_ratio == doctest::Approx(1.0));
    CHECK(s.fracture_count == 0);
}

TEST_CASE("1x4 strip: one long line plus four transverse stubs") {
    auto [rings, lines] = discover_rings_and_lines(fx::quad_strip(4));
    CHECK(rings.empty());
    CHECK(sorted_sizes(lines) == std::vector<std::size_t>{1, 1, 1, 1, 4});
    TopoScore s = topo_score(fx::quad_strip(4));
    CHECK(s.l_avg == doctest::Approx(1.6));
    CHECK(s.ring_face_ratio == 0.0);
}

TEST_CASE("single quad: two crossing lines of length one") {
    auto [rings, lines] = discover_rings_and_lines(fx::single_quad());
    CHECK(rings.empty());
    CHECK(sorted_sizes(lines) == std::vector<std::size_t>{1, 1});
    CHECK(topo_score(fx::single_quad()).l_avg == doctest::Approx(1.0));
}

TEST_CASE("closed quad grid ring structure survives face reordering") {
    Mesh base = fx::quad_cube();
    auto [rings0, lines0] = discover_rings_and_lines(base);
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        Mesh shuffled = base;
        std::shuffle(shuffled.faces.begin(), shuffled.faces.end(), rng);
        auto [rings, lines] = discover_rings_and_lines(shuffled);
        CHECK(sorted_sizes(rings) == sorted_sizes(rings0));
        CHECK(sorted_sizes(lines) == sorted_sizes(lines0));
    }
    // the same holds for open surfaces in bidirectional mode
    Mesh strip = fx::quad_strip(4);
    auto sizes0 = sorted_sizes(discover_rings_and_lines(strip).second);
    std::reverse(strip.faces.begin(), strip.faces.end());
    CHECK(sorted_sizes(discover_rings_and_lines(strip).second) == sizes0);
}

TEST_CASE("one-directional mode still finds the cube rings") {
    auto [rings, lines] = discover_rings_and_lines(fx::quad_cube(), WalkMode::PaperLiteral);
    REQUIRE(rings.size() == 3);
    for (const auto& r : rings) CHECK(r.size() == 4);
}

TEST_CASE("triangles and non-manifold edges terminate walks") {
    // strip of 3 quads with a triangle glued after the last quad
    Mesh m = fx::quad_strip(3);
    int tip = int(m.vertices.size());
    m.vertices.push_back({4.0, 0.5, 0.0});
    m.faces.push_back(Face::tri(6, tip, 7));
    auto [rings, lines] = discover_rings_and_lines(m);
    CHECK(rings.empty());
    // the long walk still spans the 3 quads; the triangle joins nothing
    CHECK(sorted_sizes(lines) == std::vector<std::size_t>{1, 1, 1, 3});

    // third face on a strip edge makes it non-manifold: the long walk splits
    Mesh nm = fx::quad_strip(3);
    int a = int(nm.vertices.size());
    nm.vertices.push_back({2.0, 0.0, 1.0});
    nm.vertices.push_back({2.0, 1.0, 1.0});
    nm.faces.push_back(Face::quad(4, a, a + 1, 5));  // shares edge (4,5) with quads 1,2
    auto [rings2, lines2] = discover_rings_and_lines(nm);
    CHECK(rings2.empty());
    auto sizes = sorted_sizes(lines2);
    CHECK(std::count(sizes.begin(), sizes.end(), 3) == 0);  // no walk crosses the seam
}

TEST_CASE("fracture count measures boundary faces below the generation frontier") {
    // vertical 1x3 stack in the z=0 plane, up axis = Y
    Mesh m = fx::quad_grid(1, 3);
    std::vector<int> order{0, 1, 2};  // last face on top: frontier = y=2
    CHECK(fracture_count(m, order, Axis::Y) == 2);

    std::vector<int> reversed{2, 1, 0};  // last face at bottom: nothing below
    CHECK(fracture_count(m, reversed, Axis::Y) == 0);

    CHECK(fracture_count(Mesh{}, {}, Axis::Y) == 0);

    TopoScore s = topo_score(m);  // file order: same as `order`
    CHECK(s.fracture_count == 2);
    CHECK(s.r_frac == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("closed surfaces have zero fracture count from any order") {
    Mesh cube = fx::quad_cube();
    std::vector<int> order(cube.faces.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(3);
    for (int t = 0; t < 10; ++t) {
        std::shuffle(order.begin(), order.end(), rng);
        CHECK(fracture_count(cube, order, Axis::Y) == 0);
    }
}

TEST_CASE("chamfer and hausdorff on a hand-computed fixture") {
    PointCloud a = cloud_of({{0, 0, 0}, {1, 0, 0}});
    PointCloud b = cloud_of({{0, 0, 0}});
    CHECK(chamfer_distance(a, b) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(hausdorff_distance(a, b) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(chamfer_distance(b, a) == doctest::Approx(0.25).epsilon(1e-12));

    CHECK(chamfer_distance(a, a) == 0.0);
    CHECK(hausdorff_distance(a, a) == 0.0);
}

TEST_CASE("nearest-neighbor search matches the quadratic oracle") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto random_cloud = [&](std::size_t n) {
        PointCloud c;
        for (std::size_t i = 0; i < n; ++i)
            c.points.push_back({u(rng), u(rng), u(rng), 0, 0, 1});
        return c;
    };
    auto brute = [](const PointCloud& x, const PointCloud& y) {
        double mean = 0.0, mx = 0.0;
        for (const auto& p : x.points) {
            double best = 1e300;
            for (const auto& q : y.points) {
                double dx = p[0] - q[0], dy = p[1] - q[1], dz = p[2] - q[2];
                best = std::min(best, std::sqrt(dx * dx + dy * dy + dz * dz));
            }
            mean += best;
            mx = std::max(mx, best);
        }
        return std::pair{mean / double(x.points.size()), mx};
    };
    for (int t = 0; t < 5; ++t) {
        PointCloud a = random_cloud(157), b = random_cloud(203);
        auto [mab, xab] = brute(a, b);
        auto [mba, xba] = brute(b, a);
        CHECK(chamfer_distance(a, b) == doctest::Approx(0.5 * mab + 0.5 * mba).epsilon(1e-12));
        CHECK(hausdorff_distance(a, b) == doctest::Approx(std::max(xab, xba)).epsilon(1e-12));
    }
}

TEST_CASE("quad ratio") {
    CHECK(quad_ratio(fx::quad_cube()) == doctest::Approx(1.0));
    CHECK(quad_ratio(fx::tri_cube()) == doctest::Approx(0.0));
    Mesh mixed = fx::quad_strip(2);
    int tip = int(mixed.vertices.size());
    mixed.vertices.push_back({3.0, 0.5, 0.0});
    mixed.faces.push_back(Face::tri(4, tip, 5));
    mixed.faces.push_back(Face::tri(5, tip, 4));
    CHECK(quad_ratio(mixed) == doctest::Approx(0.5));
    CHECK_THROWS_AS(quad_ratio(Mesh{}), InvalidInput);
}
