#pragma once
// Shared procedural meshes for the test suites.
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "qgpt/mesh.hpp"

namespace qgpt::fixtures {

// Axis-aligned cube of half-extent s centered at the origin, six quads with
// outward winding.
inline Mesh quad_cube(double s = 0.5) {
    Mesh m;
    m.vertices = {{-s, -s, -s}, {s, -s, -s}, {s, s, -s}, {-s, s, -s},
                  {-s, -s, s},  {s, -s, s},  {s, s, s},  {-s, s, s}};
    m.faces = {Face::quad(0, 3, 2, 1), Face::quad(4, 5, 6, 7), Face::quad(0, 1, 5, 4),
               Face::quad(1, 2, 6, 5), Face::quad(2, 3, 7, 6), Face::quad(3, 0, 4, 7)};
    return m;
}

// The same cube with each quad split along its (v0,v2) diagonal.
inline Mesh tri_cube(double s = 0.5) {
    Mesh q = quad_cube(s);
    Mesh m;
    m.vertices = q.vertices;
    for (const Face& f : q.faces) {
        m.faces.push_back(Face::tri(f.v[0], f.v[1], f.v[2]));
        m.faces.push_back(Face::tri(f.v[0], f.v[2], f.v[3]));
    }
    return m;
}

// Planar 1 x n strip of unit quads in the z=0 plane, extending along +x.
inline Mesh quad_strip(int n) {
    Mesh m;
    for (int i = 0; i <= n; ++i) {
        m.vertices.push_back({double(i), 0.0, 0.0});
        m.vertices.push_back({double(i), 1.0, 0.0});
    }
    for (int i = 0; i < n; ++i)
        m.faces.push_back(Face::quad(2 * i, 2 * i + 2, 2 * i + 3, 2 * i + 1));
    return m;
}

inline Mesh single_quad() { return quad_strip(1); }

// Planar nx x ny grid of unit quads in the z=0 plane.
inline Mesh quad_grid(int nx, int ny) {
    Mesh m;
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
            m.vertices.push_back({double(i), double(j), 0.0});
    auto id = [&](int i, int j) { return j * (nx + 1) + i; };
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            m.faces.push_back(Face::quad(id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)));
    return m;
}

// The same grid triangulated along each quad's (v0,v2) diagonal.
inline Mesh tri_grid(int nx, int ny) {
    Mesh q = quad_grid(nx, ny);
    Mesh m;
    m.vertices = q.vertices;
    for (const Face& f : q.faces) {
        m.faces.push_back(Face::tri(f.v[0], f.v[1], f.v[2]));
        m.faces.push_back(Face::tri(f.v[0], f.v[2], f.v[3]));
    }
    return m;
}

// Quad sphere: cube subdivided n x n per side, projected to radius r. Closed,
// manifold, all quads.
inline Mesh quad_sphere(int n, double r = 1.0) {
    Mesh m;
    auto add_face_grid = [&](Vec3 origin, Vec3 du, Vec3 dv) {
        int base = int(m.vertices.size());
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n; ++i) {
                Vec3 p = origin + du * (double(i) / n) + dv * (double(j) / n);
                m.vertices.push_back(normalized(p) * r);
            }
        auto id = [&](int i, int j) { return base + j * (n + 1) + i; };
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                m.faces.push_back(
                    Face::quad(id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)));
    };
    // Six cube faces; duplicate seam vertices are fine for most tests and can
    // be welded where a closed surface is required.
    add_face_grid({-1, -1, -1}, {2, 0, 0}, {0, 2, 0});   // z = -1 (inward; winding unused)
    add_face_grid({-1, -1, 1}, {0, 2, 0}, {2, 0, 0});    // z = +1
    add_face_grid({-1, -1, -1}, {0, 0, 2}, {2, 0, 0});   // y = -1
    add_face_grid({-1, 1, -1}, {2, 0, 0}, {0, 0, 2});    // y = +1
    add_face_grid({-1, -1, -1}, {0, 2, 0}, {0, 0, 2});   // x = -1
    add_face_grid({1, -1, -1}, {0, 0, 2}, {0, 2, 0});    // x = +1
    return m;
}

// Random closed triangle mesh: jittered quad sphere, triangulated.
inline Mesh random_tri_blob(std::uint64_t seed, int n = 4) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jitter(0.8, 1.2);
    Mesh q = quad_sphere(n);
    for (Vec3& v : q.vertices) v = v * jitter(rng);
    Mesh m;
    m.vertices = q.vertices;
    for (const Face& f : q.faces) {
        m.faces.push_back(Face::tri(f.v[0], f.v[1], f.v[2]));
        m.faces.push_back(Face::tri(f.v[0], f.v[2], f.v[3]));
    }
    return m;
}

// Unique scratch path under the system temp dir.
inline std::string tmp_path(const std::string& name) {
    static std::uint64_t counter = 0;
    auto dir = std::filesystem::temp_directory_path() / "qgpt_tests";
    std::filesystem::create_directories(dir);
    return (dir / (std::to_string(++counter) + "_" + name)).string();
}

} // namespace qgpt::fixtures
