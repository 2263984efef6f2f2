#pragma once

#include "seamcut/core/mesh.hpp"

#include <cmath>
#include <map>
#include <random>

namespace fixtures {

using seamcut::Mesh;
using seamcut::Vec3;

inline Mesh make_mesh(std::vector<Vec3> verts, std::vector<std::array<int, 3>> faces,
                      const std::string& name = "fixture") {
    Mesh m;
    m.name = name;
    m.vertices = std::move(verts);
    m.faces = std::move(faces);
    seamcut::build_edges(m);
    return m;
}

/// Regular icosahedron, 12 vertices / 20 faces / 30 edges.
inline Mesh icosahedron(double scale = 1.0) {
    const double p = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> v = {
        {-1, p, 0}, {1, p, 0}, {-1, -p, 0}, {1, -p, 0}, {0, -1, p}, {0, 1, p},
        {0, -1, -p}, {0, 1, -p}, {p, 0, -1}, {p, 0, 1}, {-p, 0, -1}, {-p, 0, 1}};
    for (auto& x : v)
        x = x.normalized() * scale;
    std::vector<std::array<int, 3>> f = {
        {0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11},
        {1, 5, 9}, {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8}, {3, 8, 9},
        {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1}};
    return make_mesh(std::move(v), std::move(f), "icosahedron");
}

/// Loop-style midpoint subdivision of a closed triangle mesh, vertices
/// projected back to the unit sphere.
inline Mesh icosphere(int subdivisions, double scale = 1.0) {
    Mesh m = icosahedron(1.0);
    for (int s = 0; s < subdivisions; ++s) {
        std::map<std::array<int, 2>, int> midpoint;
        std::vector<Vec3> verts = m.vertices;
        auto mid = [&](int a, int b) {
            std::array<int, 2> key{std::min(a, b), std::max(a, b)};
            auto it = midpoint.find(key);
            if (it != midpoint.end())
                return it->second;
            verts.push_back(((m.vertices[a] + m.vertices[b]) * 0.5).normalized());
            midpoint[key] = static_cast<int>(verts.size()) - 1;
            return midpoint[key];
        };
        std::vector<std::array<int, 3>> faces;
        for (const auto& f : m.faces) {
            int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
            faces.push_back({f[0], ab, ca});
            faces.push_back({f[1], bc, ab});
            faces.push_back({f[2], ca, bc});
            faces.push_back({ab, bc, ca});
        }
        m = make_mesh(std::move(verts), std::move(faces), "icosphere");
    }
    for (auto& v : m.vertices)
        v *= scale;
    m.name = "icosphere_" + std::to_string(subdivisions);
    return m;
}

/// Flat (n+1)x(n+1) grid of 2n^2 triangles in the z=0 plane.
inline Mesh flat_grid(int n, double size = 1.0) {
    std::vector<Vec3> verts;
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            verts.emplace_back(size * i / n, size * j / n, 0.0);
    auto at = [&](int i, int j) { return j * (n + 1) + i; };
    std::vector<std::array<int, 3>> faces;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            faces.push_back({at(i, j), at(i + 1, j), at(i + 1, j + 1)});
            faces.push_back({at(i, j), at(i + 1, j + 1), at(i, j + 1)});
        }
    return make_mesh(std::move(verts), std::move(faces), "flat_grid");
}

/// Open upper hemisphere of an icosphere (faces with centroid z > eps).
inline Mesh hemisphere(int subdivisions = 2) {
    Mesh sphere = icosphere(subdivisions);
    std::vector<std::array<int, 3>> faces;
    for (const auto& f : sphere.faces) {
        double z = (sphere.vertices[f[0]].z() + sphere.vertices[f[1]].z() +
                    sphere.vertices[f[2]].z()) / 3.0;
        if (z > 1e-9)
            faces.push_back(f);
    }
    std::map<int, int> remap;
    std::vector<Vec3> verts;
    for (auto& f : faces)
        for (auto& c : f) {
            if (!remap.count(c)) {
                remap[c] = static_cast<int>(verts.size());
                verts.push_back(sphere.vertices[c]);
            }
            c = remap[c];
        }
    return make_mesh(std::move(verts), std::move(faces), "hemisphere");
}

/// Cube made of 12 triangles: 8 vertices, 18 edges.
inline Mesh cube() {
    std::vector<Vec3> v = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                           {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
    std::vector<std::array<int, 3>> f = {
        {0, 2, 1}, {0, 3, 2}, {4, 5, 6}, {4, 6, 7}, {0, 1, 5}, {0, 5, 4},
        {1, 2, 6}, {1, 6, 5}, {2, 3, 7}, {2, 7, 6}, {3, 0, 4}, {3, 4, 7}};
    return make_mesh(std::move(v), std::move(f), "cube");
}

/// 2 x n vertical strip of quads split into triangles (thin rectangle).
inline Mesh strip(int n) {
    std::vector<Vec3> verts;
    for (int j = 0; j <= n; ++j) {
        verts.emplace_back(0.0, static_cast<double>(j), 0.0);
        verts.emplace_back(1.0, static_cast<double>(j), 0.0);
    }
    std::vector<std::array<int, 3>> faces;
    for (int j = 0; j < n; ++j) {
        int a = 2 * j, b = 2 * j + 1, c = 2 * j + 3, d = 2 * j + 2;
        faces.push_back({a, b, c});
        faces.push_back({a, c, d});
    }
    return make_mesh(std::move(verts), std::move(faces), "strip");
}

inline std::vector<double> random_probs(int n, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> out(n);
    for (auto& p : out)
        p = u(rng);
    return out;
}

}  // namespace fixtures
