#pragma once

#include "seamcut/core/mesh.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace seamcut {

/// Parametric shapes with constructively known seam labels, used in place
/// of artist-authored datasets.
struct SyntheticParams {
    int segments = 16;     // around the axis / equator
    int rings = 8;         // along the axis or pole-to-pole stacks
    double radius = 1.0;
    double height = 2.0;
    double jitter = 0.1;   // relative variation of proportions drawn from the seed
};

namespace detail_synth {

constexpr double kTau = 2.0 * std::numbers::pi;

inline void label_edge(Mesh& mesh, SeamLabels& labels, int a, int b) {
    int e = mesh.edge_index(a, b);
    if (e < 0)
        throw MeshError("synthetic: expected edge missing");
    labels.labels[e] = 1;
}

struct Proportions {
    double radius, height;
};

inline Proportions jittered(const SyntheticParams& p, uint64_t seed) {
    std::mt19937_64 rng(seed ^ 0xda3e39cb94b95bdbULL);
    std::uniform_real_distribution<double> u(-p.jitter, p.jitter);
    return {p.radius * (1.0 + u(rng)), p.height * (1.0 + u(rng))};
}

}  // namespace detail_synth

/// Open cylinder wall + 2 cap fans. Seams: one vertical line on the wall
/// and both cap boundary rings -> 3 shells.
inline std::pair<Mesh, SeamLabels> gen_cylinder(const SyntheticParams& p, uint64_t seed) {
    if (p.segments < 3 || p.rings < 1)
        throw MeshError("gen_cylinder: need >= 3 segments and >= 1 ring");
    auto [r, h] = detail_synth::jittered(p, seed);
    const int n = p.segments, m = p.rings;

    Mesh mesh;
    mesh.name = "cylinder_" + std::to_string(seed);
    auto ring_vertex = [&](int j, int i) { return j * n + (i % n); };
    for (int j = 0; j <= m; ++j)
        for (int i = 0; i < n; ++i) {
            double a = detail_synth::kTau * i / n;
            mesh.vertices.emplace_back(r * std::cos(a), r * std::sin(a), h * j / m);
        }
    int bottom_center = mesh.vertex_count();
    mesh.vertices.emplace_back(0, 0, 0);
    int top_center = mesh.vertex_count();
    mesh.vertices.emplace_back(0, 0, h);

    for (int j = 0; j < m; ++j)
        for (int i = 0; i < n; ++i) {
            int a = ring_vertex(j, i), b = ring_vertex(j, i + 1);
            int c = ring_vertex(j + 1, i + 1), d = ring_vertex(j + 1, i);
            mesh.faces.push_back({a, b, c});
            mesh.faces.push_back({a, c, d});
        }
    for (int i = 0; i < n; ++i) {
        mesh.faces.push_back({bottom_center, ring_vertex(0, i + 1), ring_vertex(0, i)});
        mesh.faces.push_back({top_center, ring_vertex(m, i), ring_vertex(m, i + 1)});
    }
    build_edges(mesh);

    SeamLabels labels;
    labels.labels.assign(mesh.edge_count(), 0);
    for (int j = 0; j < m; ++j)
        detail_synth::label_edge(mesh, labels, ring_vertex(j, 0), ring_vertex(j + 1, 0));
    for (int i = 0; i < n; ++i) {
        detail_synth::label_edge(mesh, labels, ring_vertex(0, i), ring_vertex(0, i + 1));
        detail_synth::label_edge(mesh, labels, ring_vertex(m, i), ring_vertex(m, i + 1));
    }
    return {std::move(mesh), std::move(labels)};
}

namespace detail_synth {

/// UV sphere with an optional per-vertex radius function.
template <typename RadiusFn>
inline Mesh uv_sphere(int segments, int stacks, RadiusFn radius, const std::string& name) {
    Mesh mesh;
    mesh.name = name;
    auto pos = [&](double theta, double phi) {
        double r = radius(theta, phi);
        return Vec3(r * std::sin(theta) * std::cos(phi), r * std::sin(theta) * std::sin(phi),
                    r * std::cos(theta));
    };
    int top = 0;
    mesh.vertices.push_back(pos(0.0, 0.0));
    auto ring_vertex = [&](int j, int i) { return 1 + (j - 1) * segments + (i % segments); };
    for (int j = 1; j < stacks; ++j) {
        double theta = std::numbers::pi * j / stacks;
        for (int i = 0; i < segments; ++i)
            mesh.vertices.push_back(pos(theta, kTau * i / segments));
    }
    int bottom = mesh.vertex_count();
    mesh.vertices.push_back(pos(std::numbers::pi, 0.0));

    for (int i = 0; i < segments; ++i)
        mesh.faces.push_back({top, ring_vertex(1, i), ring_vertex(1, i + 1)});
    for (int j = 1; j < stacks - 1; ++j)
        for (int i = 0; i < segments; ++i) {
            int a = ring_vertex(j, i), b = ring_vertex(j, i + 1);
            int c = ring_vertex(j + 1, i + 1), d = ring_vertex(j + 1, i);
            mesh.faces.push_back({a, c, b});
            mesh.faces.push_back({a, d, c});
        }
    for (int i = 0; i < segments; ++i)
        mesh.faces.push_back({bottom, ring_vertex(stacks - 1, i + 1), ring_vertex(stacks - 1, i)});
    build_edges(mesh);
    return mesh;
}

inline SeamLabels ring_seam(Mesh& mesh, int segments, int ring_index) {
    SeamLabels labels;
    labels.labels.assign(mesh.edge_count(), 0);
    auto ring_vertex = [&](int j, int i) { return 1 + (j - 1) * segments + (i % segments); };
    for (int i = 0; i < segments; ++i)
        label_edge(mesh, labels, ring_vertex(ring_index, i), ring_vertex(ring_index, i + 1));
    return labels;
}

}  // namespace detail_synth

/// UV sphere with the equator ring labeled -> 2 shells.
inline std::pair<Mesh, SeamLabels> gen_sphere_band(const SyntheticParams& p, uint64_t seed) {
    if (p.segments < 3 || p.rings < 4 || p.rings % 2)
        throw MeshError("gen_sphere_band: need >= 3 segments and an even ring count >= 4");
    auto [r, h] = detail_synth::jittered(p, seed);
    (void)h;
    Mesh mesh = detail_synth::uv_sphere(
        p.segments, p.rings, [r](double, double) { return r; }, "sphere_band_" + std::to_string(seed));
    SeamLabels labels = detail_synth::ring_seam(mesh, p.segments, p.rings / 2);
    return {std::move(mesh), std::move(labels)};
}

/// Sphere with smooth seeded radial bumps, equator ring labeled -> 2 shells.
inline std::pair<Mesh, SeamLabels> gen_lumpy_sphere(const SyntheticParams& p, uint64_t seed) {
    if (p.segments < 3 || p.rings < 4 || p.rings % 2)
        throw MeshError("gen_lumpy_sphere: need >= 3 segments and an even ring count >= 4");
    auto [r, h] = detail_synth::jittered(p, seed);
    (void)h;
    std::mt19937_64 rng(seed ^ 0x2545f4914f6cdd1dULL);
    std::uniform_real_distribution<double> phase(0.0, detail_synth::kTau);
    std::uniform_real_distribution<double> amp(0.05, 0.15);
    double a1 = amp(rng), a2 = amp(rng), p1 = phase(rng), p2 = phase(rng);
    Mesh mesh = detail_synth::uv_sphere(
        p.segments, p.rings,
        [=](double theta, double phi) {
            return r * (1.0 + a1 * std::sin(3.0 * theta + p1) * std::cos(2.0 * phi) +
                        a2 * std::sin(2.0 * phi + p2) * std::sin(2.0 * theta));
        },
        "lumpy_sphere_" + std::to_string(seed));
    SeamLabels labels = detail_synth::ring_seam(mesh, p.segments, p.rings / 2);
    return {std::move(mesh), std::move(labels)};
}

/// Cylindrical tube with hemispherical end caps. Seams: the two junction
/// rings and a vertical line on the tube -> 3 shells.
inline std::pair<Mesh, SeamLabels> gen_capsule(const SyntheticParams& p, uint64_t seed) {
    if (p.segments < 3 || p.rings < 1)
        throw MeshError("gen_capsule: need >= 3 segments and >= 1 ring");
    auto [r, h] = detail_synth::jittered(p, seed);
    const int n = p.segments, m = p.rings;
    const int cap_stacks = std::max(2, m / 2 + 1);

    Mesh mesh;
    mesh.name = "capsule_" + std::to_string(seed);
    // tube rings from z=0 to z=h
    auto tube_vertex = [&](int j, int i) { return j * n + (i % n); };
    for (int j = 0; j <= m; ++j)
        for (int i = 0; i < n; ++i) {
            double a = detail_synth::kTau * i / n;
            mesh.vertices.emplace_back(r * std::cos(a), r * std::sin(a), h * j / m);
        }
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < n; ++i) {
            int a = tube_vertex(j, i), b = tube_vertex(j, i + 1);
            int c = tube_vertex(j + 1, i + 1), d = tube_vertex(j + 1, i);
            mesh.faces.push_back({a, b, c});
            mesh.faces.push_back({a, c, d});
        }
    // hemispherical caps; stack 0 is the junction ring already present
    auto add_cap = [&](int junction_row, double z0, double dir) {
        std::vector<std::vector<int>> rows;
        rows.push_back({});
        for (int i = 0; i < n; ++i)
            rows[0].push_back(tube_vertex(junction_row, i));
        for (int s = 1; s < cap_stacks; ++s) {
            double theta = 0.5 * std::numbers::pi * (1.0 - static_cast<double>(s) / cap_stacks);
            std::vector<int> row;
            for (int i = 0; i < n; ++i) {
                double a = detail_synth::kTau * i / n;
                double rr = r * std::sin(theta);
                mesh.vertices.emplace_back(rr * std::cos(a), rr * std::sin(a),
                                           z0 + dir * r * std::cos(theta));
                row.push_back(mesh.vertex_count() - 1);
            }
            rows.push_back(row);
        }
        int pole = mesh.vertex_count();
        mesh.vertices.emplace_back(0, 0, z0 + dir * r);
        auto at = [&](const std::vector<int>& row, int i) { return row[i % n]; };
        for (int s = 0; s + 1 < cap_stacks; ++s)
            for (int i = 0; i < n; ++i) {
                int a = at(rows[s], i), b = at(rows[s], i + 1);
                int c = at(rows[s + 1], i + 1), d = at(rows[s + 1], i);
                if (dir > 0) {
                    mesh.faces.push_back({a, b, c});
                    mesh.faces.push_back({a, c, d});
                } else {
                    mesh.faces.push_back({a, c, b});
                    mesh.faces.push_back({a, d, c});
                }
            }
        const auto& last = rows[cap_stacks - 1];
        for (int i = 0; i < n; ++i) {
            if (dir > 0)
                mesh.faces.push_back({pole, at(last, i), at(last, i + 1)});
            else
                mesh.faces.push_back({pole, at(last, i + 1), at(last, i)});
        }
    };
    add_cap(m, h, +1.0);
    add_cap(0, 0.0, -1.0);
    build_edges(mesh);

    SeamLabels labels;
    labels.labels.assign(mesh.edge_count(), 0);
    for (int j = 0; j < m; ++j)
        detail_synth::label_edge(mesh, labels, tube_vertex(j, 0), tube_vertex(j + 1, 0));
    for (int i = 0; i < n; ++i) {
        detail_synth::label_edge(mesh, labels, tube_vertex(0, i), tube_vertex(0, i + 1));
        detail_synth::label_edge(mesh, labels, tube_vertex(m, i), tube_vertex(m, i + 1));
    }
    return {std::move(mesh), std::move(labels)};
}

inline std::pair<Mesh, SeamLabels> gen_synthetic(const std::string& kind, const SyntheticParams& p,
                                                 uint64_t seed) {
    if (kind == "cylinder")
        return gen_cylinder(p, seed);
    if (kind == "capsule")
        return gen_capsule(p, seed);
    if (kind == "sphere_band")
        return gen_sphere_band(p, seed);
    if (kind == "lumpy_sphere")
        return gen_lumpy_sphere(p, seed);
    throw MeshError("gen_synthetic: unknown kind '" + kind + "'");
}

}  // namespace seamcut
