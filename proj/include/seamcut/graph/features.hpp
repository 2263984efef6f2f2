#pragma once

#include "seamcut/core/mesh.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

namespace seamcut {

/// Area-weighted vertex normals, renormalized to unit length. Always
/// recomputed from geometry; file-provided normals are ignored.
inline std::vector<Vec3> vertex_normals(const Mesh& mesh) {
    std::vector<Vec3> normals(mesh.vertex_count(), Vec3::Zero());
    for (int f = 0; f < mesh.face_count(); ++f) {
        const auto& tri = mesh.faces[f];
        Vec3 n = (mesh.vertices[tri[1]] - mesh.vertices[tri[0]])
                     .cross(mesh.vertices[tri[2]] - mesh.vertices[tri[0]]);
        // |n| = 2 * face area, so summing raw cross products is area weighting
        for (int c = 0; c < 3; ++c)
            normals[tri[c]] += n;
    }
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        double len = normals[v].norm();
        if (len == 0.0)
            throw MeshError("vertex_normals: vertex " + std::to_string(v) +
                            " has no incident faces or degenerate neighborhood");
        normals[v] /= len;
    }
    return normals;
}

/// Discrete Gaussian curvature as raw angle deficit: 2*pi minus the incident
/// corner angles for interior vertices, pi minus for boundary vertices.
inline std::vector<double> gaussian_curvature(const Mesh& mesh) {
    std::vector<double> angle_sum(mesh.vertex_count(), 0.0);
    for (int f = 0; f < mesh.face_count(); ++f) {
        const auto& tri = mesh.faces[f];
        Vec3 cross = (mesh.vertices[tri[1]] - mesh.vertices[tri[0]])
                         .cross(mesh.vertices[tri[2]] - mesh.vertices[tri[0]]);
        if (cross.norm() == 0.0)
            throw MeshError("gaussian_curvature: degenerate face " + std::to_string(f));
        for (int c = 0; c < 3; ++c) {
            const Vec3& p = mesh.vertices[tri[c]];
            Vec3 a = mesh.vertices[tri[(c + 1) % 3]] - p;
            Vec3 b = mesh.vertices[tri[(c + 2) % 3]] - p;
            double la = a.norm(), lb = b.norm();
            if (la == 0.0 || lb == 0.0)
                throw MeshError("gaussian_curvature: degenerate face " + std::to_string(f));
            double cosv = std::clamp(a.dot(b) / (la * lb), -1.0, 1.0);
            double angle = std::acos(cosv);
            if (std::isnan(angle))
                throw MeshError("gaussian_curvature: degenerate face " + std::to_string(f));
            angle_sum[tri[c]] += angle;
        }
    }
    // mark boundary vertices
    std::vector<char> on_boundary(mesh.vertex_count(), 0);
    for (int e = 0; e < mesh.edge_count(); ++e) {
        if (mesh.is_boundary_edge(e)) {
            on_boundary[mesh.edges[e][0]] = 1;
            on_boundary[mesh.edges[e][1]] = 1;
        }
    }
    std::vector<double> k(mesh.vertex_count());
    for (int v = 0; v < mesh.vertex_count(); ++v)
        k[v] = (on_boundary[v] ? std::numbers::pi : 2.0 * std::numbers::pi) - angle_sum[v];
    return k;
}

/// Per-vertex feature matrix, width 7: coordinates centered at the bounding
/// box center and scaled by half the bbox diagonal, unit normal, angle
/// deficit curvature.
inline Eigen::MatrixXd node_features(const Mesh& mesh) {
    if (mesh.vertex_count() == 0)
        throw MeshError("node_features: empty mesh");
    Vec3 lo = mesh.vertices[0], hi = mesh.vertices[0];
    for (const auto& p : mesh.vertices) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    Vec3 center = 0.5 * (lo + hi);
    double half_diag = 0.5 * (hi - lo).norm();
    if (half_diag == 0.0)
        throw MeshError("node_features: mesh has zero extent");

    auto normals = vertex_normals(mesh);
    auto curvature = gaussian_curvature(mesh);

    Eigen::MatrixXd x(mesh.vertex_count(), 7);
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        x.block<1, 3>(v, 0) = ((mesh.vertices[v] - center) / half_diag).transpose();
        x.block<1, 3>(v, 3) = normals[v].transpose();
        x(v, 6) = curvature[v];
    }
    return x;
}

inline double bbox_diagonal(const Mesh& mesh) {
    if (mesh.vertex_count() == 0)
        return 0.0;
    Vec3 lo = mesh.vertices[0], hi = mesh.vertices[0];
    for (const auto& p : mesh.vertices) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    return (hi - lo).norm();
}

}  // namespace seamcut
