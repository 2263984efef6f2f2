#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace seamcut {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;

class MeshError : public std::runtime_error {
public:
    explicit MeshError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Indexed triangle mesh with a canonical edge list.
///
/// Edges are stored as (min,max) vertex pairs, sorted lexicographically.
/// Every per-edge vector in the system (labels, probabilities, weights)
/// aligns to this ordering.
struct Mesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> faces;           // CCW winding
    std::vector<std::array<int, 2>> edges;           // canonical (i<j), sorted
    std::vector<std::array<int, 2>> edge_faces;      // incident faces, -1 = none
    std::vector<std::array<Vec2, 3>> corner_uvs;     // empty when no UVs
    std::string name;

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int face_count() const { return static_cast<int>(faces.size()); }
    int edge_count() const { return static_cast<int>(edges.size()); }
    bool has_uvs() const { return !corner_uvs.empty(); }

    int edge_index(int a, int b) const {
        std::array<int, 2> key{std::min(a, b), std::max(a, b)};
        auto it = std::lower_bound(edges.begin(), edges.end(), key);
        if (it == edges.end() || *it != key)
            return -1;
        return static_cast<int>(it - edges.begin());
    }

    bool is_boundary_edge(int e) const { return edge_faces[e][1] < 0; }
};

struct SeamLabels {
    std::vector<int> labels;  // 0/1 per canonical edge

    int count_ones() const { return std::accumulate(labels.begin(), labels.end(), 0); }
};

struct ShellPartition {
    std::vector<int> face_to_shell;
    int shell_count = 0;
};

namespace detail {

class UnionFind {
public:
    explicit UnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    int find(int x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b)
            parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<int> parent_;
};

}  // namespace detail

/// Derives the canonical edge list and edge->face incidence from `faces`.
/// Throws MeshError on out-of-range indices, repeated vertices in a face,
/// or a non-manifold edge (>= 3 incident faces).
inline void build_edges(Mesh& mesh) {
    mesh.edges.clear();
    mesh.edge_faces.clear();

    const int nv = mesh.vertex_count();
    std::map<std::array<int, 2>, std::array<int, 2>> incidence;
    for (int f = 0; f < mesh.face_count(); ++f) {
        const auto& tri = mesh.faces[f];
        for (int c = 0; c < 3; ++c) {
            if (tri[c] < 0 || tri[c] >= nv)
                throw MeshError("face " + std::to_string(f) + ": vertex index out of range");
        }
        if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
            throw MeshError("face " + std::to_string(f) + ": repeated vertex in face");
        for (int c = 0; c < 3; ++c) {
            int a = tri[c], b = tri[(c + 1) % 3];
            std::array<int, 2> key{std::min(a, b), std::max(a, b)};
            auto [it, inserted] = incidence.try_emplace(key, std::array<int, 2>{f, -1});
            if (!inserted) {
                if (it->second[1] >= 0)
                    throw MeshError("non-manifold edge (" + std::to_string(key[0]) + "," +
                                    std::to_string(key[1]) + "): more than 2 incident faces");
                it->second[1] = f;
            }
        }
    }
    mesh.edges.reserve(incidence.size());
    mesh.edge_faces.reserve(incidence.size());
    for (const auto& [key, fcs] : incidence) {
        mesh.edges.push_back(key);
        mesh.edge_faces.push_back(fcs);
    }
}

inline double face_area_3d(const Mesh& mesh, int f) {
    const auto& tri = mesh.faces[f];
    Vec3 e1 = mesh.vertices[tri[1]] - mesh.vertices[tri[0]];
    Vec3 e2 = mesh.vertices[tri[2]] - mesh.vertices[tri[0]];
    return 0.5 * e1.cross(e2).norm();
}

inline double total_area_3d(const Mesh& mesh) {
    double sum = 0.0;
    for (int f = 0; f < mesh.face_count(); ++f)
        sum += face_area_3d(mesh, f);
    return sum;
}

/// Per-vertex lists of incident edges, in canonical edge order.
inline std::vector<std::vector<int>> vertex_edge_adjacency(const Mesh& mesh) {
    std::vector<std::vector<int>> adj(mesh.vertex_count());
    for (int e = 0; e < mesh.edge_count(); ++e) {
        adj[mesh.edges[e][0]].push_back(e);
        adj[mesh.edges[e][1]].push_back(e);
    }
    return adj;
}

inline std::vector<std::vector<int>> vertex_face_adjacency(const Mesh& mesh) {
    std::vector<std::vector<int>> adj(mesh.vertex_count());
    for (int f = 0; f < mesh.face_count(); ++f)
        for (int c = 0; c < 3; ++c)
            adj[mesh.faces[f][c]].push_back(f);
    return adj;
}

/// Seam labels from UV discontinuities: an interior edge is a seam iff its
/// two incident faces disagree (beyond tolerance) on the UV coordinate of
/// either shared vertex. Boundary edges are labeled 0.
inline SeamLabels seams_from_uvs(const Mesh& mesh, double tol = 1e-7) {
    if (!mesh.has_uvs())
        throw MeshError("seams_from_uvs: mesh has no UV coordinates");

    auto corner_uv = [&](int f, int v) -> const Vec2& {
        const auto& tri = mesh.faces[f];
        for (int c = 0; c < 3; ++c)
            if (tri[c] == v)
                return mesh.corner_uvs[f][c];
        throw MeshError("internal: vertex not in face");
    };

    SeamLabels out;
    out.labels.assign(mesh.edge_count(), 0);
    for (int e = 0; e < mesh.edge_count(); ++e) {
        if (mesh.is_boundary_edge(e))
            continue;
        int f1 = mesh.edge_faces[e][0], f2 = mesh.edge_faces[e][1];
        for (int v : mesh.edges[e]) {
            if ((corner_uv(f1, v) - corner_uv(f2, v)).norm() > tol) {
                out.labels[e] = 1;
                break;
            }
        }
    }
    return out;
}

/// Groups faces by transitive adjacency across non-seam interior edges.
inline ShellPartition shells_from_labels(const Mesh& mesh, const SeamLabels& labels) {
    if (static_cast<int>(labels.labels.size()) != mesh.edge_count())
        throw MeshError("shells_from_labels: label vector length mismatch");
    detail::UnionFind uf(mesh.face_count());
    for (int e = 0; e < mesh.edge_count(); ++e) {
        if (labels.labels[e] || mesh.is_boundary_edge(e))
            continue;
        uf.unite(mesh.edge_faces[e][0], mesh.edge_faces[e][1]);
    }
    ShellPartition part;
    part.face_to_shell.assign(mesh.face_count(), -1);
    std::map<int, int> root_to_shell;
    for (int f = 0; f < mesh.face_count(); ++f) {
        int r = uf.find(f);
        auto [it, inserted] = root_to_shell.try_emplace(r, part.shell_count);
        if (inserted)
            ++part.shell_count;
        part.face_to_shell[f] = it->second;
    }
    return part;
}

/// Cuts the mesh along seam-labeled edges: every vertex is split into one
/// copy per wedge of faces connected around it through non-seam interior
/// edges. Face count and face order are preserved; the original face index
/// remains valid on the cut mesh.
inline Mesh cut_mesh(const Mesh& mesh, const SeamLabels& labels) {
    if (static_cast<int>(labels.labels.size()) != mesh.edge_count())
        throw MeshError("cut_mesh: label vector length mismatch");

    auto vf = vertex_face_adjacency(mesh);

    Mesh out;
    out.name = mesh.name;
    out.faces.assign(mesh.face_count(), {-1, -1, -1});
    out.corner_uvs = mesh.corner_uvs;

    for (int v = 0; v < mesh.vertex_count(); ++v) {
        const auto& inc = vf[v];
        if (inc.empty())
            throw MeshError("cut_mesh: isolated vertex " + std::to_string(v));
        // Union incident faces joined through an edge at v that is interior
        // and not a seam.
        detail::UnionFind uf(static_cast<int>(inc.size()));
        std::map<int, int> face_slot;
        for (int s = 0; s < static_cast<int>(inc.size()); ++s)
            face_slot[inc[s]] = s;
        for (int f : inc) {
            const auto& tri = mesh.faces[f];
            for (int c = 0; c < 3; ++c) {
                int a = tri[c], b = tri[(c + 1) % 3];
                if (a != v && b != v)
                    continue;
                int e = mesh.edge_index(a, b);
                if (mesh.is_boundary_edge(e) || labels.labels[e])
                    continue;
                int other = mesh.edge_faces[e][0] == f ? mesh.edge_faces[e][1] : mesh.edge_faces[e][0];
                auto it = face_slot.find(other);
                if (it != face_slot.end())
                    uf.unite(face_slot[f], it->second);
            }
        }
        std::map<int, int> wedge_vertex;
        for (int s = 0; s < static_cast<int>(inc.size()); ++s) {
            int r = uf.find(s);
            auto [it, inserted] = wedge_vertex.try_emplace(r, -1);
            if (inserted) {
                it->second = static_cast<int>(out.vertices.size());
                out.vertices.push_back(mesh.vertices[v]);
            }
            const auto& tri = mesh.faces[inc[s]];
            for (int c = 0; c < 3; ++c)
                if (tri[c] == v)
                    out.faces[inc[s]][c] = it->second;
        }
    }
    build_edges(out);
    return out;
}

}  // namespace seamcut
