#pragma once

#include "seamcut/core/mesh.hpp"

#include <Eigen/Dense>
#include <queue>
#include <set>

namespace seamcut {

namespace detail_dec {

inline Eigen::Matrix4d plane_quadric(const Vec3& a, const Vec3& b, const Vec3& c) {
    Vec3 n = (b - a).cross(c - a);
    double area2 = n.norm();
    if (area2 <= 0.0)
        return Eigen::Matrix4d::Zero();
    n /= area2;
    Eigen::Vector4d p(n.x(), n.y(), n.z(), -n.dot(a));
    return 0.5 * area2 * p * p.transpose();  // area-weighted
}

/// Penalty plane through a boundary edge, perpendicular to its face.
inline Eigen::Matrix4d boundary_quadric(const Vec3& a, const Vec3& b, const Vec3& face_normal) {
    Vec3 n = (b - a).cross(face_normal);
    double len = n.norm();
    if (len <= 0.0)
        return Eigen::Matrix4d::Zero();
    n /= len;
    Eigen::Vector4d p(n.x(), n.y(), n.z(), -n.dot(a));
    return 100.0 * p * p.transpose();
}

inline double quadric_cost(const Eigen::Matrix4d& q, const Vec3& v) {
    Eigen::Vector4d h(v.x(), v.y(), v.z(), 1.0);
    return h.dot(q * h);
}

struct Decimator {
    std::vector<Vec3> pos;
    std::vector<Eigen::Matrix4d> quadric;
    std::vector<char> vertex_alive, seam_incident;
    std::vector<int> version;
    std::vector<std::array<int, 3>> faces;
    std::vector<char> face_alive;
    std::vector<std::set<int>> vfaces;
    std::vector<int> merged_into;  // -1 while alive
    std::set<std::array<int, 2>> seam_pairs;  // current vertex ids, (min,max)
    int live_faces = 0;

    explicit Decimator(const Mesh& mesh, const SeamLabels& labels) {
        const int nv = mesh.vertex_count();
        pos = mesh.vertices;
        quadric.assign(nv, Eigen::Matrix4d::Zero());
        vertex_alive.assign(nv, 1);
        seam_incident.assign(nv, 0);
        version.assign(nv, 0);
        merged_into.assign(nv, -1);
        faces = mesh.faces;
        face_alive.assign(mesh.face_count(), 1);
        live_faces = mesh.face_count();
        vfaces.resize(nv);
        for (int f = 0; f < mesh.face_count(); ++f) {
            const auto& tri = mesh.faces[f];
            Eigen::Matrix4d q = plane_quadric(pos[tri[0]], pos[tri[1]], pos[tri[2]]);
            for (int c = 0; c < 3; ++c) {
                quadric[tri[c]] += q;
                vfaces[tri[c]].insert(f);
            }
        }
        for (int e = 0; e < mesh.edge_count(); ++e) {
            int a = mesh.edges[e][0], b = mesh.edges[e][1];
            if (labels.labels[e]) {
                seam_incident[a] = seam_incident[b] = 1;
                seam_pairs.insert({a, b});
            }
            if (mesh.is_boundary_edge(e)) {
                const auto& tri = mesh.faces[mesh.edge_faces[e][0]];
                Vec3 fn = (pos[tri[1]] - pos[tri[0]]).cross(pos[tri[2]] - pos[tri[0]]);
                double len = fn.norm();
                if (len > 0.0) {
                    Eigen::Matrix4d q = boundary_quadric(pos[a], pos[b], fn / len);
                    quadric[a] += q;
                    quadric[b] += q;
                }
            }
        }
    }

    std::set<int> neighbors(int v) const {
        std::set<int> out;
        for (int f : vfaces[v])
            for (int c = 0; c < 3; ++c)
                if (faces[f][c] != v)
                    out.insert(faces[f][c]);
        return out;
    }

    std::vector<int> shared_faces(int a, int b) const {
        std::vector<int> out;
        for (int f : vfaces[a])
            if (vfaces[b].count(f))
                out.push_back(f);
        return out;
    }

    /// Optimal point under the combined quadric, falling back to the better
    /// of the endpoints and the midpoint when the system is near-singular.
    Vec3 placement(int a, int b) const {
        if (seam_incident[a])
            return pos[a];
        if (seam_incident[b])
            return pos[b];
        Eigen::Matrix4d q = quadric[a] + quadric[b];
        Eigen::Matrix3d A = q.topLeftCorner<3, 3>();
        Eigen::Vector3d rhs = -q.topRightCorner<3, 1>();
        Eigen::FullPivLU<Eigen::Matrix3d> lu(A);
        if (lu.isInvertible()) {
            Eigen::Vector3d x = lu.solve(rhs);
            if (x.allFinite())
                return Vec3(x);
        }
        Vec3 mid = 0.5 * (pos[a] + pos[b]);
        Vec3 best = pos[a];
        double best_cost = quadric_cost(q, pos[a]);
        for (const Vec3& cand : {pos[b], mid}) {
            double c = quadric_cost(q, cand);
            if (c < best_cost) {
                best_cost = c;
                best = cand;
            }
        }
        return best;
    }

    /// Link condition plus seam and geometry guards for collapsing b into a.
    bool collapse_valid(int a, int b, const Vec3& target) const {
        if (!vertex_alive[a] || !vertex_alive[b])
            return false;
        if (seam_incident[a] && seam_incident[b])
            return false;
        auto shared = shared_faces(a, b);
        if (shared.empty() || shared.size() > 2)
            return false;
        // link condition: common neighbors must be exactly the third
        // vertices of the shared faces
        std::set<int> third;
        for (int f : shared)
            for (int c = 0; c < 3; ++c)
                if (faces[f][c] != a && faces[f][c] != b)
                    third.insert(faces[f][c]);
        auto na = neighbors(a), nb = neighbors(b);
        std::set<int> common;
        for (int v : na)
            if (nb.count(v))
                common.insert(v);
        if (common != third)
            return false;
        // a seam edge inside a dying face must survive through another face
        std::set<int> dying(shared.begin(), shared.end());
        for (int f : shared)
            for (int c = 0; c < 3; ++c) {
                int u = faces[f][c], v = faces[f][(c + 1) % 3];
                std::array<int, 2> key{std::min(u, v), std::max(u, v)};
                if (!seam_pairs.count(key))
                    continue;
                int other_faces = 0;
                for (int g : vfaces[u])
                    if (!dying.count(g) && vfaces[v].count(g))
                        ++other_faces;
                if (other_faces == 0)
                    return false;
            }
        // no degenerate or flipped surviving faces
        for (int v : {a, b})
            for (int f : vfaces[v]) {
                if (dying.count(f))
                    continue;
                Vec3 p[3], pnew[3];
                for (int c = 0; c < 3; ++c) {
                    int w = faces[f][c];
                    p[c] = pos[w];
                    pnew[c] = (w == a || w == b) ? target : pos[w];
                }
                Vec3 n_old = (p[1] - p[0]).cross(p[2] - p[0]);
                Vec3 n_new = (pnew[1] - pnew[0]).cross(pnew[2] - pnew[0]);
                if (n_new.norm() <= 1e-14 * std::max(1.0, n_old.norm()))
                    return false;
                if (n_old.dot(n_new) <= 0.0)
                    return false;
            }
        return true;
    }

    void collapse(int a, int b, const Vec3& target) {
        for (int f : shared_faces(a, b)) {
            face_alive[f] = 0;
            --live_faces;
            for (int c = 0; c < 3; ++c)
                vfaces[faces[f][c]].erase(f);
        }
        for (int f : std::set<int>(vfaces[b])) {
            for (int c = 0; c < 3; ++c)
                if (faces[f][c] == b)
                    faces[f][c] = a;
            vfaces[b].erase(f);
            vfaces[a].insert(f);
        }
        // re-key seam pairs that touched b
        std::vector<std::array<int, 2>> moved;
        for (auto it = seam_pairs.begin(); it != seam_pairs.end();) {
            if ((*it)[0] == b || (*it)[1] == b) {
                int other = (*it)[0] == b ? (*it)[1] : (*it)[0];
                moved.push_back({std::min(a, other), std::max(a, other)});
                it = seam_pairs.erase(it);
            } else {
                ++it;
            }
        }
        seam_pairs.insert(moved.begin(), moved.end());
        pos[a] = target;
        quadric[a] += quadric[b];
        seam_incident[a] = seam_incident[a] || seam_incident[b];
        vertex_alive[b] = 0;
        merged_into[b] = a;
        ++version[a];
        ++version[b];
    }

    int resolve(int v) const {
        while (merged_into[v] >= 0)
            v = merged_into[v];
        return v;
    }
};

}  // namespace detail_dec

/// QEM edge-collapse simplification. Seam edges are never collapsed (both
/// endpoints seam-incident blocks the collapse), so labels survive intact;
/// link condition and flip checks keep the mesh manifold. Throws when no
/// legal collapse can bring the face count within 2% of the target, with
/// the achieved count in the message.
inline std::pair<Mesh, SeamLabels> decimate(const Mesh& mesh, const SeamLabels& labels,
                                            int target_faces) {
    if (target_faces < 4)
        throw MeshError("decimate: target must be >= 4 faces");
    if (target_faces > mesh.face_count())
        throw MeshError("decimate: target exceeds current face count");
    if (static_cast<int>(labels.labels.size()) != mesh.edge_count())
        throw MeshError("decimate: label vector length mismatch");

    detail_dec::Decimator d(mesh, labels);

    struct HeapItem {
        double cost;
        int a, b, va, vb;
        Vec3 target;
        bool operator>(const HeapItem& o) const {
            return std::tie(cost, a, b) > std::tie(o.cost, o.a, o.b);
        }
    };
    std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<>> heap;
    auto push_edge = [&](int a, int b) {
        if (a > b)
            std::swap(a, b);
        if (d.seam_incident[a] && d.seam_incident[b])
            return;
        Vec3 t = d.placement(a, b);
        double cost = detail_dec::quadric_cost(d.quadric[a] + d.quadric[b], t);
        heap.push({cost, a, b, d.version[a], d.version[b], t});
    };
    for (const auto& e : mesh.edges)
        push_edge(e[0], e[1]);

    while (d.live_faces > target_faces && !heap.empty()) {
        HeapItem item = heap.top();
        heap.pop();
        if (!d.vertex_alive[item.a] || !d.vertex_alive[item.b])
            continue;
        if (d.version[item.a] != item.va || d.version[item.b] != item.vb)
            continue;
        if (!d.collapse_valid(item.a, item.b, item.target))
            continue;
        d.collapse(item.a, item.b, item.target);
        for (int u : d.neighbors(item.a))
            push_edge(item.a, u);
    }
    if (d.live_faces > target_faces &&
        d.live_faces - target_faces > std::max(1, target_faces / 50))
        throw MeshError("decimate: target unreachable under seam constraints, achieved " +
                        std::to_string(d.live_faces) + " faces");

    Mesh out;
    out.name = mesh.name + "_dec";
    std::vector<int> remap(mesh.vertex_count(), -1);
    for (int v = 0; v < mesh.vertex_count(); ++v)
        if (d.vertex_alive[v] && !d.vfaces[v].empty()) {
            remap[v] = out.vertex_count();
            out.vertices.push_back(d.pos[v]);
        }
    for (int f = 0; f < static_cast<int>(d.faces.size()); ++f)
        if (d.face_alive[f])
            out.faces.push_back({remap[d.faces[f][0]], remap[d.faces[f][1]], remap[d.faces[f][2]]});
    build_edges(out);

    SeamLabels out_labels;
    out_labels.labels.assign(out.edge_count(), 0);
    for (int e = 0; e < mesh.edge_count(); ++e) {
        if (!labels.labels[e])
            continue;
        int a = remap[d.resolve(mesh.edges[e][0])];
        int b = remap[d.resolve(mesh.edges[e][1])];
        int ne = out.edge_index(a, b);
        if (ne < 0)
            throw MeshError("decimate: seam edge lost during simplification");
        out_labels.labels[ne] = 1;
    }
    return {std::move(out), std::move(out_labels)};
}

}  // namespace seamcut
