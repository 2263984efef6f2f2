#pragma once

#include "seamcut/core/mesh.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <cmath>
#include <deque>
#include <numbers>
#include <set>

namespace seamcut {

struct Chart {
    std::vector<int> faces;
    bool approximate = false;  // non-disk shell embedded anyway
};

struct UvAtlas {
    std::vector<Chart> shells;
    std::vector<std::array<Vec2, 3>> face_uvs;  // aligned to mesh face order
    double area_scale = 1.0;                    // applied scale factor s
    std::vector<double> face_distortion;        // D_f, after normalization
};

struct UnwrapOptions {
    bool mean_value_weights = false;
    double solver_residual_tol = 1e-10;
};

inline double uv_signed_area(const std::array<Vec2, 3>& uv) {
    return 0.5 * ((uv[1] - uv[0]).x() * (uv[2] - uv[0]).y() -
                  (uv[1] - uv[0]).y() * (uv[2] - uv[0]).x());
}

/// Ordered boundary vertex loops of a face subset. Boundary edges are mesh
/// edges with exactly one incident face inside the subset.
inline std::vector<std::vector<int>> boundary_loops(const Mesh& mesh, const std::vector<int>& shell_faces) {
    std::set<int> in_shell(shell_faces.begin(), shell_faces.end());
    // boundary edge -> its two vertices; vertex -> incident boundary edges
    std::vector<int> bedges;
    std::map<int, std::vector<int>> vertex_bedges;
    for (int e = 0; e < mesh.edge_count(); ++e) {
        int inside = 0;
        for (int f : mesh.edge_faces[e])
            if (f >= 0 && in_shell.count(f))
                ++inside;
        bool is_b = inside == 1 && (mesh.is_boundary_edge(e) || !in_shell.count(mesh.edge_faces[e][0]) ||
                                    !in_shell.count(mesh.edge_faces[e][1]));
        if (!is_b)
            continue;
        bedges.push_back(e);
        vertex_bedges[mesh.edges[e][0]].push_back(e);
        vertex_bedges[mesh.edges[e][1]].push_back(e);
    }
    for (const auto& [v, es] : vertex_bedges)
        if (es.size() != 2)
            throw MeshError("non-manifold boundary at vertex " + std::to_string(v));

    std::set<int> unvisited(bedges.begin(), bedges.end());
    std::vector<std::vector<int>> loops;
    while (!unvisited.empty()) {
        int e0 = *unvisited.begin();
        std::vector<int> loop;
        int v = mesh.edges[e0][0];
        int e = e0;
        do {
            loop.push_back(v);
            unvisited.erase(e);
            int next_v = mesh.edges[e][0] == v ? mesh.edges[e][1] : mesh.edges[e][0];
            const auto& es = vertex_bedges[next_v];
            int next_e = es[0] == e ? es[1] : es[0];
            v = next_v;
            e = next_e;
        } while (e != e0);
        loops.push_back(std::move(loop));
    }
    return loops;
}

namespace detail {

inline double loop_length_3d(const Mesh& mesh, const std::vector<int>& loop) {
    double len = 0.0;
    for (size_t i = 0; i < loop.size(); ++i)
        len += (mesh.vertices[loop[(i + 1) % loop.size()]] - mesh.vertices[loop[i]]).norm();
    return len;
}

/// Per-shell vertex adjacency with edge weights (uniform or mean-value).
inline std::map<int, std::map<int, double>> shell_weights(const Mesh& mesh,
                                                          const std::vector<int>& shell_faces,
                                                          bool mean_value) {
    std::map<int, std::map<int, double>> w;
    if (!mean_value) {
        std::set<std::array<int, 2>> seen;
        for (int f : shell_faces) {
            const auto& tri = mesh.faces[f];
            for (int c = 0; c < 3; ++c) {
                int a = tri[c], b = tri[(c + 1) % 3];
                w[a][b] = 1.0;
                w[b][a] = 1.0;
            }
        }
        return w;
    }
    // mean-value: w_ij = (tan(alpha/2) + tan(beta/2)) / |e_ij| with alpha,
    // beta the angles at i in the faces adjacent to (i,j)
    for (int f : shell_faces) {
        const auto& tri = mesh.faces[f];
        for (int c = 0; c < 3; ++c) {
            int i = tri[c], j = tri[(c + 1) % 3], k = tri[(c + 2) % 3];
            Vec3 eij = mesh.vertices[j] - mesh.vertices[i];
            Vec3 eik = mesh.vertices[k] - mesh.vertices[i];
            double cosv = std::clamp(eij.dot(eik) / (eij.norm() * eik.norm()), -1.0, 1.0);
            double half = 0.5 * std::acos(cosv);
            double t = std::tan(half);
            w[i][j] += t / eij.norm();
            w[i][k] += t / eik.norm();
        }
    }
    // symmetrize so boundary-row elimination keeps the system solvable
    for (auto& [i, row] : w)
        for (auto& [j, wij] : row) {
            double sym = 0.5 * (wij + w[j][i]);
            wij = sym;
        }
    return w;
}

}  // namespace detail

/// Tutte embedding of one shell: the longest boundary loop is pinned to the
/// unit circle (arc positions proportional to cumulative 3D boundary length)
/// and every free vertex solves to the weighted average of its neighbors.
/// Returns per-vertex UVs for shell vertices. Throws when the shell is
/// closed; `approximate_out` is set when the shell has extra boundary loops.
inline std::map<int, Vec2> tutte_embed(const Mesh& mesh, const std::vector<int>& shell_faces,
                                       const UnwrapOptions& opts = {},
                                       bool* approximate_out = nullptr) {
    auto loops = boundary_loops(mesh, shell_faces);
    if (loops.empty())
        throw MeshError("tutte_embed: shell is closed (no boundary loop); pre-cut it first");
    if (approximate_out)
        *approximate_out = loops.size() > 1;

    size_t pin = 0;
    double best = -1.0;
    for (size_t i = 0; i < loops.size(); ++i) {
        double len = detail::loop_length_3d(mesh, loops[i]);
        if (len > best) {
            best = len;
            pin = i;
        }
    }
    const auto& loop = loops[pin];

    std::map<int, Vec2> uv;
    double total = detail::loop_length_3d(mesh, loop);
    double acc = 0.0;
    for (size_t i = 0; i < loop.size(); ++i) {
        double angle = 2.0 * std::numbers::pi * acc / total;
        uv[loop[i]] = Vec2(std::cos(angle), std::sin(angle));
        acc += (mesh.vertices[loop[(i + 1) % loop.size()]] - mesh.vertices[loop[i]]).norm();
    }

    auto weights = detail::shell_weights(mesh, shell_faces, opts.mean_value_weights);
    std::vector<int> free_verts;
    std::map<int, int> free_index;
    for (const auto& [v, nbs] : weights) {
        if (!uv.count(v)) {
            free_index[v] = static_cast<int>(free_verts.size());
            free_verts.push_back(v);
        }
    }
    if (!free_verts.empty()) {
        const int n = static_cast<int>(free_verts.size());
        std::vector<Eigen::Triplet<double>> trips;
        Eigen::MatrixX2d rhs = Eigen::MatrixX2d::Zero(n, 2);
        for (int r = 0; r < n; ++r) {
            int v = free_verts[r];
            double wsum = 0.0;
            for (const auto& [u, wvu] : weights[v]) {
                wsum += wvu;
                if (auto it = free_index.find(u); it != free_index.end())
                    trips.emplace_back(r, it->second, -wvu);
                else
                    rhs.row(r) += wvu * uv[u].transpose();
            }
            trips.emplace_back(r, r, wsum);
        }
        Eigen::SparseMatrix<double> lap(n, n);
        lap.setFromTriplets(trips.begin(), trips.end());
        Eigen::SparseLU<Eigen::SparseMatrix<double>> solver;
        solver.compute(lap);
        if (solver.info() != Eigen::Success)
            throw MeshError("tutte_embed: singular Laplacian system");
        Eigen::MatrixX2d sol = solver.solve(rhs);

        double resid = (lap * sol - rhs).cwiseAbs().maxCoeff();
        // normalize residual by row weight sum scale
        if (resid > opts.solver_residual_tol * std::max(1.0, lap.coeffs().abs().maxCoeff()))
            throw MeshError("tutte_embed: solver residual too large");
        for (int r = 0; r < n; ++r)
            uv[free_verts[r]] = sol.row(r).transpose();
    }
    return uv;
}

/// Edge path between two approximately farthest vertices of a closed shell
/// (double-sweep BFS), to give the shell a boundary before embedding.
/// Returns edge indices; empty when the shell already has a boundary.
inline std::vector<int> fallback_cut(const Mesh& mesh, const std::vector<int>& shell_faces) {
    if (!boundary_loops(mesh, shell_faces).empty())
        return {};

    std::set<int> vset;
    std::map<int, std::vector<int>> adj;  // vertex -> neighbor vertices via shell edges
    for (int f : shell_faces) {
        const auto& tri = mesh.faces[f];
        for (int c = 0; c < 3; ++c) {
            vset.insert(tri[c]);
            adj[tri[c]].push_back(tri[(c + 1) % 3]);
            adj[tri[c]].push_back(tri[(c + 2) % 3]);
        }
    }
    for (auto& [v, nbs] : adj) {
        std::sort(nbs.begin(), nbs.end());
        nbs.erase(std::unique(nbs.begin(), nbs.end()), nbs.end());
    }

    auto bfs = [&](int src, std::map<int, int>* parent_out) {
        std::map<int, int> dist, parent;
        std::deque<int> q{src};
        dist[src] = 0;
        int far = src;
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            for (int u : adj[v]) {
                if (dist.count(u))
                    continue;
                dist[u] = dist[v] + 1;
                parent[u] = v;
                if (dist[u] > dist[far])
                    far = u;
                q.push_back(u);
            }
        }
        if (parent_out)
            *parent_out = parent;
        return far;
    };
    int a = bfs(*vset.begin(), nullptr);
    std::map<int, int> parent;
    int b = bfs(a, &parent);

    std::vector<int> path_edges;
    for (int v = b; v != a; v = parent[v])
        path_edges.push_back(mesh.edge_index(v, parent[v]));
    return path_edges;
}

/// Unwraps an already-cut mesh: one Tutte chart per connected face
/// component, then global area normalization and per-face distortion.
/// Closed components are given a fallback cut internally; the cut mesh used
/// for charts preserves face order, so distortions align with input faces.
inline UvAtlas unwrap(const Mesh& cut, const UnwrapOptions& opts = {}) {
    Mesh work = cut;
    SeamLabels zero;
    zero.labels.assign(work.edge_count(), 0);
    ShellPartition part = shells_from_labels(work, zero);

    // give every closed component a boundary
    for (int pass = 0; pass < 4; ++pass) {
        std::vector<std::vector<int>> shell_faces(part.shell_count);
        for (int f = 0; f < work.face_count(); ++f)
            shell_faces[part.face_to_shell[f]].push_back(f);
        SeamLabels extra;
        extra.labels.assign(work.edge_count(), 0);
        bool any = false;
        for (const auto& faces : shell_faces) {
            for (int e : fallback_cut(work, faces)) {
                extra.labels[e] = 1;
                any = true;
            }
        }
        if (!any)
            break;
        work = cut_mesh(work, extra);
        part = shells_from_labels(work, SeamLabels{std::vector<int>(work.edge_count(), 0)});
    }

    std::vector<std::vector<int>> shell_faces(part.shell_count);
    for (int f = 0; f < work.face_count(); ++f)
        shell_faces[part.face_to_shell[f]].push_back(f);

    UvAtlas atlas;
    atlas.face_uvs.resize(work.face_count());
    for (const auto& faces : shell_faces) {
        Chart chart;
        chart.faces = faces;
        auto uv = tutte_embed(work, faces, opts, &chart.approximate);
        // boundary walk direction is arbitrary; mirror charts that came out
        // with negative orientation
        double chart_area = 0.0;
        for (int f : faces) {
            std::array<Vec2, 3> uvs{uv[work.faces[f][0]], uv[work.faces[f][1]], uv[work.faces[f][2]]};
            chart_area += uv_signed_area(uvs);
        }
        if (chart_area < 0.0)
            for (auto& [v, p] : uv)
                p.y() = -p.y();
        for (int f : faces)
            for (int c = 0; c < 3; ++c)
                atlas.face_uvs[f][c] = uv[work.faces[f][c]];
        atlas.shells.push_back(std::move(chart));
    }

    double area3 = 0.0, area_uv = 0.0;
    for (int f = 0; f < work.face_count(); ++f) {
        area3 += face_area_3d(work, f);
        area_uv += std::abs(uv_signed_area(atlas.face_uvs[f]));
    }
    if (area_uv <= 0.0)
        throw MeshError("unwrap: degenerate UV atlas (zero area)");
    double s = std::sqrt(area3 / area_uv);
    atlas.area_scale = s;
    for (auto& uvs : atlas.face_uvs)
        for (auto& p : uvs)
            p *= s;

    atlas.face_distortion.resize(work.face_count());
    for (int f = 0; f < work.face_count(); ++f) {
        double a3 = face_area_3d(work, f);
        if (a3 <= 0.0)
            throw MeshError("unwrap: zero-area 3D face " + std::to_string(f));
        atlas.face_distortion[f] = std::abs(uv_signed_area(atlas.face_uvs[f])) / a3;
    }
    return atlas;
}

/// Cut along the labels, then unwrap. Face indices of the result align with
/// the input mesh's faces.
inline UvAtlas unwrap_with_labels(const Mesh& mesh, const SeamLabels& labels,
                                  const UnwrapOptions& opts = {}) {
    return unwrap(cut_mesh(mesh, labels), opts);
}

/// Recomputes D_f for an externally supplied atlas (e.g. authored UVs),
/// applying the global area normalization first.
inline std::vector<double> face_distortion(const Mesh& mesh,
                                           const std::vector<std::array<Vec2, 3>>& face_uvs) {
    if (static_cast<int>(face_uvs.size()) != mesh.face_count())
        throw MeshError("face_distortion: face count mismatch");
    double area3 = 0.0, area_uv = 0.0;
    for (int f = 0; f < mesh.face_count(); ++f) {
        area3 += face_area_3d(mesh, f);
        area_uv += std::abs(uv_signed_area(face_uvs[f]));
    }
    double s2 = area3 / area_uv;
    std::vector<double> d(mesh.face_count());
    for (int f = 0; f < mesh.face_count(); ++f) {
        double a3 = face_area_3d(mesh, f);
        if (a3 <= 0.0)
            throw MeshError("face_distortion: zero-area 3D face " + std::to_string(f));
        d[f] = s2 * std::abs(uv_signed_area(face_uvs[f])) / a3;
    }
    return d;
}

/// mean over faces of |D_f - 1|
inline double avg_distortion(const std::vector<double>& face_distortion) {
    double sum = 0.0;
    for (double d : face_distortion)
        sum += std::abs(d - 1.0);
    return face_distortion.empty() ? 0.0 : sum / face_distortion.size();
}

inline int count_flipped(const UvAtlas& atlas) {
    int flipped = 0;
    for (const auto& uvs : atlas.face_uvs) {
        double a = uv_signed_area(uvs);
        if (a < 0.0)
            ++flipped;
    }
    return flipped;
}

}  // namespace seamcut
