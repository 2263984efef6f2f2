#pragma once

#include "seamcut/nn/train.hpp"
#include "seamcut/uv/unwrap.hpp"

#include <queue>
#include <set>

namespace seamcut {

inline constexpr double kMinEdgeWeight = 1e-6;

/// l_e = 1 - |D_f1 - D_f2| for interior edges, clamped to [1e-6, 1];
/// boundary edges get weight 1.
inline std::vector<double> edge_weights(const Mesh& mesh, const std::vector<double>& face_distortion) {
    if (static_cast<int>(face_distortion.size()) != mesh.face_count())
        throw MeshError("edge_weights: distortion vector length mismatch");
    std::vector<double> w(mesh.edge_count(), 1.0);
    for (int e = 0; e < mesh.edge_count(); ++e) {
        if (mesh.is_boundary_edge(e))
            continue;
        double d1 = face_distortion[mesh.edge_faces[e][0]];
        double d2 = face_distortion[mesh.edge_faces[e][1]];
        w[e] = std::clamp(1.0 - std::abs(d1 - d2), kMinEdgeWeight, 1.0);
    }
    return w;
}

/// Vertex set of one shell plus its interior edges (both incident faces in
/// the shell), weighted; terminals are filled by collect_terminals.
struct ComponentGraph {
    std::vector<int> vertices;                     // sorted mesh vertex ids
    std::map<int, std::vector<std::pair<int, double>>> adjacency;  // v -> (u, weight)
    std::map<std::array<int, 2>, int> edge_ids;    // (min,max) -> mesh edge index
    std::vector<int> terminals;                    // sorted
};

inline ComponentGraph component_graph(const Mesh& mesh, const std::vector<int>& shell_faces,
                                      const std::vector<double>& weights,
                                      bool include_boundary = false) {
    ComponentGraph g;
    std::set<int> vset, fset(shell_faces.begin(), shell_faces.end());
    for (int f : shell_faces)
        for (int c = 0; c < 3; ++c)
            vset.insert(mesh.faces[f][c]);
    g.vertices.assign(vset.begin(), vset.end());
    for (int e = 0; e < mesh.edge_count(); ++e) {
        if (mesh.is_boundary_edge(e) && !include_boundary)
            continue;
        if (!fset.count(mesh.edge_faces[e][0]) ||
            (!mesh.is_boundary_edge(e) && !fset.count(mesh.edge_faces[e][1])))
            continue;
        int a = mesh.edges[e][0], b = mesh.edges[e][1];
        g.adjacency[a].emplace_back(b, weights[e]);
        g.adjacency[b].emplace_back(a, weights[e]);
        g.edge_ids[{a, b}] = e;
    }
    return g;
}

/// Every vertex of the component incident to at least one seam-labeled mesh
/// edge, whether interior to the component or on its cut boundary.
inline std::vector<int> collect_terminals(const Mesh& mesh, const SeamLabels& labels,
                                          const ComponentGraph& g) {
    auto ve = vertex_edge_adjacency(mesh);
    std::vector<int> terminals;
    for (int v : g.vertices)
        for (int e : ve[v])
            if (labels.labels[e]) {
                terminals.push_back(v);
                break;
            }
    return terminals;
}

namespace detail {

/// Dijkstra from src over the component graph; ties broken by smallest
/// vertex index. Fills dist and parent for reachable vertices.
inline void dijkstra(const ComponentGraph& g, int src, std::map<int, double>& dist,
                     std::map<int, int>& parent) {
    dist.clear();
    parent.clear();
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[src] = 0.0;
    pq.push({0.0, src});
    while (!pq.empty()) {
        auto [d, v] = pq.top();
        pq.pop();
        if (d > dist[v])
            continue;
        auto it = g.adjacency.find(v);
        if (it == g.adjacency.end())
            continue;
        for (auto [u, w] : it->second) {
            double nd = d + w;
            auto du = dist.find(u);
            if (du == dist.end() || nd < du->second ||
                (nd == du->second && v < parent[u])) {
                dist[u] = nd;
                parent[u] = v;
                pq.push({nd, u});
            }
        }
    }
}

}  // namespace detail

/// Metric-closure Steiner approximation:
///   1. shortest paths between all terminal pairs (Dijkstra under l_e)
///   2. complete closure graph on terminals
///   3. MST of the closure
///   4. expand MST edges to original paths, union, prune cycles via an MST
///      of the union subgraph
/// Returns mesh edge indices of an acyclic subgraph spanning all terminals.
inline std::vector<int> approx_steiner(const ComponentGraph& g, const std::vector<int>& terminals) {
    if (terminals.size() < 2)
        throw MeshError("approx_steiner: need at least 2 terminals");

    const int t = static_cast<int>(terminals.size());
    std::vector<std::map<int, double>> dist(t);
    std::vector<std::map<int, int>> parent(t);
    for (int i = 0; i < t; ++i) {
        detail::dijkstra(g, terminals[i], dist[i], parent[i]);
        for (int j = 0; j < t; ++j)
            if (j != i && !dist[i].count(terminals[j]))
                throw MeshError("approx_steiner: terminals in different components");
    }

    // MST of the metric closure (Kruskal, deterministic tie-break)
    struct ClosureEdge {
        double w;
        int i, j;
    };
    std::vector<ClosureEdge> closure;
    for (int i = 0; i < t; ++i)
        for (int j = i + 1; j < t; ++j)
            closure.push_back({dist[i][terminals[j]], i, j});
    std::sort(closure.begin(), closure.end(), [](const ClosureEdge& a, const ClosureEdge& b) {
        return std::tie(a.w, a.i, a.j) < std::tie(b.w, b.i, b.j);
    });
    detail::UnionFind uf(t);
    std::set<int> union_edges;  // mesh edge ids on selected expanded paths
    for (const auto& ce : closure) {
        if (uf.find(ce.i) == uf.find(ce.j))
            continue;
        uf.unite(ce.i, ce.j);
        // expand the path terminals[j] -> terminals[i]
        int v = terminals[ce.j];
        while (v != terminals[ce.i]) {
            int p = parent[ce.i][v];
            union_edges.insert(g.edge_ids.at({std::min(v, p), std::max(v, p)}));
            v = p;
        }
    }

    // cycle pruning: MST of the union subgraph under l_e
    std::vector<int> union_vec(union_edges.begin(), union_edges.end());
    struct UEdge {
        double w;
        int e;
    };
    // weights recovered via edge_ids; build vertex set remap
    std::map<int, int> vid;
    std::vector<UEdge> uedges;
    std::map<int, std::pair<int, int>> endpoints;
    for (const auto& [key, e] : g.edge_ids)
        endpoints[e] = {key[0], key[1]};
    std::map<int, double> eweight;
    for (const auto& [v, nbs] : g.adjacency)
        for (auto [u, w] : nbs)
            eweight[g.edge_ids.at({std::min(v, u), std::max(v, u)})] = w;
    for (int e : union_vec) {
        auto [a, b] = endpoints[e];
        if (!vid.count(a))
            vid[a] = static_cast<int>(vid.size());
        if (!vid.count(b))
            vid[b] = static_cast<int>(vid.size());
        uedges.push_back({eweight[e], e});
    }
    std::sort(uedges.begin(), uedges.end(),
              [](const UEdge& a, const UEdge& b) { return std::tie(a.w, a.e) < std::tie(b.w, b.e); });
    detail::UnionFind uf2(static_cast<int>(vid.size()));
    std::vector<int> tree;
    for (const auto& ue : uedges) {
        auto [a, b] = endpoints[ue.e];
        if (uf2.find(vid[a]) == uf2.find(vid[b]))
            continue;
        uf2.unite(vid[a], vid[b]);
        tree.push_back(ue.e);
    }
    std::sort(tree.begin(), tree.end());
    return tree;
}

struct RefineResult {
    SeamLabels labels;
    int shell_count_before = 0;
    int shell_count_after = 0;
};

/// The distortion Steiner tree pass: binarize at cut_threshold, cut and
/// unwrap, derive Eq-style weights from face distortion, then per shell
/// connect all seam-incident vertices with an approximate Steiner tree.
///
/// The per-shell graph lives on the cut mesh, so seam edges severed by the
/// cut appear as boundary rim edges (one copy per side) and both copies of a
/// split vertex are distinct graph nodes. Every cut edge inherits the weight
/// and the seam label of its originating edge. This is what lets a tree close
/// a seam gap: connecting the two rim sides forces a path through the gap
/// region, and that path plus the kept rim forms a separating loop.
///
/// Output labels = seam edges on shell cut boundaries + per-shell tree edges
/// mapped back to original edges; within-shell seam edges not selected by a
/// tree are dropped.
inline RefineResult refine_labels(const Mesh& mesh, const std::vector<double>& probs,
                                  double cut_threshold = 0.9, const UnwrapOptions& opts = {}) {
    SeamLabels initial;
    initial.labels = nn::binarize(probs, cut_threshold);

    ShellPartition part = shells_from_labels(mesh, initial);
    Mesh cut = cut_mesh(mesh, initial);
    UvAtlas atlas = unwrap(cut, opts);
    auto weights = edge_weights(mesh, atlas.face_distortion);

    // cut edge -> originating edge, via the preserved face order
    std::vector<int> cut_to_orig(cut.edge_count(), -1);
    for (int f = 0; f < mesh.face_count(); ++f) {
        for (int c = 0; c < 3; ++c) {
            int ec = cut.edge_index(cut.faces[f][c], cut.faces[f][(c + 1) % 3]);
            int eo = mesh.edge_index(mesh.faces[f][c], mesh.faces[f][(c + 1) % 3]);
            cut_to_orig[ec] = eo;
        }
    }
    std::vector<double> cut_weights(cut.edge_count());
    SeamLabels cut_labels;
    cut_labels.labels.assign(cut.edge_count(), 0);
    for (int ec = 0; ec < cut.edge_count(); ++ec) {
        cut_weights[ec] = weights[cut_to_orig[ec]];
        cut_labels.labels[ec] = initial.labels[cut_to_orig[ec]];
    }

    SeamLabels refined;
    refined.labels.assign(mesh.edge_count(), 0);
    // Keep the seam edges the cut actually severed: they lie on a shell cut
    // boundary, visible as an interior edge that became boundary in the cut.
    for (int ec = 0; ec < cut.edge_count(); ++ec)
        if (cut_labels.labels[ec] && cut.is_boundary_edge(ec) &&
            !mesh.is_boundary_edge(cut_to_orig[ec]))
            refined.labels[cut_to_orig[ec]] = 1;

    std::vector<std::vector<int>> shell_faces(part.shell_count);
    for (int f = 0; f < mesh.face_count(); ++f)
        shell_faces[part.face_to_shell[f]].push_back(f);
    for (const auto& faces : shell_faces) {
        ComponentGraph g = component_graph(cut, faces, cut_weights, true);
        g.terminals = collect_terminals(cut, cut_labels, g);
        if (g.terminals.size() < 2)
            continue;
        for (int ec : approx_steiner(g, g.terminals))
            if (!mesh.is_boundary_edge(cut_to_orig[ec]))
                refined.labels[cut_to_orig[ec]] = 1;
    }

    RefineResult res;
    res.labels = std::move(refined);
    res.shell_count_before = part.shell_count;
    res.shell_count_after = shells_from_labels(mesh, res.labels).shell_count;
    return res;
}

}  // namespace seamcut
