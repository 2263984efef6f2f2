#pragma once

#include "seamcut/core/mesh.hpp"

#include <deque>
#include <set>

namespace seamcut {

struct SkeletonConfig {
    double candidate_fraction = 0.2;  // top fraction of vertices by probability
    int max_orphan_distance = 3;      // edge hops on the full mesh graph
    int min_shell_faces = 2;          // shells this small get merged away

    void validate() const {
        if (candidate_fraction <= 0.0 || candidate_fraction >= 1.0)
            throw std::invalid_argument("skeleton config: candidate_fraction must be in (0,1)");
        if (max_orphan_distance < 1)
            throw std::invalid_argument("skeleton config: max_orphan_distance must be >= 1");
    }
};

/// v -> max probability of any incident edge
inline std::vector<double> vertex_probs(const Mesh& mesh, const std::vector<double>& probs) {
    if (static_cast<int>(probs.size()) != mesh.edge_count())
        throw MeshError("vertex_probs: probability vector length mismatch");
    std::vector<double> out(mesh.vertex_count(), 0.0);
    for (int e = 0; e < mesh.edge_count(); ++e) {
        out[mesh.edges[e][0]] = std::max(out[mesh.edges[e][0]], probs[e]);
        out[mesh.edges[e][1]] = std::max(out[mesh.edges[e][1]], probs[e]);
    }
    return out;
}

namespace detail {

inline std::vector<std::vector<int>> vertex_vertex_adjacency(const Mesh& mesh) {
    std::vector<std::vector<int>> adj(mesh.vertex_count());
    for (const auto& e : mesh.edges) {
        adj[e[0]].push_back(e[1]);
        adj[e[1]].push_back(e[0]);
    }
    return adj;
}

inline int component_count(const std::vector<std::vector<int>>& adj, const std::set<int>& verts) {
    std::set<int> seen;
    int comps = 0;
    for (int start : verts) {
        if (seen.count(start))
            continue;
        ++comps;
        std::deque<int> q{start};
        seen.insert(start);
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            for (int u : adj[v])
                if (verts.count(u) && !seen.count(u)) {
                    seen.insert(u);
                    q.push_back(u);
                }
        }
    }
    return comps;
}

/// true iff every vertex of `sources` is within `max_dist` hops (full mesh
/// graph) of some vertex in `targets`
inline bool all_within(const std::vector<std::vector<int>>& adj, const std::set<int>& sources,
                       const std::set<int>& targets, int max_dist) {
    if (sources.empty())
        return true;
    // multi-source BFS from targets
    std::map<int, int> dist;
    std::deque<int> q;
    for (int v : targets) {
        dist[v] = 0;
        q.push_back(v);
    }
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        if (dist[v] >= max_dist)
            continue;
        for (int u : adj[v])
            if (!dist.count(u)) {
                dist[u] = dist[v] + 1;
                q.push_back(u);
            }
    }
    for (int v : sources)
        if (!dist.count(v))
            return false;
    return true;
}

}  // namespace detail

/// Connectivity-preserving thinning of the high-probability candidate
/// vertex set. Repeatedly removes the lowest-probability candidate whose
/// removal (a) keeps the candidate-induced subgraph's component count and
/// (b) leaves no removed vertex farther than max_orphan_distance hops from
/// the survivors. Output: edge labeled 1 iff both endpoints survive and its
/// probability reaches the minimum surviving vertex probability.
inline SeamLabels thin(const Mesh& mesh, const std::vector<double>& probs,
                       const SkeletonConfig& config = {}) {
    config.validate();
    auto vp = vertex_probs(mesh, probs);
    auto adj = detail::vertex_vertex_adjacency(mesh);

    // top-k candidates, ties broken toward lower index
    int k = static_cast<int>(config.candidate_fraction * mesh.vertex_count());
    std::vector<int> order(mesh.vertex_count());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return vp[a] != vp[b] ? vp[a] > vp[b] : a < b;
    });
    std::set<int> survivors(order.begin(), order.begin() + k);

    SeamLabels out;
    out.labels.assign(mesh.edge_count(), 0);
    if (survivors.empty())
        return out;

    const int target_comps = detail::component_count(adj, survivors);
    std::set<int> removed;

    // removal order: lowest probability first, lower index breaks ties
    auto lower_priority = [&](int a, int b) {
        return vp[a] != vp[b] ? vp[a] < vp[b] : a < b;
    };
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<int> scan(survivors.begin(), survivors.end());
        std::sort(scan.begin(), scan.end(), lower_priority);
        for (int v : scan) {
            // curve endpoints (degree <= 1 in the induced subgraph) stay:
            // removing them would erode seam curves from the tips inward
            int degree = 0;
            for (int u : adj[v])
                degree += survivors.count(u) ? 1 : 0;
            if (degree <= 1)
                continue;
            std::set<int> trial = survivors;
            trial.erase(v);
            if (trial.empty())
                continue;
            if (detail::component_count(adj, trial) != target_comps)
                continue;
            std::set<int> trial_removed = removed;
            trial_removed.insert(v);
            if (!detail::all_within(adj, trial_removed, trial, config.max_orphan_distance))
                continue;
            survivors = std::move(trial);
            removed = std::move(trial_removed);
            changed = true;
            break;  // restart the scan after every removal
        }
    }

    double min_surviving = std::numeric_limits<double>::infinity();
    for (int v : survivors)
        min_surviving = std::min(min_surviving, vp[v]);
    for (int e = 0; e < mesh.edge_count(); ++e)
        if (survivors.count(mesh.edges[e][0]) && survivors.count(mesh.edges[e][1]) &&
            probs[e] >= min_surviving)
            out.labels[e] = 1;
    return out;
}

/// Merges every shell of at most min_shell_faces faces into a neighbor by
/// clearing its boundary seam labels; repeats until no tiny shell remains.
inline SeamLabels purge_tiny_shells(const Mesh& mesh, const SeamLabels& labels,
                                    int min_shell_faces = 2) {
    SeamLabels out = labels;
    for (;;) {
        ShellPartition part = shells_from_labels(mesh, out);
        std::vector<int> shell_sizes(part.shell_count, 0);
        for (int s : part.face_to_shell)
            ++shell_sizes[s];
        bool any = false;
        for (int e = 0; e < mesh.edge_count(); ++e) {
            if (!out.labels[e] || mesh.is_boundary_edge(e))
                continue;
            int s1 = part.face_to_shell[mesh.edge_faces[e][0]];
            int s2 = part.face_to_shell[mesh.edge_faces[e][1]];
            if (s1 == s2)
                continue;
            if (shell_sizes[s1] <= min_shell_faces || shell_sizes[s2] <= min_shell_faces) {
                out.labels[e] = 0;
                any = true;
            }
        }
        if (!any)
            break;
        // a merge can only reduce the shell count, so this terminates
    }
    return out;
}

}  // namespace seamcut
