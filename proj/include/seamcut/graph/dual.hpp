#pragma once

#include "seamcut/graph/features.hpp"

#include <Eigen/Sparse>
#include <nlohmann/json.hpp>

namespace seamcut {

/// Line graph of the mesh. One node per mesh edge (standard) or two ordered
/// copies per edge (augmented); nodes adjacent iff the underlying edges
/// share an endpoint.
struct DualGraph {
    int node_count = 0;
    std::vector<std::vector<int>> adjacency;  // sorted neighbor lists, no self
    std::vector<int> dual_to_edge;            // dual node -> mesh edge index
    Eigen::MatrixXd features;                 // node_count x 14
    bool augmented = false;

    int degree(int v) const { return static_cast<int>(adjacency[v].size()); }
};

inline DualGraph build_dual(const Mesh& mesh, const Eigen::MatrixXd& features, bool augmented = false) {
    if (features.rows() != mesh.vertex_count())
        throw MeshError("build_dual: feature row count does not match vertex count");
    const int fe = static_cast<int>(features.cols());
    const int ne = mesh.edge_count();
    const int copies = augmented ? 2 : 1;

    DualGraph dual;
    dual.augmented = augmented;
    dual.node_count = copies * ne;
    dual.adjacency.resize(dual.node_count);
    dual.dual_to_edge.resize(dual.node_count);
    dual.features.resize(dual.node_count, 2 * fe);

    for (int e = 0; e < ne; ++e) {
        int i = mesh.edges[e][0], j = mesh.edges[e][1];
        dual.dual_to_edge[copies * e] = e;
        dual.features.block(copies * e, 0, 1, fe) = features.row(i);
        dual.features.block(copies * e, fe, 1, fe) = features.row(j);
        if (augmented) {
            dual.dual_to_edge[copies * e + 1] = e;
            dual.features.block(copies * e + 1, 0, 1, fe) = features.row(j);
            dual.features.block(copies * e + 1, fe, 1, fe) = features.row(i);
        }
    }

    auto ve = vertex_edge_adjacency(mesh);
    auto link = [&](int a, int b) {
        dual.adjacency[a].push_back(b);
        dual.adjacency[b].push_back(a);
    };
    for (const auto& incident : ve) {
        for (size_t p = 0; p < incident.size(); ++p) {
            for (size_t q = p + 1; q < incident.size(); ++q) {
                for (int ca = 0; ca < copies; ++ca)
                    for (int cb = 0; cb < copies; ++cb)
                        link(copies * incident[p] + ca, copies * incident[q] + cb);
            }
        }
    }
    if (augmented) {
        // the two ordered copies of an edge share both endpoints
        for (int e = 0; e < ne; ++e)
            link(2 * e, 2 * e + 1);
    }
    for (auto& nb : dual.adjacency) {
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
    return dual;
}

/// A_hat = D^{-1/2} (A + I) D^{-1/2}
inline Eigen::SparseMatrix<double> normalize_adjacency(const DualGraph& dual) {
    const int n = dual.node_count;
    Eigen::VectorXd inv_sqrt_deg(n);
    for (int v = 0; v < n; ++v)
        inv_sqrt_deg(v) = 1.0 / std::sqrt(static_cast<double>(dual.degree(v)) + 1.0);

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(n + 2 * n);
    for (int v = 0; v < n; ++v) {
        trips.emplace_back(v, v, inv_sqrt_deg(v) * inv_sqrt_deg(v));
        for (int u : dual.adjacency[v])
            trips.emplace_back(v, u, inv_sqrt_deg(v) * inv_sqrt_deg(u));
    }
    Eigen::SparseMatrix<double> a_hat(n, n);
    a_hat.setFromTriplets(trips.begin(), trips.end());
    return a_hat;
}

inline nlohmann::json dual_debug_json(const DualGraph& dual) {
    nlohmann::json j;
    j["node_count"] = dual.node_count;
    j["augmented"] = dual.augmented;
    j["dual_to_edge"] = dual.dual_to_edge;
    auto edges = nlohmann::json::array();
    for (int v = 0; v < dual.node_count; ++v)
        for (int u : dual.adjacency[v])
            if (v < u)
                edges.push_back({v, u});
    j["edges"] = std::move(edges);
    return j;
}

}  // namespace seamcut
