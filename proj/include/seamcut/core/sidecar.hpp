#pragma once

#include "seamcut/core/mesh.hpp"

#include <nlohmann/json.hpp>

namespace seamcut {

// {"mesh": <name>, "edges": [[i,j],...], "labels": [0|1,...]}
inline nlohmann::json label_sidecar(const Mesh& mesh, const SeamLabels& labels) {
    if (static_cast<int>(labels.labels.size()) != mesh.edge_count())
        throw MeshError("label_sidecar: label vector length mismatch");
    nlohmann::json j;
    j["mesh"] = mesh.name;
    auto edges = nlohmann::json::array();
    for (const auto& e : mesh.edges)
        edges.push_back({e[0], e[1]});
    j["edges"] = std::move(edges);
    j["labels"] = labels.labels;
    return j;
}

inline SeamLabels labels_from_sidecar(const nlohmann::json& j, const Mesh& mesh) {
    SeamLabels out;
    out.labels = j.at("labels").get<std::vector<int>>();
    if (static_cast<int>(out.labels.size()) != mesh.edge_count())
        throw MeshError("sidecar labels do not match mesh edge count");
    const auto& edges = j.at("edges");
    if (static_cast<int>(edges.size()) != mesh.edge_count())
        throw MeshError("sidecar edge list does not match mesh edge count");
    for (int e = 0; e < mesh.edge_count(); ++e)
        if (edges[e][0].get<int>() != mesh.edges[e][0] || edges[e][1].get<int>() != mesh.edges[e][1])
            throw MeshError("sidecar edge " + std::to_string(e) + " disagrees with canonical order");
    for (int v : out.labels)
        if (v != 0 && v != 1)
            throw MeshError("sidecar labels must be 0/1");
    return out;
}

inline nlohmann::json prob_sidecar(const Mesh& mesh, const std::vector<double>& probs) {
    nlohmann::json j;
    j["mesh"] = mesh.name;
    auto edges = nlohmann::json::array();
    for (const auto& e : mesh.edges)
        edges.push_back({e[0], e[1]});
    j["edges"] = std::move(edges);
    j["probs"] = probs;
    return j;
}

}  // namespace seamcut
