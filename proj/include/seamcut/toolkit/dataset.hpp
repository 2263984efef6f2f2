#pragma once

#include "seamcut/nn/train.hpp"
#include "seamcut/toolkit/augment.hpp"
#include "seamcut/toolkit/synthetic.hpp"

#include <set>

namespace seamcut {

enum class Split { train, val, test };

inline std::string to_string(Split s) {
    switch (s) {
        case Split::train: return "train";
        case Split::val: return "val";
        case Split::test: return "test";
    }
    return "?";
}

struct DatasetEntry {
    Mesh mesh;
    SeamLabels labels;
    Split split = Split::train;
};

/// Named, split-tagged mesh/label corpus.
struct Dataset {
    std::vector<DatasetEntry> entries;

    void validate() const {
        std::set<std::string> names;
        for (const auto& e : entries) {
            if (!names.insert(e.mesh.name).second)
                throw MeshError("dataset: duplicate mesh name '" + e.mesh.name + "'");
            if (static_cast<int>(e.labels.labels.size()) != e.mesh.edge_count())
                throw MeshError("dataset: labels misaligned for '" + e.mesh.name + "'");
        }
    }

    std::vector<const DatasetEntry*> split(Split s) const {
        std::vector<const DatasetEntry*> out;
        for (const auto& e : entries)
            if (e.split == s)
                out.push_back(&e);
        return out;
    }
};

/// Mesh + labels -> full-graph training sample over the dual graph.
inline nn::GraphSample make_sample(const Mesh& mesh, const SeamLabels& labels,
                                   bool augmented = false) {
    nn::GraphSample s;
    s.dual = build_dual(mesh, node_features(mesh), augmented);
    s.a_hat = normalize_adjacency(s.dual);
    s.edge_count = mesh.edge_count();
    s.labels.resize(s.dual.node_count);
    for (int v = 0; v < s.dual.node_count; ++v)
        s.labels[v] = labels.labels[s.dual.dual_to_edge[v]];
    return s;
}

inline std::vector<nn::GraphSample> make_samples(const std::vector<const DatasetEntry*>& entries,
                                                 bool augmented = false) {
    std::vector<nn::GraphSample> out;
    out.reserve(entries.size());
    for (const auto* e : entries)
        out.push_back(make_sample(e->mesh, e->labels, augmented));
    return out;
}

/// Mixed cylinder/capsule/sphere corpus with seed-varied proportions,
/// optionally extended with noisy augmented copies of each base mesh.
inline Dataset synthetic_dataset(int count, uint64_t seed, int augment_per_mesh = 0,
                                 double noise_std = 0.01) {
    static const std::vector<std::string> kinds = {"cylinder", "capsule", "sphere_band",
                                                   "lumpy_sphere"};
    Dataset ds;
    for (int i = 0; i < count; ++i) {
        SyntheticParams p;
        p.segments = 10 + static_cast<int>((seed + i) % 5) * 2;
        p.rings = 6 + static_cast<int>((seed + i) % 3) * 2;
        auto [mesh, labels] = gen_synthetic(kinds[i % kinds.size()], p, seed + i);
        mesh.name += "_" + std::to_string(i);
        if (augment_per_mesh > 0)
            for (auto& [am, al] : augment(mesh, labels, augment_per_mesh, noise_std, 0.5, seed + i))
                ds.entries.push_back({std::move(am), std::move(al), Split::train});
        ds.entries.push_back({std::move(mesh), std::move(labels), Split::train});
    }
    ds.validate();
    return ds;
}

/// Shuffles the entries with the given seed and tags them train/val/test by
/// the requested counts.
inline void assign_splits(Dataset& ds, int val_count, int test_count, uint64_t seed) {
    if (val_count + test_count >= static_cast<int>(ds.entries.size()))
        throw MeshError("assign_splits: not enough entries for the requested splits");
    std::vector<int> order(ds.entries.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    for (size_t k = 0; k < order.size(); ++k) {
        Split s = Split::train;
        if (k < static_cast<size_t>(test_count))
            s = Split::test;
        else if (k < static_cast<size_t>(test_count + val_count))
            s = Split::val;
        ds.entries[order[k]].split = s;
    }
}

}  // namespace seamcut
