#pragma once

#include "seamcut/graph/features.hpp"

#include <random>

namespace seamcut {

inline constexpr double kMaxDisplacementFraction = 0.2;  // of the bbox diagonal

/// Gaussian vertex jitter on a random vertex subset. noise_std is relative
/// to the bounding box diagonal; per-vertex displacement magnitude is
/// clamped to 20% of the diagonal. Labels are copied unchanged. Output i is
/// a deterministic function of (seed, i).
inline std::vector<std::pair<Mesh, SeamLabels>> augment(const Mesh& mesh, const SeamLabels& labels,
                                                        int count, double noise_std,
                                                        double vertex_fraction, uint64_t seed) {
    if (noise_std < 0.0)
        throw MeshError("augment: noise_std must be >= 0");
    if (vertex_fraction <= 0.0 || vertex_fraction > 1.0)
        throw MeshError("augment: vertex_fraction must be in (0,1]");

    const double diag = bbox_diagonal(mesh);
    const double std_abs = noise_std * diag;
    const double clamp_abs = kMaxDisplacementFraction * diag;

    std::vector<std::pair<Mesh, SeamLabels>> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + static_cast<uint64_t>(i) + 1);
        Mesh m = mesh;
        m.name = mesh.name + "_aug" + std::to_string(i);
        if (std_abs > 0.0) {
            std::vector<int> idx(m.vertex_count());
            std::iota(idx.begin(), idx.end(), 0);
            std::shuffle(idx.begin(), idx.end(), rng);
            int n = std::max(1, static_cast<int>(vertex_fraction * m.vertex_count()));
            std::normal_distribution<double> gauss(0.0, std_abs);
            for (int k = 0; k < n; ++k) {
                Vec3 delta(gauss(rng), gauss(rng), gauss(rng));
                double len = delta.norm();
                if (len > clamp_abs)
                    delta *= clamp_abs / len;
                m.vertices[idx[k]] += delta;
            }
        }
        out.emplace_back(std::move(m), labels);
    }
    return out;
}

}  // namespace seamcut
