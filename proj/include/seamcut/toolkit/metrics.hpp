#pragma once

#include "seamcut/core/mesh.hpp"

#include <optional>

namespace seamcut {

/// Seam detection rates in percent. tpr is absent when the truth has no
/// positive edges.
struct SeamMetrics {
    double fpr = 0.0;
    std::optional<double> tpr;
    double accuracy = 0.0;
    long tp = 0, fp = 0, tn = 0, fn = 0;
};

inline SeamMetrics metrics(const std::vector<int>& pred, const std::vector<int>& truth) {
    if (pred.size() != truth.size())
        throw MeshError("metrics: prediction/truth length mismatch");
    SeamMetrics m;
    for (size_t i = 0; i < pred.size(); ++i) {
        if (truth[i] == 1)
            pred[i] == 1 ? ++m.tp : ++m.fn;
        else
            pred[i] == 1 ? ++m.fp : ++m.tn;
    }
    long n = static_cast<long>(pred.size());
    if (m.tp + m.fn > 0)
        m.tpr = 100.0 * m.tp / (m.tp + m.fn);
    m.fpr = m.fp + m.tn > 0 ? 100.0 * m.fp / (m.fp + m.tn) : 0.0;
    m.accuracy = n > 0 ? 100.0 * (m.tp + m.tn) / n : 0.0;
    return m;
}

}  // namespace seamcut
