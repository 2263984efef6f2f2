#pragma once

#include "seamcut/core/obj_io.hpp"
#include "seamcut/core/sidecar.hpp"
#include "seamcut/refine/dst.hpp"
#include "seamcut/refine/skeleton.hpp"
#include "seamcut/toolkit/dataset.hpp"
#include "seamcut/toolkit/metrics.hpp"

#include <filesystem>
#include <fstream>

namespace seamcut {

inline constexpr int kReportVersion = 1;

struct PipelineConfig {
    nn::ModelConfig model;
    nn::TrainConfig train;
    std::string checkpoint_path;  // when set, load instead of training
    bool use_skeleton = true;
    bool use_dst = true;
    bool dst_first = false;  // default post-process order is SK then DST
    double threshold = 0.5;
    double cut_threshold = 0.9;
    SkeletonConfig skeleton;
    UnwrapOptions unwrap;
    std::string out_dir;  // empty: no artifacts written
    uint64_t seed = 0;
};

struct MeshReport {
    std::string name;
    SeamMetrics seam;
    int shell_count = 1;
    double avg_distortion = 0.0;
};

struct EvalReport {
    double fpr = 0.0;
    std::optional<double> tpr;
    double accuracy = 0.0;
    double mean_shell_count = 0.0;
    double mean_avg_distortion = 0.0;
    std::vector<MeshReport> per_mesh;
};

namespace detail_pipe {

inline nlohmann::ordered_json mesh_report_json(const MeshReport& r) {
    nlohmann::ordered_json j;
    j["mesh"] = r.name;
    j["fpr"] = r.seam.fpr;
    if (r.seam.tpr)
        j["tpr"] = *r.seam.tpr;
    j["accuracy"] = r.seam.accuracy;
    j["shell_count"] = r.shell_count;
    j["avg_distortion"] = r.avg_distortion;
    return j;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << text;
}

}  // namespace detail_pipe

inline nlohmann::ordered_json report_json(const EvalReport& r) {
    nlohmann::ordered_json j;
    j["version"] = kReportVersion;
    j["fpr"] = r.fpr;
    if (r.tpr)
        j["tpr"] = *r.tpr;
    j["accuracy"] = r.accuracy;
    j["mean_shell_count"] = r.mean_shell_count;
    j["mean_avg_distortion"] = r.mean_avg_distortion;
    auto meshes = nlohmann::ordered_json::array();
    for (const auto& m : r.per_mesh)
        meshes.push_back(detail_pipe::mesh_report_json(m));
    j["per_mesh"] = std::move(meshes);
    return j;
}

/// Predicted probabilities -> final labels via the configured post-process
/// stages. Skeletonization and DST are chained by masking probabilities to
/// the labels the previous stage kept (stage-added edges get at least the
/// cut threshold, so the next stage sees them as seams).
inline SeamLabels post_process(const Mesh& mesh, const std::vector<double>& probs,
                               const PipelineConfig& cfg) {
    auto masked = [&](const SeamLabels& labels, bool boost) {
        std::vector<double> p(probs.size(), 0.0);
        for (size_t e = 0; e < p.size(); ++e)
            if (labels.labels[e])
                p[e] = boost ? std::max(probs[e], cfg.cut_threshold) : probs[e];
        return p;
    };

    SeamLabels labels;
    if (!cfg.use_skeleton && !cfg.use_dst) {
        labels.labels = nn::binarize(probs, cfg.threshold);
    } else if (cfg.dst_first) {
        labels = refine_labels(mesh, probs, cfg.cut_threshold, cfg.unwrap).labels;
        if (cfg.use_skeleton)
            labels = thin(mesh, masked(labels, true), cfg.skeleton);
    } else {
        std::vector<double> current = probs;
        if (cfg.use_skeleton) {
            labels = thin(mesh, current, cfg.skeleton);
            current = masked(labels, cfg.use_dst);
        }
        if (cfg.use_dst)
            labels = refine_labels(mesh, current, cfg.cut_threshold, cfg.unwrap).labels;
    }
    return purge_tiny_shells(mesh, labels, cfg.skeleton.min_shell_faces);
}

/// Per-mesh evaluation of final labels against ground truth: seam rates,
/// shell count, and average UV distortion after cutting and unwrapping.
inline MeshReport evaluate_mesh(const Mesh& mesh, const SeamLabels& pred, const SeamLabels& truth,
                                const UnwrapOptions& opts = {}) {
    MeshReport r;
    r.name = mesh.name;
    r.seam = metrics(pred.labels, truth.labels);
    r.shell_count = shells_from_labels(mesh, pred).shell_count;
    UvAtlas atlas = unwrap_with_labels(mesh, pred, opts);
    r.avg_distortion = avg_distortion(atlas.face_distortion);
    return r;
}

/// train/load -> predict -> post-process -> unwrap -> metrics, writing
/// artifacts (labeled OBJs, probability sidecars, distortion dumps, report)
/// when out_dir is set. Deterministic for a fixed config + seed.
inline EvalReport run_pipeline(const Dataset& dataset, const PipelineConfig& cfg,
                               nn::GnnModel* model_out = nullptr) {
    dataset.validate();
    namespace fs = std::filesystem;
    if (!cfg.out_dir.empty())
        fs::create_directories(cfg.out_dir);

    nn::GnnModel model = [&] {
        if (!cfg.checkpoint_path.empty()) {
            std::ifstream in(cfg.checkpoint_path);
            if (!in)
                throw std::runtime_error("cannot read checkpoint " + cfg.checkpoint_path);
            return nn::checkpoint_from_json(nlohmann::json::parse(in));
        }
        nn::GnnModel m = nn::make_model(cfg.model, cfg.seed);
        auto train_samples = make_samples(dataset.split(Split::train));
        auto val_entries = dataset.split(Split::val);
        auto val_samples = val_entries.empty() ? make_samples(dataset.split(Split::train))
                                               : make_samples(val_entries);
        nn::TrainConfig tc = cfg.train;
        tc.rng_seed = cfg.seed;
        nn::train(m, train_samples, val_samples, tc);
        return m;
    }();

    EvalReport report;
    long tp = 0, fp = 0, tn = 0, fn = 0;
    auto test = dataset.split(Split::test);
    if (test.empty())
        test = dataset.split(Split::train);
    for (const auto* entry : test) {
        const Mesh& mesh = entry->mesh;
        DualGraph dual = build_dual(mesh, node_features(mesh));
        auto probs = nn::predict(model, dual, mesh.edge_count());
        SeamLabels pred = post_process(mesh, probs, cfg);
        MeshReport mr = evaluate_mesh(mesh, pred, entry->labels, cfg.unwrap);
        tp += mr.seam.tp;
        fp += mr.seam.fp;
        tn += mr.seam.tn;
        fn += mr.seam.fn;
        report.mean_shell_count += mr.shell_count;
        report.mean_avg_distortion += mr.avg_distortion;

        if (!cfg.out_dir.empty()) {
            fs::path dir(cfg.out_dir);
            detail_pipe::write_text(dir / (mesh.name + "_pred.obj"), write_obj(mesh, false));
            detail_pipe::write_text(dir / (mesh.name + "_probs.json"),
                                    prob_sidecar(mesh, probs).dump(2));
            detail_pipe::write_text(dir / (mesh.name + "_labels.json"),
                                    label_sidecar(mesh, pred).dump(2));
            UvAtlas atlas = unwrap_with_labels(mesh, pred, cfg.unwrap);
            nlohmann::ordered_json dist;
            dist["mesh"] = mesh.name;
            dist["face_distortion"] = atlas.face_distortion;
            detail_pipe::write_text(dir / (mesh.name + "_distortion.json"), dist.dump(2));
        }
        report.per_mesh.push_back(std::move(mr));
    }

    long n = tp + fp + tn + fn;
    if (tp + fn > 0)
        report.tpr = 100.0 * tp / (tp + fn);
    report.fpr = fp + tn > 0 ? 100.0 * fp / (fp + tn) : 0.0;
    report.accuracy = n > 0 ? 100.0 * (tp + tn) / n : 0.0;
    if (!test.empty()) {
        report.mean_shell_count /= static_cast<double>(test.size());
        report.mean_avg_distortion /= static_cast<double>(test.size());
    }

    if (!cfg.out_dir.empty())
        detail_pipe::write_text(std::filesystem::path(cfg.out_dir) / "report.json",
                                report_json(report).dump(2));
    if (model_out)
        *model_out = std::move(model);
    return report;
}

/// Random-split robustness protocol: n_splits reshuffles of the dataset's
/// split tags, one pipeline run each, plus a mean row over the splits.
inline nlohmann::ordered_json run_random_splits(Dataset dataset, const PipelineConfig& base_cfg,
                                                int n_splits, int val_count, int test_count) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    double fpr = 0.0, tpr = 0.0, acc = 0.0, shells = 0.0, dist = 0.0;
    int tpr_rows = 0;
    for (int k = 0; k < n_splits; ++k) {
        assign_splits(dataset, val_count, test_count, base_cfg.seed + static_cast<uint64_t>(k));
        PipelineConfig cfg = base_cfg;
        cfg.seed = base_cfg.seed + static_cast<uint64_t>(k);
        cfg.out_dir.clear();
        EvalReport r = run_pipeline(dataset, cfg);
        nlohmann::ordered_json row;
        row["split"] = k;
        row["fpr"] = r.fpr;
        if (r.tpr) {
            row["tpr"] = *r.tpr;
            tpr += *r.tpr;
            ++tpr_rows;
        }
        row["accuracy"] = r.accuracy;
        row["mean_shell_count"] = r.mean_shell_count;
        row["mean_avg_distortion"] = r.mean_avg_distortion;
        rows.push_back(std::move(row));
        fpr += r.fpr;
        acc += r.accuracy;
        shells += r.mean_shell_count;
        dist += r.mean_avg_distortion;
    }
    nlohmann::ordered_json mean;
    mean["split"] = "mean";
    mean["fpr"] = fpr / n_splits;
    if (tpr_rows == n_splits)
        mean["tpr"] = tpr / n_splits;
    mean["accuracy"] = acc / n_splits;
    mean["mean_shell_count"] = shells / n_splits;
    mean["mean_avg_distortion"] = dist / n_splits;
    rows.push_back(std::move(mean));

    nlohmann::ordered_json out;
    out["version"] = kReportVersion;
    out["splits"] = std::move(rows);
    return out;
}

}  // namespace seamcut
