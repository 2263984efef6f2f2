#include "seamcut/core/obj_io.hpp"
#include "seamcut/core/ply_io.hpp"
#include "seamcut/core/sidecar.hpp"
#include "seamcut/toolkit/decimate.hpp"
#include "seamcut/toolkit/pipeline.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace seamcut;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InputError("cannot write " + path.string());
    out << text;
}

Mesh load_mesh(const std::string& path) {
    std::string ext = fs::path(path).extension().string();
    std::string stem = fs::path(path).stem().string();
    if (ext == ".obj")
        return parse_obj(read_file(path), stem);
    if (ext == ".ply")
        return parse_ply(read_file(path), stem);
    throw InputError("unsupported mesh format '" + ext + "' (expected .obj or .ply)");
}

SeamLabels load_labels(const std::string& path, const Mesh& mesh) {
    return labels_from_sidecar(nlohmann::json::parse(read_file(path)), mesh);
}

std::vector<double> load_probs(const std::string& path, const Mesh& mesh) {
    auto j = nlohmann::json::parse(read_file(path));
    auto probs = j.at("probs").get<std::vector<double>>();
    if (static_cast<int>(probs.size()) != mesh.edge_count())
        throw InputError("probability sidecar does not match mesh edge count");
    return probs;
}

/// Loads every mesh/label pair (<name>.obj + <name>.labels.json) in a
/// directory as one dataset split.
Dataset load_dataset(const std::string& dir) {
    if (!fs::is_directory(dir))
        throw InputError("not a directory: " + dir);
    Dataset ds;
    std::vector<fs::path> objs;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().extension() == ".obj")
            objs.push_back(entry.path());
    std::sort(objs.begin(), objs.end());
    for (const auto& p : objs) {
        Mesh mesh = load_mesh(p.string());
        fs::path labels_path = p.parent_path() / (p.stem().string() + ".labels.json");
        if (!fs::exists(labels_path))
            throw InputError("missing label sidecar " + labels_path.string());
        SeamLabels labels = load_labels(labels_path.string(), mesh);
        ds.entries.push_back({std::move(mesh), std::move(labels), Split::train});
    }
    if (ds.entries.empty())
        throw InputError("no .obj meshes found in " + dir);
    ds.validate();
    return ds;
}

void save_pair(const fs::path& dir, const Mesh& mesh, const SeamLabels& labels) {
    write_file(dir / (mesh.name + ".obj"), write_obj(mesh, false));
    write_file(dir / (mesh.name + ".labels.json"), label_sidecar(mesh, labels).dump(2));
}

struct SharedOpts {
    uint64_t seed = 0;
    std::string arch = "gcn";
    std::string aggregator = "mean";
    double threshold = 0.5;
    double cut_threshold = 0.9;
    double candidate_fraction = 0.2;
    int orphan_distance = 3;
    int min_shell_faces = 2;
    std::string checkpoint;
    std::string out_dir = ".";

    void attach(CLI::App* cmd) {
        cmd->add_option("--seed", seed, "random seed");
        cmd->add_option("--arch", arch, "gnn architecture")
            ->check(CLI::IsMember({"gcn", "gat", "sage", "gin"}));
        cmd->add_option("--aggregator", aggregator, "graphsage aggregator")
            ->check(CLI::IsMember({"mean", "pool", "lstm", "gcn"}));
        cmd->add_option("--threshold", threshold, "probability binarization threshold");
        cmd->add_option("--cut-threshold", cut_threshold, "seam cut threshold")
            ->capture_default_str();
        cmd->add_option("--candidate-fraction", candidate_fraction,
                        "skeletonization candidate vertex fraction");
        cmd->add_option("--orphan-distance", orphan_distance,
                        "max hops from removed vertices to survivors");
        cmd->add_option("--min-shell-faces", min_shell_faces, "shells this small get merged");
        cmd->add_option("--checkpoint", checkpoint, "model checkpoint path");
        cmd->add_option("--out-dir", out_dir, "output directory");
    }

    nn::ModelConfig model_config() const {
        nn::ModelConfig cfg;
        cfg.arch = nn::arch_from_string(arch);
        cfg.aggregator = nn::aggregator_from_string(aggregator);
        return cfg;
    }

    SkeletonConfig skeleton_config() const {
        SkeletonConfig cfg;
        cfg.candidate_fraction = candidate_fraction;
        cfg.max_orphan_distance = orphan_distance;
        cfg.min_shell_faces = min_shell_faces;
        return cfg;
    }
};

nn::GnnModel load_checkpoint(const std::string& path) {
    if (path.empty())
        throw InputError("--checkpoint is required");
    return nn::checkpoint_from_json(nlohmann::json::parse(read_file(path)));
}

int run(int argc, char** argv) {
    CLI::App app{"GNN seam detection and UV seam refinement for triangle meshes"};
    app.require_subcommand(1);

    SharedOpts opt;
    std::string mesh_path, labels_path, probs_path, truth_path, data_dir, kind = "cylinder";
    int count = 1, target_faces = 0, epochs = 500, random_splits = 0;
    int val_count = 1, test_count = 1;
    double noise_std = 0.01, vertex_fraction = 0.5;
    SyntheticParams synth;
    bool no_skeleton = false, no_dst = false, dst_first = false, mean_value = false;

    auto* c_train = app.add_subcommand("train", "train a seam detection model");
    c_train->add_option("--data-dir", data_dir, "directory of <name>.obj + <name>.labels.json")
        ->required();
    c_train->add_option("--epochs", epochs, "max training epochs");
    c_train->add_option("--val-count", val_count, "meshes held out for validation");

    auto* c_predict = app.add_subcommand("predict", "per-edge seam probabilities");
    c_predict->add_option("--mesh", mesh_path)->required();

    auto* c_refine = app.add_subcommand("refine-dst", "distortion Steiner tree refinement");
    c_refine->add_option("--mesh", mesh_path)->required();
    c_refine->add_option("--probs", probs_path, "probability sidecar")->required();

    auto* c_skel = app.add_subcommand("skeletonize", "thin probability field to seam curves");
    c_skel->add_option("--mesh", mesh_path)->required();
    c_skel->add_option("--probs", probs_path, "probability sidecar")->required();

    auto* c_unwrap = app.add_subcommand("unwrap", "cut along labels and compute UVs");
    c_unwrap->add_option("--mesh", mesh_path)->required();
    c_unwrap->add_option("--labels", labels_path, "label sidecar (optional)");
    c_unwrap->add_flag("--mean-value", mean_value, "mean-value weights instead of uniform");

    auto* c_eval = app.add_subcommand("eval", "seam metrics of predictions vs ground truth");
    c_eval->add_option("--mesh", mesh_path)->required();
    c_eval->add_option("--pred", labels_path, "predicted label sidecar")->required();
    c_eval->add_option("--truth", truth_path, "ground-truth label sidecar")->required();

    auto* c_aug = app.add_subcommand("augment", "noisy copies of a labeled mesh");
    c_aug->add_option("--mesh", mesh_path)->required();
    c_aug->add_option("--labels", labels_path)->required();
    c_aug->add_option("--count", count, "number of copies");
    c_aug->add_option("--noise-std", noise_std, "std relative to bbox diagonal");
    c_aug->add_option("--vertex-fraction", vertex_fraction, "fraction of vertices displaced");

    auto* c_dec = app.add_subcommand("decimate", "QEM simplification preserving seams");
    c_dec->add_option("--mesh", mesh_path)->required();
    c_dec->add_option("--labels", labels_path)->required();
    c_dec->add_option("--target-faces", target_faces)->required();

    auto* c_gen = app.add_subcommand("gen-synth", "synthetic labeled meshes");
    c_gen->add_option("--kind", kind)
        ->check(CLI::IsMember({"cylinder", "capsule", "sphere_band", "lumpy_sphere"}));
    c_gen->add_option("--count", count, "number of meshes");
    c_gen->add_option("--segments", synth.segments);
    c_gen->add_option("--rings", synth.rings);
    c_gen->add_option("--radius", synth.radius);
    c_gen->add_option("--height", synth.height);

    auto* c_pipe = app.add_subcommand("pipeline", "train/load, predict, refine, unwrap, report");
    c_pipe->add_option("--data-dir", data_dir, "dataset directory")->required();
    c_pipe->add_option("--epochs", epochs, "max training epochs");
    c_pipe->add_option("--val-count", val_count, "validation meshes per split");
    c_pipe->add_option("--test-count", test_count, "test meshes per split");
    c_pipe->add_flag("--no-skeleton", no_skeleton, "skip skeletonization");
    c_pipe->add_flag("--no-dst", no_dst, "skip Steiner refinement");
    c_pipe->add_flag("--dst-first", dst_first, "run DST before skeletonization");
    c_pipe->add_option("--random-splits", random_splits,
                       "run the robustness protocol with N random splits");

    for (auto* cmd : {c_train, c_predict, c_refine, c_skel, c_unwrap, c_eval, c_aug, c_dec,
                      c_gen, c_pipe})
        opt.attach(cmd);

    CLI11_PARSE(app, argc, argv);
    fs::path out_dir(opt.out_dir);

    if (c_train->parsed()) {
        Dataset ds = load_dataset(data_dir);
        assign_splits(ds, val_count, 0, opt.seed);
        nn::GnnModel model = nn::make_model(opt.model_config(), opt.seed);
        auto train_samples = make_samples(ds.split(Split::train));
        auto val_samples = make_samples(ds.split(Split::val));
        nn::TrainConfig tc;
        tc.rng_seed = opt.seed;
        tc.max_epochs = epochs;
        auto hist = nn::train(model, train_samples, val_samples, tc);
        write_file(out_dir / "checkpoint.json", nn::checkpoint_to_json(model).dump(2));
        std::cout << "best validation loss " << hist.best_val_loss << " at epoch "
                  << hist.best_epoch << "\n";
    } else if (c_predict->parsed()) {
        Mesh mesh = load_mesh(mesh_path);
        nn::GnnModel model = load_checkpoint(opt.checkpoint);
        DualGraph dual = build_dual(mesh, node_features(mesh));
        auto probs = nn::predict(model, dual, mesh.edge_count());
        write_file(out_dir / (mesh.name + ".probs.json"), prob_sidecar(mesh, probs).dump(2));
    } else if (c_refine->parsed()) {
        Mesh mesh = load_mesh(mesh_path);
        auto probs = load_probs(probs_path, mesh);
        RefineResult res = refine_labels(mesh, probs, opt.cut_threshold);
        write_file(out_dir / (mesh.name + ".labels.json"),
                   label_sidecar(mesh, res.labels).dump(2));
        std::cout << "shells " << res.shell_count_before << " -> " << res.shell_count_after
                  << "\n";
    } else if (c_skel->parsed()) {
        Mesh mesh = load_mesh(mesh_path);
        auto probs = load_probs(probs_path, mesh);
        SeamLabels labels = thin(mesh, probs, opt.skeleton_config());
        labels = purge_tiny_shells(mesh, labels, opt.min_shell_faces);
        write_file(out_dir / (mesh.name + ".labels.json"), label_sidecar(mesh, labels).dump(2));
    } else if (c_unwrap->parsed()) {
        Mesh mesh = load_mesh(mesh_path);
        UnwrapOptions uopts;
        uopts.mean_value_weights = mean_value;
        SeamLabels labels;
        labels.labels.assign(mesh.edge_count(), 0);
        if (!labels_path.empty())
            labels = load_labels(labels_path, mesh);
        UvAtlas atlas = unwrap_with_labels(mesh, labels, uopts);
        Mesh cut = cut_mesh(mesh, labels);
        cut.corner_uvs.resize(cut.face_count());
        for (int f = 0; f < cut.face_count(); ++f)
            cut.corner_uvs[f] = atlas.face_uvs[f];
        write_file(out_dir / (mesh.name + ".unwrapped.obj"), write_obj(cut, true));
        nlohmann::ordered_json dist;
        dist["mesh"] = mesh.name;
        dist["avg_distortion"] = avg_distortion(atlas.face_distortion);
        dist["flipped"] = count_flipped(atlas);
        dist["shells"] = static_cast<int>(atlas.shells.size());
        dist["face_distortion"] = atlas.face_distortion;
        write_file(out_dir / (mesh.name + ".distortion.json"), dist.dump(2));
        std::cout << "avg distortion " << avg_distortion(atlas.face_distortion) << ", "
                  << atlas.shells.size() << " shells\n";
    } else if (c_eval->parsed()) {
        Mesh mesh = load_mesh(mesh_path);
        SeamLabels pred = load_labels(labels_path, mesh);
        SeamLabels truth = load_labels(truth_path, mesh);
        MeshReport r = evaluate_mesh(mesh, pred, truth);
        std::cout << detail_pipe::mesh_report_json(r).dump(2) << "\n";
    } else if (c_aug->parsed()) {
        Mesh mesh = load_mesh(mesh_path);
        SeamLabels labels = load_labels(labels_path, mesh);
        for (const auto& [m, l] : augment(mesh, labels, count, noise_std, vertex_fraction, opt.seed))
            save_pair(out_dir, m, l);
    } else if (c_dec->parsed()) {
        Mesh mesh = load_mesh(mesh_path);
        SeamLabels labels = load_labels(labels_path, mesh);
        auto [dec, dec_labels] = decimate(mesh, labels, target_faces);
        save_pair(out_dir, dec, dec_labels);
        std::cout << dec.face_count() << " faces\n";
    } else if (c_gen->parsed()) {
        for (int i = 0; i < count; ++i) {
            auto [mesh, labels] = gen_synthetic(kind, synth, opt.seed + i);
            save_pair(out_dir, mesh, labels);
        }
    } else if (c_pipe->parsed()) {
        Dataset ds = load_dataset(data_dir);
        PipelineConfig cfg;
        cfg.model = opt.model_config();
        cfg.train.max_epochs = epochs;
        cfg.checkpoint_path = opt.checkpoint;
        cfg.use_skeleton = !no_skeleton;
        cfg.use_dst = !no_dst;
        cfg.dst_first = dst_first;
        cfg.threshold = opt.threshold;
        cfg.cut_threshold = opt.cut_threshold;
        cfg.skeleton = opt.skeleton_config();
        cfg.seed = opt.seed;
        if (random_splits > 0) {
            auto j = run_random_splits(ds, cfg, random_splits, val_count, test_count);
            write_file(out_dir / "robustness.json", j.dump(2));
            std::cout << j.dump(2) << "\n";
        } else {
            assign_splits(ds, val_count, test_count, opt.seed);
            cfg.out_dir = opt.out_dir;
            EvalReport report = run_pipeline(ds, cfg);
            std::cout << report_json(report).dump(2) << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const MeshError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
}
