#include "seamcut/toolkit/dataset.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace seamcut;

namespace {

nn::GraphSample tiny_sample() {
    SyntheticParams p;
    p.segments = 8;
    p.rings = 4;
    auto [mesh, labels] = gen_cylinder(p, 3);
    return make_sample(mesh, labels);
}

double accuracy_after(nn::GnnModel& model, const nn::GraphSample& s, double threshold) {
    auto probs = nn::predict(model, s.dual, s.edge_count);
    std::vector<int> edge_truth(s.edge_count);
    for (int v = 0; v < s.dual.node_count; ++v)
        edge_truth[s.dual.dual_to_edge[v]] = s.labels[v];
    return nn::edge_accuracy(nn::binarize(probs, threshold), edge_truth);
}

}  // namespace

TEST_CASE("GCN overfits a single synthetic mesh") {
    SyntheticParams p;
    p.segments = 8;
    p.rings = 4;
    auto [mesh, labels] = gen_sphere_band(p, 3);
    nn::GraphSample sample = make_sample(mesh, labels);
    nn::ModelConfig mc;
    mc.arch = nn::Arch::gcn;
    nn::GnnModel model = nn::make_model(mc, 1);
    std::vector<nn::GraphSample> train{sample};
    std::vector<nn::GraphSample> val{sample};
    nn::TrainConfig tc;
    tc.max_epochs = 500;
    auto hist = nn::train(model, train, val, tc);
    CHECK(static_cast<int>(hist.train_loss.size()) <= 500);
    CHECK(accuracy_after(model, train[0], tc.binarize_threshold) >= 0.995);
}

TEST_CASE("Adam steps reduce the loss") {
    nn::ModelConfig mc;
    mc.hidden = 16;
    nn::GnnModel model = nn::make_model(mc, 4);
    std::vector<nn::GraphSample> set{tiny_sample()};
    nn::TrainConfig tc;
    tc.max_epochs = 40;
    tc.patience = 40;
    auto hist = nn::train(model, set, set, tc);
    REQUIRE(hist.train_loss.size() == 40);
    CHECK(hist.train_loss.back() < hist.train_loss.front());
    CHECK(hist.best_val_loss <= hist.val_loss.front());
}

TEST_CASE("early stopping fires after patience epochs without improvement") {
    nn::ModelConfig mc;
    mc.hidden = 8;
    nn::GnnModel model = nn::make_model(mc, 5);
    std::vector<nn::GraphSample> train{tiny_sample()};
    std::vector<nn::GraphSample> val{tiny_sample()};
    nn::TrainConfig tc;
    tc.patience = 3;
    tc.learning_rate = 10.0;  // wildly too large: validation loss thrashes
    tc.max_epochs = 200;
    try {
        auto hist = nn::train(model, train, val, tc);
        int epochs = static_cast<int>(hist.val_loss.size());
        CHECK(epochs < tc.max_epochs);
        CHECK(epochs - 1 - hist.best_epoch >= tc.patience);
        // best-validation parameters are restored
        double final_loss = nn::evaluate_loss(model, val, tc);
        CHECK(std::abs(final_loss - hist.best_val_loss) <= 1e-12);
    } catch (const std::runtime_error&) {
        SUCCEED("divergence is reported instead of silently continuing");
    }
}

TEST_CASE("training is bit-deterministic for a fixed seed") {
    auto run = [] {
        nn::ModelConfig mc;
        mc.arch = nn::Arch::gat;  // exercises the dropout rng path
        mc.hidden = 8;
        nn::GnnModel model = nn::make_model(mc, 6);
        std::vector<nn::GraphSample> train{tiny_sample()};
        std::vector<nn::GraphSample> val{tiny_sample()};
        nn::TrainConfig tc;
        tc.max_epochs = 5;
        tc.rng_seed = 11;
        auto hist = nn::train(model, train, val, tc);
        return std::make_pair(hist.train_loss, nn::checkpoint_to_json(model).dump());
    };
    auto [loss_a, ckpt_a] = run();
    auto [loss_b, ckpt_b] = run();
    CHECK(loss_a == loss_b);
    CHECK(ckpt_a == ckpt_b);
}

TEST_CASE("train rejects empty sets and bad configs") {
    nn::GnnModel model = nn::make_model({}, 0);
    std::vector<nn::GraphSample> empty;
    std::vector<nn::GraphSample> one{tiny_sample()};
    nn::TrainConfig tc;
    CHECK_THROWS_AS(nn::train(model, empty, one, tc), std::invalid_argument);
    CHECK_THROWS_AS(nn::train(model, one, empty, tc), std::invalid_argument);
    tc.learning_rate = 0.0;
    CHECK_THROWS_AS(nn::train(model, one, one, tc), std::invalid_argument);
}
