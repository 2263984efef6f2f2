#include "seamcut/nn/train.hpp"

#include "helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace seamcut;
using nn::Arch;
using nn::GnnModel;
using nn::Matrix;
using nn::ModelConfig;
using nn::SageAggregator;

namespace {

/// Random connected-ish dual graph with no isolated nodes.
DualGraph random_dual(int n, uint64_t seed, int feat_width = 14) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    DualGraph d;
    d.node_count = n;
    d.adjacency.assign(n, {});
    auto link = [&](int a, int b) {
        d.adjacency[a].push_back(b);
        d.adjacency[b].push_back(a);
    };
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (u(rng) < 0.25)
                link(a, b);
    for (int v = 0; v < n; ++v)
        if (d.adjacency[v].empty())
            link(v, (v + 1) % n);
    for (auto& nb : d.adjacency) {
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
    d.dual_to_edge.resize(n);
    std::iota(d.dual_to_edge.begin(), d.dual_to_edge.end(), 0);
    std::normal_distribution<double> g(0.0, 1.0);
    d.features = Matrix(n, feat_width);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < feat_width; ++c)
            d.features(r, c) = g(rng);
    return d;
}

Matrix dense_relu(Matrix m) {
    return m.cwiseMax(0.0);
}

Matrix dense_elu(Matrix m) {
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c)
            if (m(r, c) < 0.0)
                m(r, c) = std::exp(m(r, c)) - 1.0;
    return m;
}

Matrix dense_a_hat(const DualGraph& d) {
    int n = d.node_count;
    Matrix a = Matrix::Identity(n, n);
    for (int v = 0; v < n; ++v)
        for (int u : d.adjacency[v])
            a(v, u) = 1.0;
    Eigen::VectorXd dinv = a.rowwise().sum().cwiseSqrt().cwiseInverse();
    return dinv.asDiagonal() * a * dinv.asDiagonal();
}

Matrix dense_gat_head(const DualGraph& d, const Matrix& h, const nn::GatHead& head) {
    Matrix wh = h * head.w;
    Eigen::VectorXd s_self = wh * head.a_self;
    Eigen::VectorXd s_neigh = wh * head.a_neigh;
    Matrix out = Matrix::Zero(d.node_count, wh.cols());
    for (int v = 0; v < d.node_count; ++v) {
        std::vector<int> nb{v};
        nb.insert(nb.end(), d.adjacency[v].begin(), d.adjacency[v].end());
        std::vector<double> e(nb.size());
        double denom = 0.0;
        for (size_t k = 0; k < nb.size(); ++k) {
            double x = s_self[v] + s_neigh[nb[k]];
            e[k] = std::exp(x > 0.0 ? x : 0.2 * x);
            denom += e[k];
        }
        for (size_t k = 0; k < nb.size(); ++k)
            out.row(v) += (e[k] / denom) * wh.row(nb[k]);
    }
    return out;
}

/// Straightforward dense re-implementation of the whole network.
Matrix dense_forward(GnnModel& model, const DualGraph& d) {
    const auto& cfg = model.config;
    Matrix h = d.features;
    Matrix a_hat = dense_a_hat(d);
    for (int k = 0; k < cfg.num_layers; ++k) {
        const auto& l = model.layers[k];
        Matrix out;
        switch (cfg.arch) {
            case Arch::gcn:
                out = dense_relu(a_hat * h * l.w);
                break;
            case Arch::gat: {
                bool last = k == cfg.num_layers - 1;
                std::vector<Matrix> heads;
                for (const auto& head : l.heads)
                    heads.push_back(dense_gat_head(d, h, head));
                if (last) {
                    out = Matrix::Zero(heads[0].rows(), heads[0].cols());
                    for (const auto& m : heads)
                        out += m;
                    out /= static_cast<double>(heads.size());
                } else {
                    out = Matrix(heads[0].rows(), heads[0].cols() * heads.size());
                    for (size_t i = 0; i < heads.size(); ++i)
                        out.middleCols(i * heads[0].cols(), heads[0].cols()) = heads[i];
                }
                out = dense_elu(out);
                break;
            }
            case Arch::sage: {
                Matrix agg = Matrix::Zero(h.rows(), h.cols());
                switch (cfg.aggregator) {
                    case SageAggregator::mean:
                        for (int v = 0; v < d.node_count; ++v) {
                            for (int u : d.adjacency[v])
                                agg.row(v) += h.row(u);
                            if (!d.adjacency[v].empty())
                                agg.row(v) /= static_cast<double>(d.adjacency[v].size());
                        }
                        break;
                    case SageAggregator::pool: {
                        Matrix p = dense_relu((h * l.pool_w).rowwise() + l.pool_b.row(0));
                        for (int v = 0; v < d.node_count; ++v)
                            if (!d.adjacency[v].empty()) {
                                agg.row(v) = p.row(d.adjacency[v][0]);
                                for (int u : d.adjacency[v])
                                    agg.row(v) = agg.row(v).cwiseMax(p.row(u));
                            }
                        break;
                    }
                    case SageAggregator::gcn:
                        for (int v = 0; v < d.node_count; ++v) {
                            agg.row(v) = h.row(v);
                            for (int u : d.adjacency[v])
                                agg.row(v) += h.row(u);
                            agg.row(v) /= 1.0 + static_cast<double>(d.adjacency[v].size());
                        }
                        break;
                    case SageAggregator::lstm:
                        throw std::logic_error("lstm not covered by the dense oracle");
                }
                Matrix in;
                if (cfg.aggregator == SageAggregator::gcn)
                    in = agg;
                else {
                    in = Matrix(h.rows(), 2 * h.cols());
                    in << h, agg;
                }
                out = dense_relu((in * l.w).rowwise() + l.b.row(0));
                break;
            }
            case Arch::gin: {
                Matrix s = Matrix::Zero(h.rows(), h.cols());
                for (int v = 0; v < d.node_count; ++v)
                    for (int u : d.adjacency[v])
                        s.row(v) += h.row(u);
                Matrix pre = (1.0 + l.eps(0, 0)) * h + s;
                Matrix hid = dense_relu((pre * l.mlp_w1).rowwise() + l.mlp_b1.row(0));
                out = (hid * l.mlp_w2).rowwise() + l.mlp_b2.row(0);
                break;
            }
        }
        Matrix res = l.proj.size() > 0 ? Matrix(h * l.proj) : h;
        h = out + res;
    }
    return (h * model.head_w).rowwise() + model.head_b.row(0);
}

Matrix taped_forward(GnnModel& model, const DualGraph& d) {
    auto a_hat = normalize_adjacency(d);
    nn::Tape t;
    nn::TapedModel tm;
    nn::Var logits = nn::forward_logits(t, model, d, &a_hat, tm, false, nullptr);
    return t.val(logits);
}

struct OracleCase {
    Arch arch;
    SageAggregator agg;
    const char* name;
};

}  // namespace

TEST_CASE("forward pass matches the dense oracle on 50 random graphs") {
    const OracleCase cases[] = {
        {Arch::gcn, SageAggregator::mean, "gcn"},
        {Arch::gat, SageAggregator::mean, "gat"},
        {Arch::sage, SageAggregator::mean, "sage-mean"},
        {Arch::sage, SageAggregator::pool, "sage-pool"},
        {Arch::sage, SageAggregator::gcn, "sage-gcn"},
        {Arch::gin, SageAggregator::mean, "gin"},
    };
    for (const auto& c : cases) {
        SECTION(c.name) {
            ModelConfig cfg;
            cfg.arch = c.arch;
            cfg.aggregator = c.agg;
            cfg.hidden = 8;
            std::mt19937_64 seeds(1234);
            for (int i = 0; i < 50; ++i) {
                int n = 4 + static_cast<int>(seeds() % 27);
                DualGraph d = random_dual(n, seeds());
                GnnModel model = nn::make_model(cfg, seeds());
                Matrix got = taped_forward(model, d);
                Matrix want = dense_forward(model, d);
                REQUIRE((got - want).cwiseAbs().maxCoeff() <= 1e-10);
            }
        }
    }
}

TEST_CASE("zero head gives probability one half everywhere") {
    ModelConfig cfg;
    cfg.hidden = 8;
    GnnModel model = nn::make_model(cfg, 3);
    model.head_w.setZero();
    model.head_b.setZero();
    DualGraph d = random_dual(12, 99);
    Matrix logits = taped_forward(model, d);
    auto probs = nn::probs_from_logits(logits);
    for (double p : probs)
        CHECK(p == 0.5);
}

TEST_CASE("softmax probabilities lie in [0,1] and pair-sum to 1") {
    ModelConfig cfg;
    cfg.hidden = 8;
    GnnModel model = nn::make_model(cfg, 4);
    DualGraph d = random_dual(20, 5);
    Matrix logits = taped_forward(model, d);
    auto probs = nn::probs_from_logits(logits);
    for (int r = 0; r < logits.rows(); ++r) {
        CHECK(probs[r] >= 0.0);
        CHECK(probs[r] <= 1.0);
        double mx = std::max(logits(r, 0), logits(r, 1));
        double za = std::exp(logits(r, 0) - mx), zb = std::exp(logits(r, 1) - mx);
        CHECK(std::abs(za / (za + zb) + probs[r] - 1.0) <= 1e-12);
    }
}

TEST_CASE("permutation equivariance") {
    for (auto [arch, agg] : {std::pair{Arch::gcn, SageAggregator::mean},
                             {Arch::gat, SageAggregator::mean},
                             {Arch::sage, SageAggregator::mean},
                             {Arch::sage, SageAggregator::pool},
                             {Arch::gin, SageAggregator::mean}}) {
        ModelConfig cfg;
        cfg.arch = arch;
        cfg.aggregator = agg;
        cfg.hidden = 8;
        GnnModel model = nn::make_model(cfg, 17);
        DualGraph d = random_dual(14, 21);

        std::vector<int> perm(d.node_count);
        std::iota(perm.begin(), perm.end(), 0);
        std::mt19937_64 rng(7);
        std::shuffle(perm.begin(), perm.end(), rng);  // perm[old] = new

        DualGraph p;
        p.node_count = d.node_count;
        p.adjacency.assign(d.node_count, {});
        p.features = Matrix(d.node_count, d.features.cols());
        p.dual_to_edge.resize(d.node_count);
        for (int v = 0; v < d.node_count; ++v) {
            p.features.row(perm[v]) = d.features.row(v);
            p.dual_to_edge[perm[v]] = v;
            for (int u : d.adjacency[v])
                p.adjacency[perm[v]].push_back(perm[u]);
        }
        for (auto& nb : p.adjacency)
            std::sort(nb.begin(), nb.end());

        Matrix base = taped_forward(model, d);
        Matrix permuted = taped_forward(model, p);
        for (int v = 0; v < d.node_count; ++v)
            REQUIRE((permuted.row(perm[v]) - base.row(v)).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("residual identity with zero layer weights") {
    ModelConfig cfg;
    cfg.arch = Arch::gcn;
    cfg.input_width = 8;
    cfg.hidden = 8;  // widths match, no projections
    GnnModel model = nn::make_model(cfg, 9);
    for (auto& l : model.layers) {
        REQUIRE(l.proj.size() == 0);
        l.w.setZero();
    }
    DualGraph d = random_dual(10, 13, 8);
    Matrix logits = taped_forward(model, d);
    Matrix expect = (d.features * model.head_w).rowwise() + model.head_b.row(0);
    CHECK((logits - expect).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("weighted cross-entropy unit values") {
    Matrix logits(2, 2);
    logits << 0.0, 0.0, 30.0, -30.0;  // row 0 ambivalent, row 1 confidently non-seam
    std::vector<int> labels{1, 0};
    double loss = nn::weighted_ce_value(logits, labels, 100.0, 1.0);
    // (100*ln2 + ~0)/2
    CHECK(std::abs(loss - 50.0 * std::log(2.0)) <= 1e-9);

    Matrix confident(1, 2);
    confident << -40.0, 40.0;
    CHECK(nn::weighted_ce_value(confident, {1}, 100.0, 1.0) <= 1e-12);
}

TEST_CASE("taped loss matches the scalar recomputation") {
    ModelConfig cfg;
    cfg.hidden = 8;
    GnnModel model = nn::make_model(cfg, 31);
    DualGraph d = random_dual(16, 37);
    nn::GraphSample s;
    s.dual = d;
    s.a_hat = normalize_adjacency(d);
    s.edge_count = d.node_count;
    std::mt19937_64 rng(5);
    s.labels.resize(d.node_count);
    for (auto& l : s.labels)
        l = static_cast<int>(rng() % 2);

    nn::TrainConfig tc;
    double loss = 0.0;
    nn::gradients(model, s, tc, &loss);
    Matrix logits = taped_forward(model, d);
    CHECK(std::abs(loss - nn::weighted_ce_value(logits, s.labels, 100.0, 1.0)) <= 1e-12);
}

TEST_CASE("binarize thresholds") {
    std::vector<double> probs{0.4, 0.4, 0.95, 0.9, 0.89};
    auto low = nn::binarize(probs, 0.5);
    CHECK(low == std::vector<int>{0, 0, 1, 1, 1});
    auto high = nn::binarize(probs, 0.9);
    CHECK(high == std::vector<int>{0, 0, 1, 1, 0});
    auto all = nn::binarize(probs, 1e-12);
    CHECK(all == std::vector<int>{1, 1, 1, 1, 1});
    CHECK_THROWS_AS(nn::binarize(probs, 0.0), std::invalid_argument);
}

TEST_CASE("checkpoint round-trip is bit exact") {
    for (auto arch : {Arch::gcn, Arch::gat, Arch::sage, Arch::gin}) {
        ModelConfig cfg;
        cfg.arch = arch;
        cfg.hidden = 8;
        GnnModel model = nn::make_model(cfg, 42);
        auto j = nn::checkpoint_to_json(model);
        std::string bytes = j.dump();
        GnnModel loaded = nn::checkpoint_from_json(nlohmann::json::parse(bytes));
        auto pa = model.parameters();
        auto pb = loaded.parameters();
        REQUIRE(pa.size() == pb.size());
        for (size_t i = 0; i < pa.size(); ++i) {
            CHECK(pa[i].name == pb[i].name);
            REQUIRE(pa[i].tensor->rows() == pb[i].tensor->rows());
            for (int r = 0; r < pa[i].tensor->rows(); ++r)
                for (int c = 0; c < pa[i].tensor->cols(); ++c)
                    REQUIRE((*pa[i].tensor)(r, c) == (*pb[i].tensor)(r, c));
        }
        DualGraph d = random_dual(10, 77);
        Matrix a = taped_forward(model, d);
        Matrix b = taped_forward(loaded, d);
        CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
    }
}
