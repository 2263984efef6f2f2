#pragma once

#include "seamcut/graph/dual.hpp"
#include "seamcut/nn/tape.hpp"

#include <nlohmann/json.hpp>

#include <memory>
#include <random>
#include <string>

namespace seamcut::nn {

enum class Arch { gcn, gat, sage, gin };
enum class SageAggregator { mean, pool, lstm, gcn };

inline std::string to_string(Arch a) {
    switch (a) {
        case Arch::gcn: return "gcn";
        case Arch::gat: return "gat";
        case Arch::sage: return "sage";
        case Arch::gin: return "gin";
    }
    return "?";
}

inline Arch arch_from_string(const std::string& s) {
    if (s == "gcn") return Arch::gcn;
    if (s == "gat") return Arch::gat;
    if (s == "sage") return Arch::sage;
    if (s == "gin") return Arch::gin;
    throw std::invalid_argument("unknown architecture '" + s + "'");
}

inline std::string to_string(SageAggregator a) {
    switch (a) {
        case SageAggregator::mean: return "mean";
        case SageAggregator::pool: return "pool";
        case SageAggregator::lstm: return "lstm";
        case SageAggregator::gcn: return "gcn";
    }
    return "?";
}

inline SageAggregator aggregator_from_string(const std::string& s) {
    if (s == "mean") return SageAggregator::mean;
    if (s == "pool") return SageAggregator::pool;
    if (s == "lstm") return SageAggregator::lstm;
    if (s == "gcn") return SageAggregator::gcn;
    throw std::invalid_argument("unknown aggregator '" + s + "'");
}

struct ModelConfig {
    Arch arch = Arch::gcn;
    int input_width = 14;
    int hidden = 64;
    int num_layers = 3;
    int gat_hidden_heads = 3;
    int gat_out_heads = 5;
    double attn_dropout = 0.2;
    SageAggregator aggregator = SageAggregator::mean;
};

struct GatHead {
    Matrix w;        // in x head_width
    Matrix a_self;   // head_width x 1
    Matrix a_neigh;  // head_width x 1
};

struct LayerParams {
    Matrix w;  // gcn: in x out; sage: combine weight
    Matrix b;  // sage/gin bias rows, 1 x out
    std::vector<GatHead> heads;
    Matrix pool_w, pool_b;                 // sage-pool transform, in x in
    Matrix lstm_wih, lstm_whh, lstm_b;     // in x 4in, in x 4in, 1 x 4in
    Matrix eps;                            // gin, 1 x 1
    Matrix mlp_w1, mlp_b1, mlp_w2, mlp_b2; // gin MLP
    Matrix proj;                           // residual projection; empty when widths match
    int in_width = 0, out_width = 0;
};

/// Named view of every trainable tensor, in a fixed order shared by the
/// optimizer, the checkpoint format, and the gradient checks.
struct ParamRef {
    std::string name;
    Matrix* tensor;
};

struct GnnModel {
    ModelConfig config;
    std::vector<LayerParams> layers;
    Matrix head_w, head_b;  // final linear map to 2 logits

    std::vector<ParamRef> parameters() {
        std::vector<ParamRef> out;
        for (size_t k = 0; k < layers.size(); ++k) {
            auto& l = layers[k];
            std::string p = "layer" + std::to_string(k) + ".";
            auto push = [&](const std::string& n, Matrix& t) {
                if (t.size() > 0)
                    out.push_back({p + n, &t});
            };
            push("w", l.w);
            push("b", l.b);
            for (size_t h = 0; h < l.heads.size(); ++h) {
                std::string hp = p + "head" + std::to_string(h) + ".";
                out.push_back({hp + "w", &l.heads[h].w});
                out.push_back({hp + "a_self", &l.heads[h].a_self});
                out.push_back({hp + "a_neigh", &l.heads[h].a_neigh});
            }
            push("pool_w", l.pool_w);
            push("pool_b", l.pool_b);
            push("lstm_wih", l.lstm_wih);
            push("lstm_whh", l.lstm_whh);
            push("lstm_b", l.lstm_b);
            push("eps", l.eps);
            push("mlp_w1", l.mlp_w1);
            push("mlp_b1", l.mlp_b1);
            push("mlp_w2", l.mlp_w2);
            push("mlp_b2", l.mlp_b2);
            push("proj", l.proj);
        }
        out.push_back({"head.w", &head_w});
        out.push_back({"head.b", &head_b});
        return out;
    }
};

namespace detail_nn {

inline Matrix glorot(int rows, int cols, std::mt19937_64& rng) {
    double a = std::sqrt(6.0 / (rows + cols));
    std::uniform_real_distribution<double> dist(-a, a);
    Matrix m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            m(r, c) = dist(rng);
    return m;
}

/// Output width of block k for the given architecture.
inline int block_out_width(const ModelConfig& cfg, int k) {
    if (cfg.arch == Arch::gat && k < cfg.num_layers - 1)
        return cfg.hidden * cfg.gat_hidden_heads;  // heads concatenated
    return cfg.hidden;
}

inline int block_in_width(const ModelConfig& cfg, int k) {
    return k == 0 ? cfg.input_width : block_out_width(cfg, k - 1);
}

}  // namespace detail_nn

inline GnnModel make_model(const ModelConfig& cfg, uint64_t seed) {
    using detail_nn::glorot;
    std::mt19937_64 rng(seed);
    GnnModel model;
    model.config = cfg;
    for (int k = 0; k < cfg.num_layers; ++k) {
        LayerParams l;
        l.in_width = detail_nn::block_in_width(cfg, k);
        l.out_width = detail_nn::block_out_width(cfg, k);
        const int in = l.in_width, out = l.out_width, h = cfg.hidden;
        switch (cfg.arch) {
            case Arch::gcn:
                l.w = glorot(in, out, rng);
                break;
            case Arch::gat: {
                bool last = k == cfg.num_layers - 1;
                int nheads = last ? cfg.gat_out_heads : cfg.gat_hidden_heads;
                for (int i = 0; i < nheads; ++i) {
                    GatHead head;
                    head.w = glorot(in, h, rng);
                    head.a_self = glorot(h, 1, rng);
                    head.a_neigh = glorot(h, 1, rng);
                    l.heads.push_back(std::move(head));
                }
                break;
            }
            case Arch::sage:
                if (cfg.aggregator == SageAggregator::gcn) {
                    l.w = glorot(in, out, rng);
                } else {
                    l.w = glorot(2 * in, out, rng);
                    if (cfg.aggregator == SageAggregator::pool) {
                        l.pool_w = glorot(in, in, rng);
                        l.pool_b = Matrix::Zero(1, in);
                    } else if (cfg.aggregator == SageAggregator::lstm) {
                        l.lstm_wih = glorot(in, 4 * in, rng);
                        l.lstm_whh = glorot(in, 4 * in, rng);
                        l.lstm_b = Matrix::Zero(1, 4 * in);
                    }
                }
                l.b = Matrix::Zero(1, out);
                break;
            case Arch::gin:
                l.eps = Matrix::Zero(1, 1);
                l.mlp_w1 = glorot(in, h, rng);
                l.mlp_b1 = Matrix::Zero(1, h);
                l.mlp_w2 = glorot(h, out, rng);
                l.mlp_b2 = Matrix::Zero(1, out);
                break;
        }
        if (in != out)
            l.proj = glorot(in, out, rng);
        model.layers.push_back(std::move(l));
    }
    int head_in = detail_nn::block_out_width(cfg, cfg.num_layers - 1);
    model.head_w = glorot(head_in, 2, rng);
    model.head_b = Matrix::Zero(1, 2);
    return model;
}

struct TapedModel {
    std::vector<ParamRef> refs;  // same order as vars
    std::vector<Var> vars;

    Var var_for(const Matrix* tensor) const {
        for (size_t i = 0; i < refs.size(); ++i)
            if (refs[i].tensor == tensor)
                return vars[i];
        throw std::logic_error("tensor not registered on tape");
    }
};

/// sigma(A_hat H W)
inline Var gcn_layer(Tape& t, const Eigen::SparseMatrix<double>* a_hat, Var h, Var w) {
    return t.relu(t.matmul(t.spmm(a_hat, h), w));
}

inline Var gat_layer(Tape& t, const DualGraph& dual, Var h, const LayerParams& layer,
                     const TapedModel& tm, bool average_heads, double dropout, bool training,
                     std::mt19937_64* rng) {
    std::vector<Var> heads;
    for (const auto& head : layer.heads) {
        Var wh = t.matmul(h, tm.var_for(&head.w));
        Var s_self = t.matmul(wh, tm.var_for(&head.a_self));
        Var s_neigh = t.matmul(wh, tm.var_for(&head.a_neigh));
        std::shared_ptr<std::vector<double>> mask;
        if (training && dropout > 0.0) {
            size_t total = dual.node_count;
            for (const auto& nb : dual.adjacency)
                total += nb.size();
            mask = std::make_shared<std::vector<double>>(total);
            std::uniform_real_distribution<double> u(0.0, 1.0);
            double keep = 1.0 - dropout;
            for (auto& m : *mask)
                m = u(*rng) < keep ? 1.0 / keep : 0.0;
        }
        heads.push_back(t.gat_aggregate(&dual.adjacency, wh, s_self, s_neigh, 0.2, mask));
    }
    Var combined = heads[0];
    if (average_heads) {
        for (size_t i = 1; i < heads.size(); ++i)
            combined = t.add(combined, heads[i]);
        combined = t.scale(combined, 1.0 / static_cast<double>(heads.size()));
    } else {
        for (size_t i = 1; i < heads.size(); ++i)
            combined = t.concat_cols(combined, heads[i]);
    }
    return t.elu(combined);
}

inline Var sage_layer(Tape& t, const DualGraph& dual, Var h, const LayerParams& layer,
                      const TapedModel& tm, SageAggregator agg) {
    const Adjacency* adj = &dual.adjacency;
    switch (agg) {
        case SageAggregator::mean: {
            Var m = t.mean_neighbors(adj, h);
            return t.relu(t.add_rowvec(t.matmul(t.concat_cols(h, m), tm.var_for(&layer.w)),
                                       tm.var_for(&layer.b)));
        }
        case SageAggregator::pool: {
            Var p = t.relu(t.add_rowvec(t.matmul(h, tm.var_for(&layer.pool_w)),
                                        tm.var_for(&layer.pool_b)));
            Var m = t.max_neighbors(adj, p);
            return t.relu(t.add_rowvec(t.matmul(t.concat_cols(h, m), tm.var_for(&layer.w)),
                                       tm.var_for(&layer.b)));
        }
        case SageAggregator::gcn: {
            // mean over N(v) u {v}
            auto inv = std::make_shared<std::vector<double>>(dual.node_count);
            for (int v = 0; v < dual.node_count; ++v)
                (*inv)[v] = 1.0 / (1.0 + static_cast<double>(dual.adjacency[v].size()));
            Var m = t.row_scale(t.add(t.sum_neighbors(adj, h), h), inv);
            return t.relu(t.add_rowvec(t.matmul(m, tm.var_for(&layer.w)), tm.var_for(&layer.b)));
        }
        case SageAggregator::lstm: {
            const int d = layer.in_width;
            Var wih = tm.var_for(&layer.lstm_wih);
            Var whh = tm.var_for(&layer.lstm_whh);
            Var bias = tm.var_for(&layer.lstm_b);
            Var zero_row = t.input(Matrix::Zero(1, d));
            std::vector<Var> agg_rows;
            agg_rows.reserve(dual.node_count);
            for (int v = 0; v < dual.node_count; ++v) {
                const auto& nb = dual.adjacency[v];  // ascending index order
                if (nb.empty()) {
                    agg_rows.push_back(zero_row);
                    continue;
                }
                Var hs = zero_row, cs = zero_row;
                for (int u : nb) {
                    Var x = t.gather_rows(h, {u});
                    Var gates = t.add_rowvec(t.add(t.matmul(x, wih), t.matmul(hs, whh)), bias);
                    Var gi = t.sigmoid(t.cols(gates, 0, d));
                    Var gf = t.sigmoid(t.cols(gates, d, d));
                    Var gg = t.tanh_(t.cols(gates, 2 * d, d));
                    Var go = t.sigmoid(t.cols(gates, 3 * d, d));
                    cs = t.add(t.hadamard(gf, cs), t.hadamard(gi, gg));
                    hs = t.hadamard(go, t.tanh_(cs));
                }
                agg_rows.push_back(hs);
            }
            Var m = t.concat_rows(agg_rows);
            return t.relu(t.add_rowvec(t.matmul(t.concat_cols(h, m), tm.var_for(&layer.w)),
                                       tm.var_for(&layer.b)));
        }
    }
    throw std::logic_error("unreachable");
}

inline Var gin_layer(Tape& t, const DualGraph& dual, Var h, const LayerParams& layer,
                     const TapedModel& tm) {
    Var s = t.sum_neighbors(&dual.adjacency, h);
    Var pre = t.add(t.add(h, t.scalar_mul(h, tm.var_for(&layer.eps))), s);
    Var hid = t.relu(t.add_rowvec(t.matmul(pre, tm.var_for(&layer.mlp_w1)), tm.var_for(&layer.mlp_b1)));
    return t.add_rowvec(t.matmul(hid, tm.var_for(&layer.mlp_w2)), tm.var_for(&layer.mlp_b2));
}

/// Registers all parameters on the tape and runs the full network:
/// 3 residual blocks then the 2-logit head. Returns the logits Var.
inline Var forward_logits(Tape& t, GnnModel& model, const DualGraph& dual,
                          const Eigen::SparseMatrix<double>* a_hat, TapedModel& tm,
                          bool training = false, std::mt19937_64* rng = nullptr) {
    tm.refs = model.parameters();
    tm.vars.clear();
    for (auto& r : tm.refs)
        tm.vars.push_back(t.input(*r.tensor));

    Var h = t.input(dual.features);
    for (int k = 0; k < model.config.num_layers; ++k) {
        const auto& layer = model.layers[k];
        Var out{};
        switch (model.config.arch) {
            case Arch::gcn:
                out = gcn_layer(t, a_hat, h, tm.var_for(&layer.w));
                break;
            case Arch::gat:
                out = gat_layer(t, dual, h, layer, tm, k == model.config.num_layers - 1,
                                model.config.attn_dropout, training, rng);
                break;
            case Arch::sage:
                out = sage_layer(t, dual, h, layer, tm, model.config.aggregator);
                break;
            case Arch::gin:
                out = gin_layer(t, dual, h, layer, tm);
                break;
        }
        Var res = layer.proj.size() > 0 ? t.matmul(h, tm.var_for(&layer.proj)) : h;
        h = t.add(out, res);
    }
    return t.add_rowvec(t.matmul(h, tm.var_for(&model.head_w)), tm.var_for(&model.head_b));
}

inline std::vector<double> probs_from_logits(const Matrix& logits) {
    std::vector<double> out(logits.rows());
    for (int r = 0; r < logits.rows(); ++r) {
        double mx = std::max(logits(r, 0), logits(r, 1));
        double za = std::exp(logits(r, 0) - mx), zb = std::exp(logits(r, 1) - mx);
        out[r] = zb / (za + zb);
    }
    return out;
}

/// Per-mesh-edge seam probabilities. For the augmented dual, the two copies
/// of each edge are averaged.
inline std::vector<double> dual_probs_to_edges(const DualGraph& dual,
                                               const std::vector<double>& node_probs,
                                               int edge_count) {
    std::vector<double> sum(edge_count, 0.0);
    std::vector<int> cnt(edge_count, 0);
    for (int v = 0; v < dual.node_count; ++v) {
        sum[dual.dual_to_edge[v]] += node_probs[v];
        cnt[dual.dual_to_edge[v]] += 1;
    }
    for (int e = 0; e < edge_count; ++e)
        sum[e] /= cnt[e];
    return sum;
}

/// Inference: per-edge seam probabilities (dropout disabled).
inline std::vector<double> predict(GnnModel& model, const DualGraph& dual, int edge_count) {
    auto a_hat = normalize_adjacency(dual);
    Tape t;
    TapedModel tm;
    Var logits = forward_logits(t, model, dual, &a_hat, tm, false, nullptr);
    return dual_probs_to_edges(dual, probs_from_logits(t.val(logits)), edge_count);
}

// ---- checkpoint serialization -------------------------------------------

inline nlohmann::json matrix_to_json(const Matrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < m.cols(); ++c)
            row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Matrix matrix_from_json(const nlohmann::json& j) {
    int rows = static_cast<int>(j.size());
    int cols = rows ? static_cast<int>(j[0].size()) : 0;
    Matrix m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            m(r, c) = j[r][c].get<double>();
    return m;
}

inline constexpr int kCheckpointVersion = 1;

inline nlohmann::json checkpoint_to_json(GnnModel& model) {
    nlohmann::json j;
    j["version"] = kCheckpointVersion;
    j["arch"] = to_string(model.config.arch);
    j["aggregator"] = to_string(model.config.aggregator);
    j["input_width"] = model.config.input_width;
    j["hidden"] = model.config.hidden;
    j["num_layers"] = model.config.num_layers;
    j["gat_hidden_heads"] = model.config.gat_hidden_heads;
    j["gat_out_heads"] = model.config.gat_out_heads;
    j["attn_dropout"] = model.config.attn_dropout;
    nlohmann::json params;
    for (auto& p : model.parameters())
        params[p.name] = matrix_to_json(*p.tensor);
    j["params"] = std::move(params);
    return j;
}

inline GnnModel checkpoint_from_json(const nlohmann::json& j) {
    if (j.at("version").get<int>() != kCheckpointVersion)
        throw std::runtime_error("unsupported checkpoint version");
    ModelConfig cfg;
    cfg.arch = arch_from_string(j.at("arch").get<std::string>());
    cfg.aggregator = aggregator_from_string(j.at("aggregator").get<std::string>());
    cfg.input_width = j.at("input_width").get<int>();
    cfg.hidden = j.at("hidden").get<int>();
    cfg.num_layers = j.at("num_layers").get<int>();
    cfg.gat_hidden_heads = j.at("gat_hidden_heads").get<int>();
    cfg.gat_out_heads = j.at("gat_out_heads").get<int>();
    cfg.attn_dropout = j.at("attn_dropout").get<double>();
    GnnModel model = make_model(cfg, 0);
    for (auto& p : model.parameters()) {
        Matrix loaded = matrix_from_json(j.at("params").at(p.name));
        if (loaded.rows() != p.tensor->rows() || loaded.cols() != p.tensor->cols())
            throw std::runtime_error("checkpoint tensor '" + p.name + "' has wrong shape");
        *p.tensor = std::move(loaded);
    }
    return model;
}

}  // namespace seamcut::nn
