#pragma once

#include "seamcut/nn/model.hpp"

namespace seamcut::nn {

struct TrainConfig {
    double learning_rate = 5e-4;
    double seam_weight = 100.0;
    double nonseam_weight = 1.0;
    int patience = 50;
    int max_epochs = 500;
    uint64_t rng_seed = 0;
    double binarize_threshold = 0.5;

    void validate() const {
        if (learning_rate <= 0 || seam_weight <= 0 || nonseam_weight <= 0)
            throw std::invalid_argument("train config: rates and weights must be positive");
        if (patience < 1)
            throw std::invalid_argument("train config: patience must be >= 1");
        if (binarize_threshold <= 0 || binarize_threshold >= 1)
            throw std::invalid_argument("train config: threshold must be in (0,1)");
    }
};

/// One mesh prepared for full-graph training: dual graph, normalized
/// adjacency, and per-dual-node labels.
struct GraphSample {
    DualGraph dual;
    Eigen::SparseMatrix<double> a_hat;
    std::vector<int> labels;  // per dual node
    int edge_count = 0;
};

inline std::vector<int> binarize(const std::vector<double>& probs, double threshold) {
    if (threshold <= 0.0 || threshold >= 1.0)
        throw std::invalid_argument("binarize: threshold must be in (0,1)");
    std::vector<int> out(probs.size());
    for (size_t i = 0; i < probs.size(); ++i)
        out[i] = probs[i] >= threshold ? 1 : 0;
    return out;
}

/// Scalar weighted cross-entropy over raw logits; the production path goes
/// through the tape, this is the value-only form.
inline double weighted_ce_value(const Matrix& logits, const std::vector<int>& labels,
                                double w_seam, double w_nonseam) {
    double loss = 0.0;
    for (int r = 0; r < logits.rows(); ++r) {
        double mx = std::max(logits(r, 0), logits(r, 1));
        double lse = mx + std::log(std::exp(logits(r, 0) - mx) + std::exp(logits(r, 1) - mx));
        int lab = labels[r];
        double w = lab == 1 ? w_seam : w_nonseam;
        loss += w * (lse - logits(r, lab));
    }
    return loss / logits.rows();
}

/// Exact reverse-mode gradients of the weighted loss for one sample.
/// Returns one gradient matrix per parameters() entry, in order.
inline std::vector<Matrix> gradients(GnnModel& model, const GraphSample& sample,
                                     const TrainConfig& cfg, double* loss_out = nullptr,
                                     bool training = false, std::mt19937_64* rng = nullptr) {
    Tape t;
    TapedModel tm;
    Var logits = forward_logits(t, model, sample.dual, &sample.a_hat, tm, training, rng);
    Var loss = t.weighted_ce(logits, &sample.labels, cfg.seam_weight, cfg.nonseam_weight);
    if (loss_out)
        *loss_out = t.val(loss)(0, 0);
    t.backward(loss);
    std::vector<Matrix> grads;
    grads.reserve(tm.vars.size());
    for (Var v : tm.vars)
        grads.push_back(t.grad(v));
    return grads;
}

class Adam {
public:
    Adam(double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
        : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

    void step(std::vector<ParamRef>& params, const std::vector<Matrix>& grads) {
        if (m_.empty()) {
            for (auto& p : params) {
                m_.push_back(Matrix::Zero(p.tensor->rows(), p.tensor->cols()));
                v_.push_back(Matrix::Zero(p.tensor->rows(), p.tensor->cols()));
            }
        }
        ++step_count_;
        double bc1 = 1.0 - std::pow(beta1_, step_count_);
        double bc2 = 1.0 - std::pow(beta2_, step_count_);
        for (size_t i = 0; i < params.size(); ++i) {
            m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grads[i];
            v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grads[i].cwiseProduct(grads[i]);
            Matrix mhat = m_[i] / bc1;
            Matrix vhat = v_[i] / bc2;
            *params[i].tensor -= lr_ * mhat.cwiseQuotient(
                (vhat.cwiseSqrt().array() + eps_).matrix());
        }
    }

private:
    double lr_, beta1_, beta2_, eps_;
    long step_count_ = 0;
    std::vector<Matrix> m_, v_;
};

struct TrainHistory {
    std::vector<double> train_loss;  // mean per epoch
    std::vector<double> val_loss;
    int best_epoch = -1;
    double best_val_loss = std::numeric_limits<double>::infinity();
};

inline double evaluate_loss(GnnModel& model, const std::vector<GraphSample>& samples,
                            const TrainConfig& cfg) {
    double total = 0.0;
    for (const auto& s : samples) {
        Tape t;
        TapedModel tm;
        Var logits = forward_logits(t, model, s.dual, &s.a_hat, tm, false, nullptr);
        total += weighted_ce_value(t.val(logits), s.labels, cfg.seam_weight, cfg.nonseam_weight);
    }
    return total / samples.size();
}

/// Full-graph training with one Adam step per mesh per epoch. Early stops
/// when validation loss fails to improve for `patience` epochs; the
/// best-validation parameters are restored before returning. Deterministic
/// for a fixed seed.
inline TrainHistory train(GnnModel& model, std::vector<GraphSample>& train_set,
                          std::vector<GraphSample>& val_set, const TrainConfig& cfg) {
    cfg.validate();
    if (train_set.empty() || val_set.empty())
        throw std::invalid_argument("train: empty training or validation set");

    auto params = model.parameters();
    Adam adam(cfg.learning_rate);
    std::mt19937_64 rng(cfg.rng_seed);
    TrainHistory hist;
    std::vector<Matrix> best_params;

    for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        double epoch_loss = 0.0;
        for (const auto& sample : train_set) {
            double loss = 0.0;
            auto grads = gradients(model, sample, cfg, &loss, true, &rng);
            if (std::isnan(loss))
                throw std::runtime_error("training diverged (NaN loss) at epoch " +
                                         std::to_string(epoch));
            adam.step(params, grads);
            epoch_loss += loss;
        }
        hist.train_loss.push_back(epoch_loss / train_set.size());

        double vloss = evaluate_loss(model, val_set, cfg);
        if (std::isnan(vloss))
            throw std::runtime_error("validation diverged (NaN loss) at epoch " +
                                     std::to_string(epoch));
        hist.val_loss.push_back(vloss);
        if (vloss < hist.best_val_loss) {
            hist.best_val_loss = vloss;
            hist.best_epoch = epoch;
            best_params.clear();
            for (auto& p : params)
                best_params.push_back(*p.tensor);
        }
        if (epoch - hist.best_epoch >= cfg.patience)
            break;
    }
    for (size_t i = 0; i < params.size(); ++i)
        *params[i].tensor = best_params[i];
    return hist;
}

inline double edge_accuracy(const std::vector<int>& pred, const std::vector<int>& truth) {
    int correct = 0;
    for (size_t i = 0; i < pred.size(); ++i)
        correct += pred[i] == truth[i];
    return static_cast<double>(correct) / pred.size();
}

}  // namespace seamcut::nn
