#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace seamcut::nn {

using Matrix = Eigen::MatrixXd;
using Adjacency = std::vector<std::vector<int>>;

struct Var {
    int id = -1;
};

/// Reverse-mode autodiff over dense matrices. Operations append nodes in
/// topological order; backward() sweeps the tape once in reverse. Graph
/// aggregation ops take the neighbor structure as a constant.
class Tape {
    struct Node {
        Matrix val;
        Matrix grad;
        std::function<void()> back;  // empty for leaves
    };
    std::vector<Node> nodes_;

    Var push(Matrix v, std::function<void()> back = {}) {
        Var out{static_cast<int>(nodes_.size())};
        nodes_.push_back({std::move(v), Matrix(), std::move(back)});
        nodes_.back().grad = Matrix::Zero(nodes_.back().val.rows(), nodes_.back().val.cols());
        return out;
    }

public:
    const Matrix& val(Var v) const { return nodes_[v.id].val; }
    const Matrix& grad(Var v) const { return nodes_[v.id].grad; }
    Matrix& grad_mut(Var v) { return nodes_[v.id].grad; }
    size_t size() const { return nodes_.size(); }

    Var input(Matrix v) { return push(std::move(v)); }

    Var matmul(Var a, Var b) {
        if (val(a).cols() != val(b).rows())
            throw std::invalid_argument("matmul: dimension mismatch");
        Var out = push(val(a) * val(b));
        nodes_[out.id].back = [this, a, b, out] {
            grad_mut(a) += grad(out) * val(b).transpose();
            grad_mut(b) += val(a).transpose() * grad(out);
        };
        return out;
    }

    /// a_hat * h with a_hat constant; caller keeps the sparse matrix alive.
    Var spmm(const Eigen::SparseMatrix<double>* a_hat, Var h) {
        Var out = push(*a_hat * val(h));
        nodes_[out.id].back = [this, a_hat, h, out] {
            grad_mut(h) += a_hat->transpose() * grad(out);
        };
        return out;
    }

    Var add(Var a, Var b) {
        Var out = push(val(a) + val(b));
        nodes_[out.id].back = [this, a, b, out] {
            grad_mut(a) += grad(out);
            grad_mut(b) += grad(out);
        };
        return out;
    }

    /// m + broadcast row bias (1 x c)
    Var add_rowvec(Var m, Var row) {
        Var out = push(val(m).rowwise() + val(row).row(0));
        nodes_[out.id].back = [this, m, row, out] {
            grad_mut(m) += grad(out);
            grad_mut(row).row(0) += grad(out).colwise().sum();
        };
        return out;
    }

    Var scale(Var a, double s) {
        Var out = push(val(a) * s);
        nodes_[out.id].back = [this, a, s, out] { grad_mut(a) += grad(out) * s; };
        return out;
    }

    /// m * s with s a learnable 1x1 scalar
    Var scalar_mul(Var m, Var s) {
        Var out = push(val(m) * val(s)(0, 0));
        nodes_[out.id].back = [this, m, s, out] {
            grad_mut(m) += grad(out) * val(s)(0, 0);
            grad_mut(s)(0, 0) += (grad(out).array() * val(m).array()).sum();
        };
        return out;
    }

    Var hadamard(Var a, Var b) {
        Var out = push(val(a).cwiseProduct(val(b)));
        nodes_[out.id].back = [this, a, b, out] {
            grad_mut(a) += grad(out).cwiseProduct(val(b));
            grad_mut(b) += grad(out).cwiseProduct(val(a));
        };
        return out;
    }

    Var relu(Var a) {
        Var out = push(val(a).cwiseMax(0.0));
        nodes_[out.id].back = [this, a, out] {
            grad_mut(a) += grad(out).cwiseProduct((val(a).array() > 0.0).cast<double>().matrix());
        };
        return out;
    }

    Var leaky_relu(Var a, double slope) {
        Var out = push(val(a).unaryExpr([slope](double x) { return x > 0.0 ? x : slope * x; }));
        nodes_[out.id].back = [this, a, slope, out] {
            grad_mut(a) += grad(out).cwiseProduct(
                val(a).unaryExpr([slope](double x) { return x > 0.0 ? 1.0 : slope; }));
        };
        return out;
    }

    Var elu(Var a) {
        Var out = push(val(a).unaryExpr([](double x) { return x > 0.0 ? x : std::expm1(x); }));
        nodes_[out.id].back = [this, a, out] {
            grad_mut(a) += grad(out).cwiseProduct(
                val(a).unaryExpr([](double x) { return x > 0.0 ? 1.0 : std::exp(x); }));
        };
        return out;
    }

    Var sigmoid(Var a) {
        Var out = push(val(a).unaryExpr([](double x) { return 1.0 / (1.0 + std::exp(-x)); }));
        nodes_[out.id].back = [this, a, out] {
            grad_mut(a) += grad(out).cwiseProduct(
                val(out).cwiseProduct((Matrix::Ones(val(out).rows(), val(out).cols()) - val(out))));
        };
        return out;
    }

    Var tanh_(Var a) {
        Var out = push(val(a).array().tanh().matrix());
        nodes_[out.id].back = [this, a, out] {
            grad_mut(a) += grad(out).cwiseProduct(
                (Matrix::Ones(val(out).rows(), val(out).cols()) - val(out).cwiseProduct(val(out))));
        };
        return out;
    }

    Var concat_cols(Var a, Var b) {
        Matrix m(val(a).rows(), val(a).cols() + val(b).cols());
        m << val(a), val(b);
        Var out = push(std::move(m));
        nodes_[out.id].back = [this, a, b, out] {
            grad_mut(a) += grad(out).leftCols(val(a).cols());
            grad_mut(b) += grad(out).rightCols(val(b).cols());
        };
        return out;
    }

    Var cols(Var a, int start, int len) {
        Var out = push(val(a).middleCols(start, len));
        nodes_[out.id].back = [this, a, start, len, out] {
            grad_mut(a).middleCols(start, len) += grad(out);
        };
        return out;
    }

    Var gather_rows(Var a, std::vector<int> idx) {
        Matrix m(static_cast<int>(idx.size()), val(a).cols());
        for (int r = 0; r < static_cast<int>(idx.size()); ++r)
            m.row(r) = val(a).row(idx[r]);
        Var out = push(std::move(m));
        nodes_[out.id].back = [this, a, idx = std::move(idx), out] {
            for (int r = 0; r < static_cast<int>(idx.size()); ++r)
                grad_mut(a).row(idx[r]) += grad(out).row(r);
        };
        return out;
    }

    Var concat_rows(std::vector<Var> parts) {
        int rows = 0;
        for (Var p : parts)
            rows += static_cast<int>(val(p).rows());
        Matrix m(rows, val(parts[0]).cols());
        int at = 0;
        for (Var p : parts) {
            m.middleRows(at, val(p).rows()) = val(p);
            at += static_cast<int>(val(p).rows());
        }
        Var out = push(std::move(m));
        nodes_[out.id].back = [this, parts = std::move(parts), out] {
            int at = 0;
            for (Var p : parts) {
                grad_mut(p) += grad(out).middleRows(at, val(p).rows());
                at += static_cast<int>(val(p).rows());
            }
        };
        return out;
    }

    /// out_v = sum_{u in N(v)} h_u
    Var sum_neighbors(const Adjacency* adj, Var h) {
        const auto& a = *adj;
        Matrix m = Matrix::Zero(val(h).rows(), val(h).cols());
        for (int v = 0; v < static_cast<int>(a.size()); ++v)
            for (int u : a[v])
                m.row(v) += val(h).row(u);
        Var out = push(std::move(m));
        nodes_[out.id].back = [this, adj, h, out] {
            const auto& a = *adj;
            for (int v = 0; v < static_cast<int>(a.size()); ++v)
                for (int u : a[v])
                    grad_mut(h).row(u) += grad(out).row(v);
        };
        return out;
    }

    /// out_v = mean_{u in N(v)} h_u; zero row when N(v) is empty
    Var mean_neighbors(const Adjacency* adj, Var h) {
        const auto& a = *adj;
        Matrix m = Matrix::Zero(val(h).rows(), val(h).cols());
        for (int v = 0; v < static_cast<int>(a.size()); ++v) {
            for (int u : a[v])
                m.row(v) += val(h).row(u);
            if (!a[v].empty())
                m.row(v) /= static_cast<double>(a[v].size());
        }
        Var out = push(std::move(m));
        nodes_[out.id].back = [this, adj, h, out] {
            const auto& a = *adj;
            for (int v = 0; v < static_cast<int>(a.size()); ++v) {
                if (a[v].empty())
                    continue;
                double inv = 1.0 / static_cast<double>(a[v].size());
                for (int u : a[v])
                    grad_mut(h).row(u) += grad(out).row(v) * inv;
            }
        };
        return out;
    }

    /// out_v = elementwise max_{u in N(v)} h_u; zero row when N(v) is empty.
    /// Gradient routes to the first attaining neighbor per column.
    Var max_neighbors(const Adjacency* adj, Var h) {
        const auto& a = *adj;
        const int cols_n = static_cast<int>(val(h).cols());
        Matrix m = Matrix::Zero(val(h).rows(), cols_n);
        auto argmax = std::make_shared<std::vector<std::vector<int>>>(
            a.size(), std::vector<int>(cols_n, -1));
        for (int v = 0; v < static_cast<int>(a.size()); ++v) {
            if (a[v].empty())
                continue;
            for (int c = 0; c < cols_n; ++c) {
                int best = a[v][0];
                double bv = val(h)(best, c);
                for (int u : a[v]) {
                    if (val(h)(u, c) > bv) {
                        bv = val(h)(u, c);
                        best = u;
                    }
                }
                m(v, c) = bv;
                (*argmax)[v][c] = best;
            }
        }
        Var out = push(std::move(m));
        nodes_[out.id].back = [this, argmax, out, h, cols_n] {
            for (int v = 0; v < static_cast<int>(argmax->size()); ++v)
                for (int c = 0; c < cols_n; ++c)
                    if ((*argmax)[v][c] >= 0)
                        grad_mut(h)((*argmax)[v][c], c) += grad(out)(v, c);
        };
        return out;
    }

    /// Single-head graph attention aggregation over N(v) u {v}:
    ///   e_vu    = leaky_relu(s_self[v] + s_neigh[u], slope)
    ///   alpha_v = softmax_u(e_vu)
    ///   out_v   = sum_u alpha_vu * mask_vu * wh_u
    /// `mask` (attention dropout, already scaled by 1/keep) is indexed per
    /// directed pair in iteration order (v; self first, then neighbors);
    /// nullptr means no dropout.
    /// out.row(v) = m.row(v) * s[v] with s a constant per-row scale
    Var row_scale(Var m, std::shared_ptr<const std::vector<double>> s) {
        Matrix out_m = val(m);
        for (int r = 0; r < out_m.rows(); ++r)
            out_m.row(r) *= (*s)[r];
        Var out = push(std::move(out_m));
        nodes_[out.id].back = [this, m, s, out] {
            for (int r = 0; r < val(m).rows(); ++r)
                grad_mut(m).row(r) += grad(out).row(r) * (*s)[r];
        };
        return out;
    }

    Var gat_aggregate(const Adjacency* adj, Var wh, Var s_self, Var s_neigh, double slope,
                      std::shared_ptr<const std::vector<double>> mask) {
        const auto& a = *adj;
        const int n = static_cast<int>(a.size());
        const int d = static_cast<int>(val(wh).cols());

        auto alphas = std::make_shared<std::vector<std::vector<double>>>(n);
        auto pres = std::make_shared<std::vector<std::vector<double>>>(n);
        Matrix m = Matrix::Zero(n, d);
        size_t flat = 0;
        for (int v = 0; v < n; ++v) {
            std::vector<int> nb;
            nb.reserve(a[v].size() + 1);
            nb.push_back(v);
            nb.insert(nb.end(), a[v].begin(), a[v].end());
            std::vector<double>& pre = (*pres)[v];
            pre.resize(nb.size());
            double emax = -std::numeric_limits<double>::infinity();
            for (size_t k = 0; k < nb.size(); ++k) {
                double x = val(s_self)(v, 0) + val(s_neigh)(nb[k], 0);
                pre[k] = x;
                double e = x > 0.0 ? x : slope * x;
                emax = std::max(emax, e);
            }
            std::vector<double>& alpha = (*alphas)[v];
            alpha.resize(nb.size());
            double denom = 0.0;
            for (size_t k = 0; k < nb.size(); ++k) {
                double e = pre[k] > 0.0 ? pre[k] : slope * pre[k];
                alpha[k] = std::exp(e - emax);
                denom += alpha[k];
            }
            for (size_t k = 0; k < nb.size(); ++k) {
                alpha[k] /= denom;
                double w = alpha[k] * (mask ? (*mask)[flat + k] : 1.0);
                m.row(v) += w * val(wh).row(nb[k]);
            }
            flat += nb.size();
        }
        Var out = push(std::move(m));
        nodes_[out.id].back = [this, adj, wh, s_self, s_neigh, slope, mask, alphas, pres, out] {
            const auto& a = *adj;
            const int n = static_cast<int>(a.size());
            size_t flat = 0;
            for (int v = 0; v < n; ++v) {
                std::vector<int> nb;
                nb.reserve(a[v].size() + 1);
                nb.push_back(v);
                nb.insert(nb.end(), a[v].begin(), a[v].end());
                const auto& alpha = (*alphas)[v];
                const auto& pre = (*pres)[v];
                const auto g = grad(out).row(v);
                std::vector<double> dalpha(nb.size());
                double dot = 0.0;
                for (size_t k = 0; k < nb.size(); ++k) {
                    double mk = mask ? (*mask)[flat + k] : 1.0;
                    grad_mut(wh).row(nb[k]) += alpha[k] * mk * g;
                    dalpha[k] = mk * g.dot(val(wh).row(nb[k]));
                    dot += alpha[k] * dalpha[k];
                }
                for (size_t k = 0; k < nb.size(); ++k) {
                    double de = alpha[k] * (dalpha[k] - dot);
                    double ds = de * (pre[k] > 0.0 ? 1.0 : slope);
                    grad_mut(s_self)(v, 0) += ds;
                    grad_mut(s_neigh)(nb[k], 0) += ds;
                }
                flat += nb.size();
            }
        };
        return out;
    }

    /// Mean over rows of w_label * (-log softmax(logit)_label); logits N x 2.
    Var weighted_ce(Var logits, const std::vector<int>* labels, double w_seam, double w_nonseam) {
        const int n = static_cast<int>(val(logits).rows());
        auto probs = std::make_shared<Matrix>(n, 2);
        double loss = 0.0;
        for (int r = 0; r < n; ++r) {
            double a = val(logits)(r, 0), b = val(logits)(r, 1);
            double mx = std::max(a, b);
            double za = std::exp(a - mx), zb = std::exp(b - mx);
            double z = za + zb;
            (*probs)(r, 0) = za / z;
            (*probs)(r, 1) = zb / z;
            int lab = (*labels)[r];
            double w = lab == 1 ? w_seam : w_nonseam;
            loss += -w * std::log((*probs)(r, lab));
        }
        Matrix m(1, 1);
        m(0, 0) = loss / n;
        Var out = push(std::move(m));
        nodes_[out.id].back = [this, logits, labels, w_seam, w_nonseam, probs, out, n] {
            double g = grad(out)(0, 0) / n;
            for (int r = 0; r < n; ++r) {
                int lab = (*labels)[r];
                double w = lab == 1 ? w_seam : w_nonseam;
                grad_mut(logits)(r, 0) += g * w * ((*probs)(r, 0) - (lab == 0 ? 1.0 : 0.0));
                grad_mut(logits)(r, 1) += g * w * ((*probs)(r, 1) - (lab == 1 ? 1.0 : 0.0));
            }
        };
        return out;
    }

    void backward(Var root) {
        if (val(root).size() != 1)
            throw std::invalid_argument("backward: root must be scalar");
        grad_mut(root)(0, 0) = 1.0;
        for (int i = root.id; i >= 0; --i)
            if (nodes_[i].back)
                nodes_[i].back();
    }
};

}  // namespace seamcut::nn
