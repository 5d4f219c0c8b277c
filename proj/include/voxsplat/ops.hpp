#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "voxsplat/tape.hpp"

namespace voxsplat {
namespace ops {

inline void check_same_tape(Var a, Var b) {
    if (a.t != b.t) throw std::logic_error("ops: vars from different tapes");
}

// y = a * b for [N x K] * [K x M]
inline Var matmul(Var a, Var b) {
    check_same_tape(a, b);
    const Tensor& A = a.val();
    const Tensor& B = b.val();
    std::size_t N = A.rows(), K = A.cols(), M = B.cols();
    if (B.rows() != K)
        throw std::invalid_argument("matmul: inner dims " + A.shape_str() + " vs " + B.shape_str());
    Tensor Y({N, M});
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t k = 0; k < K; ++k) {
            double av = A.at(i, k);
            if (av == 0.0) continue;
            for (std::size_t j = 0; j < M; ++j) Y.at(i, j) += av * B.at(k, j);
        }
    Tensor Av = A, Bv = B;
    int id = a.t->node(std::move(Y), {a.id, b.id},
                       [Av, Bv, N, K, M](const Tensor& g, const std::vector<Tensor*>& pg) {
                           // dA = g B^T, dB = A^T g
                           for (std::size_t i = 0; i < N; ++i)
                               for (std::size_t j = 0; j < M; ++j) {
                                   double gv = g.at(i, j);
                                   if (gv == 0.0) continue;
                                   for (std::size_t k = 0; k < K; ++k) {
                                       pg[0]->at(i, k) += gv * Bv.at(k, j);
                                       pg[1]->at(k, j) += Av.at(i, k) * gv;
                                   }
                               }
                       });
    return Var{a.t, id};
}

// row-broadcast bias add: [N x M] + [M]
inline Var add_rowvec(Var x, Var b) {
    check_same_tape(x, b);
    const Tensor& X = x.val();
    const Tensor& B = b.val();
    std::size_t N = X.rows(), M = X.cols();
    if (B.size() != M) throw std::invalid_argument("add_rowvec: bias width mismatch");
    Tensor Y = X;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < M; ++j) Y.at(i, j) += B.data[j];
    int id = x.t->node(std::move(Y), {x.id, b.id},
                       [N, M](const Tensor& g, const std::vector<Tensor*>& pg) {
                           for (std::size_t i = 0; i < N; ++i)
                               for (std::size_t j = 0; j < M; ++j) {
                                   pg[0]->at(i, j) += g.at(i, j);
                                   pg[1]->data[j] += g.at(i, j);
                               }
                       });
    return Var{x.t, id};
}

inline Var linear(Var x, Var W, Var b) { return add_rowvec(matmul(x, W), b); }

inline Var add(Var a, Var b) {
    check_same_tape(a, b);
    if (!a.val().same_shape(b.val())) throw std::invalid_argument("add: shape mismatch");
    Tensor Y = a.val();
    Y += b.val();
    int id = a.t->node(std::move(Y), {a.id, b.id},
                       [](const Tensor& g, const std::vector<Tensor*>& pg) {
                           *pg[0] += g;
                           *pg[1] += g;
                       });
    return Var{a.t, id};
}

inline Var sub(Var a, Var b) {
    check_same_tape(a, b);
    if (!a.val().same_shape(b.val())) throw std::invalid_argument("sub: shape mismatch");
    Tensor Y = a.val();
    for (std::size_t i = 0; i < Y.size(); ++i) Y.data[i] -= b.val().data[i];
    int id = a.t->node(std::move(Y), {a.id, b.id},
                       [](const Tensor& g, const std::vector<Tensor*>& pg) {
                           *pg[0] += g;
                           for (std::size_t i = 0; i < g.size(); ++i) pg[1]->data[i] -= g.data[i];
                       });
    return Var{a.t, id};
}

inline Var mul(Var a, Var b) {
    check_same_tape(a, b);
    if (!a.val().same_shape(b.val())) throw std::invalid_argument("mul: shape mismatch");
    Tensor Y = a.val();
    for (std::size_t i = 0; i < Y.size(); ++i) Y.data[i] *= b.val().data[i];
    Tensor Av = a.val(), Bv = b.val();
    int id = a.t->node(std::move(Y), {a.id, b.id},
                       [Av, Bv](const Tensor& g, const std::vector<Tensor*>& pg) {
                           for (std::size_t i = 0; i < g.size(); ++i) {
                               pg[0]->data[i] += g.data[i] * Bv.data[i];
                               pg[1]->data[i] += g.data[i] * Av.data[i];
                           }
                       });
    return Var{a.t, id};
}

inline Var scale(Var x, double c) {
    Tensor Y = x.val();
    for (double& v : Y.data) v *= c;
    int id = x.t->node(std::move(Y), {x.id},
                       [c](const Tensor& g, const std::vector<Tensor*>& pg) {
                           for (std::size_t i = 0; i < g.size(); ++i) pg[0]->data[i] += c * g.data[i];
                       });
    return Var{x.t, id};
}

inline Var add_const(Var x, double c) {
    Tensor Y = x.val();
    for (double& v : Y.data) v += c;
    int id = x.t->node(std::move(Y), {x.id},
                       [](const Tensor& g, const std::vector<Tensor*>& pg) { *pg[0] += g; });
    return Var{x.t, id};
}

enum class Activation { None, Relu, Sigmoid, Softplus, Exp, Tanh };

inline double softplus_val(double v) {
    // stable log(1+e^v)
    return v > 0.0 ? v + std::log1p(std::exp(-v)) : std::log1p(std::exp(v));
}

inline Var activate(Var x, Activation kind) {
    if (kind == Activation::None) return x;
    const Tensor& X = x.val();
    Tensor Y = X;
    switch (kind) {
        case Activation::Relu:
            for (double& v : Y.data) v = v > 0.0 ? v : 0.0;
            break;
        case Activation::Sigmoid:
            for (double& v : Y.data) v = 1.0 / (1.0 + std::exp(-v));
            break;
        case Activation::Softplus:
            for (double& v : Y.data) v = softplus_val(v);
            break;
        case Activation::Exp:
            for (double& v : Y.data) v = std::exp(v);
            break;
        case Activation::Tanh:
            for (double& v : Y.data) v = std::tanh(v);
            break;
        default:
            break;
    }
    Tensor Xv = X, Yv = Y;
    int id = x.t->node(std::move(Y), {x.id},
                       [kind, Xv, Yv](const Tensor& g, const std::vector<Tensor*>& pg) {
                           for (std::size_t i = 0; i < g.size(); ++i) {
                               double d = 0.0;
                               switch (kind) {
                                   case Activation::Relu: d = Xv.data[i] > 0.0 ? 1.0 : 0.0; break;
                                   case Activation::Sigmoid: d = Yv.data[i] * (1.0 - Yv.data[i]); break;
                                   case Activation::Softplus: d = 1.0 / (1.0 + std::exp(-Xv.data[i])); break;
                                   case Activation::Exp: d = Yv.data[i]; break;
                                   case Activation::Tanh: d = 1.0 - Yv.data[i] * Yv.data[i]; break;
                                   default: break;
                               }
                               pg[0]->data[i] += d * g.data[i];
                           }
                       });
    return Var{x.t, id};
}

inline Var relu(Var x) { return activate(x, Activation::Relu); }
inline Var sigmoid(Var x) { return activate(x, Activation::Sigmoid); }
inline Var softplus(Var x) { return activate(x, Activation::Softplus); }
inline Var expv(Var x) { return activate(x, Activation::Exp); }
inline Var tanhv(Var x) { return activate(x, Activation::Tanh); }

// rows sum to one; stabilized by max subtraction
inline Var softmax_rows(Var z) {
    const Tensor& Z = z.val();
    std::size_t N = Z.rows(), K = Z.cols();
    Tensor Y({N, K});
    for (std::size_t i = 0; i < N; ++i) {
        double m = Z.at(i, 0);
        for (std::size_t j = 1; j < K; ++j) m = std::max(m, Z.at(i, j));
        double s = 0.0;
        for (std::size_t j = 0; j < K; ++j) {
            double e = std::exp(Z.at(i, j) - m);
            Y.at(i, j) = e;
            s += e;
        }
        for (std::size_t j = 0; j < K; ++j) Y.at(i, j) /= s;
    }
    Tensor Yv = Y;
    int id = z.t->node(std::move(Y), {z.id},
                       [Yv, N, K](const Tensor& g, const std::vector<Tensor*>& pg) {
                           // dz = y .* (g - sum_j g_j y_j)
                           for (std::size_t i = 0; i < N; ++i) {
                               double dot = 0.0;
                               for (std::size_t j = 0; j < K; ++j) dot += g.at(i, j) * Yv.at(i, j);
                               for (std::size_t j = 0; j < K; ++j)
                                   pg[0]->at(i, j) += Yv.at(i, j) * (g.at(i, j) - dot);
                           }
                       });
    return Var{z.t, id};
}

inline Var sum_all(Var x) {
    double s = 0.0;
    for (double v : x.val().data) s += v;
    int id = x.t->node(Tensor::scalar(s), {x.id},
                       [](const Tensor& g, const std::vector<Tensor*>& pg) {
                           for (double& v : pg[0]->data) v += g.data[0];
                       });
    return Var{x.t, id};
}

inline Var mean_all(Var x) {
    std::size_t n = x.val().size();
    double s = 0.0;
    for (double v : x.val().data) s += v;
    int id = x.t->node(Tensor::scalar(s / double(n)), {x.id},
                       [n](const Tensor& g, const std::vector<Tensor*>& pg) {
                           double gv = g.data[0] / double(n);
                           for (double& v : pg[0]->data) v += gv;
                       });
    return Var{x.t, id};
}

// per-row dot with a fixed vector: [N x K] . const[K] -> [N]
inline Var rows_dot_const(Var x, const std::vector<double>& w) {
    const Tensor& X = x.val();
    std::size_t N = X.rows(), K = X.cols();
    if (w.size() != K) throw std::invalid_argument("rows_dot_const: width mismatch");
    Tensor Y({N});
    for (std::size_t i = 0; i < N; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < K; ++j) s += X.at(i, j) * w[j];
        Y.data[i] = s;
    }
    int id = x.t->node(std::move(Y), {x.id},
                       [w, N, K](const Tensor& g, const std::vector<Tensor*>& pg) {
                           for (std::size_t i = 0; i < N; ++i)
                               for (std::size_t j = 0; j < K; ++j)
                                   pg[0]->at(i, j) += g.data[i] * w[j];
                       });
    return Var{x.t, id};
}

// Straight-through rounding: forward emits round-half-up, backward is the
// identity, so the discretization never breaks the chain.
inline Var ste_round(Var x) {
    Tensor Y = x.val();
    for (double& v : Y.data) v = std::floor(v + 0.5);
    int id = x.t->node(std::move(Y), {x.id},
                       [](const Tensor& g, const std::vector<Tensor*>& pg) { *pg[0] += g; });
    return Var{x.t, id};
}

// Per-row branch pick with straight-through mixing. branches is [N*K x C]
// (row n*K+c holds branch c of row n), zc is [N x K], chosen[n] selects the
// forward branch. Backward treats the one-hot pick as zc.
inline Var ste_select_rows(Var branches, Var zc, const std::vector<std::size_t>& chosen) {
    check_same_tape(branches, zc);
    const Tensor& B = branches.val();
    const Tensor& Z = zc.val();
    std::size_t N = Z.rows(), K = Z.cols(), C = B.cols();
    if (B.rows() != N * K) throw std::invalid_argument("ste_select_rows: branch count mismatch");
    if (chosen.size() != N) throw std::invalid_argument("ste_select_rows: chosen size mismatch");
    Tensor Y({N, C});
    for (std::size_t n = 0; n < N; ++n)
        for (std::size_t c = 0; c < C; ++c) Y.at(n, c) = B.at(n * K + chosen[n], c);
    Tensor Bv = B;
    int id = branches.t->node(
        std::move(Y), {branches.id, zc.id},
        [Bv, chosen, N, K, C](const Tensor& g, const std::vector<Tensor*>& pg) {
            for (std::size_t n = 0; n < N; ++n) {
                for (std::size_t c = 0; c < C; ++c)
                    pg[0]->at(n * K + chosen[n], c) += g.at(n, c);
                for (std::size_t k = 0; k < K; ++k) {
                    double dot = 0.0;
                    for (std::size_t c = 0; c < C; ++c) dot += g.at(n, c) * Bv.at(n * K + k, c);
                    pg[1]->at(n, k) += dot;
                }
            }
        });
    return Var{branches.t, id};
}

// Relaxed counterpart used by STE-exactness checks: out[n] = sum_k zc[n,k] * branch(n,k).
inline Var soft_mix_rows(Var branches, Var zc) {
    check_same_tape(branches, zc);
    const Tensor& B = branches.val();
    const Tensor& Z = zc.val();
    std::size_t N = Z.rows(), K = Z.cols(), C = B.cols();
    if (B.rows() != N * K) throw std::invalid_argument("soft_mix_rows: branch count mismatch");
    Tensor Y({N, C});
    for (std::size_t n = 0; n < N; ++n)
        for (std::size_t k = 0; k < K; ++k)
            for (std::size_t c = 0; c < C; ++c) Y.at(n, c) += Z.at(n, k) * B.at(n * K + k, c);
    Tensor Bv = B, Zv = Z;
    int id = branches.t->node(
        std::move(Y), {branches.id, zc.id},
        [Bv, Zv, N, K, C](const Tensor& g, const std::vector<Tensor*>& pg) {
            for (std::size_t n = 0; n < N; ++n)
                for (std::size_t k = 0; k < K; ++k) {
                    double dot = 0.0;
                    for (std::size_t c = 0; c < C; ++c) {
                        pg[0]->at(n * K + k, c) += Zv.at(n, k) * g.at(n, c);
                        dot += g.at(n, c) * Bv.at(n * K + k, c);
                    }
                    pg[1]->at(n, k) += dot;
                }
        });
    return Var{branches.t, id};
}

inline Var gather_rows(Var x, const std::vector<std::size_t>& idx) {
    const Tensor& X = x.val();
    std::size_t C = X.cols();
    Tensor Y({idx.size(), C});
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t c = 0; c < C; ++c) Y.at(i, c) = X.at(idx[i], c);
    int id = x.t->node(std::move(Y), {x.id},
                       [idx, C](const Tensor& g, const std::vector<Tensor*>& pg) {
                           for (std::size_t i = 0; i < idx.size(); ++i)
                               for (std::size_t c = 0; c < C; ++c)
                                   pg[0]->at(idx[i], c) += g.at(i, c);
                       });
    return Var{x.t, id};
}

inline Var slice_cols(Var x, std::size_t c0, std::size_t c1) {
    const Tensor& X = x.val();
    std::size_t N = X.rows(), C = X.cols();
    if (c1 > C || c0 >= c1) throw std::invalid_argument("slice_cols: bad range");
    Tensor Y({N, c1 - c0});
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t c = c0; c < c1; ++c) Y.at(i, c - c0) = X.at(i, c);
    int id = x.t->node(std::move(Y), {x.id},
                       [c0, c1, N, C](const Tensor& g, const std::vector<Tensor*>& pg) {
                           for (std::size_t i = 0; i < N; ++i)
                               for (std::size_t c = c0; c < c1; ++c)
                                   pg[0]->at(i, c) += g.at(i, c - c0);
                       });
    return Var{x.t, id};
}

// sum of |x - target| against a fixed target
inline Var l1_to_const(Var x, const Tensor& target) {
    const Tensor& X = x.val();
    if (!X.same_shape(target)) throw std::invalid_argument("l1_to_const: shape mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < X.size(); ++i) s += std::fabs(X.data[i] - target.data[i]);
    Tensor Xv = X, Tv = target;
    int id = x.t->node(Tensor::scalar(s), {x.id},
                       [Xv, Tv](const Tensor& g, const std::vector<Tensor*>& pg) {
                           for (std::size_t i = 0; i < Xv.size(); ++i) {
                               double d = Xv.data[i] - Tv.data[i];
                               double sg = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
                               pg[0]->data[i] += sg * g.data[0];
                           }
                       });
    return Var{x.t, id};
}

// mean of |x - target| against a fixed target
inline Var l1_mean_to_const(Var x, const Tensor& target) {
    Var s = l1_to_const(x, target);
    return scale(s, 1.0 / double(x.val().size()));
}

}  // namespace ops
}  // namespace voxsplat
