#pragma once

// Finite-difference oracle for tape gradients. A recorded recipe can be
// re-evaluated at perturbed leaf values, so central differences act as an
// independent check of the backward pass. Coordinates whose +/-h probes land
// on different relu branches are skipped; a subgradient cannot be expected to
// match a difference quotient across a kink.

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "hofnet/rng.hpp"
#include "hofnet/tape.hpp"

namespace fdcheck {

struct RecOp {
    hofnet::Op op;
    int a = -1;
    int b = -1;
    double s = 0.0;
};

struct Graph {
    std::vector<hofnet::Array> leaves;
    std::vector<RecOp> ops; // node id of ops[i] is leaves.size() + i
    int loss = -1;          // node id of the scalar result
};

struct Eval {
    hofnet::Tape tape;
    double loss = 0.0;
    std::vector<std::uint8_t> relu_pattern; // sign bits of every relu input
};

inline Eval eval_graph(const Graph& g, const std::vector<hofnet::Array>& leaf_values) {
    Eval e;
    std::vector<int> ids;
    for (const auto& v : leaf_values) ids.push_back(e.tape.leaf(v));
    for (const RecOp& op : g.ops) {
        const int a = op.a;
        const int b = op.b;
        if (op.op == hofnet::Op::Relu) {
            const hofnet::Array& in = e.tape.value(a);
            for (double v : in.data) e.relu_pattern.push_back(v > 0.0 ? 1 : 0);
        }
        ids.push_back(e.tape.apply(op.op, a, b, op.s));
    }
    e.loss = e.tape.value(g.loss).data[0];
    return e;
}

inline hofnet::Array random_array(hofnet::Rng& rng, std::size_t max_dim) {
    const int kind = static_cast<int>(rng.index(3));
    std::vector<std::size_t> shape;
    if (kind == 0) shape = {1};
    else if (kind == 1) shape = {1 + rng.index(max_dim)};
    else shape = {1 + rng.index(max_dim), 1 + rng.index(max_dim)};
    hofnet::Array a = hofnet::Array::zeros(shape);
    for (double& v : a.data) v = rng.uniform(-0.9, 0.9);
    return a;
}

// Random composition of the public op set, depth-bounded, ending scalar.
inline Graph random_graph(hofnet::Rng& rng, std::size_t max_dim = 8,
                          std::size_t max_ops = 6) {
    using hofnet::Op;
    Graph g;
    const std::size_t n_leaves = 2 + rng.index(3);
    std::vector<std::vector<std::size_t>> shapes;
    for (std::size_t i = 0; i < n_leaves; ++i) {
        g.leaves.push_back(random_array(rng, max_dim));
        shapes.push_back(g.leaves.back().shape);
    }

    auto rank = [](const std::vector<std::size_t>& s) { return s.size(); };
    auto is_scalar = [&](const std::vector<std::size_t>& s) {
        return s.size() == 1 && s[0] == 1;
    };

    const std::size_t n_ops = 1 + rng.index(max_ops);
    for (std::size_t step = 0; step < n_ops; ++step) {
        const Op choices[] = {Op::Matmul, Op::Add,  Op::Sub,        Op::Relu,
                              Op::Tanh,   Op::Scale, Op::ReduceMean, Op::SqNorm};
        RecOp op;
        op.op = choices[rng.index(8)];
        const int n = static_cast<int>(shapes.size());
        bool placed = false;
        for (int attempt = 0; attempt < 24 && !placed; ++attempt) {
            const int a = static_cast<int>(rng.index(static_cast<std::size_t>(n)));
            const int b = static_cast<int>(rng.index(static_cast<std::size_t>(n)));
            const auto& sa = shapes[static_cast<std::size_t>(a)];
            const auto& sb = shapes[static_cast<std::size_t>(b)];
            switch (op.op) {
                case Op::Matmul:
                    if (rank(sa) == 2 && rank(sb) == 2 && sa[1] == sb[0]) {
                        shapes.push_back({sa[0], sb[1]});
                        placed = true;
                    } else if (rank(sa) == 2 && rank(sb) == 1 && sa[1] == sb[0]) {
                        shapes.push_back({sa[0]});
                        placed = true;
                    } else if (rank(sa) == 1 && rank(sb) == 2 && sa[0] == sb[0]) {
                        shapes.push_back({sb[1]});
                        placed = true;
                    }
                    break;
                case Op::Add:
                case Op::Sub:
                    if (sa == sb || is_scalar(sb)) {
                        shapes.push_back(sa);
                        placed = true;
                    } else if (is_scalar(sa)) {
                        shapes.push_back(sb);
                        placed = true;
                    } else if (rank(sa) == 2 && rank(sb) == 1 && sb[0] == sa[1]) {
                        shapes.push_back(sa);
                        placed = true;
                    }
                    break;
                case Op::Relu:
                case Op::Tanh:
                    shapes.push_back(sa);
                    placed = true;
                    break;
                case Op::Scale:
                    op.s = rng.uniform(-2.0, 2.0);
                    shapes.push_back(sa);
                    placed = true;
                    break;
                case Op::ReduceMean:
                case Op::SqNorm:
                    shapes.push_back({1});
                    placed = true;
                    break;
                default:
                    break;
            }
            if (placed) {
                op.a = a;
                op.b = (op.op == Op::Matmul || op.op == Op::Add || op.op == Op::Sub) ? b : -1;
            }
        }
        if (!placed) continue;
        g.ops.push_back(op);
    }

    // Force a scalar result.
    if (!is_scalar(shapes.back())) {
        RecOp fin;
        fin.op = Op::SqNorm;
        fin.a = static_cast<int>(shapes.size()) - 1;
        g.ops.push_back(fin);
        shapes.push_back({1});
    }
    g.loss = static_cast<int>(shapes.size()) - 1;
    return g;
}

struct FdResult {
    bool ok = true;
    std::size_t checked = 0;
    std::size_t skipped = 0; // kink-adjacent coordinates
    double worst_rel_err = 0.0;
};

// Central differences against the tape gradient, h scaled per coordinate.
// Relative error is measured against max(1, |fd|).
inline std::optional<FdResult> check_gradients(const Graph& g, double rel_tol) {
    Eval base = eval_graph(g, g.leaves);
    if (!std::isfinite(base.loss) || std::fabs(base.loss) > 1e4)
        return std::nullopt; // ill-conditioned instance, caller resamples

    const hofnet::GradMap grads = base.tape.backward(g.loss);

    FdResult res;
    for (std::size_t li = 0; li < g.leaves.size(); ++li) {
        const hofnet::Array& grad = grads.at(static_cast<int>(li));
        for (std::size_t ci = 0; ci < g.leaves[li].size(); ++ci) {
            const double v = g.leaves[li].data[ci];
            const double h = 1e-5 * std::max(1.0, std::fabs(v));

            std::vector<hofnet::Array> vals = g.leaves;
            vals[li].data[ci] = v + h;
            Eval up = eval_graph(g, vals);
            vals[li].data[ci] = v - h;
            Eval dn = eval_graph(g, vals);

            if (up.relu_pattern != base.relu_pattern || dn.relu_pattern != base.relu_pattern) {
                ++res.skipped;
                continue;
            }
            const double fd = (up.loss - dn.loss) / (2.0 * h);
            const double err = std::fabs(grad.data[ci] - fd) / std::max(1.0, std::fabs(fd));
            res.worst_rel_err = std::max(res.worst_rel_err, err);
            ++res.checked;
            if (err >= rel_tol) {
                res.ok = false;
                return res;
            }
        }
    }
    return res;
}

} // namespace fdcheck
