#pragma once

#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "hofnet/array.hpp"

namespace hofnet {

// Recorded operations. The first eight (after Leaf) form the public op set;
// Transpose/Slice/GatherRows are layout plumbing used by the network builders.
enum class Op {
    Leaf,
    Matmul,
    Add,
    Sub,
    Relu,
    Tanh,
    Scale,
    ReduceMean,
    SqNorm,
    Transpose,
    Slice,
    GatherRows,
};

using GradMap = std::unordered_map<int, Array>;

// Define-by-run reverse-mode tape. Node ids increase monotonically; backward
// walks them in strictly decreasing order. A tape is single-owner while
// recording; completed values are immutable.
class Tape {
public:
    // Leaves. Constants participate in the forward pass but receive no gradient.
    int leaf(Array value);
    int constant(Array value);

    // matmul supports [m x k]*[k x n], [m x k]*[k], [k]*[k x n].
    int matmul(int a, int b);
    // add/sub support equal shapes, scalar broadcast, and matrix + row vector.
    int add(int a, int b);
    int sub(int a, int b);
    int relu(int a);   // relu'(0) = 0
    int tanh(int a);
    int scale(int a, double s);
    int reduce_mean(int a); // scalar
    int sq_norm(int a);     // scalar, sum of squares

    int transpose(int a);
    // Contiguous range of the flattened operand, reinterpreted as `shape`.
    int slice(int a, std::size_t offset, std::vector<std::size_t> shape);
    // Row selection from a matrix; rows may repeat.
    int gather_rows(int a, std::vector<int> rows);

    // Generic entry point over the public op set (used by property tests).
    int apply(Op op, int a, int b = -1, double s = 0.0);

    const Array& value(int id) const;
    std::size_t size() const { return nodes_.size(); }

    // Gradients of the scalar node `loss_id` with respect to every
    // gradient-bearing leaf. Leaves not reachable from the loss map to zeros.
    GradMap backward(int loss_id) const;

    // Sign bits of every relu input, in recording order. Two evaluations of
    // one computation sit on the same smooth piece iff the patterns match.
    std::vector<std::uint8_t> relu_sign_pattern() const;

private:
    struct Node {
        Op op = Op::Leaf;
        int a = -1;
        int b = -1;
        double scalar = 0.0;
        std::size_t offset = 0;
        std::vector<int> rows;
        Array value;
        bool requires_grad = false;
    };

    int push(Node n);
    const Node& node(int id) const;
    void check_id(int id) const;

    std::vector<Node> nodes_;
};

} // namespace hofnet
