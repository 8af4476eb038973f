#include "hofnet/tape.hpp"

#include <cmath>
#include <cstring>
#include <string>
#include <utility>

namespace hofnet {

namespace {

// C[m x n] += A[m x k] * B[k x n], plain row-major loops. Each output row is
// produced by one thread, so results are bit-identical for any thread count.
void matmul_acc(const double* a, const double* b, double* c,
                std::size_t m, std::size_t k, std::size_t n) {
    #pragma omp parallel for schedule(static) if (m * n * k > 1u << 15)
    for (long long ii = 0; ii < static_cast<long long>(m); ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        double* crow = c + i * n;
        const double* arow = a + i * k;
        for (std::size_t p = 0; p < k; ++p) {
            const double av = arow[p];
            const double* brow = b + p * n;
            for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
        }
    }
}

// C[m x n] += A^T[(k x m)^T] * B[k x n]
void matmul_at_acc(const double* a, const double* b, double* c,
                   std::size_t k, std::size_t m, std::size_t n) {
    #pragma omp parallel for schedule(static) if (m * n * k > 1u << 15)
    for (long long ii = 0; ii < static_cast<long long>(m); ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        double* crow = c + i * n;
        for (std::size_t p = 0; p < k; ++p) {
            const double av = a[p * m + i];
            const double* brow = b + p * n;
            for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
        }
    }
}

// C[m x n] += A[m x k] * B^T[(n x k)^T]
void matmul_bt_acc(const double* a, const double* b, double* c,
                   std::size_t m, std::size_t k, std::size_t n) {
    #pragma omp parallel for schedule(static) if (m * n * k > 1u << 15)
    for (long long ii = 0; ii < static_cast<long long>(m); ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        const double* arow = a + i * k;
        double* crow = c + i * n;
        for (std::size_t j = 0; j < n; ++j) {
            const double* brow = b + j * k;
            double s = 0.0;
            for (std::size_t p = 0; p < k; ++p) s += arow[p] * brow[p];
            crow[j] += s;
        }
    }
}

} // namespace

int Tape::push(Node n) {
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
}

void Tape::check_id(int id) const {
    if (id < 0 || id >= static_cast<int>(nodes_.size()))
        throw Error("tape: bad node id " + std::to_string(id));
}

const Tape::Node& Tape::node(int id) const {
    check_id(id);
    return nodes_[static_cast<std::size_t>(id)];
}

const Array& Tape::value(int id) const {
    return node(id).value;
}

int Tape::leaf(Array value) {
    require_finite(value, "leaf");
    Node n;
    n.value = std::move(value);
    n.requires_grad = true;
    return push(std::move(n));
}

int Tape::constant(Array value) {
    require_finite(value, "constant");
    Node n;
    n.value = std::move(value);
    n.requires_grad = false;
    return push(std::move(n));
}

int Tape::matmul(int a, int b) {
    const Array& A = value(a);
    const Array& B = value(b);
    require_finite(A, "matmul");
    require_finite(B, "matmul");

    std::size_t m, k, n;
    std::vector<std::size_t> out_shape;
    if (A.rank() == 2 && B.rank() == 2) {
        m = A.shape[0]; k = A.shape[1]; n = B.shape[1];
        if (B.shape[0] != k)
            throw ShapeError("matmul: inner dims " + shape_str(A) + " vs " + shape_str(B));
        out_shape = {m, n};
    } else if (A.rank() == 2 && B.rank() == 1) {
        m = A.shape[0]; k = A.shape[1]; n = 1;
        if (B.shape[0] != k)
            throw ShapeError("matmul: inner dims " + shape_str(A) + " vs " + shape_str(B));
        out_shape = {m};
    } else if (A.rank() == 1 && B.rank() == 2) {
        m = 1; k = A.shape[0]; n = B.shape[1];
        if (B.shape[0] != k)
            throw ShapeError("matmul: inner dims " + shape_str(A) + " vs " + shape_str(B));
        out_shape = {n};
    } else {
        throw ShapeError("matmul: needs a matrix operand");
    }

    Array out = Array::zeros(out_shape);
    matmul_acc(A.data.data(), B.data.data(), out.data.data(), m, k, n);

    Node nd;
    nd.op = Op::Matmul;
    nd.a = a;
    nd.b = b;
    nd.value = std::move(out);
    nd.requires_grad = node(a).requires_grad || node(b).requires_grad;
    return push(std::move(nd));
}

namespace {

enum class Broadcast { None, ScalarA, ScalarB, RowB };

Broadcast classify_elementwise(const Array& A, const Array& B) {
    if (A.same_shape(B)) return Broadcast::None;
    if (B.is_scalar()) return Broadcast::ScalarB;
    if (A.is_scalar()) return Broadcast::ScalarA;
    if (A.rank() == 2 && B.rank() == 1 && B.shape[0] == A.shape[1]) return Broadcast::RowB;
    throw ShapeError("elementwise op: shapes " + shape_str(A) + " vs " + shape_str(B));
}

} // namespace

int Tape::add(int a, int b) {
    const Array& A = value(a);
    const Array& B = value(b);
    require_finite(A, "add");
    require_finite(B, "add");
    Broadcast bc = classify_elementwise(A, B);

    Array out = (bc == Broadcast::ScalarA) ? B : A;
    switch (bc) {
        case Broadcast::None:
            for (std::size_t i = 0; i < out.size(); ++i) out.data[i] += B.data[i];
            break;
        case Broadcast::ScalarB:
            for (double& v : out.data) v += B.data[0];
            break;
        case Broadcast::ScalarA:
            for (double& v : out.data) v += A.data[0];
            break;
        case Broadcast::RowB:
            for (std::size_t i = 0; i < A.rows(); ++i)
                for (std::size_t j = 0; j < A.cols(); ++j) out(i, j) += B(j);
            break;
    }

    Node nd;
    nd.op = Op::Add;
    nd.a = a;
    nd.b = b;
    nd.value = std::move(out);
    nd.requires_grad = node(a).requires_grad || node(b).requires_grad;
    return push(std::move(nd));
}

int Tape::sub(int a, int b) {
    const Array& A = value(a);
    const Array& B = value(b);
    require_finite(A, "sub");
    require_finite(B, "sub");
    Broadcast bc = classify_elementwise(A, B);

    Array out;
    switch (bc) {
        case Broadcast::None:
            out = A;
            for (std::size_t i = 0; i < out.size(); ++i) out.data[i] -= B.data[i];
            break;
        case Broadcast::ScalarB:
            out = A;
            for (double& v : out.data) v -= B.data[0];
            break;
        case Broadcast::ScalarA:
            out = B;
            for (double& v : out.data) v = A.data[0] - v;
            break;
        case Broadcast::RowB:
            out = A;
            for (std::size_t i = 0; i < A.rows(); ++i)
                for (std::size_t j = 0; j < A.cols(); ++j) out(i, j) -= B(j);
            break;
    }

    Node nd;
    nd.op = Op::Sub;
    nd.a = a;
    nd.b = b;
    nd.value = std::move(out);
    nd.requires_grad = node(a).requires_grad || node(b).requires_grad;
    return push(std::move(nd));
}

int Tape::relu(int a) {
    const Array& A = value(a);
    require_finite(A, "relu");
    Array out = A;
    for (double& v : out.data) v = v > 0.0 ? v : 0.0;
    Node nd;
    nd.op = Op::Relu;
    nd.a = a;
    nd.value = std::move(out);
    nd.requires_grad = node(a).requires_grad;
    return push(std::move(nd));
}

int Tape::tanh(int a) {
    const Array& A = value(a);
    require_finite(A, "tanh");
    Array out = A;
    for (double& v : out.data) v = std::tanh(v);
    Node nd;
    nd.op = Op::Tanh;
    nd.a = a;
    nd.value = std::move(out);
    nd.requires_grad = node(a).requires_grad;
    return push(std::move(nd));
}

int Tape::scale(int a, double s) {
    const Array& A = value(a);
    require_finite(A, "scale");
    if (!std::isfinite(s)) throw NonFiniteError("scale: non-finite factor");
    Array out = A;
    for (double& v : out.data) v *= s;
    Node nd;
    nd.op = Op::Scale;
    nd.a = a;
    nd.scalar = s;
    nd.value = std::move(out);
    nd.requires_grad = node(a).requires_grad;
    return push(std::move(nd));
}

int Tape::reduce_mean(int a) {
    const Array& A = value(a);
    require_finite(A, "reduce_mean");
    double s = 0.0;
    for (double v : A.data) s += v;
    Node nd;
    nd.op = Op::ReduceMean;
    nd.a = a;
    nd.value = Array::scalar(s / static_cast<double>(A.size()));
    nd.requires_grad = node(a).requires_grad;
    return push(std::move(nd));
}

int Tape::sq_norm(int a) {
    const Array& A = value(a);
    require_finite(A, "sq_norm");
    double s = 0.0;
    for (double v : A.data) s += v * v;
    Node nd;
    nd.op = Op::SqNorm;
    nd.a = a;
    nd.value = Array::scalar(s);
    nd.requires_grad = node(a).requires_grad;
    return push(std::move(nd));
}

int Tape::transpose(int a) {
    const Array& A = value(a);
    require_finite(A, "transpose");
    if (A.rank() != 2) throw ShapeError("transpose: needs a matrix");
    Array out = Array::zeros({A.shape[1], A.shape[0]});
    for (std::size_t i = 0; i < A.shape[0]; ++i)
        for (std::size_t j = 0; j < A.shape[1]; ++j) out(j, i) = A(i, j);
    Node nd;
    nd.op = Op::Transpose;
    nd.a = a;
    nd.value = std::move(out);
    nd.requires_grad = node(a).requires_grad;
    return push(std::move(nd));
}

int Tape::slice(int a, std::size_t offset, std::vector<std::size_t> shape) {
    const Array& A = value(a);
    require_finite(A, "slice");
    std::size_t n = 1;
    for (std::size_t s : shape) n *= s;
    if (offset + n > A.size())
        throw ShapeError("slice: range exceeds operand size");
    Array out(std::move(shape),
              std::vector<double>(A.data.begin() + static_cast<long>(offset),
                                  A.data.begin() + static_cast<long>(offset + n)));
    Node nd;
    nd.op = Op::Slice;
    nd.a = a;
    nd.offset = offset;
    nd.value = std::move(out);
    nd.requires_grad = node(a).requires_grad;
    return push(std::move(nd));
}

int Tape::gather_rows(int a, std::vector<int> rows) {
    const Array& A = value(a);
    require_finite(A, "gather_rows");
    if (A.rank() != 2) throw ShapeError("gather_rows: needs a matrix");
    const std::size_t c = A.shape[1];
    Array out = Array::zeros({rows.size(), c});
    for (std::size_t i = 0; i < rows.size(); ++i) {
        int r = rows[i];
        if (r < 0 || static_cast<std::size_t>(r) >= A.shape[0])
            throw ShapeError("gather_rows: row index out of range");
        std::memcpy(out.data.data() + i * c, A.data.data() + static_cast<std::size_t>(r) * c,
                    c * sizeof(double));
    }
    Node nd;
    nd.op = Op::GatherRows;
    nd.a = a;
    nd.rows = std::move(rows);
    nd.value = std::move(out);
    nd.requires_grad = node(a).requires_grad;
    return push(std::move(nd));
}

int Tape::apply(Op op, int a, int b, double s) {
    switch (op) {
        case Op::Matmul:     return matmul(a, b);
        case Op::Add:        return add(a, b);
        case Op::Sub:        return sub(a, b);
        case Op::Relu:       return relu(a);
        case Op::Tanh:       return tanh(a);
        case Op::Scale:      return scale(a, s);
        case Op::ReduceMean: return reduce_mean(a);
        case Op::SqNorm:     return sq_norm(a);
        default:
            throw Error("apply: op is not part of the public op set");
    }
}

std::vector<std::uint8_t> Tape::relu_sign_pattern() const {
    std::vector<std::uint8_t> out;
    for (const Node& nd : nodes_) {
        if (nd.op != Op::Relu) continue;
        const Array& in = nodes_[static_cast<std::size_t>(nd.a)].value;
        for (double v : in.data) out.push_back(v > 0.0 ? 1 : 0);
    }
    return out;
}

GradMap Tape::backward(int loss_id) const {
    const Node& loss = node(loss_id);
    if (!loss.value.is_scalar())
        throw ShapeError("backward: loss node must be scalar, got " + shape_str(loss.value));

    std::vector<Array> grads(nodes_.size());
    auto grad_of = [&](int id) -> Array& {
        auto& g = grads[static_cast<std::size_t>(id)];
        if (g.data.empty()) g = Array::zeros(nodes_[static_cast<std::size_t>(id)].value.shape);
        return g;
    };
    auto wants = [&](int id) { return nodes_[static_cast<std::size_t>(id)].requires_grad; };

    grad_of(loss_id).data[0] = 1.0;

    for (int id = loss_id; id >= 0; --id) {
        const Node& nd = nodes_[static_cast<std::size_t>(id)];
        if (!nd.requires_grad || nd.op == Op::Leaf) continue;
        const Array& g = grads[static_cast<std::size_t>(id)];
        if (g.data.empty()) continue; // node not on any path to the loss

        switch (nd.op) {
            case Op::Matmul: {
                const Array& A = nodes_[static_cast<std::size_t>(nd.a)].value;
                const Array& B = nodes_[static_cast<std::size_t>(nd.b)].value;
                // Treat every operand as a matrix; vectors act as 1 x k or k x 1.
                std::size_t m, k, n;
                if (A.rank() == 2 && B.rank() == 2) { m = A.shape[0]; k = A.shape[1]; n = B.shape[1]; }
                else if (A.rank() == 2)             { m = A.shape[0]; k = A.shape[1]; n = 1; }
                else                                { m = 1; k = A.shape[0]; n = B.shape[1]; }
                if (wants(nd.a)) // dA += dC * B^T
                    matmul_bt_acc(g.data.data(), B.data.data(), grad_of(nd.a).data.data(), m, n, k);
                if (wants(nd.b)) // dB += A^T * dC
                    matmul_at_acc(A.data.data(), g.data.data(), grad_of(nd.b).data.data(), m, k, n);
                break;
            }
            case Op::Add:
            case Op::Sub: {
                const double bsign = nd.op == Op::Add ? 1.0 : -1.0;
                const Array& A = nodes_[static_cast<std::size_t>(nd.a)].value;
                const Array& B = nodes_[static_cast<std::size_t>(nd.b)].value;
                Broadcast bc = classify_elementwise(A, B);
                if (wants(nd.a)) {
                    Array& ga = grad_of(nd.a);
                    if (bc == Broadcast::ScalarA) {
                        double s = 0.0;
                        for (double v : g.data) s += v;
                        ga.data[0] += s;
                    } else {
                        for (std::size_t i = 0; i < g.size(); ++i) ga.data[i] += g.data[i];
                    }
                }
                if (wants(nd.b)) {
                    Array& gb = grad_of(nd.b);
                    if (bc == Broadcast::ScalarB) {
                        double s = 0.0;
                        for (double v : g.data) s += v;
                        gb.data[0] += bsign * s;
                    } else if (bc == Broadcast::RowB) {
                        const std::size_t rows = nd.value.rows(), cols = nd.value.cols();
                        for (std::size_t i = 0; i < rows; ++i)
                            for (std::size_t j = 0; j < cols; ++j)
                                gb.data[j] += bsign * g.data[i * cols + j];
                    } else {
                        for (std::size_t i = 0; i < g.size(); ++i) gb.data[i] += bsign * g.data[i];
                    }
                }
                break;
            }
            case Op::Relu: {
                if (!wants(nd.a)) break;
                const Array& A = nodes_[static_cast<std::size_t>(nd.a)].value;
                Array& ga = grad_of(nd.a);
                for (std::size_t i = 0; i < g.size(); ++i)
                    if (A.data[i] > 0.0) ga.data[i] += g.data[i];
                break;
            }
            case Op::Tanh: {
                if (!wants(nd.a)) break;
                Array& ga = grad_of(nd.a);
                for (std::size_t i = 0; i < g.size(); ++i) {
                    const double y = nd.value.data[i];
                    ga.data[i] += g.data[i] * (1.0 - y * y);
                }
                break;
            }
            case Op::Scale: {
                if (!wants(nd.a)) break;
                Array& ga = grad_of(nd.a);
                for (std::size_t i = 0; i < g.size(); ++i) ga.data[i] += nd.scalar * g.data[i];
                break;
            }
            case Op::ReduceMean: {
                if (!wants(nd.a)) break;
                Array& ga = grad_of(nd.a);
                const double gv = g.data[0] / static_cast<double>(ga.size());
                for (double& v : ga.data) v += gv;
                break;
            }
            case Op::SqNorm: {
                if (!wants(nd.a)) break;
                const Array& A = nodes_[static_cast<std::size_t>(nd.a)].value;
                Array& ga = grad_of(nd.a);
                const double gv = 2.0 * g.data[0];
                for (std::size_t i = 0; i < ga.size(); ++i) ga.data[i] += gv * A.data[i];
                break;
            }
            case Op::Transpose: {
                if (!wants(nd.a)) break;
                Array& ga = grad_of(nd.a);
                const std::size_t r = nd.value.shape[0], c = nd.value.shape[1];
                for (std::size_t i = 0; i < r; ++i)
                    for (std::size_t j = 0; j < c; ++j) ga(j, i) += g(i, j);
                break;
            }
            case Op::Slice: {
                if (!wants(nd.a)) break;
                Array& ga = grad_of(nd.a);
                for (std::size_t i = 0; i < g.size(); ++i) ga.data[nd.offset + i] += g.data[i];
                break;
            }
            case Op::GatherRows: {
                if (!wants(nd.a)) break;
                Array& ga = grad_of(nd.a);
                const std::size_t c = nd.value.shape[1];
                for (std::size_t i = 0; i < nd.rows.size(); ++i)
                    for (std::size_t j = 0; j < c; ++j)
                        ga.data[static_cast<std::size_t>(nd.rows[i]) * c + j] += g.data[i * c + j];
                break;
            }
            case Op::Leaf:
                break;
        }
    }

    GradMap out;
    for (std::size_t id = 0; id < nodes_.size(); ++id) {
        const Node& nd = nodes_[id];
        if (nd.op != Op::Leaf || !nd.requires_grad) continue;
        Array& g = grads[id];
        out.emplace(static_cast<int>(id),
                    g.data.empty() ? Array::zeros(nd.value.shape) : std::move(g));
    }
    return out;
}

} // namespace hofnet
