#include "hofnet/mlp.hpp"

#include <cmath>
#include <cstring>

#include "hofnet/rng.hpp"

namespace hofnet {

Activation activation_from_string(const std::string& s) {
    if (s == "relu") return Activation::Relu;
    if (s == "tanh") return Activation::Tanh;
    throw FormatError("unknown activation: " + s);
}

std::string to_string(Activation a) {
    return a == Activation::Relu ? "relu" : "tanh";
}

void validate(const MlpSpec& spec) {
    if (spec.layer_sizes.size() < 2)
        throw SpecError("mlp spec needs at least one layer");
    for (int s : spec.layer_sizes)
        if (s < 1) throw SpecError("mlp spec: layer sizes must be >= 1");
}

std::size_t count_params(const MlpSpec& spec) {
    validate(spec);
    std::size_t n = 0;
    for (std::size_t l = 0; l + 1 < spec.layer_sizes.size(); ++l)
        n += static_cast<std::size_t>(spec.layer_sizes[l] + 1) *
             static_cast<std::size_t>(spec.layer_sizes[l + 1]);
    return n;
}

FlatParams zero_params(const MlpSpec& spec) {
    return FlatParams{spec, std::vector<double>(count_params(spec), 0.0)};
}

FlatParams random_params(const MlpSpec& spec, std::uint64_t seed, double scale) {
    FlatParams p = zero_params(spec);
    Rng rng(seed);
    for (double& v : p.theta) v = scale * rng.uniform(-1.0, 1.0);
    return p;
}

std::vector<LayerView> unpack(const FlatParams& params) {
    validate(params.spec);
    if (params.theta.size() != count_params(params.spec))
        throw SpecError("theta length does not match the layer schedule");
    std::vector<LayerView> views;
    std::size_t off = 0;
    for (std::size_t l = 0; l + 1 < params.spec.layer_sizes.size(); ++l) {
        LayerView v;
        v.in = params.spec.layer_sizes[l];
        v.out = params.spec.layer_sizes[l + 1];
        v.w = params.theta.data() + off;
        off += static_cast<std::size_t>(v.in) * static_cast<std::size_t>(v.out);
        v.b = params.theta.data() + off;
        off += static_cast<std::size_t>(v.out);
        views.push_back(v);
    }
    return views;
}

FlatParams pack(const MlpSpec& spec, const std::vector<Array>& weights,
                const std::vector<Array>& biases) {
    validate(spec);
    if (weights.size() != spec.layers() || biases.size() != spec.layers())
        throw SpecError("pack: wrong number of layers");
    FlatParams p;
    p.spec = spec;
    p.theta.reserve(count_params(spec));
    for (std::size_t l = 0; l < weights.size(); ++l) {
        const std::size_t out = static_cast<std::size_t>(spec.layer_sizes[l + 1]);
        const std::size_t in = static_cast<std::size_t>(spec.layer_sizes[l]);
        if (weights[l].rank() != 2 || weights[l].shape[0] != out || weights[l].shape[1] != in)
            throw ShapeError("pack: weight " + std::to_string(l) + " has shape " +
                             shape_str(weights[l]));
        if (biases[l].size() != out)
            throw ShapeError("pack: bias " + std::to_string(l) + " has wrong length");
        p.theta.insert(p.theta.end(), weights[l].data.begin(), weights[l].data.end());
        p.theta.insert(p.theta.end(), biases[l].data.begin(), biases[l].data.end());
    }
    return p;
}

namespace {

void apply_activation(std::vector<double>& v, std::size_t n, Activation act) {
    if (act == Activation::Relu) {
        for (std::size_t i = 0; i < n; ++i) v[i] = v[i] > 0.0 ? v[i] : 0.0;
    } else {
        for (std::size_t i = 0; i < n; ++i) v[i] = std::tanh(v[i]);
    }
}

void forward_one(const std::vector<LayerView>& views, Activation act,
                 std::span<const double> in, std::vector<double>& cur,
                 std::vector<double>& nxt) {
    cur.assign(in.begin(), in.end());
    for (std::size_t l = 0; l < views.size(); ++l) {
        const LayerView& lv = views[l];
        nxt.resize(static_cast<std::size_t>(lv.out));
        for (int o = 0; o < lv.out; ++o) {
            const double* wrow = lv.w + static_cast<std::size_t>(o) * static_cast<std::size_t>(lv.in);
            double s = lv.b[o];
            for (int i = 0; i < lv.in; ++i) s += wrow[i] * cur[static_cast<std::size_t>(i)];
            nxt[static_cast<std::size_t>(o)] = s;
        }
        if (l + 1 < views.size()) apply_activation(nxt, nxt.size(), act);
        cur.swap(nxt);
    }
}

} // namespace

PointCloud mapping_forward(const FlatParams& params, const PointCloud& x) {
    const auto views = unpack(params);
    if (static_cast<int>(x.dim()) != params.spec.in_dim())
        throw ShapeError("mapping_forward: batch dimension " + std::to_string(x.dim()) +
                         " does not match spec input " + std::to_string(params.spec.in_dim()));
    const std::size_t out_dim = static_cast<std::size_t>(params.spec.out_dim());
    std::vector<double> out(x.count() * out_dim);

    #pragma omp parallel
    {
        std::vector<double> cur, nxt;
        #pragma omp for schedule(static)
        for (long long i = 0; i < static_cast<long long>(x.count()); ++i) {
            const std::size_t ii = static_cast<std::size_t>(i);
            forward_one(views, params.spec.activation, x.point(ii), cur, nxt);
            std::memcpy(out.data() + ii * out_dim, cur.data(), out_dim * sizeof(double));
        }
    }
    return PointCloud(out_dim, std::move(out), x.label());
}

std::vector<double> mlp_forward_vec(const FlatParams& params, std::span<const double> in) {
    const auto views = unpack(params);
    if (static_cast<int>(in.size()) != params.spec.in_dim())
        throw ShapeError("mlp_forward_vec: input length mismatch");
    std::vector<double> cur, nxt;
    forward_one(views, params.spec.activation, in, cur, nxt);
    return cur;
}

int tape_mlp_forward(Tape& tape, const MlpSpec& spec, int theta, int x) {
    validate(spec);
    if (tape.value(theta).size() != count_params(spec))
        throw ShapeError("tape_mlp_forward: theta length mismatch");
    const Array& xv = tape.value(x);
    const bool batched = xv.rank() == 2;
    const int in0 = batched ? static_cast<int>(xv.shape[1]) : static_cast<int>(xv.shape[0]);
    if (in0 != spec.in_dim())
        throw ShapeError("tape_mlp_forward: input dimension mismatch");

    int cur = x;
    std::size_t off = 0;
    for (std::size_t l = 0; l + 1 < spec.layer_sizes.size(); ++l) {
        const std::size_t in = static_cast<std::size_t>(spec.layer_sizes[l]);
        const std::size_t out = static_cast<std::size_t>(spec.layer_sizes[l + 1]);
        const int w = tape.slice(theta, off, {out, in});
        off += out * in;
        const int b = tape.slice(theta, off, {out});
        off += out;
        int pre;
        if (batched) {
            pre = tape.add(tape.matmul(cur, tape.transpose(w)), b);
        } else {
            pre = tape.add(tape.matmul(w, cur), b);
        }
        const bool last = l + 2 == spec.layer_sizes.size();
        if (last) {
            cur = pre;
        } else {
            cur = spec.activation == Activation::Relu ? tape.relu(pre) : tape.tanh(pre);
        }
    }
    return cur;
}

} // namespace hofnet
