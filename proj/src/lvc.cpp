#include "hofnet/lvc.hpp"

#include <algorithm>
#include <cmath>

#include "hofnet/rng.hpp"

namespace hofnet {

bool LvcSpec::injects_at(std::size_t layer) const {
    return std::find(injection_layers.begin(), injection_layers.end(),
                     static_cast<int>(layer)) != injection_layers.end();
}

void validate(const LvcSpec& spec) {
    if (spec.layer_sizes.size() < 2)
        throw SpecError("lvc spec needs at least one layer");
    for (int s : spec.layer_sizes)
        if (s < 1) throw SpecError("lvc spec: layer sizes must be >= 1");
    if (spec.codeword_len < 0) throw SpecError("lvc spec: negative codeword length");
    for (int i : spec.injection_layers)
        if (i < 0 || static_cast<std::size_t>(i) >= spec.depth())
            throw SpecError("lvc spec: injection layer out of range");
    if (spec.layers.size() != spec.depth())
        throw SpecError("lvc spec: weight count does not match depth");
    for (std::size_t l = 0; l < spec.layers.size(); ++l) {
        const auto out = static_cast<std::size_t>(spec.layer_sizes[l + 1]);
        const auto in = static_cast<std::size_t>(spec.layer_sizes[l]);
        const LvcLayer& ly = spec.layers[l];
        if (ly.wx.rank() != 2 || ly.wx.shape[0] != out || ly.wx.shape[1] != in)
            throw ShapeError("lvc layer " + std::to_string(l) + ": bad Wx shape");
        if (ly.bias.size() != out)
            throw ShapeError("lvc layer " + std::to_string(l) + ": bad bias length");
        if (spec.injects_at(l)) {
            if (ly.wz.rank() != 2 || ly.wz.shape[0] != out ||
                ly.wz.shape[1] != static_cast<std::size_t>(spec.codeword_len))
                throw ShapeError("lvc layer " + std::to_string(l) + ": bad Wz shape");
        } else if (!ly.wz.data.empty()) {
            throw ShapeError("lvc layer " + std::to_string(l) + ": Wz on non-injection layer");
        }
    }
}

std::size_t complexity_lvc(const LvcSpec& spec) {
    validate(spec);
    std::size_t n = static_cast<std::size_t>(spec.codeword_len);
    for (const LvcLayer& ly : spec.layers)
        n += ly.wx.size() + ly.wz.size() + ly.bias.size();
    return n;
}

LvcSpec random_lvc(const std::vector<int>& layer_sizes, int codeword_len,
                   const std::vector<int>& injection_layers, Activation activation,
                   std::uint64_t seed) {
    LvcSpec spec;
    spec.layer_sizes = layer_sizes;
    spec.codeword_len = codeword_len;
    spec.injection_layers = injection_layers;
    std::sort(spec.injection_layers.begin(), spec.injection_layers.end());
    spec.activation = activation;
    Rng rng(seed);
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        const auto out = static_cast<std::size_t>(layer_sizes[l + 1]);
        const auto in = static_cast<std::size_t>(layer_sizes[l]);
        LvcLayer ly;
        ly.wx = Array::zeros({out, in});
        for (double& v : ly.wx.data) v = rng.uniform(-1.0, 1.0);
        ly.bias = Array::zeros({out});
        for (double& v : ly.bias.data) v = rng.uniform(-1.0, 1.0);
        if (spec.injects_at(l) && codeword_len > 0) {
            ly.wz = Array::zeros({out, static_cast<std::size_t>(codeword_len)});
            for (double& v : ly.wz.data) v = rng.uniform(-1.0, 1.0);
        }
        spec.layers.push_back(std::move(ly));
    }
    // Zero-length codewords make Wz blocks empty; drop the injection markers.
    if (codeword_len == 0) spec.injection_layers.clear();
    validate(spec);
    return spec;
}

PointCloud lvc_forward(const LvcSpec& spec, const std::vector<double>& z,
                       const PointCloud& x) {
    validate(spec);
    if (static_cast<int>(z.size()) != spec.codeword_len)
        throw ShapeError("lvc_forward: codeword length mismatch");
    if (static_cast<int>(x.dim()) != spec.layer_sizes.front())
        throw ShapeError("lvc_forward: input dimension mismatch");

    const std::size_t out_dim = static_cast<std::size_t>(spec.layer_sizes.back());
    std::vector<double> out(x.count() * out_dim);

    #pragma omp parallel
    {
        std::vector<double> cur, nxt;
        #pragma omp for schedule(static)
        for (long long pi = 0; pi < static_cast<long long>(x.count()); ++pi) {
            const auto p = x.point(static_cast<std::size_t>(pi));
            cur.assign(p.begin(), p.end());
            for (std::size_t l = 0; l < spec.depth(); ++l) {
                const LvcLayer& ly = spec.layers[l];
                const std::size_t o_n = ly.bias.size();
                const std::size_t i_n = cur.size();
                nxt.resize(o_n);
                for (std::size_t o = 0; o < o_n; ++o) {
                    double s = ly.bias(o);
                    const double* wrow = ly.wx.data.data() + o * i_n;
                    for (std::size_t i = 0; i < i_n; ++i) s += wrow[i] * cur[i];
                    if (!ly.wz.data.empty()) {
                        const double* zrow = ly.wz.data.data() + o * z.size();
                        for (std::size_t i = 0; i < z.size(); ++i) s += zrow[i] * z[i];
                    }
                    nxt[o] = s;
                }
                if (l + 1 < spec.depth()) {
                    if (spec.activation == Activation::Relu) {
                        for (double& v : nxt) v = v > 0.0 ? v : 0.0;
                    } else {
                        for (double& v : nxt) v = std::tanh(v);
                    }
                }
                cur.swap(nxt);
            }
            std::copy(cur.begin(), cur.end(),
                      out.begin() + static_cast<long>(static_cast<std::size_t>(pi) * out_dim));
        }
    }
    return PointCloud(out_dim, std::move(out), x.label());
}

FlatParams lvc_to_hof(const LvcSpec& spec, const std::vector<double>& z) {
    validate(spec);
    if (static_cast<int>(z.size()) != spec.codeword_len)
        throw ShapeError("lvc_to_hof: codeword length mismatch");

    MlpSpec mlp;
    mlp.layer_sizes = spec.layer_sizes;
    mlp.activation = spec.activation;

    std::vector<Array> weights, biases;
    for (const LvcLayer& ly : spec.layers) {
        weights.push_back(ly.wx);
        Array b = ly.bias;
        if (!ly.wz.data.empty()) {
            for (std::size_t o = 0; o < b.size(); ++o) {
                const double* zrow = ly.wz.data.data() + o * z.size();
                double s = 0.0;
                for (std::size_t i = 0; i < z.size(); ++i) s += zrow[i] * z[i];
                b(o) += s;
            }
        }
        biases.push_back(std::move(b));
    }
    return pack(mlp, weights, biases);
}

CollisionReport lvc_collision_demo(const LvcSpec& spec, const CodewordFn& codeword,
                                   std::span<const double> obs_a,
                                   std::span<const double> obs_b,
                                   const FlatParams& hof_a, const FlatParams& hof_b,
                                   const PointCloud& probes) {
    validate(spec);
    const std::vector<double> za = codeword(obs_a);
    const std::vector<double> zb = codeword(obs_b);
    if (za.size() != zb.size() || static_cast<int>(za.size()) != spec.codeword_len)
        throw ShapeError("lvc_collision_demo: codeword length mismatch");

    CollisionReport rep;
    for (std::size_t i = 0; i < za.size(); ++i)
        rep.codeword_gap = std::max(rep.codeword_gap, std::fabs(za[i] - zb[i]));
    if (rep.codeword_gap != 0.0)
        throw PreconditionError("lvc_collision_demo: observations have unequal codewords");

    const PointCloud la = lvc_forward(spec, za, probes);
    const PointCloud lb = lvc_forward(spec, zb, probes);
    for (std::size_t i = 0; i < la.coords().size(); ++i)
        rep.lvc_max_dev = std::max(rep.lvc_max_dev,
                                   std::fabs(la.coords()[i] - lb.coords()[i]));

    if (hof_a.spec != hof_b.spec)
        throw SpecError("lvc_collision_demo: weight vectors must share one schedule");
    const PointCloud ha = mapping_forward(hof_a, probes);
    const PointCloud hb = mapping_forward(hof_b, probes);
    for (std::size_t i = 0; i < ha.coords().size(); ++i)
        rep.hof_max_sep = std::max(rep.hof_max_sep,
                                   std::fabs(ha.coords()[i] - hb.coords()[i]));

    rep.lvc_collides = rep.lvc_max_dev <= 1e-12;
    rep.hof_separates = rep.hof_max_sep > 1e-6;
    return rep;
}

CollisionReport lvc_collision_demo(const LvcSpec& spec, const CodewordFn& codeword,
                                   std::span<const double> obs_a,
                                   std::span<const double> obs_b,
                                   const PointCloud& probes) {
    const std::vector<double> z = codeword(obs_a);
    FlatParams h1 = lvc_to_hof(spec, z);
    FlatParams h2 = h1;
    h2.theta[0] += 0.5; // same schedule, same complexity, different map
    return lvc_collision_demo(spec, codeword, obs_a, obs_b, h1, h2, probes);
}

} // namespace hofnet
