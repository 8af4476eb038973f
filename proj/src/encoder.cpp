#include "hofnet/encoder.hpp"

#include <cmath>

#include "hofnet/rng.hpp"

namespace hofnet {

EncoderNet make_encoder(int obs_len, const std::vector<int>& hidden,
                        const MlpSpec& decoder, std::uint64_t seed) {
    if (obs_len < 1) throw SpecError("make_encoder: observation length must be >= 1");
    validate(decoder);

    EncoderNet enc;
    enc.decoder = decoder;
    enc.spec.activation = Activation::Relu;
    enc.spec.layer_sizes.push_back(obs_len);
    for (int h : hidden) enc.spec.layer_sizes.push_back(h);
    enc.spec.layer_sizes.push_back(static_cast<int>(count_params(decoder)));
    validate(enc.spec);

    enc.phi = Array::zeros({count_params(enc.spec)});
    Rng rng(seed);
    std::size_t off = 0;
    const std::size_t layers = enc.spec.layers();
    for (std::size_t l = 0; l < layers; ++l) {
        const auto in = static_cast<std::size_t>(enc.spec.layer_sizes[l]);
        const auto out = static_cast<std::size_t>(enc.spec.layer_sizes[l + 1]);
        double bound = 1.0 / std::sqrt(static_cast<double>(in));
        if (l + 1 == layers) bound *= 0.1;
        for (std::size_t i = 0; i < in * out; ++i)
            enc.phi.data[off + i] = rng.uniform(-bound, bound);
        off += in * out;
        off += out; // biases stay zero
    }
    return enc;
}

FlatParams encoder_forward(const EncoderNet& enc, std::span<const double> observation) {
    if (static_cast<int>(observation.size()) != enc.spec.in_dim())
        throw ShapeError("encoder_forward: observation length " +
                         std::to_string(observation.size()) + ", expected " +
                         std::to_string(enc.spec.in_dim()));
    FlatParams phi_params{enc.spec, enc.phi.data};
    FlatParams out;
    out.spec = enc.decoder;
    out.theta = mlp_forward_vec(phi_params, observation);
    return out;
}

} // namespace hofnet
