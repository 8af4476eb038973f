#pragma once

#include <cstdint>
#include <span>

#include "hofnet/mlp.hpp"

namespace hofnet {

// Encoder that regresses the full decoder parameter vector from a flattened
// observation. Its output length always equals count_params(decoder).
struct EncoderNet {
    MlpSpec spec;    // [obs_len, hidden..., count_params(decoder)]
    MlpSpec decoder; // what the output vector parameterizes
    Array phi;       // flat trainable parameters
};

// Hidden layers start at uniform(-1,1)/sqrt(fan_in); the final layer is
// additionally scaled by 0.1 so freshly emitted decoders are near-zero maps.
// Biases start at zero.
EncoderNet make_encoder(int obs_len, const std::vector<int>& hidden,
                        const MlpSpec& decoder, std::uint64_t seed);

// Emits the decoder weights for one observation.
FlatParams encoder_forward(const EncoderNet& enc, std::span<const double> observation);

} // namespace hofnet
