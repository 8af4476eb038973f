#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hofnet/array.hpp"
#include "hofnet/pointcloud.hpp"
#include "hofnet/tape.hpp"

namespace hofnet {

enum class Activation { Relu, Tanh };

Activation activation_from_string(const std::string& s);
std::string to_string(Activation a);

// Layer-size schedule [n0, n1, ..., nL]; hidden layers use `activation`,
// the output layer is affine.
struct MlpSpec {
    std::vector<int> layer_sizes;
    Activation activation = Activation::Relu;

    std::size_t layers() const { return layer_sizes.size() - 1; }
    int in_dim() const { return layer_sizes.front(); }
    int out_dim() const { return layer_sizes.back(); }

    bool operator==(const MlpSpec&) const = default;
};

void validate(const MlpSpec& spec);

// Total parameter count: sum over layers of (n_i + 1) * n_{i+1}.
std::size_t count_params(const MlpSpec& spec);

// Packed parameter vector theta: (W1, b1, ..., WL, bL), each W row-major
// [out x in]. pack(unpack(theta)) reproduces theta bit-exactly.
struct FlatParams {
    MlpSpec spec;
    std::vector<double> theta;
};

FlatParams zero_params(const MlpSpec& spec);
FlatParams random_params(const MlpSpec& spec, std::uint64_t seed, double scale = 1.0);

struct LayerView {
    const double* w = nullptr; // [out x in], row-major
    const double* b = nullptr; // [out]
    int in = 0;
    int out = 0;
};

// Borrowing views into theta, one per layer.
std::vector<LayerView> unpack(const FlatParams& params);
FlatParams pack(const MlpSpec& spec, const std::vector<Array>& weights,
                const std::vector<Array>& biases);

// Forward pass with per-sample weights, parallel over the batch.
PointCloud mapping_forward(const FlatParams& params, const PointCloud& x);

// Single-vector forward used by the encoder path (arbitrary widths).
std::vector<double> mlp_forward_vec(const FlatParams& params, std::span<const double> in);

// Records the same forward pass on a tape. `theta` is a flat node of
// count_params(spec) entries; `x` is a [batch x in] matrix node or an [in]
// vector node. Returns the output node id.
int tape_mlp_forward(Tape& tape, const MlpSpec& spec, int theta, int x);

} // namespace hofnet
