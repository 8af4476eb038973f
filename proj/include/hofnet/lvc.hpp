#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hofnet/mlp.hpp"

namespace hofnet {

// Decoder with a fixed weight set that is conditioned by concatenating a
// codeword z with the input of selected layers. Layer i computes
// a_i = Wx * input + Wz * z + b (Wz present only on injection layers).
struct LvcLayer {
    Array wx;   // [out x in]
    Array wz;   // [out x m]; empty when the layer takes no codeword
    Array bias; // [out]
};

struct LvcSpec {
    std::vector<int> layer_sizes;    // x-path widths [n0, ..., nL]
    int codeword_len = 0;            // m
    std::vector<int> injection_layers; // sorted, each in [0, L)
    Activation activation = Activation::Relu;
    std::vector<LvcLayer> layers;

    std::size_t depth() const { return layer_sizes.size() - 1; }
    bool injects_at(std::size_t layer) const;
};

void validate(const LvcSpec& spec);

// Total decoder parameter count (Wx, Wz, biases) plus the codeword length.
std::size_t complexity_lvc(const LvcSpec& spec);

// Deterministic random instance for tests and the conversion CLI.
LvcSpec random_lvc(const std::vector<int>& layer_sizes, int codeword_len,
                   const std::vector<int>& injection_layers, Activation activation,
                   std::uint64_t seed);

// Forward pass; every injection layer sees [layer input ‖ z].
PointCloud lvc_forward(const LvcSpec& spec, const std::vector<double>& z,
                       const PointCloud& x);

// Folds the codeword into the biases: b' = b + Wz * z, weights Wx kept.
// The result computes exactly the same map with no codeword input, and
// count_params(result) <= complexity_lvc(spec) - codeword_len.
FlatParams lvc_to_hof(const LvcSpec& spec, const std::vector<double>& z);

// Executable separation check: two observations that collide to one codeword
// drive the LVC decoder to identical outputs, while a pair of same-schedule
// weight vectors can still disagree on the same probes.
struct CollisionReport {
    double codeword_gap = 0.0;  // max |c(a) - c(b)|
    double lvc_max_dev = 0.0;   // max output gap between the two observations
    double hof_max_sep = 0.0;   // max output gap between the two weight vectors
    bool lvc_collides = false;  // lvc_max_dev <= 1e-12
    bool hof_separates = false; // hof_max_sep > 1e-6
};

using CodewordFn = std::function<std::vector<double>(std::span<const double>)>;

CollisionReport lvc_collision_demo(const LvcSpec& spec, const CodewordFn& codeword,
                                   std::span<const double> obs_a,
                                   std::span<const double> obs_b,
                                   const FlatParams& hof_a, const FlatParams& hof_b,
                                   const PointCloud& probes);

// Convenience: pairs the converted decoder with a perturbed copy of itself.
CollisionReport lvc_collision_demo(const LvcSpec& spec, const CodewordFn& codeword,
                                   std::span<const double> obs_a,
                                   std::span<const double> obs_b,
                                   const PointCloud& probes);

} // namespace hofnet
