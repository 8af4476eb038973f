#pragma once

#include <cstdint>
#include <string>

#include "hofnet/pointcloud.hpp"

namespace hofnet {

enum class SamplerKind {
    Ball3Interior,
    Sphere3Surface,
    Cube3Interior,
    Ball4Interior,
};

SamplerKind sampler_kind_from_string(const std::string& s);
std::string to_string(SamplerKind k);
std::size_t sampler_dim(SamplerKind k);

// Uniform sampler over a canonical set, deterministic per seed.
struct CanonicalSampler {
    SamplerKind kind = SamplerKind::Ball3Interior;
    std::uint64_t seed = 0;
};

// `count` i.i.d. uniform points from the sampler's set. Ball interiors use a
// normalized Gaussian direction times radius u^(1/d); the sphere surface is a
// normalized Gaussian; the cube is independent uniforms in [-1,1].
PointCloud sample(const CanonicalSampler& sampler, std::size_t count);

} // namespace hofnet
