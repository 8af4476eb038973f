#include "hofnet/sampler.hpp"

#include <cmath>

#include "hofnet/rng.hpp"

namespace hofnet {

SamplerKind sampler_kind_from_string(const std::string& s) {
    if (s == "ball3_interior") return SamplerKind::Ball3Interior;
    if (s == "sphere3_surface") return SamplerKind::Sphere3Surface;
    if (s == "cube3_interior") return SamplerKind::Cube3Interior;
    if (s == "ball4_interior") return SamplerKind::Ball4Interior;
    throw FormatError("unknown sampler kind: " + s);
}

std::string to_string(SamplerKind k) {
    switch (k) {
        case SamplerKind::Ball3Interior: return "ball3_interior";
        case SamplerKind::Sphere3Surface: return "sphere3_surface";
        case SamplerKind::Cube3Interior: return "cube3_interior";
        case SamplerKind::Ball4Interior: return "ball4_interior";
    }
    return "?";
}

std::size_t sampler_dim(SamplerKind k) {
    return k == SamplerKind::Ball4Interior ? 4 : 3;
}

namespace {

// Unit direction from normalized Gaussians; resamples the (measure-zero)
// near-origin case so the normalization stays well conditioned.
void unit_direction(Rng& rng, double* out, std::size_t d) {
    while (true) {
        double n2 = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            out[i] = rng.gaussian();
            n2 += out[i] * out[i];
        }
        if (n2 > 1e-24) {
            const double inv = 1.0 / std::sqrt(n2);
            for (std::size_t i = 0; i < d; ++i) out[i] *= inv;
            return;
        }
    }
}

} // namespace

PointCloud sample(const CanonicalSampler& sampler, std::size_t count) {
    if (count < 1) throw PreconditionError("sample: count must be >= 1");
    const std::size_t d = sampler_dim(sampler.kind);
    Rng rng(sampler.seed);

    std::vector<double> coords;
    coords.reserve(count * d);
    double p[4];
    for (std::size_t i = 0; i < count; ++i) {
        switch (sampler.kind) {
            case SamplerKind::Ball3Interior:
            case SamplerKind::Ball4Interior: {
                unit_direction(rng, p, d);
                const double r = std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
                for (std::size_t a = 0; a < d; ++a) p[a] *= r;
                break;
            }
            case SamplerKind::Sphere3Surface:
                unit_direction(rng, p, d);
                break;
            case SamplerKind::Cube3Interior:
                for (std::size_t a = 0; a < d; ++a) p[a] = rng.uniform(-1.0, 1.0);
                break;
        }
        coords.insert(coords.end(), p, p + d);
    }
    return PointCloud(d, std::move(coords), to_string(sampler.kind));
}

} // namespace hofnet
