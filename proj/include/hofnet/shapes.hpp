#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "hofnet/array.hpp"
#include "hofnet/pointcloud.hpp"

namespace hofnet {

enum class ShapeKind { Ellipsoid, Box, Cylinder, TwoPrimitiveUnion };

std::string to_string(ShapeKind k);

// Solid primitive in its own canonical frame, shifted by `offset` inside the
// shape frame. size means semi-axes (ellipsoid), half-extents (box), or
// {radius, _, half_height} (cylinder, axis z).
struct Primitive {
    enum class Kind { Ellipsoid, Box, Cylinder };
    Kind kind = Kind::Ellipsoid;
    std::array<double, 3> size{0.5, 0.5, 0.5};
    std::array<double, 3> offset{0.0, 0.0, 0.0};
};

// Posed solid: world point = rot * (primitive point + offset) + trans.
// Construction keeps the posed shape inside [-1,1]^3.
struct SynthShape {
    ShapeKind kind = ShapeKind::Ellipsoid;
    std::vector<Primitive> prims;
    std::array<double, 9> rot{1, 0, 0, 0, 1, 0, 0, 0, 1}; // row-major
    std::array<double, 3> trans{0, 0, 0};
    std::string label;
};

SynthShape random_shape(ShapeKind kind, std::uint64_t seed);

// Uniform-by-area surface sample, posed. Points lie on the declared surface
// to within 1e-9 before the pose is applied.
PointCloud sample_surface(const SynthShape& shape, std::size_t count, std::uint64_t seed);

// Orthographic silhouette along -z onto [-1,1]^2, `side` x `side` pixels,
// value 1.0 where the pixel-center ray hits the solid. Row r, column c map to
// world y = -1 + (r+0.5)*2/side, x = -1 + (c+0.5)*2/side.
Array render_silhouette(const SynthShape& shape, int side);

struct Sample {
    Array raster;  // [side x side]
    PointCloud gt;
    std::string label;
};

// Deterministic synthetic dataset; shape kinds cycle through the four kinds.
std::vector<Sample> gen_dataset(std::size_t count, std::uint64_t seed,
                                std::size_t gt_points = 1000, int raster_side = 32);

} // namespace hofnet
