#pragma once

#include "hofnet/mlp.hpp"
#include "hofnet/pointcloud.hpp"

namespace hofnet::serial {

// Single-threaded textbook implementations, kept as oracles for the parallel
// kernels and as the baseline lane of the benchmark.

struct Nearest {
    std::size_t index = 0;
    double d2 = 0.0;
};

Nearest nearest(const PointCloud& cloud, std::span<const double> query);

double chamfer_asym(const PointCloud& x, const PointCloud& y);
double chamfer_sym(const PointCloud& x, const PointCloud& y);

PointCloud mapping_forward(const FlatParams& params, const PointCloud& x);

} // namespace hofnet::serial
