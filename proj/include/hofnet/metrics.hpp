#pragma once

#include "hofnet/nn_index.hpp"
#include "hofnet/pointcloud.hpp"

namespace hofnet {

enum class NnBackend { Brute, KdTree };

// Mean over x of the squared distance to the nearest point of y. Both
// backends return identical values; queries run in parallel, the final sum
// is accumulated in point order so results do not depend on thread count.
double chamfer_asym(const PointCloud& x, const PointCloud& y,
                    NnBackend backend = NnBackend::KdTree);

// chamfer_asym(x, y) + chamfer_asym(y, x)
double chamfer_sym(const PointCloud& x, const PointCloud& y,
                   NnBackend backend = NnBackend::KdTree);

// Harmonic mean of precision (fraction of pred within tau of gt) and recall
// (fraction of gt within tau of pred); 0 when both are 0.
double f1_score(const PointCloud& pred, const PointCloud& gt, double tau,
                NnBackend backend = NnBackend::KdTree);

// Default matching threshold: 1% of the gt bounding-box diagonal.
double f1_default_tau(const PointCloud& gt);

} // namespace hofnet
