#include "hofnet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hofnet {

namespace {

void check_pair(const PointCloud& x, const PointCloud& y) {
    if (x.is_empty() || y.is_empty())
        throw EmptySetError("point-set metric: empty input set");
    if (x.dim() != y.dim())
        throw ShapeError("point-set metric: dimension mismatch");
}

NnIndex::Hit brute_nearest(const PointCloud& y, std::span<const double> q) {
    NnIndex::Hit best;
    best.d2 = std::numeric_limits<double>::infinity();
    best.index = std::numeric_limits<std::size_t>::max();
    for (std::size_t j = 0; j < y.count(); ++j) {
        const double d2 = dist2(q, y.point(j));
        if (d2 < best.d2) { // strict: lowest id wins ties
            best.d2 = d2;
            best.index = j;
        }
    }
    return best;
}

// Nearest-neighbor squared distance per query point, one slot per query.
std::vector<double> nn_d2(const PointCloud& x, const PointCloud& y, NnBackend backend) {
    std::vector<double> out(x.count());
    if (backend == NnBackend::KdTree) {
        NnIndex index(y);
        #pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(x.count()); ++i)
            out[static_cast<std::size_t>(i)] =
                index.nearest(x.point(static_cast<std::size_t>(i))).d2;
    } else {
        #pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(x.count()); ++i)
            out[static_cast<std::size_t>(i)] =
                brute_nearest(y, x.point(static_cast<std::size_t>(i))).d2;
    }
    return out;
}

} // namespace

double chamfer_asym(const PointCloud& x, const PointCloud& y, NnBackend backend) {
    check_pair(x, y);
    const std::vector<double> d2 = nn_d2(x, y, backend);
    double s = 0.0;
    for (double v : d2) s += v;
    return s / static_cast<double>(x.count());
}

double chamfer_sym(const PointCloud& x, const PointCloud& y, NnBackend backend) {
    return chamfer_asym(x, y, backend) + chamfer_asym(y, x, backend);
}

double f1_score(const PointCloud& pred, const PointCloud& gt, double tau, NnBackend backend) {
    check_pair(pred, gt);
    if (!(tau > 0.0)) throw PreconditionError("f1_score: tau must be positive");
    const double tau2 = tau * tau;

    const std::vector<double> dp = nn_d2(pred, gt, backend);
    const std::vector<double> dg = nn_d2(gt, pred, backend);
    std::size_t hit_p = 0, hit_g = 0;
    for (double v : dp)
        if (v <= tau2) ++hit_p;
    for (double v : dg)
        if (v <= tau2) ++hit_g;

    const double precision = static_cast<double>(hit_p) / static_cast<double>(pred.count());
    const double recall = static_cast<double>(hit_g) / static_cast<double>(gt.count());
    if (precision + recall == 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

double f1_default_tau(const PointCloud& gt) {
    if (gt.is_empty()) throw EmptySetError("f1_default_tau: empty set");
    const std::size_t d = gt.dim();
    std::vector<double> lo(d, std::numeric_limits<double>::infinity());
    std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < gt.count(); ++i)
        for (std::size_t a = 0; a < d; ++a) {
            lo[a] = std::min(lo[a], gt.coord(i, a));
            hi[a] = std::max(hi[a], gt.coord(i, a));
        }
    double diag2 = 0.0;
    for (std::size_t a = 0; a < d; ++a) {
        const double e = hi[a] - lo[a];
        diag2 += e * e;
    }
    return 0.01 * std::sqrt(diag2);
}

} // namespace hofnet
