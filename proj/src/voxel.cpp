#include "hofnet/voxel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hofnet {

OccupancyGrid::OccupancyGrid(int n) : n_(n) {
    if (n < 1) throw PreconditionError("occupancy grid: n must be positive");
    occ_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n) *
                    static_cast<std::size_t>(n),
                0);
}

std::size_t OccupancyGrid::occupied_count() const {
    std::size_t c = 0;
    for (std::uint8_t v : occ_) c += v;
    return c;
}

Vox OccupancyGrid::world_to_voxel(double x, double y, double z) const {
    auto axis = [this](double v) {
        const int i = static_cast<int>(std::floor((v + 1.0) * static_cast<double>(n_) / 2.0));
        return std::clamp(i, 0, n_ - 1);
    };
    return Vox{axis(x), axis(y), axis(z)};
}

OccupancyGrid voxelize(const PointCloud& cloud, int n) {
    if (cloud.dim() != 3) throw ShapeError("voxelize: cloud must be 3-D");
    OccupancyGrid grid(n);
    for (std::size_t i = 0; i < cloud.count(); ++i) {
        const auto p = cloud.point(i);
        for (double v : p)
            if (v < -1.0 || v > 1.0)
                throw BoundsError("voxelize: point " + std::to_string(i) +
                                  " outside [-1,1]^3");
        grid.set(grid.world_to_voxel(p[0], p[1], p[2]));
    }
    return grid;
}

OccupancyGrid filled_bounding_box(const OccupancyGrid& grid) {
    const int n = grid.n();
    Vox lo{n, n, n}, hi{-1, -1, -1};
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
                if (grid.occupied({x, y, z})) {
                    lo.x = std::min(lo.x, x); hi.x = std::max(hi.x, x);
                    lo.y = std::min(lo.y, y); hi.y = std::max(hi.y, y);
                    lo.z = std::min(lo.z, z); hi.z = std::max(hi.z, z);
                }
    OccupancyGrid box(n);
    if (hi.x < 0) return box;
    for (int x = lo.x; x <= hi.x; ++x)
        for (int y = lo.y; y <= hi.y; ++y)
            for (int z = lo.z; z <= hi.z; ++z)
                box.set({x, y, z});
    return box;
}

} // namespace hofnet
