#pragma once

#include <cstdint>
#include <vector>

#include "hofnet/pointcloud.hpp"

namespace hofnet {

struct Vox {
    int x = 0;
    int y = 0;
    int z = 0;

    bool operator==(const Vox&) const = default;
};

inline int l1_dist(const Vox& a, const Vox& b) {
    return std::abs(a.x - b.x) + std::abs(a.y - b.y) + std::abs(a.z - b.z);
}

// n^3 boolean lattice over the fixed world box [-1,1]^3; voxel side 2/n.
class OccupancyGrid {
public:
    explicit OccupancyGrid(int n);

    int n() const { return n_; }
    bool in_bounds(const Vox& v) const {
        return v.x >= 0 && v.x < n_ && v.y >= 0 && v.y < n_ && v.z >= 0 && v.z < n_;
    }
    bool occupied(const Vox& v) const { return occ_[idx(v)] != 0; }
    void set(const Vox& v, bool value = true) { occ_[idx(v)] = value ? 1 : 0; }
    std::size_t occupied_count() const;

    std::size_t idx(const Vox& v) const {
        return (static_cast<std::size_t>(v.x) * static_cast<std::size_t>(n_) +
                static_cast<std::size_t>(v.y)) * static_cast<std::size_t>(n_) +
               static_cast<std::size_t>(v.z);
    }

    // index = clamp(floor((coord + 1) * n / 2), 0, n-1), per axis
    Vox world_to_voxel(double x, double y, double z) const;

private:
    int n_;
    std::vector<std::uint8_t> occ_;
};

// Marks the voxel of every point. Points must lie in [-1,1]^3.
OccupancyGrid voxelize(const PointCloud& cloud, int n);

// Axis-aligned bounding box of the occupied voxels, filled solid. An empty
// grid yields an empty grid.
OccupancyGrid filled_bounding_box(const OccupancyGrid& grid);

} // namespace hofnet
