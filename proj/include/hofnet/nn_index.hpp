#pragma once

#include <span>
#include <vector>

#include "hofnet/pointcloud.hpp"

namespace hofnet {

// Balanced k-d tree over a point cloud. Queries return exactly what a brute
// force scan returns, including ties, which are broken by lowest point id in
// both backends.
class NnIndex {
public:
    struct Hit {
        std::size_t index = 0;
        double d2 = 0.0;
    };

    explicit NnIndex(const PointCloud& cloud);

    Hit nearest(std::span<const double> query) const;
    std::size_t dim() const { return dim_; }

private:
    struct Node {
        std::size_t point;      // original point id
        std::size_t axis;
        double split;
        int left = -1;
        int right = -1;
    };

    int build(std::vector<std::size_t>& ids, std::size_t lo, std::size_t hi, std::size_t depth);
    void search(int node, std::span<const double> q, Hit& best) const;

    std::size_t dim_ = 0;
    std::vector<double> coords_;
    std::vector<Node> nodes_;
    int root_ = -1;
};

} // namespace hofnet
