#include "hofnet/nn_index.hpp"

#include <algorithm>
#include <limits>

namespace hofnet {

NnIndex::NnIndex(const PointCloud& cloud)
    : dim_(cloud.dim()), coords_(cloud.coords()) {
    if (cloud.is_empty()) throw EmptySetError("NnIndex: empty point cloud");
    std::vector<std::size_t> ids(cloud.count());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
    nodes_.reserve(ids.size());
    root_ = build(ids, 0, ids.size(), 0);
}

int NnIndex::build(std::vector<std::size_t>& ids, std::size_t lo, std::size_t hi,
                   std::size_t depth) {
    if (lo >= hi) return -1;
    const std::size_t axis = depth % dim_;
    const std::size_t mid = lo + (hi - lo) / 2;
    std::nth_element(ids.begin() + static_cast<long>(lo), ids.begin() + static_cast<long>(mid),
                     ids.begin() + static_cast<long>(hi),
                     [&](std::size_t a, std::size_t b) {
                         const double ca = coords_[a * dim_ + axis];
                         const double cb = coords_[b * dim_ + axis];
                         if (ca != cb) return ca < cb;
                         return a < b;
                     });
    Node n;
    n.point = ids[mid];
    n.axis = axis;
    n.split = coords_[n.point * dim_ + axis];
    const int self = static_cast<int>(nodes_.size());
    nodes_.push_back(n);
    nodes_[static_cast<std::size_t>(self)].left = build(ids, lo, mid, depth + 1);
    nodes_[static_cast<std::size_t>(self)].right = build(ids, mid + 1, hi, depth + 1);
    return self;
}

void NnIndex::search(int node, std::span<const double> q, Hit& best) const {
    if (node < 0) return;
    const Node& n = nodes_[static_cast<std::size_t>(node)];

    double d2 = 0.0;
    const double* p = coords_.data() + n.point * dim_;
    for (std::size_t a = 0; a < dim_; ++a) {
        const double d = q[a] - p[a];
        d2 += d * d;
    }
    if (d2 < best.d2 || (d2 == best.d2 && n.point < best.index)) {
        best.d2 = d2;
        best.index = n.point;
    }

    const double diff = q[n.axis] - n.split;
    const int near = diff < 0.0 ? n.left : n.right;
    const int far = diff < 0.0 ? n.right : n.left;
    search(near, q, best);
    // <= keeps far-side ties visible so the lowest-id rule matches brute force
    if (diff * diff <= best.d2) search(far, q, best);
}

NnIndex::Hit NnIndex::nearest(std::span<const double> query) const {
    if (query.size() != dim_) throw ShapeError("nearest: query dimension mismatch");
    Hit best;
    best.d2 = std::numeric_limits<double>::infinity();
    best.index = std::numeric_limits<std::size_t>::max();
    search(root_, query, best);
    return best;
}

} // namespace hofnet
