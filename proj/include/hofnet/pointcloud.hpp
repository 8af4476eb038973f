#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hofnet/errors.hpp"

namespace hofnet {

// Finite set of c-dimensional points, 2 <= c <= 4, flat row-major storage.
class PointCloud {
public:
    PointCloud() = default;
    PointCloud(std::size_t dim, std::vector<double> coords, std::string label = "");

    static PointCloud empty(std::size_t dim);

    std::size_t dim() const { return dim_; }
    std::size_t count() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
    bool is_empty() const { return coords_.empty(); }

    std::span<const double> point(std::size_t i) const {
        return {coords_.data() + i * dim_, dim_};
    }
    double coord(std::size_t i, std::size_t axis) const { return coords_[i * dim_ + axis]; }

    const std::vector<double>& coords() const { return coords_; }
    std::vector<double>& coords() { return coords_; }

    const std::string& label() const { return label_; }
    void set_label(std::string l) { label_ = std::move(l); }

    void push(std::span<const double> p);

private:
    std::size_t dim_ = 3;
    std::vector<double> coords_;
    std::string label_;
};

double dist2(std::span<const double> a, std::span<const double> b);

// Text format: one point per line, coordinates separated by single spaces,
// '#' comment lines ignored. The writer emits 17 significant digits so a
// read-back is value-exact.
void write_pointcloud(std::ostream& os, const PointCloud& pc);
void write_pointcloud_file(const std::string& path, const PointCloud& pc);
PointCloud read_pointcloud(std::istream& is);
PointCloud read_pointcloud_file(const std::string& path);

} // namespace hofnet
