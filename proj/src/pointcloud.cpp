#include "hofnet/pointcloud.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

namespace hofnet {

PointCloud::PointCloud(std::size_t dim, std::vector<double> coords, std::string label)
    : dim_(dim), coords_(std::move(coords)), label_(std::move(label)) {
    if (dim_ < 2 || dim_ > 4)
        throw ShapeError("point cloud dimension must be 2..4");
    if (coords_.size() % dim_ != 0)
        throw ShapeError("coordinate count is not a multiple of the dimension");
    for (double v : coords_)
        if (!std::isfinite(v)) throw NonFiniteError("point cloud has a non-finite coordinate");
}

PointCloud PointCloud::empty(std::size_t dim) {
    return PointCloud(dim, {});
}

void PointCloud::push(std::span<const double> p) {
    if (p.size() != dim_) throw ShapeError("push: point dimension mismatch");
    for (double v : p) {
        if (!std::isfinite(v)) throw NonFiniteError("push: non-finite coordinate");
        coords_.push_back(v);
    }
}

double dist2(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

void write_pointcloud(std::ostream& os, const PointCloud& pc) {
    if (!pc.label().empty()) os << "# " << pc.label() << '\n';
    char buf[32];
    for (std::size_t i = 0; i < pc.count(); ++i) {
        for (std::size_t a = 0; a < pc.dim(); ++a) {
            if (a) os << ' ';
            std::snprintf(buf, sizeof(buf), "%.17g", pc.coord(i, a));
            os << buf;
        }
        os << '\n';
    }
}

void write_pointcloud_file(const std::string& path, const PointCloud& pc) {
    std::ofstream f(path);
    if (!f) throw FormatError("cannot open for writing: " + path);
    write_pointcloud(f, pc);
    if (!f) throw FormatError("write failed: " + path);
}

PointCloud read_pointcloud(std::istream& is) {
    std::vector<double> coords;
    std::size_t dim = 0;
    std::string label;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos) continue;
        if (line[start] == '#') {
            if (label.empty() && line.size() > start + 1) {
                label = line.substr(start + 1);
                if (!label.empty() && label.front() == ' ') label.erase(0, 1);
            }
            continue;
        }
        std::istringstream ls(line);
        std::vector<double> vals;
        double v;
        while (ls >> v) vals.push_back(v);
        if (!ls.eof()) {
            std::string junk;
            ls.clear();
            ls >> junk;
            throw FormatError("line " + std::to_string(lineno) + ": bad token '" + junk + "'");
        }
        if (vals.empty()) continue;
        if (dim == 0) {
            dim = vals.size();
            if (dim < 2 || dim > 4)
                throw FormatError("line " + std::to_string(lineno) + ": dimension must be 2..4");
        } else if (vals.size() != dim) {
            throw FormatError("line " + std::to_string(lineno) + ": expected " +
                              std::to_string(dim) + " coordinates, got " +
                              std::to_string(vals.size()));
        }
        coords.insert(coords.end(), vals.begin(), vals.end());
    }
    if (dim == 0) throw FormatError("no points in input");
    return PointCloud(dim, std::move(coords), std::move(label));
}

PointCloud read_pointcloud_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw FormatError("cannot open: " + path);
    return read_pointcloud(f);
}

} // namespace hofnet
