#pragma once

#include <cstddef>
#include <vector>

#include "hofnet/errors.hpp"

namespace hofnet {

// Dense row-major array of 64-bit reals, rank 1 or 2. Scalars are shape {1}.
struct Array {
    std::vector<std::size_t> shape;
    std::vector<double> data;

    Array() = default;
    Array(std::vector<std::size_t> s, std::vector<double> d);

    static Array zeros(std::vector<std::size_t> shape);
    static Array scalar(double v);
    static Array vec(std::vector<double> d);
    static Array matrix(std::size_t rows, std::size_t cols, std::vector<double> d);

    std::size_t size() const { return data.size(); }
    std::size_t rank() const { return shape.size(); }
    bool is_scalar() const { return size() == 1 && rank() <= 1; }
    bool is_matrix() const { return rank() == 2; }

    std::size_t rows() const { return rank() == 2 ? shape[0] : 1; }
    std::size_t cols() const { return rank() == 2 ? shape[1] : (rank() == 1 ? shape[0] : 1); }

    double& operator()(std::size_t i) { return data[i]; }
    double operator()(std::size_t i) const { return data[i]; }
    double& operator()(std::size_t i, std::size_t j) { return data[i * shape[1] + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * shape[1] + j]; }

    bool same_shape(const Array& o) const { return shape == o.shape; }
    bool all_finite() const;
};

std::string shape_str(const Array& a);

// Throws NonFiniteError when any entry is NaN or infinite.
void require_finite(const Array& a, const char* where);

} // namespace hofnet
