#include "hofnet/array.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <utility>

namespace hofnet {

namespace {

std::size_t shape_product(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (std::size_t s : shape) {
        if (s == 0) throw ShapeError("array dimensions must be positive");
        n *= s;
    }
    return n;
}

} // namespace

Array::Array(std::vector<std::size_t> s, std::vector<double> d)
    : shape(std::move(s)), data(std::move(d)) {
    if (shape.size() > 2) throw ShapeError("arrays are rank 1 or 2");
    if (shape_product(shape) != data.size())
        throw ShapeError("array data length does not match shape");
}

Array Array::zeros(std::vector<std::size_t> shape) {
    std::size_t n = shape_product(shape);
    return Array(std::move(shape), std::vector<double>(n, 0.0));
}

Array Array::scalar(double v) {
    return Array({1}, {v});
}

Array Array::vec(std::vector<double> d) {
    std::size_t n = d.size();
    return Array({n}, std::move(d));
}

Array Array::matrix(std::size_t rows, std::size_t cols, std::vector<double> d) {
    return Array({rows, cols}, std::move(d));
}

bool Array::all_finite() const {
    for (double v : data)
        if (!std::isfinite(v)) return false;
    return true;
}

std::string shape_str(const Array& a) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < a.shape.size(); ++i) {
        if (i) os << 'x';
        os << a.shape[i];
    }
    os << ']';
    return os.str();
}

void require_finite(const Array& a, const char* where) {
    if (!a.all_finite())
        throw NonFiniteError(std::string(where) + ": non-finite input value");
}

} // namespace hofnet
