#include "hofnet/serial_ref.hpp"

#include <cmath>
#include <limits>

namespace hofnet::serial {

Nearest nearest(const PointCloud& cloud, std::span<const double> query) {
    if (cloud.is_empty()) throw EmptySetError("serial::nearest: empty cloud");
    Nearest best;
    best.d2 = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < cloud.count(); ++j) {
        const auto p = cloud.point(j);
        double d2 = 0.0;
        for (std::size_t a = 0; a < query.size(); ++a) {
            const double d = query[a] - p[a];
            d2 += d * d;
        }
        if (d2 < best.d2) {
            best.d2 = d2;
            best.index = j;
        }
    }
    return best;
}

double chamfer_asym(const PointCloud& x, const PointCloud& y) {
    if (x.is_empty() || y.is_empty()) throw EmptySetError("serial::chamfer_asym: empty set");
    if (x.dim() != y.dim()) throw ShapeError("serial::chamfer_asym: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < x.count(); ++i) s += nearest(y, x.point(i)).d2;
    return s / static_cast<double>(x.count());
}

double chamfer_sym(const PointCloud& x, const PointCloud& y) {
    return chamfer_asym(x, y) + chamfer_asym(y, x);
}

PointCloud mapping_forward(const FlatParams& params, const PointCloud& x) {
    validate(params.spec);
    if (params.theta.size() != count_params(params.spec))
        throw SpecError("serial::mapping_forward: theta length mismatch");
    if (static_cast<int>(x.dim()) != params.spec.in_dim())
        throw ShapeError("serial::mapping_forward: dimension mismatch");

    const auto& sizes = params.spec.layer_sizes;
    const std::size_t out_dim = static_cast<std::size_t>(sizes.back());
    std::vector<double> out;
    out.reserve(x.count() * out_dim);

    std::vector<double> cur, nxt;
    for (std::size_t pi = 0; pi < x.count(); ++pi) {
        const auto p = x.point(pi);
        cur.assign(p.begin(), p.end());
        std::size_t off = 0;
        for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
            const auto in = static_cast<std::size_t>(sizes[l]);
            const auto on = static_cast<std::size_t>(sizes[l + 1]);
            nxt.assign(on, 0.0);
            for (std::size_t o = 0; o < on; ++o) {
                double s = params.theta[off + in * on + o]; // bias
                for (std::size_t i = 0; i < in; ++i)
                    s += params.theta[off + o * in + i] * cur[i];
                nxt[o] = s;
            }
            off += in * on + on;
            if (l + 2 < sizes.size()) {
                if (params.spec.activation == Activation::Relu) {
                    for (double& v : nxt) v = v > 0.0 ? v : 0.0;
                } else {
                    for (double& v : nxt) v = std::tanh(v);
                }
            }
            cur.swap(nxt);
        }
        out.insert(out.end(), cur.begin(), cur.end());
    }
    return PointCloud(out_dim, std::move(out), x.label());
}

} // namespace hofnet::serial
