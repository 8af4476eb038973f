#include "hofnet/compose.hpp"

#include "hofnet/nn_index.hpp"

namespace hofnet {

namespace {

void require_endomap(const MlpSpec& spec, const char* where) {
    if (spec.in_dim() != spec.out_dim())
        throw ShapeError(std::string(where) + ": domain and codomain must be the same");
}

} // namespace

void validate(const KMapping& m) {
    validate(m.params.spec);
    require_endomap(m.params.spec, "k-mapping");
    if (m.k < 1) throw SpecError("k-mapping: k must be >= 1");
}

PointCloud power_eval(const FlatParams& params, int k, const PointCloud& x) {
    require_endomap(params.spec, "power_eval");
    if (k < 0) throw PreconditionError("power_eval: k must be >= 0");
    PointCloud cur = x;
    for (int i = 0; i < k; ++i) cur = mapping_forward(params, cur);
    return cur;
}

PointCloud power_eval(const KMapping& m, const PointCloud& x) {
    validate(m);
    return power_eval(m.params, m.k, x);
}

CompositionPlan CompositionPlan::parse(const std::string& text) {
    if (text.empty()) throw FormatError("composition plan is empty");
    CompositionPlan plan;
    plan.pick_b.reserve(text.size());
    for (char c : text) {
        if (c == 'A') plan.pick_b.push_back(false);
        else if (c == 'B') plan.pick_b.push_back(true);
        else throw FormatError(std::string("composition plan: bad character '") + c + "'");
    }
    return plan;
}

std::string CompositionPlan::str() const {
    std::string s;
    for (bool b : pick_b) s += b ? 'B' : 'A';
    return s;
}

PointCloud compose_interpolate(const FlatParams& a, const FlatParams& b,
                               const CompositionPlan& plan, const PointCloud& x) {
    if (a.spec != b.spec)
        throw SpecError("compose_interpolate: parents must share one schedule");
    require_endomap(a.spec, "compose_interpolate");
    if (plan.k() == 0) throw PreconditionError("compose_interpolate: empty plan");
    PointCloud cur = x;
    for (bool pick : plan.pick_b) cur = mapping_forward(pick ? b : a, cur);
    return cur;
}

FlatParams param_interpolate(const FlatParams& a, const FlatParams& b) {
    if (a.spec != b.spec)
        throw SpecError("param_interpolate: parents must share one schedule");
    FlatParams out = a;
    for (std::size_t i = 0; i < out.theta.size(); ++i)
        out.theta[i] = 0.5 * (a.theta[i] + b.theta[i]);
    return out;
}

double reg_distance_traveled(const FlatParams& params, const PointCloud& xs) {
    require_endomap(params.spec, "reg_distance_traveled");
    if (xs.is_empty()) throw EmptySetError("reg_distance_traveled: empty batch");
    const PointCloud fx = mapping_forward(params, xs);
    double s = 0.0;
    for (std::size_t i = 0; i < xs.count(); ++i) s += dist2(fx.point(i), xs.point(i));
    return s / static_cast<double>(xs.count());
}

double reg_projection(const FlatParams& params, const PointCloud& xs,
                      const PointCloud& target) {
    require_endomap(params.spec, "reg_projection");
    if (xs.is_empty()) throw EmptySetError("reg_projection: empty batch");
    if (target.is_empty()) throw EmptySetError("reg_projection: empty target");
    if (target.dim() != xs.dim()) throw ShapeError("reg_projection: dimension mismatch");

    const PointCloud fx = mapping_forward(params, xs);
    NnIndex index(target);
    double s = 0.0;
    for (std::size_t i = 0; i < xs.count(); ++i) {
        const auto hit = index.nearest(xs.point(i));
        s += dist2(fx.point(i), target.point(hit.index));
    }
    return s / static_cast<double>(xs.count());
}

} // namespace hofnet
