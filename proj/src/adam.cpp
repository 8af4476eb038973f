#include "hofnet/adam.hpp"

#include <cmath>

namespace hofnet {

AdamState AdamState::init(std::size_t n, double alpha) {
    AdamState s;
    s.m = Array::zeros({n});
    s.v = Array::zeros({n});
    s.alpha = alpha;
    return s;
}

void adam_step(AdamState& state, Array& params, const Array& grads) {
    if (!params.same_shape(grads) || params.size() != state.m.size() ||
        params.size() != state.v.size())
        throw ShapeError("adam_step: params/grads/moment shapes disagree");
    require_finite(grads, "adam_step");

    state.step += 1;
    const double t = static_cast<double>(state.step);
    const double bc1 = 1.0 - std::pow(state.beta1, t);
    const double bc2 = 1.0 - std::pow(state.beta2, t);

    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads.data[i];
        state.m.data[i] = state.beta1 * state.m.data[i] + (1.0 - state.beta1) * g;
        state.v.data[i] = state.beta2 * state.v.data[i] + (1.0 - state.beta2) * g * g;
        const double mhat = state.m.data[i] / bc1;
        const double vhat = state.v.data[i] / bc2;
        params.data[i] -= state.alpha * mhat / (std::sqrt(vhat) + state.eps);
    }
}

} // namespace hofnet
