#pragma once

#include <cstdint>

#include "hofnet/array.hpp"

namespace hofnet {

// Bias-corrected Adam. Defaults beta1=0.9, beta2=0.999, eps=1e-8; the
// learning rate is the caller's business.
struct AdamState {
    std::int64_t step = 0;
    Array m;
    Array v;
    double alpha = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;

    static AdamState init(std::size_t n, double alpha);
};

// One in-place update of `params`; increments state.step.
void adam_step(AdamState& state, Array& params, const Array& grads);

} // namespace hofnet
