#pragma once

#include "cgs/nn/tensor.hpp"

namespace cgs::nn {

// Adaptive-moment estimation with bias correction.
struct OptimizerState {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    long step = 0;
    ParamStore first_moment;
    ParamStore second_moment;
};

void adam_step(ParamStore& params, const ParamStore& grads, OptimizerState& state);

}  // namespace cgs::nn
